"""Curvature of the risk surface and the zero-curvature critical ages.

The risk surface is the graph (t, c, R(t, c)).  Its Gaussian curvature is

    K = (R_tt R_cc - R_tc^2) / (1 + R_t^2 + R_c^2)^2.

Because the field is affine in concentration, R_cc is exactly zero and
the numerator collapses to -(q(t))^2 with q the cubic derivative of the
concentration slope g.  Nonpositive curvature is therefore structural,
and K vanishes precisely on the vertical lines t = root of q.  Those
stages, pushed through the stage-to-age map, are the critical ages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fieldfit import Rectangle, RiskField
from .polynomial import Polynomial, real_roots
from .stagemap import DEFAULT_STAGE_MAP, StageMap

ROOT_TOL = 1e-10

# Search interval for zero-curvature stages: wider than the field domain
# on the right because the oldest critical age sits just past stage 5.
DEFAULT_SEARCH = (1.0, 6.0)


def second_partials(
    field: RiskField, t: float, c: float
) -> tuple[float, float, float]:
    """(R_tt, R_tc, R_cc); the last is exactly 0 for affine-in-c fields."""
    g = field.concentration_slope()
    h = field.concentration_intercept()
    r_tt = c * g.derivative().derivative()(t) + h.derivative().derivative()(t)
    r_tc = g.derivative()(t)
    return r_tt, r_tc, 0.0


def mixed_partial_cubic(field: RiskField) -> Polynomial:
    """q(t) = d2R/dtdc, the cubic whose roots carry all zero curvature."""
    return field.concentration_slope().derivative()


def gaussian_curvature(field: RiskField, t: float, c: float) -> float:
    """Signed Gaussian curvature of the graph surface at (t, c)."""
    r_tt, r_tc, r_cc = second_partials(field, t, c)
    r_t = field.partial_t(t, c)
    r_c = field.partial_c(t)
    denom = (1.0 + r_t * r_t + r_c * r_c) ** 2
    return (r_tt * r_cc - r_tc * r_tc) / denom


@dataclass(frozen=True)
class ZeroLocus:
    """One vanishing-curvature stage with its biological age."""

    stage: float
    age_years: float
    in_domain: bool       # within the field's stage range
    extrapolated: bool    # age obtained beyond the stage map's knots


@dataclass(frozen=True)
class CurvatureReport:
    max_curvature_on_domain: float
    zero_loci: tuple[ZeroLocus, ...]
    is_hadamard: bool
    curvature_identically_zero: bool = False

    @property
    def critical_ages(self) -> tuple[float, ...]:
        return tuple(locus.age_years for locus in self.zero_loci)

    @property
    def zero_stages(self) -> tuple[float, ...]:
        return tuple(locus.stage for locus in self.zero_loci)


def _loci(
    field: RiskField,
    search: tuple[float, float],
    stage_map: StageMap,
    dom: Rectangle,
) -> tuple[ZeroLocus, ...]:
    q = mixed_partial_cubic(field)
    roots = real_roots(q, search[0], search[1], ROOT_TOL)
    loci = []
    for t in roots:
        loci.append(
            ZeroLocus(
                stage=t,
                age_years=stage_map.age(t),
                in_domain=dom.t_min <= t <= dom.t_max,
                extrapolated=stage_map.is_extrapolated(t),
            )
        )
    return tuple(loci)


def _max_curvature_affine(field: RiskField, dom: Rectangle) -> float:
    """Supremum of K over the rectangle for an affine-in-c field.

    For fixed t the curvature is maximal where |R_t| is smallest, which
    is an endpoint of the c-interval or the interior minimizer of
    (h' + c g')^2.  A dense stage grid then resolves the 1-D problem.
    """
    g = field.concentration_slope()
    h = field.concentration_intercept()
    q = g.derivative()
    hp = h.derivative()
    ts = np.linspace(dom.t_min, dom.t_max, 4097)
    best = -np.inf
    for t in ts:
        qt = q(t)
        hpt = hp(t)
        gt = g(t)
        if qt != 0.0:
            c_opt = min(max(-hpt / qt, dom.c_min), dom.c_max)
        else:
            c_opt = dom.c_min
        r_t = hpt + c_opt * qt
        k = -(qt * qt) / (1.0 + r_t * r_t + gt * gt) ** 2
        if k > best:
            best = k
    return float(best)


def _fd_hessian_curvature(f, t: float, c: float, h: float = 1e-4) -> float:
    f00 = f(t, c)
    ftt = (f(t + h, c) - 2.0 * f00 + f(t - h, c)) / (h * h)
    fcc = (f(t, c + h) - 2.0 * f00 + f(t, c - h)) / (h * h)
    ftc = (
        f(t + h, c + h) - f(t + h, c - h) - f(t - h, c + h) + f(t - h, c - h)
    ) / (4.0 * h * h)
    ft = (f(t + h, c) - f(t - h, c)) / (2.0 * h)
    fc = (f(t, c + h) - f(t, c - h)) / (2.0 * h)
    return (ftt * fcc - ftc * ftc) / (1.0 + ft * ft + fc * fc) ** 2


def certify_hadamard(
    field,
    domain: Rectangle | None = None,
    search: tuple[float, float] = DEFAULT_SEARCH,
    stage_map: StageMap = DEFAULT_STAGE_MAP,
    grid: int = 64,
) -> CurvatureReport:
    """Certificate that the surface has nonpositive curvature everywhere.

    For a RiskField the sign is structural: the curvature numerator is
    -(q(t))^2.  The report still carries the domain supremum of K, which
    is 0 exactly when a root of q falls inside the stage range.  Generic
    scalar fields (anything callable as f(t, c)) are handled by
    finite-difference curvature extremized over a grid.
    """
    if isinstance(field, RiskField):
        dom = field.domain if domain is None else domain
        loci = _loci(field, search, stage_map, dom)
        q = mixed_partial_cubic(field).trimmed()
        if q.degree < 0:
            return CurvatureReport(
                max_curvature_on_domain=0.0,
                zero_loci=(),
                is_hadamard=True,
                curvature_identically_zero=True,
            )
        if any(dom.t_min <= locus.stage <= dom.t_max for locus in loci):
            max_k = 0.0
        else:
            max_k = _max_curvature_affine(field, dom)
        return CurvatureReport(
            max_curvature_on_domain=max_k,
            zero_loci=loci,
            is_hadamard=max_k <= 0.0,
        )

    if domain is None:
        raise ValueError("a domain rectangle is required for generic fields")
    ts = np.linspace(domain.t_min, domain.t_max, grid)
    cs = np.linspace(domain.c_min, domain.c_max, grid)
    # Stay a finite-difference step away from the boundary.
    pad_t = 2e-4 * (domain.t_max - domain.t_min)
    pad_c = 2e-4 * (domain.c_max - domain.c_min)
    max_k = -np.inf
    for t in ts:
        t = min(max(t, domain.t_min + pad_t), domain.t_max - pad_t)
        for c in cs:
            c = min(max(c, domain.c_min + pad_c), domain.c_max - pad_c)
            k = _fd_hessian_curvature(field, float(t), float(c))
            if k > max_k:
                max_k = k
    return CurvatureReport(
        max_curvature_on_domain=float(max_k),
        zero_loci=(),
        is_hadamard=max_k <= 0.0,
    )


def critical_ages(
    field: RiskField,
    search: tuple[float, float] = DEFAULT_SEARCH,
    stage_map: StageMap = DEFAULT_STAGE_MAP,
) -> CurvatureReport:
    """Zero-curvature stages in the search interval, with mapped ages."""
    return certify_hadamard(field, search=search, stage_map=stage_map)


def build_geometry_report(
    field: RiskField,
    domain: Rectangle | None = None,
    search: tuple[float, float] = DEFAULT_SEARCH,
    stage_map: StageMap = DEFAULT_STAGE_MAP,
) -> dict:
    """Curvature certificate and critical ages in plain-JSON form."""
    report = certify_hadamard(
        field, domain=domain, search=search, stage_map=stage_map
    )
    q = mixed_partial_cubic(field)
    loci = []
    for locus in report.zero_loci:
        label = f"{locus.age_years:.1f} y"
        if locus.extrapolated:
            label += " (extrapolated)"
        loci.append(
            {
                "stage": locus.stage,
                "stage_rounded": round(locus.stage, 2),
                "age_years": locus.age_years,
                "age_rounded": round(locus.age_years, 1),
                "in_domain": locus.in_domain,
                "extrapolated": locus.extrapolated,
                "label": label,
            }
        )
    return {
        "is_hadamard": report.is_hadamard,
        "max_curvature_on_domain": report.max_curvature_on_domain,
        "curvature_identically_zero": report.curvature_identically_zero,
        "numerator_cubic": list(q.coefficients),
        "numerator_cubic_descending": q.format_descending("t"),
        "search_interval": list(search),
        "zero_loci": loci,
    }
