"""Analysis of the risk field: critical points, integrals, level curves.

Everything here leans on the field's structure R(t, c) = g(t) c + h(t):
critical-point certification reduces to root isolation of the quartic g,
the mean risk has a closed form from polynomial antiderivatives, and the
threshold region collapses to a one-dimensional integral whenever g keeps
one sign on the stage range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fieldfit import Rectangle, RiskField
from .polynomial import Polynomial, real_roots

ROOT_TOL = 1e-10


def _subdomain(field: RiskField, domain: Rectangle | None) -> Rectangle:
    if domain is None:
        return field.domain
    fd = field.domain
    pad = 1e-9
    if (
        domain.t_min < fd.t_min - pad
        or domain.t_max > fd.t_max + pad
        or domain.c_min < fd.c_min - pad
        or domain.c_max > fd.c_max + pad
    ):
        raise ValueError("analysis domain exceeds the field domain")
    return domain


def gradient(field: RiskField, t: float, c: float) -> tuple[float, float]:
    """Analytic gradient (dR/dt, dR/dc) of the field."""
    g = field.concentration_slope()
    h = field.concentration_intercept()
    return c * g.derivative()(t) + h.derivative()(t), g(t)


@dataclass(frozen=True)
class CriticalPointCertificate:
    """Root-isolation evidence about solutions of grad R = 0.

    slope_roots are the sign changes of dR/dc on the stage range;
    critical_points are isolated in-domain solutions of the full system;
    critical_stages mark degenerate vertical lines of critical points.
    """

    has_critical_points: bool
    min_dRdc: float
    min_dRdc_at: float
    slope_roots: tuple[float, ...]
    critical_points: tuple[tuple[float, float], ...]
    critical_stages: tuple[float, ...]
    method: str

    def as_json_dict(self) -> dict:
        return {
            "has_critical_points": self.has_critical_points,
            "min_dRdc": self.min_dRdc,
            "min_dRdc_at": self.min_dRdc_at,
            "slope_roots": list(self.slope_roots),
            "critical_points": [list(p) for p in self.critical_points],
            "critical_stages": list(self.critical_stages),
            "method": self.method,
        }


def certify_no_critical_points(field: RiskField) -> CriticalPointCertificate:
    """Decide whether grad R vanishes anywhere in the field domain.

    dR/dc depends on t alone, so the system can only vanish where the
    quartic g does; each such stage is then checked against the remaining
    equation dR/dt = h'(t) + c g'(t) = 0 for an in-range concentration.
    """
    dom = field.domain
    g = field.concentration_slope().trimmed()
    hp = field.concentration_intercept().derivative().trimmed()
    gp = g.derivative().trimmed()
    scale = max(g.scale(), hp.scale(), 1.0)
    tiny = 1e-12 * scale

    if g.degree < 0 or (g.degree == 0 and abs(g.coefficients[0]) < tiny):
        # dR/dc vanishes identically; criticality is down to h'.
        if hp.degree < 0 or (hp.degree == 0 and abs(hp.coefficients[0]) < tiny):
            return CriticalPointCertificate(
                has_critical_points=True,
                min_dRdc=0.0,
                min_dRdc_at=dom.t_min,
                slope_roots=(),
                critical_points=(),
                critical_stages=(dom.t_min, dom.t_max),
                method="dR/dc and dR/dt vanish identically; "
                "every point of the domain is critical",
            )
        stages = real_roots(hp, dom.t_min, dom.t_max, ROOT_TOL)
        return CriticalPointCertificate(
            has_critical_points=bool(stages),
            min_dRdc=0.0,
            min_dRdc_at=dom.t_min,
            slope_roots=(),
            critical_points=(),
            critical_stages=stages,
            method="dR/dc vanishes identically; critical stages are the "
            "isolated roots of dR/dt in the stage range",
        )

    roots = real_roots(g, dom.t_min, dom.t_max, ROOT_TOL)

    # Minimum of g over the closed range: endpoints plus interior
    # stationary points of g.
    candidates = [dom.t_min, dom.t_max]
    candidates.extend(real_roots(gp, dom.t_min, dom.t_max, ROOT_TOL))
    candidates.sort()
    min_val = None
    min_at = dom.t_min
    for t in candidates:
        v = g(t)
        if min_val is None or v < min_val:
            min_val, min_at = v, t

    points: list[tuple[float, float]] = []
    stages: list[float] = []
    for t_star in roots:
        gp_val = gp(t_star)
        hp_val = hp(t_star)
        if abs(gp_val) > tiny:
            c_star = -hp_val / gp_val
            if dom.c_min - 1e-12 <= c_star <= dom.c_max + 1e-12:
                points.append((t_star, min(max(c_star, dom.c_min), dom.c_max)))
        elif abs(hp_val) <= tiny:
            stages.append(t_star)

    if roots:
        method = (
            f"dR/dc has {len(roots)} root(s) in "
            f"[{dom.t_min:g}, {dom.t_max:g}] by Sturm isolation; each was "
            "checked against dR/dt = 0 for an in-range concentration"
        )
    else:
        method = (
            "Sturm isolation: dR/dc has no real root in "
            f"[{dom.t_min:g}, {dom.t_max:g}]; its minimum over endpoint and "
            "stationary candidates is "
            f"{min_val:.6g} at t = {min_at:g}, so grad R never vanishes"
        )
    return CriticalPointCertificate(
        has_critical_points=bool(points or stages),
        min_dRdc=min_val,
        min_dRdc_at=min_at,
        slope_roots=roots,
        critical_points=tuple(points),
        critical_stages=tuple(stages),
        method=method,
    )


def mean_risk(field: RiskField, domain: Rectangle | None = None) -> float:
    """Average of R over the rectangle, from the closed-form integral.

    iint R = (integral of c dc)(integral of g dt) + (c-width)(integral of h dt).
    """
    dom = _subdomain(field, domain)
    g_int = field.concentration_slope().integrate(dom.t_min, dom.t_max)
    h_int = field.concentration_intercept().integrate(dom.t_min, dom.t_max)
    c_moment = 0.5 * (dom.c_max**2 - dom.c_min**2)
    total = c_moment * g_int + (dom.c_max - dom.c_min) * h_int
    return total / dom.area


def mean_risk_simpson(
    field: RiskField, domain: Rectangle | None = None, cells: int = 400
) -> float:
    """Composite 2-D Simpson quadrature of the mean; numeric crosscheck."""
    if cells % 2 != 0:
        raise ValueError("Simpson rule needs an even cell count")
    dom = _subdomain(field, domain)
    ts = np.linspace(dom.t_min, dom.t_max, cells + 1)
    cs = np.linspace(dom.c_min, dom.c_max, cells + 1)
    w = np.ones(cells + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    values = field.evaluate_grid(ts, cs)
    ht = (dom.t_max - dom.t_min) / cells
    hc = (dom.c_max - dom.c_min) / cells
    total = float(np.einsum("i,ij,j->", w, values, w)) * ht * hc / 9.0
    return total / dom.area


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-6) -> float:
    """Recursive adaptive Simpson quadrature with Richardson correction."""

    def simpson(lo, flo, hi, fhi):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        return mid, fmid, (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, flo, hi, fhi, whole, mid, fmid, eps, depth):
        lmid, flmid, left = simpson(lo, flo, mid, fmid)
        rmid, frmid, right = simpson(mid, fmid, hi, fhi)
        delta = left + right - whole
        if depth >= 50 or abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return recurse(
            lo, flo, mid, fmid, left, lmid, flmid, eps / 2.0, depth + 1
        ) + recurse(
            mid, fmid, hi, fhi, right, rmid, frmid, eps / 2.0, depth + 1
        )

    fa, fb = f(a), f(b)
    mid, fmid, whole = simpson(a, fa, b, fb)
    return recurse(a, fa, b, fb, whole, mid, fmid, tol, 0)


@dataclass(frozen=True)
class RegionArea:
    """Area of the super-level region with the method that produced it."""

    area: float
    method: str                      # "reduction" or "monte_carlo"
    std_error: float | None = None
    samples: int | None = None
    seed: int | None = None

    def as_json_dict(self) -> dict:
        return {
            "area": self.area,
            "method": self.method,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }


def monte_carlo_region_area(
    field: RiskField,
    domain: Rectangle | None = None,
    threshold: float = 1.0,
    samples: int = 10**6,
    seed: int = 0,
) -> RegionArea:
    """Seeded uniform-sampling estimate of the super-level area."""
    dom = _subdomain(field, domain)
    rng = np.random.default_rng(seed)
    ts = rng.uniform(dom.t_min, dom.t_max, samples)
    cs = rng.uniform(dom.c_min, dom.c_max, samples)
    g = np.zeros_like(ts)
    h = np.zeros_like(ts)
    for ak, bk in zip(reversed(field.a), reversed(field.b)):
        g = g * ts + ak
        h = h * ts + bk
    hit_fraction = float(np.count_nonzero(g * cs + h >= threshold)) / samples
    area = hit_fraction * dom.area
    std_error = dom.area * float(
        np.sqrt(hit_fraction * (1.0 - hit_fraction) / samples)
    )
    return RegionArea(area, "monte_carlo", std_error, samples, seed)


def risk_region_area(
    field: RiskField,
    domain: Rectangle | None = None,
    threshold: float = 1.0,
    tol: float = 1e-6,
    seed: int = 0,
) -> RegionArea:
    """Area of {(t, c) in D : R(t, c) >= threshold}.

    With dR/dc of one sign on the stage range the region is bounded by the
    graph of c*(t) = (threshold - h(t))/g(t), and the area reduces to a 1-D
    integral of the clamped column length.  The integrand is piecewise
    smooth; adaptive Simpson runs between clamp crossings located by root
    isolation.  If g changes sign inside the range the reduction is
    invalid and a seeded Monte Carlo estimate is returned instead.
    """
    dom = _subdomain(field, domain)
    g = field.concentration_slope().trimmed()
    h = field.concentration_intercept()

    roots = real_roots(g, dom.t_min, dom.t_max, ROOT_TOL) if g.degree >= 0 else ()
    if g.degree < 0 or roots:
        return monte_carlo_region_area(field, dom, threshold, seed=seed)
    positive = g(0.5 * (dom.t_min + dom.t_max)) > 0.0

    def column_length(t: float) -> float:
        c_star = (threshold - h(t)) / g(t)
        clamped = min(max(c_star, dom.c_min), dom.c_max)
        return dom.c_max - clamped if positive else clamped - dom.c_min

    # Split the integral where the boundary curve crosses a clamp level;
    # each crossing is a root of the quartic threshold - h - c_edge * g.
    cuts = {dom.t_min, dom.t_max}
    for c_edge in (dom.c_min, dom.c_max):
        crossing = Polynomial.constant(threshold) - h - c_edge * g
        cuts.update(real_roots(crossing, dom.t_min, dom.t_max, ROOT_TOL))
    pieces = sorted(cuts)
    piece_tol = tol / max(1, len(pieces) - 1)
    area = 0.0
    for lo, hi in zip(pieces, pieces[1:]):
        if hi - lo > 1e-12:
            area += adaptive_simpson(column_length, lo, hi, piece_tol)
    area = min(max(area, 0.0), dom.area)
    return RegionArea(area, "reduction")


def risk_probability(
    field: RiskField,
    domain: Rectangle | None = None,
    threshold: float = 1.0,
    seed: int = 0,
) -> float:
    """Fraction of the domain where R >= threshold."""
    dom = _subdomain(field, domain)
    return risk_region_area(field, dom, threshold, seed=seed).area / dom.area


# ---------------------------------------------------------------------------
# Level curves (marching squares)

# Cell edges: 0 bottom, 1 right, 2 top, 3 left.  Corner bits: 1 bottom
# left, 2 bottom right, 4 top right, 8 top left.  The two saddle cases
# (5, 10) are resolved by the sign at the cell center.
_SEGMENT_TABLE: dict[int, tuple[tuple[int, int], ...]] = {
    0: (), 15: (),
    1: ((0, 3),), 14: ((0, 3),),
    2: ((0, 1),), 13: ((0, 1),),
    3: ((1, 3),), 12: ((1, 3),),
    4: ((1, 2),), 11: ((1, 2),),
    6: ((0, 2),), 9: ((0, 2),),
    7: ((2, 3),), 8: ((2, 3),),
}


@dataclass(frozen=True)
class LevelCurveSet:
    """Iso-level polylines; each polyline is a vertex chain in (t, c)."""

    level: float
    polylines: tuple[tuple[tuple[float, float], ...], ...]

    def as_json_dict(self) -> dict:
        return {
            "level": self.level,
            "polylines": [
                [[round(t, 9), round(c, 9)] for t, c in line]
                for line in self.polylines
            ],
        }


def _edge_point(edge, i, j, ts, cs, vv):
    # Linear interpolation of the zero crossing along one cell edge.
    if edge == 0:
        v0, v1 = vv[j, i], vv[j, i + 1]
        s = v0 / (v0 - v1)
        return float(ts[i] + s * (ts[i + 1] - ts[i])), float(cs[j])
    if edge == 1:
        v0, v1 = vv[j, i + 1], vv[j + 1, i + 1]
        s = v0 / (v0 - v1)
        return float(ts[i + 1]), float(cs[j] + s * (cs[j + 1] - cs[j]))
    if edge == 2:
        v0, v1 = vv[j + 1, i], vv[j + 1, i + 1]
        s = v0 / (v0 - v1)
        return float(ts[i] + s * (ts[i + 1] - ts[i])), float(cs[j + 1])
    v0, v1 = vv[j, i], vv[j + 1, i]
    s = v0 / (v0 - v1)
    return float(ts[i]), float(cs[j] + s * (cs[j + 1] - cs[j]))


def _key(point: tuple[float, float]) -> tuple[float, float]:
    return (round(point[0], 9), round(point[1], 9))


def _stitch(segments: list[tuple]) -> tuple:
    """Join shared-endpoint segments into maximal polylines."""
    adjacency: dict[tuple, list[int]] = {}
    for idx, (p, q) in enumerate(segments):
        adjacency.setdefault(_key(p), []).append(idx)
        adjacency.setdefault(_key(q), []).append(idx)
    used = [False] * len(segments)
    polylines = []

    def walk(start_key: tuple) -> list:
        chain = [start_key]
        key = start_key
        while True:
            nxt = None
            for idx in adjacency[key]:
                if not used[idx]:
                    nxt = idx
                    break
            if nxt is None:
                break
            used[nxt] = True
            p, q = segments[nxt]
            key = _key(q) if _key(p) == key else _key(p)
            chain.append(key)
        return chain

    # Open curves first, from their loose ends; whatever remains is loops.
    loose = sorted(k for k, ids in adjacency.items() if len(ids) % 2 == 1)
    for key in loose:
        if any(not used[i] for i in adjacency[key]):
            polylines.append(walk(key))
    for idx in range(len(segments)):
        if not used[idx]:
            used[idx] = True
            p, q = segments[idx]
            chain = walk(_key(q))
            chain.insert(0, _key(p))
            polylines.append(chain)
    return tuple(tuple(chain) for chain in polylines)


def level_curves(
    field: RiskField,
    domain: Rectangle | None = None,
    levels: tuple[float, ...] = (1.0,),
    grid: int = 256,
) -> list[LevelCurveSet]:
    """Marching-squares iso-curves of the field at the given levels."""
    if grid < 16:
        raise ValueError("grid must be at least 16 cells per axis")
    dom = _subdomain(field, domain)
    ts = np.linspace(dom.t_min, dom.t_max, grid + 1)
    cs = np.linspace(dom.c_min, dom.c_max, grid + 1)
    values = field.evaluate_grid(ts, cs)
    scale = float(np.max(np.abs(values))) + 1.0
    out = []
    for level in levels:
        vv = values - level
        # Nudge exact hits off zero so every crossing is a clean sign change.
        vv = np.where(vv == 0.0, 1e-15 * scale, vv)
        above = vv > 0.0
        segments: list[tuple] = []
        for j in range(grid):
            for i in range(grid):
                idx = (
                    int(above[j, i])
                    | int(above[j, i + 1]) << 1
                    | int(above[j + 1, i + 1]) << 2
                    | int(above[j + 1, i]) << 3
                )
                if idx in (0, 15):
                    continue
                if idx in (5, 10):
                    center = field.evaluate(
                        0.5 * (ts[i] + ts[i + 1]), 0.5 * (cs[j] + cs[j + 1])
                    ) - level
                    if (center > 0.0) == (idx == 5):
                        pairs = ((0, 1), (2, 3))
                    else:
                        pairs = ((0, 3), (1, 2))
                else:
                    pairs = _SEGMENT_TABLE[idx]
                for e0, e1 in pairs:
                    segments.append(
                        (
                            _edge_point(e0, i, j, ts, cs, vv),
                            _edge_point(e1, i, j, ts, cs, vv),
                        )
                    )
        out.append(LevelCurveSet(float(level), _stitch(segments)))
    return out


def build_analysis_report(
    field: RiskField,
    domain: Rectangle | None = None,
    threshold: float = 1.0,
    levels: tuple[float, ...] = (1.0,),
    grid: int = 256,
    seed: int = 0,
    mc_samples: int = 10**6,
) -> dict:
    """Full analysis bundle in plain-JSON form."""
    dom = _subdomain(field, domain)
    certificate = certify_no_critical_points(field.with_domain(dom))
    region = risk_region_area(field, dom, threshold, seed=seed)
    crosscheck = monte_carlo_region_area(
        field, dom, threshold, samples=mc_samples, seed=seed
    )
    curves = level_curves(field, dom, levels, grid)
    return {
        "field": field.as_json_dict(),
        "domain": dom.as_json_dict(),
        "threshold": threshold,
        "certificate": certificate.as_json_dict(),
        "mean_risk": mean_risk(field, dom),
        "mean_risk_simpson": mean_risk_simpson(field, dom),
        "region_area": region.area,
        "region_area_method": region.method,
        "region_area_std_error": region.std_error,
        "region_area_monte_carlo": crosscheck.as_json_dict(),
        "probability": region.area / dom.area,
        "levels": [cset.as_json_dict() for cset in curves],
    }
