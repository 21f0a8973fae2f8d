"""Surface curvature, Hadamard certificate, zero-curvature ages."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from mehgrisk.fieldfit import Rectangle, RiskField, published_field
from mehgrisk.geometry import (
    build_geometry_report,
    certify_hadamard,
    critical_ages,
    gaussian_curvature,
    mixed_partial_cubic,
    second_partials,
)
from mehgrisk.stagemap import DEFAULT_STAGE_MAP

# Frozen from high-precision root isolation of q(t) = d2R/dtdc.
STAGES = (1.8540430241355907, 3.328842757131719, 5.598364218674536)
AGES = (5.270215, 27.784452, 107.950927)


def test_second_partials_match_finite_differences():
    # h near eps**0.25 balances truncation against subtraction roundoff
    # for second differences.
    f = published_field()
    rng = np.random.default_rng(23)
    h = 1e-3
    for _ in range(500):
        t = float(rng.uniform(1.2, 4.8))
        c = float(rng.uniform(0.4, 3.3))
        r_tt, r_tc, r_cc = second_partials(f, t, c)
        e = f.evaluate
        fd_tt = (e(t + h, c) - 2 * e(t, c) + e(t - h, c)) / (h * h)
        fd_cc = (e(t, c + h) - 2 * e(t, c) + e(t, c - h)) / (h * h)
        fd_tc = (
            e(t + h, c + h) - e(t + h, c - h)
            - e(t - h, c + h) + e(t - h, c - h)
        ) / (4 * h * h)
        err = math.sqrt(
            (r_tt - fd_tt) ** 2 + 2 * (r_tc - fd_tc) ** 2 + (r_cc - fd_cc) ** 2
        )
        norm = math.sqrt(r_tt**2 + 2 * r_tc**2 + r_cc**2)
        assert err / norm < 1e-5


def test_concentration_curvature_exactly_zero():
    f = published_field()
    for t, c in ((1.0, 0.2), (2.7, 1.9), (5.0, 3.5)):
        assert second_partials(f, t, c)[2] == 0.0


def test_mixed_partial_cubic_coefficients():
    q = mixed_partial_cubic(published_field())
    expected = (33.17, -33.78, 10.35, -0.96)
    assert q.degree == 3
    for got, want in zip(q.coefficients, expected):
        assert abs(got - want) < 1e-12


def test_curvature_nonpositive_everywhere():
    f = published_field()
    rng = np.random.default_rng(29)
    for _ in range(10000):
        t = float(rng.uniform(1.0, 5.0))
        c = float(rng.uniform(0.2, 3.5))
        assert gaussian_curvature(f, t, c) <= 0.0


def test_curvature_formula_by_hand():
    f = published_field()
    q = mixed_partial_cubic(f)
    for t, c in ((1.5, 0.5), (3.0, 2.0), (4.5, 3.2)):
        denom = (1.0 + f.partial_t(t, c) ** 2 + f.partial_c(t) ** 2) ** 2
        assert math.isclose(
            gaussian_curvature(f, t, c), -q(t) ** 2 / denom, rel_tol=1e-12
        )


def test_curvature_vanishes_on_zero_loci():
    f = published_field()
    for t in STAGES:
        for c in (0.2, 1.7, 3.5):
            assert abs(gaussian_curvature(f, t, c)) < 1e-16


def test_root_count_matches_dense_sign_scan():
    q = mixed_partial_cubic(published_field())
    ts = np.linspace(1.0, 6.0, 100001)
    vals = np.polyval(list(reversed(q.coefficients)), ts)
    crossings = int(np.count_nonzero(np.diff(np.sign(vals)) != 0))
    report = critical_ages(published_field())
    assert crossings == len(report.zero_loci) == 3


def test_certificate_published_field():
    report = certify_hadamard(published_field())
    assert report.is_hadamard
    assert not report.curvature_identically_zero
    assert report.max_curvature_on_domain == 0.0
    for got, want in zip(report.zero_stages, STAGES):
        assert abs(got - want) < 1e-6
    for got, want in zip(report.critical_ages, AGES):
        assert abs(got - want) < 1e-4


def test_zero_loci_flags_and_age_consistency():
    report = critical_ages(published_field())
    first, second, third = report.zero_loci
    assert first.in_domain and not first.extrapolated
    assert second.in_domain and not second.extrapolated
    assert third.extrapolated and not third.in_domain
    for locus in report.zero_loci:
        assert locus.age_years == DEFAULT_STAGE_MAP.age(locus.stage)


def test_certificate_away_from_loci_is_strictly_negative():
    report = certify_hadamard(
        published_field(), domain=Rectangle(4.0, 5.0, 0.2, 3.5)
    )
    assert report.is_hadamard
    assert report.max_curvature_on_domain < 0.0


def test_plane_field_identically_flat():
    f = RiskField((2.0, 0.0, 0.0, 0.0, 0.0), (1.0, 3.0, 0.0, 0.0, 0.0))
    report = certify_hadamard(f)
    assert report.curvature_identically_zero
    assert report.is_hadamard
    assert report.max_curvature_on_domain == 0.0
    assert report.zero_loci == ()


def test_rootless_cubic_field():
    # q = 1 + 3 t^2 never vanishes, so curvature stays strictly negative.
    f = RiskField((0.0, 1.0, 0.0, 1.0, 0.0), (0.0,) * 5)
    report = certify_hadamard(f)
    assert report.zero_loci == ()
    assert report.max_curvature_on_domain < 0.0
    assert report.is_hadamard


def test_generic_bump_is_rejected():
    dom = Rectangle(1.0, 5.0, 0.2, 3.5)
    bump = lambda t, c: (t - 3.0) ** 2 + (c - 1.8) ** 2
    report = certify_hadamard(bump, domain=dom)
    assert not report.is_hadamard
    assert report.max_curvature_on_domain > 0.0


def test_generic_saddle_is_accepted():
    dom = Rectangle(1.0, 5.0, 0.2, 3.5)
    saddle = lambda t, c: (t - 3.0) ** 2 - (c - 1.8) ** 2
    report = certify_hadamard(saddle, domain=dom)
    assert report.is_hadamard
    assert report.max_curvature_on_domain < 0.0


def test_generic_field_requires_domain():
    with pytest.raises(ValueError):
        certify_hadamard(lambda t, c: t * c)


def test_geometry_report_shape():
    report = build_geometry_report(published_field())
    assert report["is_hadamard"] is True
    assert report["max_curvature_on_domain"] == 0.0
    assert report["search_interval"] == [1.0, 6.0]
    coeffs = report["numerator_cubic"]
    assert len(coeffs) == 4 and abs(coeffs[0] - 33.17) < 1e-12
    loci = report["zero_loci"]
    assert [entry["stage_rounded"] for entry in loci] == [1.85, 3.33, 5.6]
    assert [entry["age_rounded"] for entry in loci] == [5.3, 27.8, 108.0]
    assert loci[2]["label"].endswith("(extrapolated)")
    assert "extrapolated" not in loci[0]["label"]
    json.dumps(report)
