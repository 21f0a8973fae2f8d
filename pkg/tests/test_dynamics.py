"""Gradient-flow integration and recurrence checks."""

from __future__ import annotations

import math

import numpy as np
import pytest

from mehgrisk.analysis import gradient
from mehgrisk.dynamics import (
    EXIT_LEFT_DOMAIN,
    EXIT_MAX_STEPS,
    EXIT_STEP_UNDERFLOW,
    FlowTrajectory,
    check_no_recurrence,
    flow,
    write_trajectory_csv,
)
from mehgrisk.fieldfit import RiskField, published_field


def test_risk_increases_along_flow():
    f = published_field()
    traj = flow(f, (3.0, 1.0))
    rs = [s[3] for s in traj.samples]
    assert len(rs) > 100
    assert all(b > a for a, b in zip(rs, rs[1:]))
    assert traj.exit_reason == EXIT_LEFT_DOMAIN


def test_flow_endpoint_on_boundary():
    f = published_field()
    traj = flow(f, (3.0, 1.0))
    t_end, c_end = traj.endpoint
    d = f.domain
    edge_gap = min(
        abs(t_end - d.t_min), abs(t_end - d.t_max),
        abs(c_end - d.c_min), abs(c_end - d.c_max),
    )
    assert edge_gap < 1e-9
    assert d.contains(t_end, c_end)


def test_flow_energy_identity():
    # Along the flow dR/dtau equals the squared gradient norm.
    f = published_field()
    traj = flow(f, (3.0, 1.0))
    s = traj.samples
    checked = 0
    for i in range(10, len(s) - 10, 50):
        tau0, _, _, r0 = s[i - 1]
        tau1, t, c, _ = s[i]
        tau2, _, _, r2 = s[i + 1]
        rate = (r2 - r0) / (tau2 - tau0)
        gt, gc = gradient(f, t, c)
        speed_sq = gt * gt + gc * gc
        assert math.isclose(rate, speed_sq, rel_tol=0.1)
        checked += 1
    assert checked >= 10


def test_flow_fourth_order_convergence():
    # Richardson ratio between h, h/2, h/4 endpoints should sit near 2^4.
    f = published_field()
    ends = []
    for step, steps in ((0.05, 8), (0.025, 16), (0.0125, 32)):
        traj = flow(f, (3.0, 1.0), step=step, max_steps=steps)
        assert traj.exit_reason == EXIT_MAX_STEPS
        tau = traj.samples[-1][0]
        assert math.isclose(tau, 0.4, rel_tol=1e-12)
        ends.append(traj.endpoint)
    err_coarse = math.dist(ends[0], ends[1])
    err_fine = math.dist(ends[1], ends[2])
    assert err_fine > 0
    assert 12.0 < err_coarse / err_fine < 20.0


def test_flow_zero_field_underflows():
    f = RiskField((0.0,) * 5, (0.0,) * 5)
    traj = flow(f, (3.0, 1.0), max_steps=50)
    assert traj.exit_reason == EXIT_STEP_UNDERFLOW
    assert len(traj.samples) == 1


def test_flow_rejects_outside_start():
    f = published_field()
    with pytest.raises(ValueError):
        flow(f, (0.5, 1.0))
    with pytest.raises(ValueError):
        flow(f, (3.0, 4.0))


def test_flow_step_validation():
    f = published_field()
    with pytest.raises(ValueError):
        flow(f, (3.0, 1.0), step=0.0)
    with pytest.raises(ValueError):
        flow(f, (3.0, 1.0), max_steps=0)


def test_all_grid_starts_leave_domain():
    f = published_field()
    d = f.domain
    for ft in np.linspace(0.05, 0.95, 10):
        for fc in np.linspace(0.05, 0.95, 10):
            start = (
                d.t_min + ft * (d.t_max - d.t_min),
                d.c_min + fc * (d.c_max - d.c_min),
            )
            traj = flow(f, start, step=5e-3, max_steps=20000)
            assert traj.exit_reason == EXIT_LEFT_DOMAIN, start


def test_no_recurrence_on_published_flow():
    f = published_field()
    traj = flow(f, (3.0, 1.0))
    assert check_no_recurrence(traj, radius=0.05)


def test_recurrence_detected_on_synthetic_loop():
    # Walk out past the radius and come back: that is a recurrence.
    samples = (
        (0.0, 3.0, 1.0, 0.0),
        (0.1, 3.3, 1.0, 0.1),
        (0.2, 3.01, 1.0, 0.2),
    )
    traj = FlowTrajectory(samples=samples, exit_reason=EXIT_MAX_STEPS)
    assert not check_no_recurrence(traj, radius=0.05)
    # A circle that never closes back within the radius is fine.
    ring = tuple(
        (0.01 * k, 3.0 + 0.001 * k, 1.0, float(k)) for k in range(100)
    )
    assert check_no_recurrence(
        FlowTrajectory(samples=ring, exit_reason=EXIT_MAX_STEPS), radius=0.05
    )


def test_recurrence_trivial_cases():
    one = FlowTrajectory(samples=((0.0, 3.0, 1.0, 2.0),),
                         exit_reason=EXIT_STEP_UNDERFLOW)
    assert check_no_recurrence(one, radius=0.05)
    with pytest.raises(ValueError):
        check_no_recurrence(one, radius=0.0)


def test_trajectory_csv_round_trip(tmp_path):
    f = published_field()
    traj = flow(f, (3.0, 1.0), step=0.01, max_steps=40)
    path = tmp_path / "traj.csv"
    write_trajectory_csv(traj, path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "tau,t,c,R"
    assert len(rows) == len(traj.samples) + 1
    for line, sample in zip(rows[1:], traj.samples):
        got = tuple(float(x) for x in line.split(","))
        for g, want in zip(got, sample):
            assert math.isclose(g, want, rel_tol=1e-6, abs_tol=1e-9)
