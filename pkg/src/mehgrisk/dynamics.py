"""Gradient-flow integration over the risk field.

The flow is dx/dtau = grad R(x) for x = (t, c).  Along its trajectories
the risk satisfies dR/dtau = |grad R|^2, so on a field certified free of
critical points every trajectory climbs strictly and must leave the
rectangle; the integrator and the recurrence witness below make both of
those claims checkable on computed samples.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fieldfit import RiskField

EXIT_LEFT_DOMAIN = "left_domain"
EXIT_MAX_STEPS = "max_steps"
EXIT_STEP_UNDERFLOW = "step_underflow"

# Below this gradient magnitude the flow is considered stalled.
_SPEED_FLOOR = 1e-12


@dataclass(frozen=True)
class FlowTrajectory:
    """Sampled integral curve: rows of (tau, t, c, R) plus exit reason."""

    samples: tuple[tuple[float, float, float, float], ...]
    exit_reason: str

    @property
    def endpoint(self) -> tuple[float, float]:
        last = self.samples[-1]
        return last[1], last[2]


def flow(
    field: RiskField,
    start: tuple[float, float],
    step: float = 1e-3,
    max_steps: int = 20000,
) -> FlowTrajectory:
    """Integrate the gradient flow from a start point with fixed-step RK4.

    Integration halts when the next step would leave the field domain
    (the final sample is clipped onto the boundary by bisecting the step
    segment), when the step budget runs out, or when the gradient
    magnitude falls below an equilibrium floor.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    dom = field.domain
    t0, c0 = float(start[0]), float(start[1])
    if not dom.contains(t0, c0):
        raise ValueError(f"start point {start!r} lies outside the domain")

    a = field.a
    b = field.b
    gp = tuple(k * ak for k, ak in enumerate(a) if k > 0)
    hp = tuple(k * bk for k, bk in enumerate(b) if k > 0)

    def value(t: float, c: float) -> float:
        acc = 0.0
        for ak, bk in zip(reversed(a), reversed(b)):
            acc = acc * t + (ak * c + bk)
        return acc

    def grad(t: float, c: float) -> tuple[float, float]:
        gp_t = 0.0
        hp_t = 0.0
        g_t = 0.0
        for coef in reversed(gp):
            gp_t = gp_t * t + coef
        for coef in reversed(hp):
            hp_t = hp_t * t + coef
        for coef in reversed(a):
            g_t = g_t * t + coef
        return c * gp_t + hp_t, g_t

    def rk4(t: float, c: float, h: float) -> tuple[float, float]:
        k1 = grad(t, c)
        k2 = grad(t + 0.5 * h * k1[0], c + 0.5 * h * k1[1])
        k3 = grad(t + 0.5 * h * k2[0], c + 0.5 * h * k2[1])
        k4 = grad(t + h * k3[0], c + h * k3[1])
        return (
            t + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            c + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        )

    samples = [(0.0, t0, c0, value(t0, c0))]
    t, c, tau = t0, c0, 0.0
    exit_reason = EXIT_MAX_STEPS
    for _ in range(max_steps):
        dt, dc = grad(t, c)
        if dt * dt + dc * dc < _SPEED_FLOOR * _SPEED_FLOOR:
            exit_reason = EXIT_STEP_UNDERFLOW
            break
        t_next, c_next = rk4(t, c, step)
        tau_next = tau + step
        if not dom.contains(t_next, c_next):
            # Clip onto the boundary: bisect along the step segment.
            lo, hi = 0.0, 1.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                tm = t + mid * (t_next - t)
                cm = c + mid * (c_next - c)
                if dom.contains(tm, cm):
                    lo = mid
                else:
                    hi = mid
            t_clip = min(max(t + lo * (t_next - t), dom.t_min), dom.t_max)
            c_clip = min(max(c + lo * (c_next - c), dom.c_min), dom.c_max)
            samples.append(
                (tau + lo * step, t_clip, c_clip, value(t_clip, c_clip))
            )
            exit_reason = EXIT_LEFT_DOMAIN
            break
        t, c, tau = t_next, c_next, tau_next
        samples.append((tau, t, c, value(t, c)))
    return FlowTrajectory(tuple(samples), exit_reason)


def check_no_recurrence(
    trajectory: FlowTrajectory, radius: float
) -> bool:
    """Discrete witness that the trajectory never closes a loop.

    Returns False when some later sample comes back within `radius` of an
    earlier one after having first escaped that neighborhood, which is
    what a closed orbit sampled at finite resolution looks like.  For a
    strict gradient flow this always returns True.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    pts = np.array([(s[1], s[2]) for s in trajectory.samples])
    n = len(pts)
    if n < 3:
        return True
    r2 = radius * radius
    for i in range(n - 2):
        d2 = np.sum((pts[i + 1:] - pts[i]) ** 2, axis=1)
        outside = np.nonzero(d2 > r2)[0]
        if outside.size == 0:
            continue
        first_out = outside[0]
        if np.any(d2[first_out + 1:] < r2):
            return False
    return True


def write_trajectory_csv(
    trajectory: FlowTrajectory, path: str | Path
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau", "t", "c", "R"])
        for tau, t, c, r in trajectory.samples:
            writer.writerow([f"{tau:.9g}", f"{t:.9g}", f"{c:.9g}", f"{r:.9g}"])
