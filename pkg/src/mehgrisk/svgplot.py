"""Self-contained SVG emission for contour, region, flow and curvature plots.

No rendering dependency: plots are assembled as SVG strings and written
directly.  Output is a pure function of the inputs, so repeated runs
produce identical bytes.
"""

from __future__ import annotations

import math
from pathlib import Path

from .analysis import LevelCurveSet
from .fieldfit import Rectangle, RiskField
from .geometry import mixed_partial_cubic
from .stagemap import DEFAULT_STAGE_MAP, StageMap

WIDTH = 640
HEIGHT = 480
MARGIN_L = 64
MARGIN_R = 24
MARGIN_T = 36
MARGIN_B = 66

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)


class _Canvas:
    """World-to-pixel mapping over a fixed plot frame."""

    def __init__(self, world: Rectangle, title: str):
        self.world = world
        self.parts: list[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.1f}" y="22" font-size="15" '
            f'text-anchor="middle" font-family="sans-serif">{title}</text>',
        ]

    def x(self, t: float) -> float:
        w = self.world
        frac = (t - w.t_min) / (w.t_max - w.t_min)
        return MARGIN_L + frac * (WIDTH - MARGIN_L - MARGIN_R)

    def y(self, c: float) -> float:
        w = self.world
        frac = (c - w.c_min) / (w.c_max - w.c_min)
        return HEIGHT - MARGIN_B - frac * (HEIGHT - MARGIN_T - MARGIN_B)

    def polyline(self, points, color: str, width: float = 1.5) -> None:
        if len(points) < 2:
            return
        coords = " ".join(
            f"{self.x(t):.2f},{self.y(c):.2f}" for t, c in points
        )
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"/>'
        )

    def line(self, t0, c0, t1, c1, color="#333333", width=1.0, dash="") -> None:
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{self.x(t0):.2f}" y1="{self.y(c0):.2f}" '
            f'x2="{self.x(t1):.2f}" y2="{self.y(c1):.2f}" '
            f'stroke="{color}" stroke-width="{width}"{dash_attr}/>'
        )

    def rect_world(self, t0, c0, t1, c1, fill: str, opacity: float) -> None:
        x0, y1 = self.x(t0), self.y(c0)
        x1, y0 = self.x(t1), self.y(c1)
        self.parts.append(
            f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
            f'height="{y1 - y0:.2f}" fill="{fill}" fill-opacity="{opacity}" '
            'stroke="none"/>'
        )

    def text(self, px, py, s, size=11, anchor="middle", color="#222222") -> None:
        self.parts.append(
            f'<text x="{px:.1f}" y="{py:.1f}" font-size="{size}" '
            f'text-anchor="{anchor}" font-family="sans-serif" '
            f'fill="{color}">{s}</text>'
        )

    def axes(
        self,
        x_label: str,
        y_label: str,
        stage_map: StageMap | None = None,
    ) -> None:
        w = self.world
        frame_color = "#333333"
        self.parts.append(
            f'<rect x="{MARGIN_L}" y="{MARGIN_T}" '
            f'width="{WIDTH - MARGIN_L - MARGIN_R}" '
            f'height="{HEIGHT - MARGIN_T - MARGIN_B}" fill="none" '
            f'stroke="{frame_color}" stroke-width="1"/>'
        )
        for t in _ticks(w.t_min, w.t_max):
            px = self.x(t)
            base = HEIGHT - MARGIN_B
            self.parts.append(
                f'<line x1="{px:.2f}" y1="{base}" x2="{px:.2f}" '
                f'y2="{base + 5}" stroke="{frame_color}" stroke-width="1"/>'
            )
            self.text(px, base + 18, _fmt(t))
            if stage_map is not None:
                self.text(
                    px, base + 33, f"{stage_map.age(t):g}y", size=10,
                    color="#666666",
                )
        for c in _ticks(w.c_min, w.c_max):
            py = self.y(c)
            self.parts.append(
                f'<line x1="{MARGIN_L - 5}" y1="{py:.2f}" x2="{MARGIN_L}" '
                f'y2="{py:.2f}" stroke="{frame_color}" stroke-width="1"/>'
            )
            self.text(MARGIN_L - 9, py + 4, _fmt(c), anchor="end")
        self.text(
            MARGIN_L + (WIDTH - MARGIN_L - MARGIN_R) / 2,
            HEIGHT - 14, x_label, size=12,
        )
        mid_y = MARGIN_T + (HEIGHT - MARGIN_T - MARGIN_B) / 2
        self.parts.append(
            f'<text x="16" y="{mid_y:.1f}" font-size="12" '
            'text-anchor="middle" font-family="sans-serif" fill="#222222" '
            f'transform="rotate(-90 16 {mid_y:.1f})">{y_label}</text>'
        )

    def render(self) -> str:
        return "\n".join(self.parts) + "\n</svg>\n"


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    v = first
    while v <= hi + 1e-9 * span:
        out.append(round(v, 10))
        v += step
    return out


def _fmt(v: float) -> str:
    return f"{v:g}"


def contour_plot_svg(
    field: RiskField,
    curve_sets: list[LevelCurveSet],
    path: str | Path,
    domain: Rectangle | None = None,
    stage_map: StageMap = DEFAULT_STAGE_MAP,
    title: str = "Risk level curves",
) -> None:
    dom = domain or field.domain
    canvas = _Canvas(dom, title)
    for idx, cset in enumerate(curve_sets):
        color = PALETTE[idx % len(PALETTE)]
        for line in cset.polylines:
            canvas.polyline(line, color)
        if cset.polylines and cset.polylines[0]:
            t0, c0 = cset.polylines[0][0]
            canvas.text(
                canvas.x(t0) + 6, canvas.y(c0) - 4, f"R={_fmt(cset.level)}",
                size=10, anchor="start", color=color,
            )
    canvas.axes("stage t (age below)", "concentration c (mg/kg)", stage_map)
    _write(canvas, path)


def region_plot_svg(
    field: RiskField,
    threshold: float,
    boundary: LevelCurveSet,
    path: str | Path,
    domain: Rectangle | None = None,
    stage_map: StageMap = DEFAULT_STAGE_MAP,
    grid: int = 128,
) -> None:
    """Shade {R >= threshold} by row runs and overlay its boundary curve."""
    dom = domain or field.domain
    canvas = _Canvas(dom, f"Critical-risk region R ≥ {_fmt(threshold)}")
    dt = (dom.t_max - dom.t_min) / grid
    dc = (dom.c_max - dom.c_min) / grid
    for j in range(grid):
        c_mid = dom.c_min + (j + 0.5) * dc
        run_start = None
        for i in range(grid):
            t_mid = dom.t_min + (i + 0.5) * dt
            inside = field.evaluate(t_mid, c_mid) >= threshold
            if inside and run_start is None:
                run_start = i
            if (not inside or i == grid - 1) and run_start is not None:
                end = i + 1 if inside else i
                canvas.rect_world(
                    dom.t_min + run_start * dt, dom.c_min + j * dc,
                    dom.t_min + end * dt, dom.c_min + (j + 1) * dc,
                    "#d62728", 0.25,
                )
                run_start = None
    for line in boundary.polylines:
        canvas.polyline(line, "#d62728", 2.0)
    canvas.axes("stage t (age below)", "concentration c (mg/kg)", stage_map)
    _write(canvas, path)


def flow_portrait_svg(
    field: RiskField,
    trajectories,
    path: str | Path,
    domain: Rectangle | None = None,
    stage_map: StageMap = DEFAULT_STAGE_MAP,
    arrow_grid: int = 15,
) -> None:
    """Normalized gradient arrows plus integrated trajectories."""
    dom = domain or field.domain
    canvas = _Canvas(dom, "Gradient flow of the risk field")
    arrow_px = 0.45 * (WIDTH - MARGIN_L - MARGIN_R) / arrow_grid
    for i in range(arrow_grid):
        for j in range(arrow_grid):
            t = dom.t_min + (i + 0.5) * (dom.t_max - dom.t_min) / arrow_grid
            c = dom.c_min + (j + 0.5) * (dom.c_max - dom.c_min) / arrow_grid
            g = field.concentration_slope()
            dt_val = field.partial_t(t, c)
            dc_val = g(t)
            norm = math.hypot(dt_val, dc_val)
            if norm < 1e-15:
                continue
            px, py = canvas.x(t), canvas.y(c)
            # Screen-space direction; the y axis points down in SVG.
            ux, uy = dt_val / norm, -dc_val / norm
            x1, y1 = px + ux * arrow_px, py + uy * arrow_px
            canvas.parts.append(
                f'<line x1="{px:.2f}" y1="{py:.2f}" x2="{x1:.2f}" '
                f'y2="{y1:.2f}" stroke="#999999" stroke-width="1"/>'
            )
            hx, hy = x1 - 3.5 * (ux + uy * 0.5), y1 - 3.5 * (uy - ux * 0.5)
            gx, gy = x1 - 3.5 * (ux - uy * 0.5), y1 - 3.5 * (uy + ux * 0.5)
            canvas.parts.append(
                f'<polyline points="{hx:.2f},{hy:.2f} {x1:.2f},{y1:.2f} '
                f'{gx:.2f},{gy:.2f}" fill="none" stroke="#999999" '
                'stroke-width="1"/>'
            )
    for idx, traj in enumerate(trajectories):
        pts = [(s[1], s[2]) for s in traj.samples]
        canvas.polyline(pts, PALETTE[idx % len(PALETTE)], 1.8)
        if pts:
            t0, c0 = pts[0]
            canvas.parts.append(
                f'<circle cx="{canvas.x(t0):.2f}" cy="{canvas.y(c0):.2f}" '
                f'r="3" fill="{PALETTE[idx % len(PALETTE)]}"/>'
            )
    canvas.axes("stage t (age below)", "concentration c (mg/kg)", stage_map)
    _write(canvas, path)


def curvature_profile_svg(
    field: RiskField,
    path: str | Path,
    search: tuple[float, float] = (1.0, 6.0),
    zero_stages: tuple[float, ...] = (),
    samples: int = 400,
) -> None:
    """Profile of the curvature numerator k(t) = -(q(t))^2 over the search range."""
    q = mixed_partial_cubic(field)
    ts = [
        search[0] + i * (search[1] - search[0]) / samples
        for i in range(samples + 1)
    ]
    ks = [-(q(t) ** 2) for t in ts]
    lo = min(ks)
    world = Rectangle(search[0], search[1], lo * 1.05 if lo < 0 else -1.0, max(0.5, -lo * 0.05))
    canvas = _Canvas(world, "Curvature numerator -(q(t))² and its zero stages")
    canvas.line(world.t_min, 0.0, world.t_max, 0.0, "#888888", 1.0, "4 3")
    canvas.polyline(list(zip(ts, ks)), "#1f77b4", 1.8)
    for t in zero_stages:
        canvas.line(t, world.c_min, t, world.c_max, "#d62728", 1.0, "5 4")
        canvas.text(canvas.x(t), MARGIN_T + 14, f"t={t:.2f}", size=10, color="#d62728")
    canvas.axes("stage t", "k(t)")
    _write(canvas, path)


def _write(canvas: _Canvas, path: str | Path) -> None:
    Path(path).write_text(canvas.render())
