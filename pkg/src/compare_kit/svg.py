"""Static SVG line chart of ARE against association for a sweep.

Hand-rolled so the output is deterministic: one polyline per level of the
second sweep axis (or a single line for one-axis sweeps), x = association or
first axis, y = ARE. Infeasible cells are simply not plotted.
"""

from __future__ import annotations

from .engine import SweepTable

__all__ = ["render_svg"]

_WIDTH, _HEIGHT = 640, 400
_LEFT, _RIGHT, _TOP, _BOTTOM = 62, 20, 24, 46
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#17becf", "#7f7f7f")


def _coerce_x(values: list) -> tuple[list[float], list[str]]:
    """Numeric positions plus tick labels; categorical values get indices."""
    if all(isinstance(v, (int, float)) for v in values):
        return [float(v) for v in values], [f"{float(v):g}" for v in values]
    return [float(i) for i in range(len(values))], [str(v) for v in values]


def render_svg(table: SweepTable) -> str:
    x_name = table.axes[0][0]
    x_values = list(table.axes[0][1])
    positions, tick_labels = _coerce_x(x_values)
    position_of = dict(zip(x_values, positions))
    series_name = table.axes[1][0] if len(table.axes) > 1 else None
    series: dict = {}
    for cell in table.cells:
        if cell.report is None:
            continue
        coords = dict(cell.coords)
        key = coords[series_name] if series_name else None
        series.setdefault(key, []).append(
            (position_of[coords[x_name]], cell.report.are))
    for points in series.values():
        points.sort(key=lambda p: p[0])
    ys = [y for points in series.values() for _, y in points]
    if not ys:
        ys = [0.0, 1.0]
    x_lo, x_hi = min(positions), max(positions)
    y_lo, y_hi = min(ys + [1.0]), max(ys + [1.0])
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    plot_w = _WIDTH - _LEFT - _RIGHT
    plot_h = _HEIGHT - _TOP - _BOTTOM

    def sx(x: float) -> float:
        return _LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return _TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        # axes
        f'<line x1="{_LEFT}" y1="{_TOP}" x2="{_LEFT}" '
        f'y2="{_HEIGHT - _BOTTOM}" stroke="black"/>',
        f'<line x1="{_LEFT}" y1="{_HEIGHT - _BOTTOM}" '
        f'x2="{_WIDTH - _RIGHT}" y2="{_HEIGHT - _BOTTOM}" stroke="black"/>',
    ]
    # reference line at ARE = 1, the decision boundary
    if y_lo < 1.0 < y_hi:
        y1 = sy(1.0)
        parts.append(f'<line x1="{_LEFT}" y1="{y1:.2f}" '
                     f'x2="{_WIDTH - _RIGHT}" y2="{y1:.2f}" '
                     f'stroke="#999999" stroke-dasharray="4 3"/>')
    for pos, label in zip(positions, tick_labels):
        x = sx(pos)
        parts.append(f'<line x1="{x:.2f}" y1="{_HEIGHT - _BOTTOM}" '
                     f'x2="{x:.2f}" y2="{_HEIGHT - _BOTTOM + 5}" '
                     f'stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{_HEIGHT - _BOTTOM + 18}" '
                     f'font-size="11" text-anchor="middle">{label}</text>')
    n_yticks = 5
    for i in range(n_yticks + 1):
        y_val = y_lo + i * (y_hi - y_lo) / n_yticks
        y = sy(y_val)
        parts.append(f'<line x1="{_LEFT - 5}" y1="{y:.2f}" x2="{_LEFT}" '
                     f'y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{_LEFT - 8}" y="{y + 4:.2f}" font-size="11" '
                     f'text-anchor="end">{y_val:.2f}</text>')
    parts.append(f'<text x="{_LEFT + plot_w / 2:.2f}" y="{_HEIGHT - 8}" '
                 f'font-size="12" text-anchor="middle">{x_name}</text>')
    parts.append(f'<text x="14" y="{_TOP + plot_h / 2:.2f}" font-size="12" '
                 f'text-anchor="middle" transform="rotate(-90 14 '
                 f'{_TOP + plot_h / 2:.2f})">ARE</text>')
    for idx, (key, points) in enumerate(sorted(series.items(),
                                               key=lambda kv: str(kv[0]))):
        color = _PALETTE[idx % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
        parts.append(f'<polyline points="{coords}" fill="none" '
                     f'stroke="{color}" stroke-width="2"/>')
        if series_name is not None:
            ly = _TOP + 14 + 16 * idx
            lx = _WIDTH - _RIGHT - 150
            parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" '
                         f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
            parts.append(f'<text x="{lx + 30}" y="{ly}" font-size="11">'
                         f'{series_name} = {key}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
