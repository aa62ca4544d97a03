"""Minimal deterministic SVG line charts, no plotting dependencies."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]

WIDTH = 960
HEIGHT = 600
MARGIN_LEFT = 90
MARGIN_RIGHT = 200
MARGIN_TOP = 60
MARGIN_BOTTOM = 70


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _tick_label(value: float) -> str:
    if value == 0:
        return "0"
    if abs(value) >= 1000:
        return f"{value:.0f}"
    if abs(value) >= 10:
        return f"{value:.1f}"
    return f"{value:.3g}"


def render_line_chart(
    title: str,
    x_label: str,
    y_label: str,
    series: Sequence[tuple[str, Sequence[float]]],
) -> str:
    """SVG document for y-value series sharing an implicit x axis 0..len-1.

    Output is a pure function of the inputs: fixed layout, fixed float
    formatting, series drawn and labelled in the given order.
    """
    if not series or all(len(ys) == 0 for _, ys in series):
        raise ValueError("nothing to plot")

    x_max = max(len(ys) for _, ys in series) - 1
    x_max = max(x_max, 1)
    y_max = max((max(ys) for _, ys in series if ys), default=1.0)
    if y_max <= 0:
        y_max = 1.0
    y_max *= 1.05

    plot_left = MARGIN_LEFT
    plot_right = WIDTH - MARGIN_RIGHT
    plot_top = MARGIN_TOP
    plot_bottom = HEIGHT - MARGIN_BOTTOM
    plot_w = plot_right - plot_left
    plot_h = plot_bottom - plot_top

    def xp(x: float) -> float:
        return plot_left + (x / x_max) * plot_w

    def yp(y: float) -> float:
        return plot_bottom - (y / y_max) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="32" text-anchor="middle" font-size="20" '
        f'font-family="sans-serif">{_escape(title)}</text>',
    ]

    ticks = 5
    for i in range(ticks + 1):
        value = y_max * i / ticks
        y = yp(value)
        out.append(
            f'<line x1="{plot_left}" y1="{y:.2f}" x2="{plot_right}" y2="{y:.2f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{plot_left - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-size="12" font-family="sans-serif">{_tick_label(value)}</text>'
        )
    for i in range(ticks + 1):
        value = x_max * i / ticks
        x = xp(value)
        out.append(
            f'<line x1="{x:.2f}" y1="{plot_bottom}" x2="{x:.2f}" y2="{plot_bottom + 5}" '
            'stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{plot_bottom + 22}" text-anchor="middle" '
            f'font-size="12" font-family="sans-serif">{value:.0f}</text>'
        )

    out.append(
        f'<line x1="{plot_left}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="2"/>'
    )
    out.append(
        f'<line x1="{plot_left}" y1="{plot_top}" x2="{plot_left}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="2"/>'
    )

    legend_x = plot_right + 18
    legend_y = plot_top + 16
    for idx, (label, ys) in enumerate(series):
        color = COLORS[idx % len(COLORS)]
        if ys:
            points = " ".join(f"{xp(x):.2f},{yp(y):.2f}" for x, y in enumerate(ys))
            out.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{points}"/>'
            )
        ly = legend_y + idx * 24
        out.append(
            f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 24}" y2="{ly}" '
            f'stroke="{color}" stroke-width="3"/>'
        )
        out.append(
            f'<text x="{legend_x + 32}" y="{ly + 4}" font-size="13" '
            f'font-family="sans-serif">{_escape(label)}</text>'
        )

    out.append(
        f'<text x="{(plot_left + plot_right) / 2:.1f}" y="{HEIGHT - 16}" text-anchor="middle" '
        f'font-size="14" font-family="sans-serif">{_escape(x_label)}</text>'
    )
    mid_y = (plot_top + plot_bottom) / 2
    out.append(
        f'<text x="24" y="{mid_y:.1f}" text-anchor="middle" font-size="14" '
        f'font-family="sans-serif" transform="rotate(-90 24 {mid_y:.1f})">{_escape(y_label)}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_line_chart(
    path: Path,
    title: str,
    x_label: str,
    y_label: str,
    series: Sequence[tuple[str, Sequence[float]]],
) -> None:
    path.write_text(render_line_chart(title, x_label, y_label, series), encoding="ascii")
