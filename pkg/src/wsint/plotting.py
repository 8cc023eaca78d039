"""Grouped error-bar charts as standalone SVG documents.

One or two interval series are drawn side by side per condition: the first
series in grey, the second in black.  A companion delimiter-separated text
block carries the plotted numbers (method, condition, center, lower, upper)
so the figure is reproducible without parsing the SVG.
"""

from __future__ import annotations

import csv
import io as _io
import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

from .estimate import IntervalEstimate

__all__ = ["emit_plot"]

_SERIES_COLORS = ("#888888", "#000000")

_WIDTH = 640
_HEIGHT = 420
_MARGIN_LEFT = 70
_MARGIN_RIGHT = 24
_MARGIN_TOP = 24
_MARGIN_BOTTOM = 56


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    span = hi - lo
    raw_step = span / max(target - 1, 1)
    power = math.floor(math.log10(raw_step))
    base = raw_step / 10**power
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if base <= mult:
            step = mult * 10**power
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def emit_plot(
    series: Mapping[str, Sequence[IntervalEstimate]] | Sequence[tuple[str, Sequence[IntervalEstimate]]],
    condition_labels: Sequence[str],
    y_label: str = "response",
) -> tuple[str, str]:
    """Render 1 or 2 interval series into an SVG chart plus companion data.

    Parameters
    ----------
    series : mapping or sequence of (name, intervals)
        Per-condition intervals for each method, in plotting order.  Every
        series must cover exactly the given conditions.
    condition_labels : sequence of str
        X-axis categories, one per interval.

    Returns
    -------
    (svg_text, data_text)
        An SVG 1.1 document and a comma-separated block with columns
        method, condition, center, lower, upper.
    """
    pairs = list(series.items()) if isinstance(series, Mapping) else list(series)
    if not 1 <= len(pairs) <= 2:
        raise ValueError(f"expected 1 or 2 interval series, got {len(pairs)}")
    labels = [str(c) for c in condition_labels]
    if len(labels) < 1:
        raise ValueError("need at least one condition")
    for name, intervals in pairs:
        if len(intervals) != len(labels):
            raise ValueError(
                f"series {name!r} has {len(intervals)} intervals "
                f"for {len(labels)} conditions"
            )

    lows = [iv.lower for _, ivs in pairs for iv in ivs]
    highs = [iv.upper for _, ivs in pairs for iv in ivs]
    y_lo, y_hi = min(lows), max(highs)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.06 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def x_pos(j: int, series_idx: int) -> float:
        center = _MARGIN_LEFT + (j + 0.5) * plot_w / len(labels)
        if len(pairs) == 1:
            return center
        return center + (-12.0 if series_idx == 0 else 12.0)

    def y_pos(v: float) -> float:
        return _MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">'
    )
    out.append(f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>')

    # Axes.
    x0, x1 = _MARGIN_LEFT, _WIDTH - _MARGIN_RIGHT
    y0, y1 = _HEIGHT - _MARGIN_BOTTOM, _MARGIN_TOP
    out.append(
        f'<g id="axes" stroke="#000000" stroke-width="1">'
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>'
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>'
        f"</g>"
    )
    out.append('<g id="y-ticks" font-family="sans-serif" font-size="11">')
    for t in _nice_ticks(y_lo, y_hi):
        yt = y_pos(t)
        out.append(f'<line x1="{x0 - 4}" y1="{yt:.2f}" x2="{x0}" y2="{yt:.2f}" stroke="#000000"/>')
        out.append(
            f'<text x="{x0 - 8}" y="{yt + 3.5:.2f}" text-anchor="end">{escape(_fmt(t))}</text>'
        )
    out.append("</g>")
    out.append('<g id="x-ticks" font-family="sans-serif" font-size="12">')
    for j, label in enumerate(labels):
        xc = _MARGIN_LEFT + (j + 0.5) * plot_w / len(labels)
        out.append(
            f'<text x="{xc:.2f}" y="{y0 + 18}" text-anchor="middle">{escape(label)}</text>'
        )
    out.append("</g>")
    out.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.2f}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">condition</text>'
    )
    out.append(
        f'<text x="16" y="{_MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {_MARGIN_TOP + plot_h / 2:.2f})">{escape(y_label)}</text>'
    )

    cap = 6.0
    for s, (name, intervals) in enumerate(pairs):
        color = _SERIES_COLORS[s]
        out.append(
            f'<g id="series-{s}" data-method={quoteattr(str(name))} '
            f'stroke={quoteattr(color)} fill={quoteattr(color)} stroke-width="1.5">'
        )
        for j, iv in enumerate(intervals):
            xp = x_pos(j, s)
            yl, yu, yc = y_pos(iv.lower), y_pos(iv.upper), y_pos(iv.center)
            out.append(f'<g class="errorbar" data-condition={quoteattr(labels[j])}>')
            out.append(f'<line x1="{xp:.2f}" y1="{yl:.2f}" x2="{xp:.2f}" y2="{yu:.2f}"/>')
            out.append(
                f'<line x1="{xp - cap:.2f}" y1="{yu:.2f}" x2="{xp + cap:.2f}" y2="{yu:.2f}"/>'
            )
            out.append(
                f'<line x1="{xp - cap:.2f}" y1="{yl:.2f}" x2="{xp + cap:.2f}" y2="{yl:.2f}"/>'
            )
            out.append(f'<circle cx="{xp:.2f}" cy="{yc:.2f}" r="3"/>')
            out.append("</g>")
        out.append("</g>")

    out.append('<g id="legend" font-family="sans-serif" font-size="12">')
    for s, (name, _) in enumerate(pairs):
        yt = _MARGIN_TOP + 10 + 18 * s
        out.append(
            f'<line x1="{x1 - 150}" y1="{yt}" x2="{x1 - 126}" y2="{yt}" '
            f'stroke={quoteattr(_SERIES_COLORS[s])} stroke-width="2"/>'
        )
        out.append(f'<text x="{x1 - 120}" y="{yt + 4}">{escape(str(name))}</text>')
    out.append("</g>")
    out.append("</svg>")

    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "condition", "center", "lower", "upper"])
    for name, intervals in pairs:
        for label, iv in zip(labels, intervals):
            writer.writerow([name, label, repr(iv.center), repr(iv.lower), repr(iv.upper)])
    return "\n".join(out), buf.getvalue()
