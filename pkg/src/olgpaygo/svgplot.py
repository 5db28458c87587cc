"""Minimal deterministic SVG line charts."""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
WIDTH, HEIGHT, MARGIN = 640, 400, 56


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def line_chart(series: Dict[str, Tuple[Sequence[float], Sequence[float]]], title: str = "",
               xlabel: str = "", ylabel: str = "", vline: Optional[float] = None) -> str:
    """Render ``{label: (x, y)}`` as an SVG document string."""
    xs = np.concatenate([np.asarray(x, dtype=float) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, dtype=float) for _, y in series.values()])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    w, h = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(v):
        return MARGIN + (v - x0) / (x1 - x0) * w

    def sy(v):
        return HEIGHT - MARGIN - (v - y0) / (y1 - y0) * h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{h}" fill="none" stroke="#444"/>',
        f'<text x="{WIDTH / 2:.0f}" y="{MARGIN / 2:.0f}" text-anchor="middle" '
        f'font-size="15">{escape(title)}</text>',
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{HEIGHT / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT / 2:.0f})">{escape(ylabel)}</text>',
    ]
    for k in range(5):
        yv = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{MARGIN - 6}" y="{_fmt(sy(yv) + 4)}" text-anchor="end" '
                   f'font-size="10">{yv:.3g}</text>')
        xv = x0 + (x1 - x0) * k / 4
        out.append(f'<text x="{_fmt(sx(xv))}" y="{HEIGHT - MARGIN + 14}" text-anchor="middle" '
                   f'font-size="10">{xv:.3g}</text>')
    if vline is not None and x0 <= vline <= x1:
        out.append(f'<line x1="{_fmt(sx(vline))}" y1="{MARGIN}" x2="{_fmt(sx(vline))}" '
                   f'y2="{HEIGHT - MARGIN}" stroke="#888" stroke-dasharray="5,4"/>')
    for i, (label, (x, y)) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{points}"/>')
        out.append(f'<text x="{WIDTH - MARGIN + 4}" y="{MARGIN + 14 * (i + 1)}" '
                   f'font-size="10" fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
