"""Minimal SVG line plots (single polyline, labeled axes) for quick looks
at traces and spectra without a plotting stack."""

from __future__ import annotations

from pathlib import Path

import numpy as np

WIDTH, HEIGHT = 720, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 36, 52
N_TICKS = 5


def _ticks(lo: float, hi: float) -> np.ndarray:
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, N_TICKS)


def write_line_svg(path: str | Path, x, y, xlabel: str, ylabel: str,
                   title: str = "") -> None:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise ValueError("need two equal-length arrays of at least 2 points")
    x_lo, x_hi = float(x.min()), float(x.max())
    y_lo, y_hi = float(y.min()), float(y.max())
    if y_hi == y_lo:
        y_lo -= 1.0
        y_hi += 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(v):
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v):
        return MARGIN_T + (y_hi - v) / (y_hi - y_lo) * plot_h

    points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="black"/>',
    ]
    for tx in _ticks(x_lo, x_hi):
        xp = px(tx)
        parts.append(f'<line x1="{xp:.2f}" y1="{MARGIN_T + plot_h}" '
                     f'x2="{xp:.2f}" y2="{MARGIN_T + plot_h + 5}" stroke="black"/>')
        parts.append(f'<text x="{xp:.2f}" y="{MARGIN_T + plot_h + 20}" '
                     f'font-size="11" text-anchor="middle">{tx:.4g}</text>')
    for ty in _ticks(y_lo, y_hi):
        yp = py(ty)
        parts.append(f'<line x1="{MARGIN_L - 5}" y1="{yp:.2f}" '
                     f'x2="{MARGIN_L}" y2="{yp:.2f}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN_L - 8}" y="{yp + 4:.2f}" '
                     f'font-size="11" text-anchor="end">{ty:.4g}</text>')
    parts.append(f'<text x="{MARGIN_L + plot_w / 2}" y="{HEIGHT - 12}" '
                 f'font-size="13" text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="16" y="{MARGIN_T + plot_h / 2}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 16 '
                 f'{MARGIN_T + plot_h / 2})">{ylabel}</text>')
    if title:
        parts.append(f'<text x="{WIDTH / 2}" y="22" font-size="14" '
                     f'text-anchor="middle">{title}</text>')
    parts.append(f'<polyline fill="none" stroke="#1f5fa8" stroke-width="1.2" '
                 f'points="{points}"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts))
