"""Minimal deterministic SVG line plots (polylines + axis ticks)."""

from __future__ import annotations

import math

__all__ = ["line_plot"]

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 16, 28, 44
_COLORS = {"solid": "#b22222", "dashed": "#1f4fb2", "markers": "#1a7a1a"}


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s for s in (mag, 2 * mag, 2.5 * mag, 5 * mag, 10 * mag) if s >= raw)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return out


def line_plot(path, series, *, title: str = "", xlabel: str = "", ylabel: str = "",
              width: int = 720, height: int = 480) -> None:
    """Write an SVG with the given series.

    Each series is a dict with keys x, y (sequences), style (solid | dashed |
    markers) and optional label/color.  NaN y-values break the polyline.
    """
    xs = [float(v) for s in series for v in s["x"]]
    ys = [float(v) for s in series for v in s["y"] if math.isfinite(v)]
    if not xs or not ys:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    plot_w = width - _MARGIN_L - _MARGIN_R
    plot_h = height - _MARGIN_T - _MARGIN_B

    def px(x):
        return _MARGIN_L + plot_w * (x - x_lo) / (x_hi - x_lo)

    def py(y):
        return _MARGIN_T + plot_h * (1.0 - (y - y_lo) / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
                     f'font-size="13">{title}</text>')
    for t in _ticks(x_lo, x_hi):
        x = px(t)
        parts.append(f'<line x1="{x:.2f}" y1="{_MARGIN_T + plot_h}" x2="{x:.2f}" '
                     f'y2="{_MARGIN_T + plot_h + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{_MARGIN_T + plot_h + 18}" '
                     f'text-anchor="middle" font-size="11">{t:.6g}</text>')
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        parts.append(f'<line x1="{_MARGIN_L - 5}" y1="{y:.2f}" x2="{_MARGIN_L}" '
                     f'y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{_MARGIN_L - 8}" y="{y + 4:.2f}" text-anchor="end" '
                     f'font-size="11">{t:.6g}</text>')
    if xlabel:
        parts.append(f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{height - 8}" '
                     f'text-anchor="middle" font-size="12">{xlabel}</text>')
    if ylabel:
        parts.append(f'<text x="14" y="{_MARGIN_T + plot_h / 2:.1f}" font-size="12" '
                     f'text-anchor="middle" transform="rotate(-90 14 '
                     f'{_MARGIN_T + plot_h / 2:.1f})">{ylabel}</text>')
    for s in series:
        style = s.get("style", "solid")
        color = s.get("color", _COLORS.get(style, "#333333"))
        pts = [(px(float(x)), py(float(y)) if math.isfinite(float(y)) else math.nan)
               for x, y in zip(s["x"], s["y"])]
        if style == "markers":
            for x, y in pts:
                if math.isfinite(y):
                    parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" '
                                 f'fill="none" stroke="{color}"/>')
            continue
        dash = ' stroke-dasharray="6 4"' if style == "dashed" else ""
        run: list[str] = []
        for x, y in pts:
            if math.isfinite(y):
                run.append(f"{x:.2f},{y:.2f}")
            elif run:
                if len(run) > 1:
                    parts.append(f'<polyline points="{" ".join(run)}" fill="none" '
                                 f'stroke="{color}"{dash}/>')
                run = []
        if len(run) > 1:
            parts.append(f'<polyline points="{" ".join(run)}" fill="none" '
                         f'stroke="{color}"{dash}/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
