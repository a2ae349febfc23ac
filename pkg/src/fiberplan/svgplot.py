"""Tiny native SVG plotting: line charts and box summaries.

No drawing dependency; emits axes, polylines, rectangles, and text only.
"""

from __future__ import annotations

import math

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 30, 50

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _esc(s):
    return (str(s).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(step))
    for m in (1, 2, 5, 10):
        if mag * m >= step:
            step = mag * m
            break
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * step:
        out.append(round(t, 12))
        t += step
    return out


def _fmt(v):
    if v == 0:
        return "0"
    if abs(v) >= 1000 or abs(v) < 0.01:
        return f"{v:.1e}"
    return f"{v:g}"


class _Canvas:
    def __init__(self, title, xlabel, ylabel):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" '
            f'font-size="14">{_esc(title)}</text>',
            f'<text x="{WIDTH / 2}" y="{HEIGHT - 8}" text-anchor="middle" '
            f'font-size="12">{_esc(xlabel)}</text>',
            f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" '
            f'font-size="12" transform="rotate(-90 16 {HEIGHT / 2})">'
            f'{_esc(ylabel)}</text>',
        ]

    def add(self, fragment):
        self.parts.append(fragment)

    def finish(self):
        self.parts.append("</svg>")
        return "\n".join(self.parts)


def _axes(canvas, x0, x1, y0, y1, logy=False):
    """Draw the frame and ticks; return data-to-pixel mappers."""
    px0, px1 = MARGIN_L, WIDTH - MARGIN_R
    py0, py1 = HEIGHT - MARGIN_B, MARGIN_T

    def sx(x):
        return px0 + (x - x0) / (x1 - x0) * (px1 - px0)

    def sy(y):
        v = math.log10(max(y, 1e-12)) if logy else y
        return py0 + (v - y0) / (y1 - y0) * (py1 - py0)

    canvas.add(f'<rect x="{px0}" y="{py1}" width="{px1 - px0}" '
               f'height="{py0 - py1}" fill="none" stroke="black"/>')
    for t in _ticks(x0, x1):
        x = sx(t)
        canvas.add(f'<line x1="{x:.1f}" y1="{py0}" x2="{x:.1f}" '
                   f'y2="{py0 + 5}" stroke="black"/>')
        canvas.add(f'<text x="{x:.1f}" y="{py0 + 18}" text-anchor="middle" '
                   f'font-size="10">{_fmt(t)}</text>')
    for t in _ticks(y0, y1):
        y = py0 + (t - y0) / (y1 - y0) * (py1 - py0)
        label = _fmt(10.0 ** t) if logy else _fmt(t)
        canvas.add(f'<line x1="{px0 - 5}" y1="{y:.1f}" x2="{px0}" '
                   f'y2="{y:.1f}" stroke="black"/>')
        canvas.add(f'<text x="{px0 - 8}" y="{y + 3:.1f}" text-anchor="end" '
                   f'font-size="10">{label}</text>')
    return sx, sy


def line_plot(series, title="", xlabel="", ylabel="", logy=False):
    """series: ordered mapping label -> list of (x, y). Returns SVG text."""
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] for pts in series.values() for p in pts]
    if not xs:
        raise ValueError("no data")
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if logy:
        vals = [math.log10(max(y, 1e-12)) for y in ys]
    else:
        vals = ys
    y0, y1 = min(vals), max(vals)
    pad = 0.05 * (y1 - y0) or 0.5
    y0, y1 = y0 - pad, y1 + pad

    canvas = _Canvas(title, xlabel, ylabel)
    sx, sy = _axes(canvas, x0, x1, y0, y1, logy)
    for i, (label, pts) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in pts)
        canvas.add(f'<polyline points="{coords}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        for x, y in pts:
            canvas.add(f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="3" '
                       f'fill="{color}"/>')
        ly = MARGIN_T + 14 + 14 * i
        lx = WIDTH - MARGIN_R - 140
        canvas.add(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" '
                   f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        canvas.add(f'<text x="{lx + 24}" y="{ly}" font-size="11">'
                   f'{_esc(label)}</text>')
    return canvas.finish()


def _quartiles(values):
    vs = sorted(values)
    n = len(vs)

    def q(p):
        i = p * (n - 1)
        lo = int(math.floor(i))
        hi = min(lo + 1, n - 1)
        return vs[lo] + (i - lo) * (vs[hi] - vs[lo])

    return vs[0], q(0.25), q(0.5), q(0.75), vs[-1]


def box_plot(groups, title="", ylabel=""):
    """groups: ordered mapping label -> list of values. Returns SVG text."""
    if not groups:
        raise ValueError("no data")
    allv = [v for vs in groups.values() for v in vs]
    y0, y1 = min(allv), max(allv)
    pad = 0.05 * (y1 - y0) or 0.5
    y0, y1 = y0 - pad, y1 + pad

    canvas = _Canvas(title, "", ylabel)
    sx, sy = _axes(canvas, 0.0, float(len(groups)), y0, y1)
    bw = (WIDTH - MARGIN_L - MARGIN_R) / len(groups)
    for i, (label, values) in enumerate(groups.items()):
        lo, q1, med, q3, hi = _quartiles(values)
        cx = sx(i + 0.5)
        half = 0.3 * bw
        canvas.add(f'<line x1="{cx:.1f}" y1="{sy(lo):.1f}" x2="{cx:.1f}" '
                   f'y2="{sy(hi):.1f}" stroke="black"/>')
        canvas.add(f'<rect x="{cx - half:.1f}" y="{sy(q3):.1f}" '
                   f'width="{2 * half:.1f}" '
                   f'height="{abs(sy(q1) - sy(q3)):.1f}" '
                   f'fill="#cfe2f3" stroke="black"/>')
        canvas.add(f'<line x1="{cx - half:.1f}" y1="{sy(med):.1f}" '
                   f'x2="{cx + half:.1f}" y2="{sy(med):.1f}" '
                   f'stroke="#d62728" stroke-width="1.5"/>')
        canvas.add(f'<text x="{cx:.1f}" y="{HEIGHT - MARGIN_B + 32}" '
                   f'text-anchor="middle" font-size="10">{_esc(label)}</text>')
    return canvas.finish()


def write_svg(text, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
