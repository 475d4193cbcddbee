"""Minimal SVG line and contour plots (axes, log scales, polylines, labels)."""
from __future__ import annotations

import math
from html import escape

import numpy as np

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#000000"]

W, H = 720, 480
LEFT, RIGHT, TOP, BOTTOM = 70, 180, 40, 60


def _axis(lo: float, hi: float, log: bool):
    if log:
        lo, hi = math.log10(lo), math.log10(hi)
    if hi <= lo:
        hi = lo + 1.0
    return lo, hi


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        return [10.0**k for k in range(math.ceil(lo - 1e-9), math.floor(hi + 1e-9) + 1)]
    step = 10 ** math.floor(math.log10((hi - lo) / 4))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= 8:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    return list(np.arange(start, hi + step * 1e-6, step))


def _fmt(v: float, log: bool) -> str:
    return f"1e{round(math.log10(v))}" if log else f"{v:g}"


class _Frame:
    def __init__(self, xr, yr, xlog, ylog):
        self.xlog, self.ylog = xlog, ylog
        self.x0, self.x1 = _axis(*xr, xlog)
        self.y0, self.y1 = _axis(*yr, ylog)

    def px(self, x):
        x = math.log10(x) if self.xlog else x
        return LEFT + (x - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)

    def py(self, y):
        y = math.log10(y) if self.ylog else y
        return H - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)

    def axes(self, title, xlabel, ylabel) -> list[str]:
        out = [
            f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" height="{H - TOP - BOTTOM}" '
            'fill="none" stroke="#000"/>',
            f'<text x="{(W - RIGHT + LEFT) / 2}" y="{TOP - 12}" text-anchor="middle" font-size="15">{escape(title)}</text>',
            f'<text x="{(W - RIGHT + LEFT) / 2}" y="{H - 15}" text-anchor="middle" font-size="13">{escape(xlabel)}</text>',
            f'<text x="18" y="{(H - BOTTOM + TOP) / 2}" text-anchor="middle" font-size="13" '
            f'transform="rotate(-90 18 {(H - BOTTOM + TOP) / 2})">{escape(ylabel)}</text>',
        ]
        lo, hi = (10**self.x0, 10**self.x1) if self.xlog else (self.x0, self.x1)
        for t in _ticks(self.x0, self.x1, self.xlog) if self.xlog else _ticks(lo, hi, False):
            x = self.px(t)
            out.append(f'<line x1="{x:.1f}" y1="{H - BOTTOM}" x2="{x:.1f}" y2="{H - BOTTOM + 5}" stroke="#000"/>')
            out.append(f'<text x="{x:.1f}" y="{H - BOTTOM + 18}" text-anchor="middle" font-size="11">{_fmt(t, self.xlog)}</text>')
        lo, hi = (10**self.y0, 10**self.y1) if self.ylog else (self.y0, self.y1)
        for t in _ticks(self.y0, self.y1, self.ylog) if self.ylog else _ticks(lo, hi, False):
            y = self.py(t)
            out.append(f'<line x1="{LEFT - 5}" y1="{y:.1f}" x2="{LEFT}" y2="{y:.1f}" stroke="#000"/>')
            out.append(f'<text x="{LEFT - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{_fmt(t, self.ylog)}</text>')
        return out


def _document(body: list[str], meta: str = "") -> str:
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">'
    if meta:
        head += f"\n<metadata>{escape(meta)}</metadata>"
    return "\n".join([head, f'<rect width="{W}" height="{H}" fill="#fff"/>', *body, "</svg>"]) + "\n"


def _finite(xs, ys, xlog, ylog):
    pts = []
    for x, y in zip(xs, ys):
        if not (math.isfinite(x) and math.isfinite(y)):
            continue
        if (xlog and x <= 0) or (ylog and y <= 0):
            continue
        pts.append((x, y))
    return pts


def line_plot(series: dict, title: str, xlabel: str, ylabel: str,
              xlog: bool = True, ylog: bool = False, meta: str = "") -> str:
    """``series`` maps a label to an (xs, ys) pair."""
    cleaned = {k: _finite(xs, ys, xlog, ylog) for k, (xs, ys) in series.items()}
    allx = [p[0] for pts in cleaned.values() for p in pts] or [1.0]
    ally = [p[1] for pts in cleaned.values() for p in pts] or [1.0]
    frame = _Frame((min(allx), max(allx)), (min(0.0, min(ally)) if not ylog else min(ally), max(ally)), xlog, ylog)
    body = frame.axes(title, xlabel, ylabel)
    for i, (label, pts) in enumerate(cleaned.items()):
        color = PALETTE[i % len(PALETTE)]
        if pts:
            path = " ".join(f"{frame.px(x):.2f},{frame.py(y):.2f}" for x, y in pts)
            body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{path}"/>')
        ly = TOP + 14 + 18 * i
        body.append(f'<line x1="{W - RIGHT + 10}" y1="{ly}" x2="{W - RIGHT + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{W - RIGHT + 35}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    return _document(body, meta)


def contour_segments(xs, ys, z, level):
    """Marching-squares segments of ``z[i, j]`` (at ys[i], xs[j]) at ``level``."""
    segs = []
    z = np.asarray(z, float)
    for i in range(len(ys) - 1):
        for j in range(len(xs) - 1):
            corners = [(xs[j], ys[i], z[i, j]), (xs[j + 1], ys[i], z[i, j + 1]),
                       (xs[j + 1], ys[i + 1], z[i + 1, j + 1]), (xs[j], ys[i + 1], z[i + 1, j])]
            pts = []
            for k in range(4):
                (xa, ya, za), (xb, yb, zb) = corners[k], corners[(k + 1) % 4]
                if not (math.isfinite(za) and math.isfinite(zb)):
                    continue
                if (za < level) != (zb < level):
                    t = (level - za) / (zb - za)
                    pts.append((xa + t * (xb - xa), ya + t * (yb - ya)))
            if len(pts) >= 2:
                segs.append((pts[0], pts[1]))
            if len(pts) == 4:
                segs.append((pts[2], pts[3]))
    return segs


def contour_plot(xs, ys, z, levels, title, xlabel, ylabel, extra_lines: dict | None = None, meta: str = "") -> str:
    """Contours of z over log-x, linear-y axes; ``extra_lines`` adds labelled polylines."""
    frame = _Frame((min(xs), max(xs)), (min(ys), max(ys)), True, False)
    body = frame.axes(title, xlabel, ylabel)
    lx = np.log10(np.asarray(xs, float))
    for i, level in enumerate(levels):
        color = PALETTE[i % len(PALETTE)]
        for (x0, y0), (x1, y1) in contour_segments(lx, ys, z, level):
            body.append(
                f'<line x1="{frame.px(10**x0):.2f}" y1="{frame.py(y0):.2f}" x2="{frame.px(10**x1):.2f}" '
                f'y2="{frame.py(y1):.2f}" stroke="{color}" stroke-width="1.2"/>'
            )
        ly = TOP + 14 + 18 * i
        body.append(f'<line x1="{W - RIGHT + 10}" y1="{ly}" x2="{W - RIGHT + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{W - RIGHT + 35}" y="{ly + 4}" font-size="11">M_UB = {level:g}</text>')
    for k, (label, (xs_, ys_)) in enumerate((extra_lines or {}).items()):
        pts = [(x, y) for x, y in _finite(xs_, ys_, True, False) if min(ys) <= y <= max(ys)]
        if pts:
            path = " ".join(f"{frame.px(x):.2f},{frame.py(y):.2f}" for x, y in pts)
            body.append(f'<polyline fill="none" stroke="#000" stroke-dasharray="6,4" stroke-width="1.5" points="{path}"/>')
        ly = TOP + 14 + 18 * (len(levels) + k)
        body.append(f'<line x1="{W - RIGHT + 10}" y1="{ly}" x2="{W - RIGHT + 30}" y2="{ly}" stroke="#000" stroke-dasharray="6,4"/>')
        body.append(f'<text x="{W - RIGHT + 35}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    return _document(body, meta)
