"""Deterministic SVG rendering of domains, decompositions and curves.

Output is plain string assembly with fixed float formatting, so the same
inputs always produce byte-identical files.
"""

from __future__ import annotations

import numpy as np

_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def _fmt(x: float) -> str:
    return f"{x:.6f}".rstrip("0").rstrip(".")


class SvgCanvas:
    """Fixed-viewport SVG builder in mathematical (y-up) coordinates."""

    def __init__(self, bbox, width: int = 800, pad: float = 0.05):
        (x0, y0), (x1, y1) = np.asarray(bbox, float)
        dx = x1 - x0
        dy = y1 - y0
        m = pad * max(dx, dy)
        self.x0, self.y0 = x0 - m, y0 - m
        self.x1, self.y1 = x1 + m, y1 + m
        self.scale = width / (self.x1 - self.x0)
        self.width = width
        self.height = int(round((self.y1 - self.y0) * self.scale))
        self._parts: list[str] = []

    def _pt(self, p):
        x = (p[0] - self.x0) * self.scale
        y = (self.y1 - p[1]) * self.scale
        return _fmt(x), _fmt(y)

    def polyline(self, pts, stroke: str = "#000000", width: float = 1.0,
                 fill: str = "none", closed: bool = False, opacity: float = 1.0):
        coords = " ".join(",".join(self._pt(p)) for p in np.asarray(pts, float))
        tag = "polygon" if closed else "polyline"
        self._parts.append(
            f'<{tag} points="{coords}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}" opacity="{_fmt(opacity)}"/>')

    def rect(self, x, y, side, stroke: str = "#888888", width: float = 0.5,
             fill: str = "none", opacity: float = 1.0):
        px, py = self._pt((x, y + side))
        s = _fmt(side * self.scale)
        self._parts.append(
            f'<rect x="{px}" y="{py}" width="{s}" height="{s}" fill="{fill}" '
            f'stroke="{stroke}" stroke-width="{_fmt(width)}" '
            f'opacity="{_fmt(opacity)}"/>')

    def circle(self, center, r, stroke: str = "none", fill: str = "#d62728",
               opacity: float = 1.0):
        cx, cy = self._pt(center)
        self._parts.append(
            f'<circle cx="{cx}" cy="{cy}" r="{_fmt(r * self.scale)}" '
            f'fill="{fill}" stroke="{stroke}" opacity="{_fmt(opacity)}"/>')

    def text(self, pos, s, size: float = 12.0, color: str = "#000000"):
        px, py = self._pt(pos)
        self._parts.append(
            f'<text x="{px}" y="{py}" font-size="{_fmt(size)}" '
            f'font-family="monospace" fill="{color}">{s}</text>')

    def to_string(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
            '<rect width="100%" height="100%" fill="#ffffff"/>\n')
        return head + "\n".join(self._parts) + "\n</svg>\n"

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_string())


def render_domain(domain, width: int = 800) -> SvgCanvas:
    cv = SvgCanvas(domain.bbox, width=width)
    cv.polyline(domain.vertices, closed=True, stroke="#000000", width=1.5,
                fill="#dce9f5")
    return cv


def render_whitney(domain, decomp, width: int = 800) -> SvgCanvas:
    """Domain with Whitney cells colored by level."""
    cv = render_domain(domain, width=width)
    levels = decomp.levels()
    for q in sorted(decomp.cells, key=lambda q: (q.level, q.ix, q.iy)):
        color = _PALETTE[levels.index(q.level) % len(_PALETTE)]
        lo = q.lo
        cv.rect(lo[0], lo[1], q.side, stroke=color, width=0.6)
    return cv


def render_geodesic(domain, polylines, width: int = 800,
                    markers=None) -> SvgCanvas:
    cv = render_domain(domain, width=width)
    for i, pl in enumerate(polylines):
        cv.polyline(pl, stroke=_PALETTE[i % len(_PALETTE)], width=1.8)
        cv.circle(pl[0], 3.0 / cv.scale, fill="#d62728")
        cv.circle(pl[-1], 3.0 / cv.scale, fill="#2ca02c")
    for m in markers or []:
        cv.circle(m, 2.5 / cv.scale, fill="#9467bd")
    return cv


def render_porosity(domain, x, profile, width: int = 800) -> SvgCanvas:
    """Boundary point with its dyadic annuli; holes found at level k are
    drawn as the annulus circle colored by the chi verdict."""
    cv = render_domain(domain, width=width)
    x = np.asarray(x, float)
    for k, chi in enumerate(profile.chi, start=1):
        if chi is None:
            continue
        r = 2.0 ** (-k)
        color = "#2ca02c" if chi else "#d62728"
        t = np.linspace(0.0, 2.0 * np.pi, 128)
        ring = x[None, :] + r * np.stack([np.cos(t), np.sin(t)], axis=1)
        cv.polyline(ring, stroke=color, width=0.8, opacity=0.7)
    cv.circle(x, 3.0 / cv.scale, fill="#000000")
    return cv
