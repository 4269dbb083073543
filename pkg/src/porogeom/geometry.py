"""Low-level planar geometry primitives.

Everything here is vectorized numpy working on float64 coordinates.
Points are arrays of shape (..., 2); segment sets are pairs of arrays
(a, b) with shape (m, 2) each.
"""

from __future__ import annotations

import numpy as np


def as_points(x) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim == 1:
        p = p[None, :]
    return p


def seg_point_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each point p[i] to the segment [a[i], b[i]] (broadcasts)."""
    p = np.asarray(p, float)
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    d = b - a
    denom = np.einsum("...i,...i->...", d, d)
    t = np.einsum("...i,...i->...", p - a, d) / np.where(denom == 0.0, 1.0, denom)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[..., None] * d
    return np.linalg.norm(p - proj, axis=-1)


def seg_point_closest(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Closest point on segment [a, b] to p (broadcasts like seg_point_distance)."""
    p = np.asarray(p, float)
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    d = b - a
    denom = np.einsum("...i,...i->...", d, d)
    t = np.einsum("...i,...i->...", p - a, d) / np.where(denom == 0.0, 1.0, denom)
    t = np.clip(t, 0.0, 1.0)
    return a + t[..., None] * d


def segments_intersect(a1, b1, a2, b2, eps: float = 0.0) -> np.ndarray:
    """Proper-or-touching intersection test for segment pairs (vectorized).

    Returns a boolean array.  Collinear overlaps count as intersections.
    """
    a1, b1, a2, b2 = (np.asarray(x, float) for x in (a1, b1, a2, b2))

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (
            q[..., 1] - p[..., 1]
        ) * (r[..., 0] - p[..., 0])

    d1 = orient(a2, b2, a1)
    d2 = orient(a2, b2, b1)
    d3 = orient(a1, b1, a2)
    d4 = orient(a1, b1, b2)
    proper = ((d1 > eps) & (d2 < -eps) | (d1 < -eps) & (d2 > eps)) & (
        (d3 > eps) & (d4 < -eps) | (d3 < -eps) & (d4 > eps)
    )

    def on_seg(p, q, r):
        # r collinear with [p,q]; check bounding box
        return (
            (np.minimum(p[..., 0], q[..., 0]) - eps <= r[..., 0])
            & (r[..., 0] <= np.maximum(p[..., 0], q[..., 0]) + eps)
            & (np.minimum(p[..., 1], q[..., 1]) - eps <= r[..., 1])
            & (r[..., 1] <= np.maximum(p[..., 1], q[..., 1]) + eps)
        )

    touch = (
        ((np.abs(d1) <= eps) & on_seg(a2, b2, a1))
        | ((np.abs(d2) <= eps) & on_seg(a2, b2, b1))
        | ((np.abs(d3) <= eps) & on_seg(a1, b1, a2))
        | ((np.abs(d4) <= eps) & on_seg(a1, b1, b2))
    )
    return proper | touch


def polygon_area(vertices: np.ndarray) -> float:
    """Signed shoelace area (positive for counterclockwise orientation)."""
    v = np.asarray(vertices, float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def points_in_polygon(points: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Even-odd ray-crossing membership test, vectorized over points.

    Cost is O(n_points * n_edges); fine for moderate batches.  Grid fills
    should go through `scanline_fill` instead.
    """
    pts = as_points(points)
    v = np.asarray(vertices, float)
    a = v
    b = np.roll(v, -1, axis=0)
    x = pts[:, 0][:, None]
    y = pts[:, 1][:, None]
    ya, yb = a[None, :, 1], b[None, :, 1]
    xa, xb = a[None, :, 0], b[None, :, 0]
    cond = (ya <= y) != (yb <= y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = xa + (y - ya) * (xb - xa) / (yb - ya)
    crossings = np.sum(cond & (xi > x), axis=1)
    return (crossings % 2).astype(bool)


def winding_number(points: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Winding number of the closed polygon around each point.

    Independent of `points_in_polygon`; used as a membership oracle in
    tests.
    """
    pts = as_points(points)
    v = np.asarray(vertices, float)
    a = v[None, :, :] - pts[:, None, :]
    b = np.roll(v, -1, axis=0)[None, :, :] - pts[:, None, :]
    cross = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    dot = np.einsum("...i,...i->...", a, b)
    ang = np.arctan2(cross, dot)
    return np.round(np.sum(ang, axis=1) / (2 * np.pi)).astype(int)


def scanline_fill(vertices: np.ndarray, origin, step: float, nx: int, ny: int) -> np.ndarray:
    """Even-odd polygon fill on a regular grid.

    Grid node (i, j) sits at origin + (i*step, j*step); returns a boolean
    array of shape (ny, nx) indexed [j, i].  Cost O(edges + crossings).
    """
    v = np.asarray(vertices, float)
    ox, oy = float(origin[0]), float(origin[1])
    a = v
    b = np.roll(v, -1, axis=0)
    inside = np.zeros((ny, nx), dtype=bool)

    ya = (a[:, 1] - oy) / step
    yb = (b[:, 1] - oy) / step
    lo = np.ceil(np.minimum(ya, yb))
    hi = np.floor(np.maximum(ya, yb))
    # half-open rule: edge covers rows j with min <= j < max
    for k in range(len(a)):
        if ya[k] == yb[k]:
            continue
        j0 = int(max(0, np.ceil(min(ya[k], yb[k]))))
        j1 = int(min(ny - 1, np.floor(max(ya[k], yb[k]))))
        if j1 < j0:
            continue
        js = np.arange(j0, j1 + 1)
        yy = oy + js * step
        # half-open: count only if min(ya) <= j < max(ya)
        keep = (yy >= min(a[k, 1], b[k, 1])) & (yy < max(a[k, 1], b[k, 1]))
        js = js[keep]
        if len(js) == 0:
            continue
        yy = oy + js * step
        t = (yy - a[k, 1]) / (b[k, 1] - a[k, 1])
        xi = a[k, 0] + t * (b[k, 0] - a[k, 0])
        ii = np.ceil((xi - ox) / step).astype(int)  # first node strictly right of xi
        ii = np.clip(ii, 0, nx)
        for j, i in zip(js, ii):
            inside[j, i:] ^= True
    return inside


def segment_box_intersects(a, b, lo, hi) -> bool:
    """True if segment [a,b] meets the closed axis box [lo, hi]."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    # Liang-Barsky clip
    d = b - a
    t0, t1 = 0.0, 1.0
    for i in range(2):
        if d[i] == 0.0:
            if a[i] < lo[i] or a[i] > hi[i]:
                return False
        else:
            ta = (lo[i] - a[i]) / d[i]
            tb = (hi[i] - a[i]) / d[i]
            if ta > tb:
                ta, tb = tb, ta
            t0 = max(t0, ta)
            t1 = min(t1, tb)
            if t0 > t1:
                return False
    return True


def clip_segment_box(a, b, lo, hi):
    """Clip segment [a,b] to the closed box; returns (p, q) or None."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    d = b - a
    t0, t1 = 0.0, 1.0
    for i in range(2):
        if d[i] == 0.0:
            if a[i] < lo[i] or a[i] > hi[i]:
                return None
        else:
            ta = (lo[i] - a[i]) / d[i]
            tb = (hi[i] - a[i]) / d[i]
            if ta > tb:
                ta, tb = tb, ta
            t0 = max(t0, ta)
            t1 = min(t1, tb)
            if t0 > t1:
                return None
    return a + t0 * d, a + t1 * d


def polyline_length(points: np.ndarray) -> float:
    p = np.asarray(points, float)
    if len(p) < 2:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(p, axis=0), axis=1)))
