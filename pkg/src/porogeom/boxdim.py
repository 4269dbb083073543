"""Box-counting dimension over dyadic scales.

Counts are exact: a dyadic cube is counted when its closed square meets
the polyline (segment clipping, no sampling), so repeated runs are
reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class FitError(ValueError):
    pass


@dataclass
class DimensionFit:
    counts: list  # [(k, N_k), ...]
    slope: float
    intercept: float
    r2: float
    k_range: tuple
    clamped: bool = False


def _boxes_hit_by_segments(a: np.ndarray, b: np.ndarray, side: float) -> set:
    """Set of (ix, iy) of closed side-`side` grid squares meeting any of
    the segments [a[i], b[i]]."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    lens = np.linalg.norm(b - a, axis=1)
    nsub = np.maximum(1, np.ceil(lens / (0.9 * side)).astype(int))
    # explode into subsegments shorter than one side
    reps = np.repeat(np.arange(len(a)), nsub)
    offs = np.concatenate([np.arange(n) for n in nsub])
    tot = np.repeat(nsub, nsub)
    t0 = offs / tot
    t1 = (offs + 1) / tot
    pa = a[reps] + t0[:, None] * (b[reps] - a[reps])
    pb = a[reps] + t1[:, None] * (b[reps] - a[reps])

    i0 = np.floor(np.minimum(pa[:, 0], pb[:, 0]) / side).astype(np.int64)
    i1 = np.floor(np.maximum(pa[:, 0], pb[:, 0]) / side).astype(np.int64)
    j0 = np.floor(np.minimum(pa[:, 1], pb[:, 1]) / side).astype(np.int64)
    j1 = np.floor(np.maximum(pa[:, 1], pb[:, 1]) / side).astype(np.int64)
    # endpoints exactly on a grid line belong to both adjacent boxes
    on_x0 = np.minimum(pa[:, 0], pb[:, 0]) / side == i0
    on_y0 = np.minimum(pa[:, 1], pb[:, 1]) / side == j0
    i0 = i0 - on_x0.astype(np.int64)
    j0 = j0 - on_y0.astype(np.int64)

    hit: set = set()
    # candidate window is at most 3x3 after the boundary-line widening
    for di in range(0, int(np.max(i1 - i0)) + 1):
        for dj in range(0, int(np.max(j1 - j0)) + 1):
            ii = i0 + di
            jj = j0 + dj
            ok = (ii <= i1) & (jj <= j1)
            if not np.any(ok):
                continue
            lo_x = ii * side
            lo_y = jj * side
            hi_x = lo_x + side
            hi_y = lo_y + side
            meets = _seg_box_meets(pa, pb, lo_x, lo_y, hi_x, hi_y) & ok
            for x, y in zip(ii[meets], jj[meets]):
                hit.add((int(x), int(y)))
    return hit


def _seg_box_meets(pa, pb, lo_x, lo_y, hi_x, hi_y) -> np.ndarray:
    """Vectorized closed-box Liang-Barsky acceptance test."""
    t0 = np.zeros(len(pa))
    t1 = np.ones(len(pa))
    ok = np.ones(len(pa), dtype=bool)
    for axis, lo, hi in ((0, lo_x, hi_x), (1, lo_y, hi_y)):
        d = pb[:, axis] - pa[:, axis]
        p = pa[:, axis]
        par = d == 0.0
        ok &= ~par | ((p >= lo) & (p <= hi))
        with np.errstate(divide="ignore", invalid="ignore"):
            ta = (lo - p) / d
            tb = (hi - p) / d
        tlo = np.minimum(ta, tb)
        thi = np.maximum(ta, tb)
        t0 = np.where(par, t0, np.maximum(t0, tlo))
        t1 = np.where(par, t1, np.minimum(t1, thi))
    return ok & (t0 <= t1)


def box_count(boundary, k: int, base_scale: float = 1.0, closed: bool = True) -> int:
    """Number of dyadic squares of side base_scale * 2**-k whose closure
    meets the boundary (a polyline array, a Domain, or a point set)."""
    if k < 0:
        raise FitError("k must be >= 0")
    side = base_scale * 2.0 ** (-k)
    pts = _boundary_points(boundary)
    if len(pts) == 0:
        raise FitError("empty boundary")
    if len(pts) == 1:
        return len(_point_boxes(pts, side))
    a = pts
    b = np.roll(pts, -1, axis=0) if closed else pts[1:]
    if not closed:
        a = pts[:-1]
    return len(_boxes_hit_by_segments(a, b, side))


def _point_boxes(pts, side):
    hit = set()
    for x, y in pts:
        i = math.floor(x / side)
        j = math.floor(y / side)
        for di in (0, -1) if x / side == i else (0,):
            for dj in (0, -1) if y / side == j else (0,):
                hit.add((i + di, j + dj))
        if x / side == i and y / side != j:
            hit.add((i - 1, j))
        if y / side == j and x / side != i:
            hit.add((i, j - 1))
    return hit


def _boundary_points(boundary) -> np.ndarray:
    if hasattr(boundary, "vertices"):
        return np.asarray(boundary.vertices, float)
    return np.atleast_2d(np.asarray(boundary, float))


def _min_edge(boundary) -> float:
    pts = _boundary_points(boundary)
    if len(pts) < 2:
        return 0.0
    d = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return float(d.min())


def box_dimension(
    boundary,
    k_min: int,
    k_max: int,
    base_scale: float = 1.0,
    closed: bool = True,
) -> DimensionFit:
    """Least-squares slope of log2 N_k against k.

    k_max is clamped so that the finest counted scale stays above twice
    the polygon edge length; below that the polygonal stand-in is smooth
    and the slope collapses to 1.
    """
    if k_max - k_min < 3:
        raise FitError("need k_max - k_min >= 3")
    clamped = False
    e = _min_edge(boundary)
    if e > 0:
        k_lim = int(math.floor(-math.log2(2.0 * e / base_scale)))
        if k_max > k_lim >= k_min + 3:
            k_max = k_lim
            clamped = True
    ks = np.arange(k_min, k_max + 1)
    ns = np.array([box_count(boundary, int(k), base_scale, closed) for k in ks])
    if np.all(ns == ns[0]):
        raise FitError("degenerate fit: all box counts equal")
    y = np.log2(ns.astype(float))
    slope, intercept = np.polyfit(ks, y, 1)
    resid = y - (slope * ks + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return DimensionFit(
        counts=[(int(k), int(n)) for k, n in zip(ks, ns)],
        slope=float(slope),
        intercept=float(intercept),
        r2=r2,
        k_range=(int(ks[0]), int(ks[-1])),
        clamped=clamped,
    )


def koch_dimension_closed_form(lam: float):
    """Similarity dimension -log4/log(lam) of the Koch curve, together
    with its linear lower bound 2 - (4/log 2)(1/2 - lam)."""
    if not (1.0 / 3.0 <= lam < 0.5):
        raise FitError("lambda must be in [1/3, 1/2)")
    dim = -math.log(4.0) / math.log(lam)
    bound = 2.0 - (4.0 / math.log(2.0)) * (0.5 - lam)
    if dim < bound:
        raise AssertionError("similarity dimension fell below its linear bound")
    return dim, bound
