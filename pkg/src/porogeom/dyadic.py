"""Dyadic cubes and Whitney decompositions.

Cubes are indexed by (level, ix, iy) with side = base_scale * 2**-level
and lower-left corner (ix*side, iy*side).  base_scale is a power of two,
so all cube coordinates are exact in binary floating point and
disjointness/adjacency are exact integer tests.

A cube is accepted into the Whitney decomposition of an open set when

    center in U  and  dist(center, dU) >= ACCEPT_FACTOR * side

and its parent fails the same test.  ACCEPT_FACTOR = 2.25 guarantees
both displayed Whitney inequalities and the side-ratio bound {1/2, 1, 2}
for closure-touching cells:

  * lower bound:  dist(Q, dU) >= (2.25 - sqrt(2)/2) * side > side
  * upper bound:  dist(Q, dU) <  (2*2.25 + sqrt(2)/2) * side < 4*sqrt(2)*side
  * ratio: a touching cell four times smaller would need its parent's
    center within 1.125*side of dU while sitting within 1.06*side of an
    accepted center, contradicting 2.25*side - 1.06*side > 1.125*side.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

ACCEPT_FACTOR = 2.25
HALF_DIAG = math.sqrt(2.0) / 2.0


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class DyadicCube:
    level: int
    ix: int
    iy: int
    base_scale: float = 1.0

    @property
    def side(self) -> float:
        return self.base_scale * 2.0 ** (-self.level)

    @property
    def lo(self) -> np.ndarray:
        s = self.side
        return np.array([self.ix * s, self.iy * s])

    @property
    def hi(self) -> np.ndarray:
        s = self.side
        return np.array([(self.ix + 1) * s, (self.iy + 1) * s])

    @property
    def center(self) -> np.ndarray:
        s = self.side
        return np.array([(self.ix + 0.5) * s, (self.iy + 0.5) * s])

    @property
    def corners(self) -> np.ndarray:
        s = self.side
        x0, y0 = self.ix * s, self.iy * s
        return np.array([[x0, y0], [x0 + s, y0], [x0 + s, y0 + s], [x0, y0 + s]])

    def parent(self) -> "DyadicCube":
        return DyadicCube(self.level - 1, self.ix >> 1, self.iy >> 1, self.base_scale)

    def children(self):
        l, x, y = self.level + 1, self.ix * 2, self.iy * 2
        return [
            DyadicCube(l, x, y, self.base_scale),
            DyadicCube(l, x + 1, y, self.base_scale),
            DyadicCube(l, x, y + 1, self.base_scale),
            DyadicCube(l, x + 1, y + 1, self.base_scale),
        ]

    def closure_touches(self, other: "DyadicCube") -> bool:
        """Exact integer test: closures intersect."""
        if self.base_scale != other.base_scale:
            raise DecompositionError("mismatched base scales")
        lf = max(self.level, other.level)
        f1 = 1 << (lf - self.level)
        f2 = 1 << (lf - other.level)
        ax0, ax1 = self.ix * f1, (self.ix + 1) * f1
        ay0, ay1 = self.iy * f1, (self.iy + 1) * f1
        bx0, bx1 = other.ix * f2, (other.ix + 1) * f2
        by0, by1 = other.iy * f2, (other.iy + 1) * f2
        return ax0 <= bx1 and bx0 <= ax1 and ay0 <= by1 and by0 <= ay1

    def open_overlaps(self, other: "DyadicCube") -> bool:
        """Exact integer test: open cubes intersect."""
        lf = max(self.level, other.level)
        f1 = 1 << (lf - self.level)
        f2 = 1 << (lf - other.level)
        ax0, ax1 = self.ix * f1, (self.ix + 1) * f1
        ay0, ay1 = self.iy * f1, (self.iy + 1) * f1
        bx0, bx1 = other.ix * f2, (other.ix + 1) * f2
        by0, by1 = other.iy * f2, (other.iy + 1) * f2
        return ax0 < bx1 and bx0 < ax1 and ay0 < by1 and by0 < ay1

    def distance_to_point(self, p) -> float:
        lo, hi = self.lo, self.hi
        dx = max(lo[0] - p[0], 0.0, p[0] - hi[0])
        dy = max(lo[1] - p[1], 0.0, p[1] - hi[1])
        return math.hypot(dx, dy)

    def max_corner_distance(self, p) -> float:
        return float(np.max(np.linalg.norm(self.corners - np.asarray(p, float), axis=1)))


# -- regions -----------------------------------------------------------


class PlaneMinusBoundary:
    """R^2 minus the boundary of a domain (both sides kept)."""

    def __init__(self, domain):
        self.domain = domain

    def distance(self, points):
        return self.domain.distance_to_boundary(points)

    def contains(self, points):
        return self.distance(points) > 0.0


class InteriorRegion:
    def __init__(self, domain):
        self.domain = domain

    def distance(self, points):
        return self.domain.distance_to_boundary(points)

    def contains(self, points):
        return self.domain.contains(points)


class ExteriorRegion:
    """R^2 minus the closed domain."""

    def __init__(self, domain):
        self.domain = domain

    def distance(self, points):
        return self.domain.distance_to_boundary(points)

    def contains(self, points):
        return (~self.domain.contains(points)) & (self.distance(points) > 0.0)


class PlaneMinusPoint:
    def __init__(self, p):
        self.p = np.asarray(p, float)

    def distance(self, points):
        return np.linalg.norm(np.atleast_2d(points) - self.p, axis=-1)

    def contains(self, points):
        return self.distance(points) > 0.0


class EmptyRegion:
    def distance(self, points):
        return np.zeros(len(np.atleast_2d(points)))

    def contains(self, points):
        return np.zeros(len(np.atleast_2d(points)), dtype=bool)


# -- decomposition -----------------------------------------------------


@dataclass
class WhitneyDecomposition:
    cells: list
    base_scale: float
    kind: str  # "of_open_set" | "of_square"
    min_level: int
    max_level: int
    truncated_count: int = 0
    truncated_area: float = 0.0
    empty_warning: bool = False
    source_region: object = None
    _by_key: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._by_key = {(c.level, c.ix, c.iy): c for c in self.cells}

    def __len__(self):
        return len(self.cells)

    def __contains__(self, cell: DyadicCube) -> bool:
        return (cell.level, cell.ix, cell.iy) in self._by_key

    def levels(self):
        return sorted({c.level for c in self.cells})

    def total_area(self) -> float:
        return float(sum(c.side**2 for c in self.cells))

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "base_scale": self.base_scale,
            "kind": self.kind,
            "cells": [
                {"level": c.level, "ix": c.ix, "iy": c.iy}
                for c in sorted(self.cells)
            ],
        }

    @classmethod
    def from_json(cls, obj) -> "WhitneyDecomposition":
        b = obj["base_scale"]
        cells = [DyadicCube(c["level"], c["ix"], c["iy"], b) for c in obj["cells"]]
        levels = [c.level for c in cells] or [0]
        return cls(
            cells=cells,
            base_scale=b,
            kind=obj.get("kind", "of_open_set"),
            min_level=min(levels),
            max_level=max(levels),
        )

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json(), f)


def whitney_accepts(region, cube: DyadicCube) -> bool:
    """The acceptance predicate for a single cube."""
    c = cube.center[None, :]
    if not bool(region.contains(c)[0]):
        return False
    return float(region.distance(c)[0]) >= ACCEPT_FACTOR * cube.side


def whitney_of_open_set(
    region,
    bbox,
    max_level: int,
    base_scale: float | None = None,
) -> WhitneyDecomposition:
    """Whitney decomposition of an open set, restricted to bbox.

    Cells finer than max_level are omitted; the truncated area (cells
    still unresolved at max_level that may meet the region) is recorded.
    """
    lo = np.asarray(bbox[0], float)
    hi = np.asarray(bbox[1], float)
    if max_level < 0:
        raise DecompositionError("max_level must be >= 0")
    extent = float(max(hi - lo))
    if base_scale is None:
        base_scale = 2.0 ** math.ceil(math.log2(max(extent, 1e-12)))
    # root cells at level 0 covering bbox
    s0 = base_scale
    ix0, ix1 = math.floor(lo[0] / s0), math.ceil(hi[0] / s0)
    iy0, iy1 = math.floor(lo[1] / s0), math.ceil(hi[1] / s0)
    idx = np.array(
        [(i, j) for i in range(ix0, ix1) for j in range(iy0, iy1)], dtype=np.int64
    )
    if len(idx) == 0:
        idx = np.array([[ix0, iy0]], dtype=np.int64)

    cells: list[DyadicCube] = []
    truncated = 0
    trunc_area = 0.0
    level = 0
    any_inside = False
    while len(idx) > 0:
        side = base_scale * 2.0 ** (-level)
        centers = (idx + 0.5) * side
        d = np.asarray(region.distance(centers), float)
        inside = np.asarray(region.contains(centers), bool)
        any_inside = any_inside or bool(inside.any())
        accept = inside & (d >= ACCEPT_FACTOR * side)
        # entirely outside the region: center not in U and the whole cube
        # is farther from dU than its half-diagonal
        drop = (~inside) & (d > HALF_DIAG * side)
        for i, j in idx[accept]:
            cells.append(DyadicCube(level, int(i), int(j), base_scale))
        rest = idx[~accept & ~drop]
        if level == max_level:
            truncated += len(rest)
            trunc_area += len(rest) * side**2
            break
        if len(rest) == 0:
            break
        # subdivide
        idx = np.repeat(rest * 2, 4, axis=0)
        idx[1::4, 0] += 1
        idx[2::4, 1] += 1
        idx[3::4, 0] += 1
        idx[3::4, 1] += 1
        level += 1

    levels = [c.level for c in cells]
    return WhitneyDecomposition(
        cells=cells,
        base_scale=base_scale,
        kind="of_open_set",
        min_level=min(levels) if levels else 0,
        max_level=max_level,
        truncated_count=truncated,
        truncated_area=trunc_area,
        empty_warning=not any_inside,
        source_region=region,
    )


def square_layer_indices(j: int) -> np.ndarray:
    """(ix, iy) pairs of the level-j cells of the exact Whitney
    decomposition of the unit square: cells whose index-distance to the
    square's boundary ring equals exactly one cell."""
    n = 1 << j
    ii = np.arange(n)
    gx, gy = np.meshgrid(ii, ii, indexing="ij")
    m = np.minimum.reduce([gx, gy, n - 1 - gx, n - 1 - gy])
    sel = m == 1
    return np.stack([gx[sel], gy[sel]], axis=1)


def whitney_of_square(j_max: int) -> WhitneyDecomposition:
    """Exact enumeration of {Q' subset Q : l(Q') = dist(Q', dQ)} for the
    unit square, down to side 2**-j_max."""
    cells: list[DyadicCube] = []
    for j in range(2, j_max + 1):
        for ix, iy in square_layer_indices(j):
            cells.append(DyadicCube(j, int(ix), int(iy), 1.0))
    levels = [c.level for c in cells]
    return WhitneyDecomposition(
        cells=cells,
        base_scale=1.0,
        kind="of_square",
        min_level=min(levels) if levels else 0,
        max_level=j_max,
    )


def layer_count(decomp: WhitneyDecomposition, j: int) -> int:
    if decomp.kind != "of_square":
        raise DecompositionError("layer_count requires an of_square decomposition")
    if j < 2 or j > decomp.max_level:
        raise DecompositionError(f"j={j} out of range [2, {decomp.max_level}]")
    return sum(1 for c in decomp.cells if c.level == j)


def neighbors(decomp: WhitneyDecomposition, cell: DyadicCube) -> list[DyadicCube]:
    """All cells of the decomposition whose closures touch the closure of
    `cell` (excluding the cell itself)."""
    if cell not in decomp:
        raise DecompositionError("cell is not a member of the decomposition")
    out = []
    for lv in decomp.levels():
        if lv >= cell.level:
            shift = lv - cell.level
            x0 = (cell.ix << shift) - 1
            x1 = ((cell.ix + 1) << shift) + 1
            y0 = (cell.iy << shift) - 1
            y1 = ((cell.iy + 1) << shift) + 1
            # candidates on the boundary ring of the index window
            for x in range(x0, x1):
                for y in (y0, y1 - 1):
                    c = decomp._by_key.get((lv, x, y))
                    if c is not None and c != cell and cell.closure_touches(c):
                        out.append(c)
            for y in range(y0 + 1, y1 - 1):
                for x in (x0, x1 - 1):
                    c = decomp._by_key.get((lv, x, y))
                    if c is not None and c != cell and cell.closure_touches(c):
                        out.append(c)
        else:
            shift = cell.level - lv
            xa = (cell.ix - 1) >> shift
            xb = (cell.ix + 1) >> shift
            ya = (cell.iy - 1) >> shift
            yb = (cell.iy + 1) >> shift
            for x in range(xa, xb + 1):
                for y in range(ya, yb + 1):
                    c = decomp._by_key.get((lv, x, y))
                    if c is not None and c != cell and cell.closure_touches(c):
                        out.append(c)
    return sorted(set(out))


def touching_pairs(decomp: WhitneyDecomposition):
    """Iterate all unordered closure-touching cell pairs (exact integer
    tests; each pair yielded once)."""
    levels = decomp.levels()
    keys = decomp._by_key
    for (lv, ix, iy), c in keys.items():
        # same-level right/up neighbors, and all coarser-level neighbors
        for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1)):
            o = keys.get((lv, ix + dx, iy + dy))
            if o is not None:
                yield c, o
        for lc in levels:
            if lc >= lv:
                continue
            shift = lv - lc
            xa, xb = (ix - 1) >> shift, (ix + 1) >> shift
            ya, yb = (iy - 1) >> shift, (iy + 1) >> shift
            seen = set()
            for x in (xa, xb):
                for y in (ya, yb):
                    if (x, y) in seen:
                        continue
                    seen.add((x, y))
                    o = keys.get((lc, x, y))
                    if o is not None and c.closure_touches(o):
                        yield c, o


def cube_boundary_distance(domain, cube: DyadicCube) -> float:
    """Exact dist(Q, dOmega): minimum over boundary segments of the
    segment-to-square distance."""
    from .geometry import seg_point_distance, segment_box_intersects

    lo, hi = cube.lo, cube.hi
    # prune candidate edges with the KD-tree: any edge achieving the
    # minimum has a sample point within (corner distance + spacing)
    domain._ensure_tree()
    c = cube.center
    r0 = float(domain.distance_to_boundary(c[None, :])[0])
    rad = r0 + cube.side * HALF_DIAG + domain._tree_spacing
    jj = domain._tree.query_ball_point(c, rad)
    cand = np.unique(domain._tree_edge_idx[jj])
    if len(cand) == 0:
        return r0 - cube.side * HALF_DIAG
    best = math.inf
    corners = cube.corners
    for e in cand:
        a, b = domain._edges_a[e], domain._edges_b[e]
        if segment_box_intersects(a, b, lo, hi):
            return 0.0
        # distance between segment [a,b] and the square: min over the
        # 4 square edges of segment-segment distance
        d = min(
            _seg_seg_distance(a, b, corners[k], corners[(k + 1) % 4]) for k in range(4)
        )
        best = min(best, d)
    return best


def _seg_seg_distance(a1, b1, a2, b2) -> float:
    from .geometry import seg_point_distance, segments_intersect

    if segments_intersect(a1, b1, a2, b2):
        return 0.0
    return float(
        min(
            seg_point_distance(a1[None], a2[None], b2[None])[0],
            seg_point_distance(b1[None], a2[None], b2[None])[0],
            seg_point_distance(a2[None], a1[None], b1[None])[0],
            seg_point_distance(b2[None], a1[None], b1[None])[0],
        )
    )
