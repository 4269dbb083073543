"""Test domains: Koch snowflake family, cone domains, user polygons.

A `Domain` is a closed simple polygon (counterclockwise) with exact
distance-to-boundary and membership queries.  Distance queries are
accelerated with a KD-tree over points sampled densely along the edges;
the exact point-to-segment minimum is then taken over the candidate
edges, so the returned distances are exact up to float rounding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .geometry import (
    as_points,
    points_in_polygon,
    polygon_area,
    scanline_fill,
    seg_point_distance,
)


class DomainError(ValueError):
    pass


@dataclass
class Domain:
    """Closed polygonal Jordan curve, positively oriented."""

    vertices: np.ndarray
    label: str = "polygon"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.vertices, float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise DomainError("need at least 3 vertices")
        if polygon_area(v) < 0:
            v = v[::-1].copy()
        self.vertices = v
        self._edges_a = v
        self._edges_b = np.roll(v, -1, axis=0)
        self._edge_len = np.linalg.norm(self._edges_b - self._edges_a, axis=1)
        if np.any(self._edge_len == 0.0):
            raise DomainError("degenerate zero-length edge")
        self._tree = None
        self._tree_edge_idx = None
        self._tree_spacing = None

    # -- basic facts ---------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.vertices)

    @property
    def area(self) -> float:
        return abs(polygon_area(self.vertices))

    @property
    def perimeter(self) -> float:
        return float(self._edge_len.sum())

    @property
    def bbox(self):
        v = self.vertices
        return v.min(axis=0), v.max(axis=0)

    @property
    def diameter(self) -> float:
        lo, hi = self.bbox
        return float(np.linalg.norm(hi - lo))

    # -- distance machinery --------------------------------------------

    def _ensure_tree(self):
        if self._tree is not None:
            return
        # sample spacing: at most the median edge length, capped so the
        # index stays small for polygons with a few long edges
        spacing = min(float(np.median(self._edge_len)), self.diameter / 256.0)
        spacing = max(spacing, self.diameter / 200_000.0)
        pts = []
        idx = []
        for k in range(self.n_edges):
            n = max(1, int(math.ceil(self._edge_len[k] / spacing)))
            t = (np.arange(n) + 0.5) / n
            pts.append(self._edges_a[k] + t[:, None] * (self._edges_b[k] - self._edges_a[k]))
            idx.append(np.full(n, k))
        pts.append(self.vertices)
        idx.append(np.arange(self.n_edges))
        self._tree = cKDTree(np.concatenate(pts))
        self._tree_edge_idx = np.concatenate(idx)
        self._tree_spacing = spacing

    def distance_to_boundary(self, points, k: int = 8) -> np.ndarray:
        """Exact min over edges of point-to-segment distance.

        `k` nearest index samples are examined; the sample spacing bound
        guarantees the true nearest edge is among them whenever the k-th
        sample is farther than the first by more than one spacing.
        """
        self._ensure_tree()
        pts = as_points(points)
        k = min(k, self._tree.n)
        d0, j = self._tree.query(pts, k=k, workers=-1)
        if k == 1:
            d0 = d0[:, None]
            j = j[:, None]
        cand = self._tree_edge_idx[j]  # (n, k)
        a = self._edges_a[cand]
        b = self._edges_b[cand]
        d = seg_point_distance(pts[:, None, :], a, b)
        best = d.min(axis=1)
        # certify: any non-candidate edge keeps all its index samples at
        # distance >= d0[:, k-1], hence its true distance is at least
        # d0[:, k-1] - spacing/2; escalate k, then rescan every edge
        slack = 0.5 * self._tree_spacing
        unsure = np.nonzero(d0[:, -1] - slack < best)[0]
        k2 = min(256, self._tree.n)
        if len(unsure) and k2 > k:
            leftover = []
            chunk = max(1, 2_000_000 // k2)
            for s in range(0, len(unsure), chunk):
                ii = unsure[s : s + chunk]
                d0b, jb = self._tree.query(pts[ii], k=k2, workers=-1)
                cand = self._tree_edge_idx[jb]
                d = seg_point_distance(
                    pts[ii][:, None, :], self._edges_a[cand], self._edges_b[cand]
                )
                best[ii] = np.minimum(best[ii], d.min(axis=1))
                leftover.append(ii[d0b[:, -1] - slack < best[ii]])
            unsure = np.concatenate(leftover)
        if len(unsure) and k < self._tree.n:
            chunk = max(1, 5_000_000 // self.n_edges)
            for s in range(0, len(unsure), chunk):
                ii = unsure[s : s + chunk]
                dd = seg_point_distance(
                    pts[ii][:, None, :],
                    self._edges_a[None, :, :],
                    self._edges_b[None, :, :],
                )
                best[ii] = np.minimum(best[ii], dd.min(axis=1))
        return best

    def distance_one(self, point) -> float:
        return float(self.distance_to_boundary(np.asarray(point, float)[None, :])[0])

    # -- membership ----------------------------------------------------

    def contains(self, points, boundary_tol: float | None = None):
        """Even-odd membership.  Points within tolerance of the boundary
        are flagged ambiguous via the companion mask from `contains_flagged`."""
        pts = as_points(points)
        return points_in_polygon(pts, self.vertices)

    def contains_flagged(self, points):
        """Returns (inside, on_boundary) with tolerance 1e-12 * diameter."""
        pts = as_points(points)
        inside = points_in_polygon(pts, self.vertices)
        tol = 1e-12 * self.diameter
        on_b = self.distance_to_boundary(pts) <= tol
        return inside, on_b

    def contains_one(self, point) -> bool:
        return bool(self.contains(np.asarray(point, float)[None, :])[0])

    # -- boundary sampling ----------------------------------------------

    def sample_boundary(self, n: int, seed: int = 0) -> np.ndarray:
        """n arc-length-uniform points on the boundary, deterministic in
        `seed`.  If n >= vertex count, all polygon vertices are included."""
        if n < 1:
            raise DomainError("n must be >= 1")
        rng = np.random.Generator(np.random.Philox(seed))
        cum = np.concatenate([[0.0], np.cumsum(self._edge_len)])
        total = cum[-1]
        out = []
        m = n
        if n >= self.n_edges:
            out.append(self.vertices.copy())
            m = n - self.n_edges
        if m > 0:
            s = rng.uniform(0.0, total, size=m)
            e = np.searchsorted(cum, s, side="right") - 1
            e = np.clip(e, 0, self.n_edges - 1)
            t = (s - cum[e]) / self._edge_len[e]
            out.append(self._edges_a[e] + t[:, None] * (self._edges_b[e] - self._edges_a[e]))
        return np.concatenate(out)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "label": self.label,
            "params": self.params,
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Domain":
        return cls(
            vertices=np.asarray(obj["vertices"], float),
            label=obj.get("label", "polygon"),
            params=obj.get("params", {}),
        )

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json(), f)

    @classmethod
    def load(cls, path) -> "Domain":
        with open(path) as f:
            return cls.from_json(json.load(f))


def check_simple(domain: Domain, cell_factor: float = 2.0) -> bool:
    """Simplicity check by bucketed segment-pair intersection.

    Segments are hashed into a grid of cells about twice the median edge
    length; only pairs sharing a cell are tested.  Adjacent edges sharing
    a vertex are allowed to touch at that vertex only.
    """
    from .geometry import segments_intersect

    a = domain._edges_a
    b = domain._edges_b
    n = len(a)
    cell = max(float(np.median(domain._edge_len)) * cell_factor, 1e-12)
    buckets: dict = {}
    lo = np.floor(np.minimum(a, b) / cell).astype(np.int64)
    hi = np.floor(np.maximum(a, b) / cell).astype(np.int64)
    for k in range(n):
        for i in range(lo[k, 0], hi[k, 0] + 1):
            for j in range(lo[k, 1], hi[k, 1] + 1):
                buckets.setdefault((i, j), []).append(k)
    checked = set()
    for members in buckets.values():
        for ii in range(len(members)):
            for jj in range(ii + 1, len(members)):
                p, q = members[ii], members[jj]
                if (p, q) in checked:
                    continue
                checked.add((p, q))
                if q == (p + 1) % n or p == (q + 1) % n:
                    continue  # adjacent edges share one vertex
                if segments_intersect(a[p], b[p], a[q], b[q]):
                    return False
    return True


# -- builders ------------------------------------------------------------


def koch_maps(lam: float):
    """The four similitudes of the Koch curve with contraction `lam`,
    as (A, t) pairs acting x -> A @ x + t."""
    if not (1.0 / 3.0 <= lam < 0.5):
        raise DomainError("lambda must be in [1/3, 1/2)")
    h = math.sqrt(lam - 0.25)
    cos_t = (0.5 - lam) / lam
    sin_t = math.sqrt(max(0.0, 1.0 - cos_t * cos_t))
    S = lam * np.eye(2)
    R = np.array([[cos_t, -sin_t], [sin_t, cos_t]])
    Rm = np.array([[cos_t, sin_t], [-sin_t, cos_t]])
    maps = [
        (S, np.zeros(2)),
        (R @ S, np.array([lam, 0.0])),
        (Rm @ S, np.array([0.5, h])),
        (S, np.array([1.0 - lam, 0.0])),
    ]
    return maps, h


def koch_assembly_maps():
    """G1, G2, G3 placing three Koch curves around the base triangle."""
    def rot(t):
        return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])

    return [
        (np.eye(2), np.zeros(2)),
        (rot(-2 * math.pi / 3), np.array([1.0, 0.0])),
        (rot(2 * math.pi / 3), np.array([0.5, -math.sqrt(3) / 2])),
    ]


def koch_edge_polyline(lam: float, depth: int) -> np.ndarray:
    """Polyline approximating the Koch curve on [0,1]x{0} at the given
    depth: 4^depth segments, each of length lam^depth."""
    if not (1.0 / 3.0 <= lam < 0.5):
        raise DomainError("lambda must be in [1/3, 1/2)")
    h = math.sqrt(lam - 0.25)
    # break points of one generator step on [0,1]x{0}, bump above
    gen = np.array([[lam, 0.0], [0.5, h], [1.0 - lam, 0.0], [1.0, 0.0]])
    pts = np.array([[0.0, 0.0], [1.0, 0.0]])
    for _ in range(depth):
        p = pts[:-1]
        d = pts[1:] - p
        # similarity sending (1,0) -> d, applied to each generator point
        loc = np.empty((len(p), 4, 2))
        loc[:, :, 0] = p[:, None, 0] + gen[None, :, 0] * d[:, None, 0] - gen[None, :, 1] * d[:, None, 1]
        loc[:, :, 1] = p[:, None, 1] + gen[None, :, 0] * d[:, None, 1] + gen[None, :, 1] * d[:, None, 0]
        pts = np.concatenate([pts[:1], loc.reshape(-1, 2)])
    return pts


def build_koch_snowflake(lam: float, depth: int, check: bool = True) -> Domain:
    """Snowflake domain bounded by three Koch curves (bumps outward).

    depth 0 gives the base triangle (0,0), (1,0), (1/2, -sqrt(3)/2).
    """
    if depth < 0:
        raise DomainError("depth must be >= 0")
    edge = koch_edge_polyline(lam, depth)
    verts = []
    for A, t in koch_assembly_maps():
        part = edge @ A.T + t
        verts.append(part[:-1])  # drop duplicate junction vertex
    v = np.concatenate(verts)
    dom = Domain(v, label="koch", params={"lambda": lam, "depth": depth})
    if check and depth <= 6 and not check_simple(dom):
        raise DomainError("koch polygon is self-intersecting")
    return dom


def build_cone_domain(eps: float) -> Domain:
    """Square (-1,1)x(-2,0) with a cone of half-width eps*(1-y) on top,
    apex at (0,1)."""
    if not (0.0 < eps < 0.5):
        raise DomainError("eps must be in (0, 1/2)")
    v = np.array(
        [
            [-1.0, 0.0],
            [-1.0, -2.0],
            [1.0, -2.0],
            [1.0, 0.0],
            [eps, 0.0],
            [0.0, 1.0],
            [-eps, 0.0],
        ]
    )
    # orientation: listed clockwise above, Domain normalizes to CCW
    return Domain(v, label="cone", params={"eps": eps})


def build_regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0)) -> Domain:
    t = 2 * np.pi * np.arange(n) / n
    v = np.stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)], axis=1)
    return Domain(v, label=f"ngon{n}", params={"n": n, "radius": radius})


def build_unit_square() -> Domain:
    return Domain(
        np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
        label="unit_square",
    )


# -- raster distance field -------------------------------------------------


class GridSizeError(MemoryError):
    def __init__(self, nodes, suggested_h):
        super().__init__(
            f"grid of {nodes} nodes exceeds budget; try h >= {suggested_h:.3g}"
        )
        self.suggested_h = suggested_h


@dataclass
class DistanceField:
    """Raster cache of dist(., boundary) and inside labels.

    dist and inside are (ny, nx) arrays indexed [j, i]; node (i, j) is at
    origin + (i*h, j*h).
    """

    origin: np.ndarray
    step: float
    nx: int
    ny: int
    dist: np.ndarray
    inside: np.ndarray

    def node_xy(self):
        xs = self.origin[0] + self.step * np.arange(self.nx)
        ys = self.origin[1] + self.step * np.arange(self.ny)
        return xs, ys

    def interior_argmax(self):
        d = np.where(self.inside, self.dist, -np.inf)
        j, i = np.unravel_index(np.argmax(d), d.shape)
        return np.array(
            [self.origin[0] + i * self.step, self.origin[1] + j * self.step]
        ), float(d[j, i])


MAX_EXACT_NODES = 16_000_000


def rasterize(domain: Domain, bbox=None, h: float = 1 / 64.0, margin=None) -> DistanceField:
    """Distance field over bbox at step h.

    Distances are computed per node with the KD-tree-pruned exact segment
    minimum; inside labels come from an even-odd scanline fill.  The grid
    origin snaps to integer multiples of h so coordinate axes (and any
    symmetry line at a multiple of h) coincide with grid lines.
    """
    if h <= 0:
        raise DomainError("h must be positive")
    if bbox is None:
        lo, hi = domain.bbox
        m = domain.diameter / 4.0 if margin is None else margin
        lo = lo - m
        hi = hi + m
    else:
        lo, hi = np.asarray(bbox[0], float), np.asarray(bbox[1], float)
    lo = np.floor(lo / h) * h
    nx = int(math.floor((hi[0] - lo[0]) / h)) + 1
    ny = int(math.floor((hi[1] - lo[1]) / h)) + 1
    if nx * ny > MAX_EXACT_NODES:
        area = (hi[0] - lo[0]) * (hi[1] - lo[1])
        raise GridSizeError(nx * ny, math.sqrt(area / MAX_EXACT_NODES))
    xs = lo[0] + h * np.arange(nx)
    ys = lo[1] + h * np.arange(ny)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    dist = np.empty(len(pts))
    chunk = 500_000
    for s in range(0, len(pts), chunk):
        dist[s : s + chunk] = domain.distance_to_boundary(pts[s : s + chunk])
    inside = scanline_fill(domain.vertices, lo, h, nx, ny)
    return DistanceField(
        origin=np.asarray(lo, float),
        step=h,
        nx=nx,
        ny=ny,
        dist=dist.reshape(ny, nx),
        inside=inside,
    )
