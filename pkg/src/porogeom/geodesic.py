"""Weighted geodesics in the complement, curve-condition constants and
John constants.

Curve-condition machinery follows the extension-domain characterization:
z1, z2 in the complement of the (open) domain are joined by curves that
stay in the complement, and the functional integrates dist(., boundary)
to the power 1-p along them.  Graph work happens on the regular grid of
a `DistanceField`: node weight w = max(dist, h/2)**(1-p), edge weight =
euclidean length times the mean of the endpoint weights.

John constants concern curves inside the domain and use the interior
nodes of the same fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .domain import rasterize
from .geometry import polyline_length


class GeodesicError(ValueError):
    pass


@dataclass
class ComplementGraph:
    """Sparse 8-neighbor graph over the complement (or interior) nodes
    of a distance field."""

    field: object
    p: float
    node_of: np.ndarray  # (ny, nx) int32, -1 where the graph has no node
    nodes: np.ndarray  # (n, 2) int (i, j) grid indices
    matrix: sp.csr_matrix
    floor_hit: int  # nodes whose weight was clamped at dist = h/2
    side: str = "complement"
    domain: object = None

    @property
    def h(self) -> float:
        return self.field.step

    def node_xy(self, ids) -> np.ndarray:
        ij = self.nodes[np.asarray(ids)]
        f = self.field
        return f.origin + f.step * ij.astype(float)

    def _clear(self, z, node_xy) -> bool:
        if self.domain is None:
            return True
        return _segment_clear(self.domain, np.asarray(z, float), node_xy,
                              self.side)

    def nearest_node(self, z) -> int:
        """Nearest graph node whose connecting segment from z stays on
        the graph's side of the boundary (visibility snapping)."""
        z = np.asarray(z, float)
        f = self.field
        gi = (z - f.origin) / f.step
        ci = int(round(gi[0]))
        cj = int(round(gi[1]))
        r_max = max(f.nx, f.ny)
        for r in range(1, r_max):
            i0, i1 = max(0, ci - r), min(f.nx - 1, ci + r)
            j0, j1 = max(0, cj - r), min(f.ny - 1, cj + r)
            block = self.node_of[j0 : j1 + 1, i0 : i1 + 1]
            jj, ii = np.nonzero(block >= 0)
            if not len(ii):
                continue
            xs = f.origin[0] + f.step * (ii + i0)
            ys = f.origin[1] + f.step * (jj + j0)
            d = np.hypot(xs - z[0], ys - z[1])
            order = np.argsort(d, kind="stable")
            for m in order:
                if d[m] > r * f.step and r < r_max - 1:
                    break  # a closer node may exist in the next ring
                if self._clear(z, np.array([xs[m], ys[m]])):
                    return int(self.node_of[jj[m] + j0, ii[m] + i0])
        raise GeodesicError("no graph node visible from the requested point")


def _segment_clear(domain, z, node_xy, side: str, n_check: int = 9) -> bool:
    """Whether the half-open segment (z, node] stays on the stated side
    of the boundary; z itself may sit on the boundary."""
    ts = np.linspace(0.0, 1.0, n_check + 1)[1:]
    pts = z[None, :] + ts[:, None] * (node_xy - z)[None, :]
    inside = domain.contains(pts)
    return bool(np.all(~inside if side == "complement" else inside))


def node_weights(dist: np.ndarray, h: float, p: float) -> np.ndarray:
    """w = max(dist, h/2)**(1-p); the floor keeps the metric finite next
    to the boundary without drowning the singularity (error O(h))."""
    return np.maximum(dist, 0.5 * h) ** (1.0 - p)


def _graph_from_mask(dist_field, mask, p, side, domain=None) -> ComplementGraph:
    f = dist_field
    node_of = np.full((f.ny, f.nx), -1, dtype=np.int32)
    jj, ii = np.nonzero(mask)
    if not len(ii):
        raise GeodesicError("no graph nodes at this resolution")
    node_of[jj, ii] = np.arange(len(ii), dtype=np.int32)
    nodes = np.stack([ii, jj], axis=1)
    h = f.step
    w = node_weights(f.dist[jj, ii], h, p)
    floor_hit = int(np.sum(f.dist[jj, ii] < 0.5 * h))

    rows, cols, vals = [], [], []
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        # undirected graph: emit each edge once (2 axis + 2 diagonal dirs)
        ni = ii + di
        nj = jj + dj
        ok = (ni >= 0) & (ni < f.nx) & (nj >= 0) & (nj < f.ny)
        src = node_of[jj[ok], ii[ok]]
        dst = node_of[nj[ok], ni[ok]]
        ok2 = dst >= 0
        src, dst = src[ok2], dst[ok2]
        e = h * math.hypot(di, dj)
        vals.append(e * 0.5 * (w[src] + w[dst]))
        rows.append(src)
        cols.append(dst)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    n = len(nodes)
    m = sp.coo_matrix((vals, (rows, cols)), shape=(n, n))
    m = (m + m.T).tocsr()
    return ComplementGraph(field=f, p=p, node_of=node_of, nodes=nodes,
                           matrix=m, floor_hit=floor_hit, side=side,
                           domain=domain)


def build_complement_graph(domain, bbox=None, h: float = 1 / 128.0,
                           p: float = 1.5, margin=None,
                           dist_field=None) -> ComplementGraph:
    """Weighted graph over the grid nodes outside the closed domain."""
    if not (1.0 < p < 2.0):
        raise GeodesicError("p must be in (1, 2)")
    f = dist_field if dist_field is not None else rasterize(
        domain, bbox=bbox, h=h, margin=margin)
    mask = (~f.inside) & (f.dist > 0.0)
    return _graph_from_mask(f, mask, p, "complement", domain)


def build_interior_graph(domain, bbox=None, h: float = 1 / 128.0,
                         p: float = 1.5, margin=None,
                         dist_field=None) -> ComplementGraph:
    """Same construction over the interior nodes (used by oracles)."""
    if not (1.0 < p < 2.0):
        raise GeodesicError("p must be in (1, 2)")
    f = dist_field if dist_field is not None else rasterize(
        domain, bbox=bbox, h=h, margin=margin)
    return _graph_from_mask(f, f.inside, p, "interior", domain)


@dataclass
class GeodesicResult:
    polyline: np.ndarray  # (m, 2) including the exact endpoints
    node_path: np.ndarray  # graph node ids
    graph_value: float  # sum of traversed edge weights
    functional: float  # exact quadrature of dist**(1-p) on the polyline
    length: float  # euclidean length of the polyline
    endpoints: tuple
    per_cell_length: dict = field(default_factory=dict)


def _assemble(graph, z1, z2, s, t, d, pred, exact_functional=True):
    path = [t]
    while path[-1] != s:
        q = int(pred[path[-1]])
        if q < 0:
            raise GeodesicError("endpoints lie in different graph components")
        path.append(q)
    path.reverse()
    path = np.array(path, dtype=np.int64)
    pts = graph.node_xy(path)
    z1 = np.asarray(z1, float)
    z2 = np.asarray(z2, float)
    chunks = []
    if np.linalg.norm(pts[0] - z1) > 0:
        chunks.append(z1[None, :])
    chunks.append(pts)
    if np.linalg.norm(pts[-1] - z2) > 0:
        chunks.append(z2[None, :])
    polyline = np.vstack(chunks)
    if len(polyline) < 2:
        polyline = np.vstack([polyline, polyline])
    if exact_functional and graph.domain is not None:
        F = curve_functional(graph.domain, polyline, graph.p)
    else:
        F = float(d[t])
    return GeodesicResult(
        polyline=polyline, node_path=path, graph_value=float(d[t]),
        functional=F, length=polyline_length(polyline),
        endpoints=(tuple(map(float, z1)), tuple(map(float, z2))),
    )


def weighted_geodesic(graph: ComplementGraph, z1, z2,
                      exact_functional: bool = True) -> GeodesicResult:
    """Minimal dist**(1-p)-weighted grid path between the nodes nearest
    to z1 and z2.  The exact endpoints are prepended/appended so the
    polyline really joins z1 to z2."""
    s = graph.nearest_node(z1)
    t = graph.nearest_node(z2)
    d, pred = dijkstra(graph.matrix, indices=s, return_predecessors=True)
    return _assemble(graph, z1, z2, s, t, d, pred, exact_functional)


def geodesics_from_sources(graph: ComplementGraph, sources, targets,
                           exact_functional: bool = True):
    """Geodesics for every (source, target) pair sharing Dijkstra runs
    across sources.  Returns a dict {(si, ti): GeodesicResult}."""
    out = {}
    src_ids = [graph.nearest_node(z) for z in sources]
    tgt_ids = [graph.nearest_node(z) for z in targets]
    for si, (z1, s) in enumerate(zip(sources, src_ids)):
        d, pred = dijkstra(graph.matrix, indices=s, return_predecessors=True)
        for ti, (z2, t) in enumerate(zip(targets, tgt_ids)):
            out[(si, ti)] = _assemble(graph, z1, z2, s, t, d, pred,
                                      exact_functional)
    return out


# -- curve functional ----------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def curve_functional(domain, polyline, p: float, depth: int = 36) -> float:
    """Integral of dist(z, boundary)**(1-p) along the polyline.

    Short segments far from the boundary get one batched Gauss-Legendre
    panel; the rest are integrated on a mesh graded geometrically toward
    any endpoint that touches the boundary, which resolves the integrable
    t**(1-p) singularity, with the leftover tail summed by the local
    linear model a*t for the distance.
    """
    if p >= 2.0:
        raise GeodesicError("the functional needs p < 2")
    pts = np.asarray(polyline, float)
    if len(pts) < 2:
        raise GeodesicError("polyline needs at least two points")
    a = pts[:-1]
    b = pts[1:]
    lens = np.linalg.norm(b - a, axis=1)
    dv = domain.distance_to_boundary(pts)
    fast = (lens > 0) & (lens <= 4.0 * np.minimum(dv[:-1], dv[1:]))
    total = 0.0
    if np.any(fast):
        af, bf, Lf = a[fast], b[fast], lens[fast]
        ts = 0.5 + 0.5 * _GL_X
        zs = af[:, None, :] + ts[None, :, None] * (bf - af)[:, None, :]
        d = domain.distance_to_boundary(zs.reshape(-1, 2))
        if np.any(d <= 0.0):
            raise GeodesicError("curve touches the boundary away from its endpoints")
        vals = (d ** (1.0 - p)).reshape(len(af), len(ts))
        total += float(np.sum(Lf * (vals @ (0.5 * _GL_W))))
    for i in np.nonzero(~fast)[0]:
        total += _segment_functional(domain, a[i], b[i], p, depth)
    return total


def _segment_functional(domain, a, b, p, depth) -> float:
    L = float(np.linalg.norm(b - a))
    if L == 0.0:
        return 0.0
    da = domain.distance_one(a)
    db = domain.distance_one(b)
    # treat an endpoint as singular when its distance is tiny next to L
    sing_a = da <= 1e-12 * max(1.0, L)
    sing_b = db <= 1e-12 * max(1.0, L)
    cuts = [0.0, 1.0]
    if sing_a and sing_b:
        cuts = [0.0, 0.5, 1.0]
    out = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        out += _graded_piece(domain, a, b, L, p, lo, hi, sing_a and lo == 0.0,
                             sing_b and hi == 1.0, depth)
    return out


def _graded_piece(domain, a, b, L, p, lo, hi, sing_lo, sing_hi, depth) -> float:
    if not (sing_lo or sing_hi):
        return _gl_panels(domain, a, b, L, p, np.linspace(lo, hi, 9))
    if sing_hi:  # mirror so the singular end sits at `lo`
        a2 = a + hi * (b - a)
        b2 = a + lo * (b - a)
        return _graded_piece(domain, a2, b2, np.linalg.norm(b2 - a2), p,
                             0.0, 1.0, True, False, depth)
    span = hi - lo
    # geometric panels [span*2^-j-1, span*2^-j] toward the singular end
    edges = [lo + span * 2.0 ** (-j) for j in range(depth + 1)]
    edges = np.array(edges[::-1] + [hi])
    val = _gl_panels(domain, a, b, L, p, edges)
    # analytic tail: dist ~ a_loc * t near the boundary endpoint
    t0 = span * 2.0**-depth
    mid = a + (lo + t0 * 0.5) * (b - a)
    a_loc = domain.distance_one(mid) / (t0 * 0.5 * L)
    if a_loc <= 0.0:
        raise GeodesicError("curve endpoint approaches the boundary tangentially")
    val += a_loc ** (1.0 - p) * (t0 * L) ** (2.0 - p) / (2.0 - p)
    return val


def _gl_panels(domain, a, b, L, p, edges) -> float:
    t_lo = edges[:-1]
    t_hi = edges[1:]
    half = 0.5 * (t_hi - t_lo)
    midp = 0.5 * (t_hi + t_lo)
    ts = (midp[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    zs = a[None, :] + ts[:, None] * (b - a)[None, :]
    d = domain.distance_to_boundary(zs)
    if np.any(d <= 0.0):
        raise GeodesicError("curve touches the boundary away from its endpoints")
    vals = d ** (1.0 - p)
    w = (half[:, None] * _GL_W[None, :]).ravel()
    return float(np.sum(vals * w) * L)


def curve_stays_outside(domain, polyline, n_check: int = 512) -> bool:
    """All interior sample points of the polyline avoid the open domain
    (the endpoints may sit on the boundary)."""
    pts = np.asarray(polyline, float)
    lens = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    L = lens.sum()
    if L == 0:
        return False
    s = np.concatenate([[0.0], np.cumsum(lens)])
    ts = np.linspace(0, L, n_check + 2)[1:-1]
    seg = np.clip(np.searchsorted(s, ts, side="right") - 1, 0, len(lens) - 1)
    frac = (ts - s[seg]) / np.where(lens[seg] == 0, 1, lens[seg])
    zs = pts[seg] + frac[:, None] * (pts[seg + 1] - pts[seg])
    return bool(np.all(~domain.contains(zs)))


@dataclass
class CurveConditionEstimate:
    C_hat: float
    p: float
    values: list  # per-pair normalized functional values
    argmax_pair: tuple
    pairs: list  # the endpoint pairs actually used
    h: float


def curve_condition_from_pairs(domain, graph: ComplementGraph, sources,
                               targets) -> CurveConditionEstimate:
    """max over pairs of F(geodesic)/|z1-z2|**(2-p), a lower bound for
    any constant in the curve condition."""
    p = graph.p
    geos = geodesics_from_sources(graph, sources, targets)
    vals = []
    pairs = []
    best = (-np.inf, (0, 0))
    for (si, ti), g in sorted(geos.items()):
        z1 = np.asarray(g.endpoints[0])
        z2 = np.asarray(g.endpoints[1])
        gap = float(np.linalg.norm(z1 - z2))
        if gap == 0.0:
            continue
        v = g.functional / gap ** (2.0 - p)
        vals.append(v)
        pairs.append((g.endpoints[0], g.endpoints[1]))
        if v > best[0]:
            best = (v, (si, ti))
    if not vals:
        raise GeodesicError("no usable pairs")
    return CurveConditionEstimate(C_hat=float(max(vals)), p=p, values=vals,
                                  argmax_pair=best[1], pairs=pairs, h=graph.h)


def curve_condition_constant(domain, p: float, n_pairs: int = 200,
                             seed: int = 0, h: float = 1 / 512.0,
                             margin=None, extra_sources=None,
                             graph: ComplementGraph | None = None
                             ) -> CurveConditionEstimate:
    """Sampled lower bound for the curve-condition constant: boundary
    points paired across shared-source Dijkstra runs in the complement."""
    if graph is None:
        graph = build_complement_graph(domain, h=h, p=p, margin=margin)
    n_tgt = max(1, int(round(math.sqrt(n_pairs / 2.0))))
    n_src = max(1, int(math.ceil(n_pairs / n_tgt)))
    sources = list(domain.sample_boundary(n_src, seed=seed))
    targets = list(domain.sample_boundary(n_tgt, seed=seed + 1))
    if extra_sources is not None:
        sources = list(extra_sources) + sources
    return curve_condition_from_pairs(domain, graph, sources, targets)


# -- shortcut property ---------------------------------------------------


def geodesic_cell_lengths(decomp, polyline):
    """H^1 length of the curve inside each closed Whitney cell it meets."""
    from shapely.geometry import LineString, box
    from shapely.strtree import STRtree

    line = LineString(np.asarray(polyline, float))
    boxes = []
    for q in decomp.cells:
        lo = q.lo
        boxes.append(box(lo[0], lo[1], lo[0] + q.side, lo[1] + q.side))
    tree = STRtree(boxes)
    out = {}
    for idx in tree.query(line):
        length = line.intersection(boxes[int(idx)]).length
        if length > 0.0:
            out[decomp.cells[int(idx)]] = float(length)
    return out


def shortcut_check(result: GeodesicResult, whitney, h: float,
                   slack_cells: float = 10.0, slack_h: float = 4.0):
    """Verify H^1(curve within closed cell) <= 10*side + 4*h for every
    Whitney cell the curve meets.  Returns the list of violations and
    fills result.per_cell_length."""
    lengths = geodesic_cell_lengths(whitney, result.polyline)
    result.per_cell_length = lengths
    bad = []
    for q, length in lengths.items():
        bound = slack_cells * q.side + slack_h * h
        if length > bound:
            bad.append((q, length, bound))
    return bad


# -- John constant -------------------------------------------------------

_OFFS16 = np.array(
    [
        (1, 0), (0, 1), (-1, 0), (0, -1),
        (1, 1), (1, -1), (-1, 1), (-1, -1),
        (2, 1), (2, -1), (-2, 1), (-2, -1),
        (1, 2), (1, -2), (-1, 2), (-1, -2),
    ],
    dtype=np.int64,
)


@dataclass
class JohnEstimate:
    J_hat: float
    center: tuple
    witness: tuple | None  # worst node (x, y) at the failing probe
    h: float
    probes: list = field(default_factory=list)


def _john_labels(dist_flat, inside_flat, nx, ny, h, center_id, J):
    """Label B(y) = best over paths center->y of
    min_v (s_v + dist(v)/J) - s_y; y admits a John curve iff
    B(y) >= -slack/J.  B only decreases along edges, so a max-heap
    Dijkstra is exact."""
    return _john_kernel(dist_flat, inside_flat, nx, ny, h, center_id, J,
                        _OFFS16[:, 0].copy(), _OFFS16[:, 1].copy())


def _john_kernel_py(dist, inside, nx, ny, h, center, J, offx, offy):
    import heapq

    n = nx * ny
    B = np.full(n, -np.inf)
    B[center] = dist[center] / J
    done = np.zeros(n, dtype=np.bool_)
    heap = [(-B[center], center)]
    elen = np.hypot(offx, offy) * h
    while heap:
        negb, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        bu = -negb
        ui = u % nx
        uj = u // nx
        for k in range(len(offx)):
            vi = ui + offx[k]
            vj = uj + offy[k]
            if vi < 0 or vi >= nx or vj < 0 or vj >= ny:
                continue
            v = vj * nx + vi
            if not inside[v] or done[v]:
                continue
            cand = min(bu - elen[k], dist[v] / J)
            if cand > B[v]:
                B[v] = cand
                heapq.heappush(heap, (-cand, v))
    return B


try:  # numba speeds this up ~50x; the pure-python kernel is the fallback
    import numba

    @numba.njit(cache=True)
    def _john_kernel_nb(dist, inside, nx, ny, h, center, J, offx, offy):  # pragma: no cover
        n = nx * ny
        B = np.full(n, -np.inf)
        B[center] = dist[center] / J
        done = np.zeros(n, dtype=np.bool_)
        noff = len(offx)
        elen = np.empty(noff)
        for k in range(noff):
            elen[k] = math.hypot(offx[k], offy[k]) * h
        # array binary max-heap of (key, node) with lazy deletion
        cap = 8 * n + 16
        hk = np.empty(cap)
        hv = np.empty(cap, dtype=np.int64)
        hk[0] = B[center]
        hv[0] = center
        m = 1
        while m > 0:
            bu = hk[0]
            u = hv[0]
            m -= 1
            hk[0] = hk[m]
            hv[0] = hv[m]
            i = 0
            while True:
                l = 2 * i + 1
                r = l + 1
                big = i
                if l < m and hk[l] > hk[big]:
                    big = l
                if r < m and hk[r] > hk[big]:
                    big = r
                if big == i:
                    break
                hk[big], hk[i] = hk[i], hk[big]
                hv[big], hv[i] = hv[i], hv[big]
                i = big
            if done[u]:
                continue
            done[u] = True
            ui = u % nx
            uj = u // nx
            for k in range(noff):
                vi = ui + offx[k]
                vj = uj + offy[k]
                if vi < 0 or vi >= nx or vj < 0 or vj >= ny:
                    continue
                v = vj * nx + vi
                if not inside[v] or done[v]:
                    continue
                cand = bu - elen[k]
                dv = dist[v] / J
                if dv < cand:
                    cand = dv
                if cand > B[v]:
                    B[v] = cand
                    if m >= cap:
                        raise RuntimeError("heap overflow")
                    hk[m] = cand
                    hv[m] = v
                    i = m
                    while i > 0:
                        par = (i - 1) // 2
                        if hk[par] < hk[i]:
                            hk[par], hk[i] = hk[i], hk[par]
                            hv[par], hv[i] = hv[i], hv[par]
                            i = par
                        else:
                            break
                    m += 1
        return B

    _john_kernel = _john_kernel_nb
except ImportError:  # pragma: no cover
    _john_kernel = _john_kernel_py


def john_feasible(dist_field, center_id_flat: int, J: float,
                  slack: float | None = None):
    """Whether every interior node admits a J-John curve to the center
    (up to a 2h discretization slack).  Returns (ok, worst_flat_id)."""
    f = dist_field
    h = f.step
    if slack is None:
        slack = 2.0 * h
    dist = np.ascontiguousarray(f.dist.ravel())
    inside = np.ascontiguousarray(f.inside.ravel())
    B = _john_labels(dist, inside, f.nx, f.ny, h, center_id_flat, J)
    ids = np.nonzero(inside)[0]
    vals = B[ids]
    # nodes the move graph never reaches sit in cusp tips narrower than
    # the grid step; the continuum interior of a simple polygon is
    # connected, so they are rasterization artifacts, not John
    # failures, and are excluded (reachability does not depend on J)
    reached = np.isfinite(vals)
    if not np.any(reached):
        raise GeodesicError("no interior nodes reachable from the center")
    ids = ids[reached]
    vals = vals[reached]
    worst = int(ids[np.argmin(vals)])
    ok = bool(np.min(vals) >= -slack / J)
    return ok, worst


def john_constant_from_field(dist_field, center=None, lo: float = 1e-3,
                             hi: float = 1.5, rel_tol: float = 5e-3
                             ) -> JohnEstimate:
    """Binary search for the largest J such that every interior node is
    reachable from the center by a curve along which the boundary
    distance dominates J times the arclength back to the node."""
    f = dist_field
    if center is None:
        center, _ = f.interior_argmax()
    c = (np.asarray(center, float) - f.origin) / f.step
    ci, cj = int(round(c[0])), int(round(c[1]))
    if not f.inside[cj, ci]:
        raise GeodesicError("center is not an interior grid node")
    cid = cj * f.nx + ci
    probes = []
    ok_lo, _ = john_feasible(f, cid, lo)
    if not ok_lo:
        raise GeodesicError("domain fails the John condition even at J=lo")
    witness = None
    ok_hi, w = john_feasible(f, cid, hi)
    probes.append((hi, ok_hi))
    if ok_hi:
        lo = hi  # hi already feasible; report it as the (clipped) estimate
    while hi - lo > rel_tol * max(lo, 1e-9):
        mid = 0.5 * (lo + hi)
        ok, w = john_feasible(f, cid, mid)
        probes.append((mid, ok))
        if ok:
            lo = mid
        else:
            hi = mid
            witness = w
    cx = f.origin[0] + f.step * ci
    cy = f.origin[1] + f.step * cj
    wit_xy = None
    if witness is not None:
        wi = witness % f.nx
        wj = witness // f.nx
        wit_xy = (float(f.origin[0] + f.step * wi), float(f.origin[1] + f.step * wj))
    return JohnEstimate(J_hat=float(lo), center=(float(cx), float(cy)),
                        witness=wit_xy, h=f.step, probes=probes)


def john_constant(domain, h: float, center=None, margin=None,
                  rel_tol: float = 5e-3) -> JohnEstimate:
    """John constant estimate for a domain at grid step h.

    Feasibility at each probe J is decided for every interior node in a
    single label-setting pass from the center (a strictly stronger check
    than testing sampled boundary points only).
    """
    f = rasterize(domain, h=h, margin=margin)
    return john_constant_from_field(f, center=center, rel_tol=rel_tol)
