"""Explicit curve constructions for the cone and Koch snowflake domains.

These polylines realize the hand-built curves from the worked examples:
the cone w-curve over the apex, the interior John curves of the
snowflake through the chain of bisector points, and the exterior
curve-condition curves routed through the mirror segment between
adjacent snowflake pieces.  They serve as admissible competitors for the
grid geodesics (upper-bound oracles).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import koch_assembly_maps, koch_maps


class CurveError(ValueError):
    pass


IfsAddress = tuple  # (a0, a1, ..., ak) with a0 in {1,2,3}, aj in {1,2,3,4}


# -- cone ----------------------------------------------------------------


def cone_explicit_curve(eps: float, z1, z2) -> np.ndarray:
    """The w-curve over the cone apex: [z1,w1], [w1,w2], [w2,z2] with
    w1 = (z1x + z1y - 1, 1) and w2 = (z2x - z2y + 1, 1).

    Requires -1 <= z1x <= 0 <= z2x <= 1 and 0 <= z1y, z2y <= 1 (the
    configuration the proof reduces to).  The middle segment is split at
    the apex (0, 1) when it crosses it, so quadrature sees the boundary
    touch as a segment endpoint.
    """
    z1 = np.asarray(z1, float)
    z2 = np.asarray(z2, float)
    if np.allclose(z1, z2):
        return np.array([z1, z1])
    if not (-1.0 <= z1[0] <= 0.0 <= z2[0] <= 1.0):
        raise CurveError("z1 must lie left and z2 right of the cone")
    if not (0.0 <= z1[1] <= 1.0 and 0.0 <= z2[1] <= 1.0):
        raise CurveError("z1, z2 must lie at cone heights [0, 1]")
    w1 = np.array([z1[0] + z1[1] - 1.0, 1.0])
    w2 = np.array([z2[0] - z2[1] + 1.0, 1.0])
    pts = [z1, w1]
    if w1[0] < 0.0 < w2[0]:
        pts.append(np.array([0.0, 1.0]))
    pts.append(w2)
    pts.append(z2)
    out = [pts[0]]
    for q in pts[1:]:
        if np.linalg.norm(q - out[-1]) > 0:
            out.append(q)
    return np.array(out)


# -- Koch snowflake addresses -------------------------------------------


def _as_affine(lam):
    """The four generator maps and three assembly maps as (A, b) pairs."""
    Fs, _ = koch_maps(lam)
    Gs = koch_assembly_maps()
    return Fs, Gs


def compose_address(lam: float, address: IfsAddress):
    """Affine map F_{a0...ak} = G_{a0} o F_{a1} o ... o F_{ak}."""
    address = tuple(int(a) for a in address)
    if len(address) < 1 or address[0] not in (1, 2, 3):
        raise CurveError("address must start with an assembly index in {1,2,3}")
    if any(a not in (1, 2, 3, 4) for a in address[1:]):
        raise CurveError("generator letters must be in {1,2,3,4}")
    Fs, Gs = _as_affine(lam)
    A, b = Gs[address[0] - 1]
    for a in address[1:]:
        A2, b2 = Fs[a - 1]
        A, b = A @ A2, A @ b2 + b
    return A, b


def apply_affine(Ab, pts):
    A, b = Ab
    pts = np.asarray(pts, float)
    return pts @ A.T + b


def triangle_of_address(lam: float, address: IfsAddress) -> np.ndarray:
    """Vertices (base A, top T, base B) of the triangle spanned by the
    second and third generator sub-edges at this address."""
    h = math.sqrt(lam - 0.25)
    Ab = compose_address(lam, address)
    return apply_affine(Ab, np.array([[lam, 0.0], [0.5, h], [1.0 - lam, 0.0]]))


def top_vertex(lam: float, address: IfsAddress) -> np.ndarray:
    h = math.sqrt(lam - 0.25)
    return apply_affine(compose_address(lam, address), np.array([0.5, h]))


def bisector_point(lam: float, address: IfsAddress) -> np.ndarray:
    """P on the bisecting line of the address triangle through its top
    vertex T, with |T - P| = lam**(k+1) / (2h)."""
    h = math.sqrt(lam - 0.25)
    Ab = compose_address(lam, address)
    T = apply_affine(Ab, np.array([0.5, h]))
    M = apply_affine(Ab, np.array([0.5, 0.0]))  # base midpoint
    u = M - T
    u = u / np.linalg.norm(u)
    k = len(address) - 1
    return T + (lam ** (k + 1) / (2.0 * h)) * u


def _point_in_triangle(pt, tri, tol: float = 1e-12) -> bool:
    a, b, c = (np.asarray(v, float) for v in tri)
    pt = np.asarray(pt, float)

    def _crs(u, v):
        return u[0] * v[1] - u[1] * v[0]

    s = np.sign(_crs(b - a, c - a))
    for p, q in ((a, b), (b, c), (c, a)):
        if s * _crs(q - p, pt - p) < -tol:
            return False
    return True


def barycenter(lam: float) -> np.ndarray:
    """John center of the snowflake: barycenter of the base triangle."""
    return np.array([0.5, -math.sqrt(3.0) / 6.0])


def _edge_of_address(lam: float, address: IfsAddress) -> np.ndarray:
    return apply_affine(compose_address(lam, address),
                        np.array([[0.0, 0.0], [1.0, 0.0]]))


def _seg_dist(x, seg) -> float:
    a, b = seg
    d = b - a
    t = float(np.clip(np.dot(x - a, d) / np.dot(d, d), 0.0, 1.0))
    return float(np.linalg.norm(a + t * d - x))


def address_for_point(lam: float, x, max_depth: int = 24) -> IfsAddress:
    """Deepest address whose triangle contains x.

    Triangles of successive depths are not nested (children line the
    whole sub-edge), so the walk descends along the nearest sub-edge and
    remembers the deepest containing triangle seen.
    """
    x = np.asarray(x, float)
    addr = (min((1, 2, 3),
                key=lambda a0: _seg_dist(x, _edge_of_address(lam, (a0,)))),)
    best = addr if _point_in_triangle(x, triangle_of_address(lam, addr)) else None
    for _ in range(max_depth):
        addr = addr + (min((1, 2, 3, 4),
                           key=lambda a: _seg_dist(x, _edge_of_address(lam, addr + (a,)))),)
        if _point_in_triangle(x, triangle_of_address(lam, addr)):
            best = addr
    if best is None:
        raise CurveError("point lies in no bump triangle up to max_depth")
    return best


def koch_john_curve(lam: float, address: IfsAddress, x1, x0=None) -> np.ndarray:
    """The explicit John curve [x1, P_{a0...ak}, P_{a0...a_{k-1}}, ...,
    P_{a0}, x0] from a point of the address triangle to the center."""
    x1 = np.asarray(x1, float)
    if not _point_in_triangle(x1, triangle_of_address(lam, address), tol=1e-9):
        raise CurveError("x1 does not lie in the triangle of its address")
    if x0 is None:
        x0 = barycenter(lam)
    pts = [x1]
    for j in range(len(address), 0, -1):
        pts.append(bisector_point(lam, tuple(address[:j])))
    pts.append(np.asarray(x0, float))
    out = [pts[0]]
    for q in pts[1:]:
        if np.linalg.norm(q - out[-1]) > 0:
            out.append(q)
    return np.array(out)


# -- Koch exterior case curves ------------------------------------------


@dataclass
class _Junction:
    point: np.ndarray  # junction of the two pieces
    direction: np.ndarray  # unit exterior-bisector direction
    reach: float  # usable length along the bisector ray


def _case1_junction(lam: float) -> _Junction:
    """Mirror segment I at o = K_11 ^ K_12 (pieces on the first edge).

    The chords of K_11 and K_12 leave o at angles pi and theta, so the
    reflection swapping the two pieces fixes the line at (pi+theta)/2 --
    the bisector of the exterior wedge, which runs up-left over K_11
    into open exterior.
    """
    theta = math.acos((0.5 - lam) / lam)
    ang = (math.pi + theta) / 2.0
    o = np.array([lam, 0.0])
    u = np.array([math.cos(ang), math.sin(ang)])
    return _Junction(point=o, direction=u, reach=0.8)


def _apex_junction(lam: float) -> _Junction:
    """Vertical bisector above the big-bump apex p = K_12 ^ K_13."""
    h = math.sqrt(lam - 0.25)
    return _Junction(point=np.array([0.5, h]),
                     direction=np.array([0.0, 1.0]), reach=0.5)


def _invert_affine(Ab, pt):
    A, b = Ab
    return np.linalg.solve(A, np.asarray(pt, float) - b)


def _unit_address(lam: float, u, depth: int) -> list:
    """IFS letters of a point of the depth-`depth` prefractal on [0,1].

    Each step picks the generator piece whose inverse image stays
    nearest to a coarse reference polyline (robust at shared endpoints).
    """
    from .domain import koch_edge_polyline
    from .geometry import seg_point_distance

    Fs, _ = _as_affine(lam)
    ref = koch_edge_polyline(lam, 3)
    ra, rb = ref[:-1], ref[1:]

    def _dist_to_ref(q):
        return float(np.min(seg_point_distance(q[None, None, :], ra[None], rb[None])))

    word = []
    u = np.asarray(u, float)
    for _ in range(depth):
        cands = [_invert_affine(Fs[a], u) for a in range(4)]
        a = min(range(4), key=lambda a: _dist_to_ref(cands[a]))
        word.append(a + 1)
        u = cands[a]
    return word


def _escape_chain(lam: float, z, frame_Ab, depth: int, stop_len: int) -> list:
    """Exterior John-type chain from a boundary point z of the piece
    `frame_Ab(unit prefractal)` to the viewpoint above its stop-level
    ancestor frame.

    The viewpoint u* = (1/2, 2h) clears the convex hull (height h) of
    the curve in every frame, so consecutive chain segments stay on the
    outward side at all scales.
    """
    h = math.sqrt(lam - 0.25)
    ustar = np.array([0.5, 2.0 * h])
    Fs, _ = _as_affine(lam)
    u = _invert_affine(frame_Ab, z)
    word = _unit_address(lam, u, depth)
    pts = [np.asarray(z, float)]
    for j in range(depth, stop_len - 1, -1):
        A, b = np.eye(2), np.zeros(2)
        for a in word[:j]:
            A2, b2 = Fs[a - 1]
            A, b = A @ A2, A @ b2 + b
        local = A @ ustar + b
        pts.append(apply_affine(frame_Ab, local))
    return pts, word


def _leading_run(word: list, letter: int) -> int:
    n = 0
    for a in word:
        if a != letter:
            break
        n += 1
    return n


def _mirror_matrix(point, direction):
    """Reflection across the line through `point` along `direction`."""
    ux, uy = direction / np.linalg.norm(direction)
    R = np.array([[ux * ux - uy * uy, 2 * ux * uy],
                  [2 * ux * uy, uy * uy - ux * ux]])
    return R, np.asarray(point, float)


def _reflect(M, pts):
    R, o = M
    pts = np.atleast_2d(np.asarray(pts, float))
    return (pts - o) @ R.T + o


def _frame(lam: float, letter: int):
    """Affine map of snowflake piece K_{1 letter} (on the first edge)."""
    Fs, _ = _as_affine(lam)
    return Fs[letter - 1]


def _depth_of_domain(domain, lam: float) -> int:
    n = domain.n_edges
    d = round(math.log(n / 3.0, 4.0))
    if 3 * 4**d != n:
        raise CurveError("domain is not a Koch snowflake prefractal")
    return d


def _dedupe(pts) -> np.ndarray:
    out = [np.asarray(pts[0], float)]
    for q in pts[1:]:
        q = np.asarray(q, float)
        if np.linalg.norm(q - out[-1]) > 1e-14:
            out.append(q)
    return np.array(out)


def _leg_polyline(lam, z, frame, word, junction, stop_len, depth):
    h = math.sqrt(lam - 0.25)
    ustar = np.array([0.5, 2.0 * h])
    Fs, _ = _as_affine(lam)
    pts = [np.asarray(z, float)]
    for j in range(depth, stop_len - 1, -1):
        A, b = np.eye(2), np.zeros(2)
        for a in word[:j]:
            A2, b2 = Fs[a - 1]
            A, b = A @ A2, A @ b2 + b
        pts.append(apply_affine(frame, A @ ustar + b))
    top = pts[-1]
    rho = float(np.linalg.norm(top - junction.point))
    rho = min(max(2.0 * rho, 1e-12), junction.reach)
    q = junction.point + rho * junction.direction
    pts.append(q)
    return _dedupe(pts)


def _admissible(domain, poly, n_check: int = 256) -> bool:
    from .geodesic import curve_stays_outside

    if domain is None:
        return True
    return curve_stays_outside(domain, poly, n_check=n_check)


def _build_leg(lam, z, letter, depth, junction, domain):
    """Escape leg with a climb-higher retry ladder: if the hop at the
    preferred stop scale clips the finite-depth boundary, ascend one
    frame and try again."""
    frame = _frame(lam, letter)
    _, word = _escape_chain(lam, z, frame, depth, depth)
    run = _leading_run(word, 4)
    for stop in range(max(run, 0), -1, -1):
        poly = _leg_polyline(lam, z, frame, word, junction, stop, depth)
        if _admissible(domain, poly):
            return poly
    raise CurveError("escape leg is blocked even at the coarsest scale")


def koch_case_curve(lam: float, z1, z2, case: int, domain=None) -> np.ndarray:
    """Exterior curve between boundary points of adjacent snowflake
    pieces on the first edge (cases 1-3 of the worked example).

    Case 1 (z1 in K_11, z2 in K_12): both points escape along exterior
    John chains to the mirror segment at o = K_11 ^ K_12 and are joined
    along it.  Case 2 (z1 in K_12, z2 in K_13): both escape to the
    vertical bisector above the apex p = K_12 ^ K_13 and meet at p.
    Case 3 (z1 in K_11, z2 in K_13 or K_14): far pair; both climb fully
    above their pieces and meet at p over the apex.  The K_12/K_13/K_14
    legs reuse the K_11 construction through the exact mirror symmetries
    of the pieces.  With `domain` given, every candidate is verified
    against the finite-depth polygon.
    """
    z1 = np.asarray(z1, float)
    z2 = np.asarray(z2, float)
    if case not in (1, 2, 3):
        raise CurveError("case must be 1, 2 or 3")
    depth = _depth_of_domain(domain, lam) - 1 if domain is not None else 10
    h = math.sqrt(lam - 0.25)
    apex = np.array([0.5, h])
    jo = _case1_junction(lam)
    if np.allclose(z1, z2):
        return np.array([z1, z1])
    M_I = _mirror_matrix(jo.point, jo.direction)  # K_11 <-> K_12
    M_V = _mirror_matrix(np.array([0.5, 0.0]), np.array([0.0, 1.0]))

    wanted = {1: ((1,), (2,)), 2: ((2,), (3,)), 3: ((1,), (3, 4))}[case]
    for z, letters, name in ((z1, wanted[0], "z1"), (z2, wanted[1], "z2")):
        if not any(_in_piece(lam, z, m) for m in letters):
            raise CurveError(
                f"{name} is not in the piece(s) K_1{letters} of case {case}")

    if case == 1:
        leg1 = _build_leg(lam, z1, 1, depth, jo, domain)
        z2m = _reflect(M_I, z2)[0]
        leg2 = _reflect(M_I, _build_leg(lam, z2m, 1, depth, jo, domain))
        poly = _dedupe(list(leg1) + list(leg2[::-1]))
    elif case == 2:
        ja = _apex_junction(lam)
        leg1 = _build_leg(lam, z1, 2, depth, ja, domain)
        z2m = _reflect(M_V, z2)[0]
        leg2 = _reflect(M_V, _build_leg(lam, z2m, 2, depth, ja, domain))
        poly = _dedupe(list(leg1) + [apex] + list(leg2[::-1]))
    else:
        ja = _apex_junction(lam)
        A = np.array([0.5, h + 0.5])
        leg1 = _leg_polyline(lam, z1, _frame(lam, 1),
                             _escape_chain(lam, z1, _frame(lam, 1), depth, depth)[1],
                             jo, 0, depth)[:-1]  # full climb, drop the hop
        if _in_piece(lam, z2, 3):
            z2m = _reflect(M_V, z2)[0]
            leg2 = _reflect(M_V, _build_leg(lam, z2m, 2, depth, ja, domain))
            poly = _dedupe(list(leg1) + [A, apex] + list(leg2[::-1]))
        else:  # z2 in K_14: mirror of K_11 across x = 1/2
            z2m = _reflect(M_V, z2)[0]
            leg2m = _leg_polyline(
                lam, z2m, _frame(lam, 1),
                _escape_chain(lam, z2m, _frame(lam, 1), depth, depth)[1],
                jo, 0, depth)[:-1]
            leg2 = _reflect(M_V, leg2m)
            poly = _dedupe(list(leg1) + [A, apex, A] + list(leg2[::-1]))
    if domain is not None and not _admissible(domain, poly):
        raise CurveError("case curve clips the finite-depth boundary")
    return poly


def _in_piece(lam: float, z, letter: int, tol: float = 1e-9) -> bool:
    """Membership of a boundary point in piece K_{1 letter}."""
    from .geometry import seg_point_distance
    from .domain import koch_edge_polyline

    u = _invert_affine(_frame(lam, letter), np.asarray(z, float))
    if not (-tol <= u[0] <= 1.0 + tol):
        return False
    ref = koch_edge_polyline(lam, 6)
    d = float(np.min(seg_point_distance(u[None, None, :], ref[None, :-1], ref[None, 1:])))
    return d <= 1e-6 + tol


def koch_case_functional(domain, polyline, p: float) -> float:
    """Functional of a case curve; boundary touches at interior polyline
    vertices (e.g. the apex) are legal and handled segment-wise."""
    from .geodesic import curve_functional

    return curve_functional(domain, polyline, p)
