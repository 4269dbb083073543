"""Weighted geodesics, the curve functional, and John constants.

The curve functional has two independent oracles: closed-form values
for straight runs at constant or linear boundary distance, and a dense
adaptive quadrature over the same distance samples.
"""

import math

import numpy as np
import pytest

from porogeom.domain import (
    build_cone_domain,
    build_regular_polygon,
    build_unit_square,
    rasterize,
)
from porogeom.dyadic import PlaneMinusBoundary, whitney_of_open_set
from porogeom.geodesic import (
    GeodesicError,
    build_complement_graph,
    build_interior_graph,
    curve_condition_constant,
    curve_condition_from_pairs,
    curve_functional,
    curve_stays_outside,
    geodesics_from_sources,
    john_constant,
    node_weights,
    shortcut_check,
    weighted_geodesic,
)

P = 1.5


# -- node weights and graph basics ---------------------------------------


def test_node_weights_floor():
    h = 1 / 64.0
    d = np.array([0.0, h / 4, h / 2, h, 3.0])
    w = node_weights(d, h, P)
    assert np.array_equal(w[:3], (h / 2) ** (1 - P) * np.ones(3))
    assert w[3] == pytest.approx(h ** (1 - P))
    assert w[4] == pytest.approx(3.0 ** (1 - P))


def test_graph_node_count(square):
    h = 1 / 32.0
    g = build_complement_graph(square, h=h, p=P)
    f = g.field
    expect = (f.nx * f.ny) - np.sum(f.inside)
    # complement nodes: everything not inside, minus the on-boundary nodes
    assert 0.9 * expect <= len(g.nodes) <= expect


def test_graph_rejects_bad_p(square):
    with pytest.raises(GeodesicError):
        build_complement_graph(square, h=1 / 32.0, p=2.5)


def test_interior_graph_side(square):
    g = build_interior_graph(square, h=1 / 32.0, p=P)
    assert g.side == "interior"
    xy = g.node_xy(np.arange(len(g.nodes)))
    assert np.all(square.contains(xy))


# -- curve functional oracles --------------------------------------------


def test_functional_constant_distance(square):
    # vertical run at x = -D: boundary distance is exactly D throughout
    for D in (0.5, 1.0, 2.0):
        poly = np.array([[-D, 0.3], [-D, 0.7]])
        val = curve_functional(square, poly, P)
        assert val == pytest.approx(0.4 * D ** (1 - P), rel=1e-9)


def test_functional_singular_endpoint(square):
    # straight run from the boundary point (1/2, 0) going down:
    # dist = |y|, so the integral is T**(2-p)/(2-p) exactly
    T = 0.75
    poly = np.array([[0.5, 0.0], [0.5, -T]])
    val = curve_functional(square, poly, P)
    assert val == pytest.approx(T ** (2 - P) / (2 - P), rel=1e-6)


def test_functional_matches_dense_quadrature(cone_quarter, rng):
    from scipy.integrate import quad

    pts = np.array([[-0.5, 1.2], [0.3, 1.4], [0.9, 0.7], [1.3, -0.5]])

    def ref():
        tot = 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            L = float(np.linalg.norm(b - a))

            def f(t):
                z = a + t * (b - a)
                return float(cone_quarter.distance_one(z)) ** (1 - P) * L

            v, _ = quad(f, 0.0, 1.0, limit=200)
            tot += v
        return tot

    val = curve_functional(cone_quarter, pts, P)
    assert val == pytest.approx(ref(), rel=1e-3)


def test_functional_additive_under_subdivision(square):
    poly = np.array([[-1.0, 0.0], [-0.5, 0.8], [0.2, 1.6]])
    mid = 0.5 * (poly[0] + poly[1])
    fine = np.array([poly[0], mid, poly[1], poly[2]])
    a = curve_functional(square, poly, P)
    b = curve_functional(square, fine, P)
    assert a == pytest.approx(b, rel=1e-9)


def test_functional_scaling_law():
    # scaling the whole picture by s multiplies the functional by s**(2-p)
    sq = build_unit_square()
    poly = np.array([[0.5, 0.0], [0.5, -0.75]])
    base = curve_functional(sq, poly, P)
    for s in (0.5, 2.0):
        from porogeom.domain import Domain

        dom = Domain(sq.vertices * s)
        val = curve_functional(dom, poly * s, P)
        assert val == pytest.approx(base * s ** (2 - P), rel=1e-9)


def test_functional_error_contracts(square):
    poly = np.array([[-0.5, 0.5], [-0.5, 1.5]])
    with pytest.raises(GeodesicError):
        curve_functional(square, poly, 2.0)  # needs p < 2
    with pytest.raises(GeodesicError):
        curve_functional(square, poly[:1], P)  # single point
    # a boundary touch at a polyline vertex is legal: the singular ends
    # are integrated by the graded mesh on both sides
    touch = np.array([[-0.5, 0.5], [0.0, 0.5], [-0.5, 0.6]])
    assert np.isfinite(curve_functional(square, touch, P))


def test_curve_stays_outside_predicate(square):
    assert curve_stays_outside(square, np.array([[-0.5, 0.0], [-0.5, 1.0]]))
    assert not curve_stays_outside(square,
                                   np.array([[-0.5, 0.5], [1.5, 0.5]]))


# -- geodesics ------------------------------------------------------------


def test_geodesic_same_point(square):
    g = build_complement_graph(square, h=1 / 64.0, p=P)
    res = weighted_geodesic(g, (-0.25, 0.5), (-0.25, 0.5))
    assert res.graph_value == 0.0
    assert res.length <= 2.0 * g.h


def test_geodesic_symmetry(square):
    g = build_complement_graph(square, h=1 / 64.0, p=P)
    a, b = (-0.3, -0.4), (1.3, 1.4)
    r1 = weighted_geodesic(g, a, b)
    r2 = weighted_geodesic(g, b, a)
    assert r1.graph_value == pytest.approx(r2.graph_value, rel=1e-12)
    assert r1.functional == pytest.approx(r2.functional, rel=1e-9)


def test_geodesic_beats_straight_segment(square):
    # the graph optimum can't lose to any explicit competitor by more
    # than the grid anisotropy plus the endpoint-snapping cost
    g = build_complement_graph(square, h=1 / 128.0, p=P)
    a, b = (-0.25, 0.2), (-0.25, 0.9)
    res = weighted_geodesic(g, a, b)
    straight = curve_functional(square, np.array([a, b]), P)
    assert res.functional <= 1.1 * straight + 4.0 * g.h ** (2 - P)


def test_geodesic_routes_around_domain(square):
    # endpoints on opposite sides: the curve must leave the straight line
    g = build_complement_graph(square, h=1 / 64.0, p=P)
    res = weighted_geodesic(g, (-0.3, 0.5), (1.3, 0.5))
    assert curve_stays_outside(square, res.polyline)
    assert res.length > 1.6  # straight gap is 1.6 through the square


def test_geodesic_endpoints_exact(square):
    g = build_complement_graph(square, h=1 / 64.0, p=P)
    a, b = (-0.311, 0.471), (1.277, 0.533)
    res = weighted_geodesic(g, a, b)
    assert np.allclose(res.polyline[0], a)
    assert np.allclose(res.polyline[-1], b)


def test_geodesics_from_sources_matches_single(square):
    g = build_complement_graph(square, h=1 / 32.0, p=P)
    srcs = [(-0.3, 0.2), (-0.3, 0.8)]
    tgts = [(1.3, 0.5)]
    many = geodesics_from_sources(g, srcs, tgts)
    for i, s in enumerate(srcs):
        single = weighted_geodesic(g, s, tgts[0])
        assert many[(i, 0)].graph_value == pytest.approx(single.graph_value)


def test_geodesic_resolution_convergence(disc):
    a, b = (-1.4, -0.3), (-1.4, 0.3)
    v = {}
    for h in (1 / 64.0, 1 / 128.0):
        g = build_complement_graph(disc, h=h, p=P)
        v[h] = weighted_geodesic(g, a, b).functional
    assert abs(v[1 / 64.0] - v[1 / 128.0]) <= 0.05 * v[1 / 128.0]


# -- curve condition ------------------------------------------------------


def test_curve_condition_square_small(square):
    est = curve_condition_constant(square, P, n_pairs=20, seed=1, h=1 / 64.0)
    assert est.C_hat > 0
    assert len(est.values) <= 25
    assert est.C_hat == pytest.approx(max(est.values))
    # determinism
    est2 = curve_condition_constant(square, P, n_pairs=20, seed=1, h=1 / 64.0)
    assert est2.C_hat == est.C_hat


def test_curve_condition_from_pairs_skips_zero_gap(square):
    g = build_complement_graph(square, h=1 / 32.0, p=P)
    z = (-0.5, 0.5)
    est = curve_condition_from_pairs(square, g, [z, (-0.4, 0.2)], [z])
    assert len(est.values) == 1


# -- shortcut property ----------------------------------------------------


def test_shortcut_check_clean_on_disc(disc):
    g = build_complement_graph(disc, h=1 / 64.0, p=P)
    res = weighted_geodesic(g, (1.0, 0.0), (-1.0, 0.0))
    lo, hi = disc.bbox
    w = whitney_of_open_set(PlaneMinusBoundary(disc),
                            (lo - 1.0, hi + 1.0), max_level=8)
    assert shortcut_check(res, w, g.h) == []
    assert len(res.per_cell_length) > 0


# -- John constants -------------------------------------------------------


def test_john_square():
    sq = build_unit_square()
    est = john_constant(sq, h=1 / 128.0)
    # the square is a John domain with constant well inside (0.3, 1]
    assert 0.3 <= est.J_hat <= 1.0
    assert est.witness is not None
    assert sq.contains_one(est.center)


def test_john_monotone_in_cone_aperture():
    j = {}
    for eps in (0.25, 0.125):
        dom = build_cone_domain(eps)
        j[eps] = john_constant(dom, h=1 / 256.0).J_hat
    assert j[0.125] < j[0.25]


def test_john_disc_near_one():
    disc = build_regular_polygon(128)
    est = john_constant(disc, h=1 / 128.0)
    assert est.J_hat == pytest.approx(1.0, abs=0.05)


def test_john_deterministic(cone_quarter):
    a = john_constant(cone_quarter, h=1 / 128.0)
    b = john_constant(cone_quarter, h=1 / 128.0)
    assert a.J_hat == b.J_hat and a.probes == b.probes
