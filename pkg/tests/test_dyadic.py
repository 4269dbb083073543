"""Dyadic cubes and Whitney decompositions.

The displayed Whitney facts (two-sided distance bound, neighbor side
ratio, square layer counts) are asserted exactly; the enumeration
oracle for the square case is a brute-force scan over all dyadic
subcubes testing l(Q') = dist(Q', dQ) literally.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from porogeom.domain import build_unit_square
from porogeom.dyadic import (
    DecompositionError,
    DyadicCube,
    EmptyRegion,
    InteriorRegion,
    PlaneMinusBoundary,
    PlaneMinusPoint,
    WhitneyDecomposition,
    cube_boundary_distance,
    layer_count,
    neighbors,
    touching_pairs,
    whitney_of_open_set,
    whitney_of_square,
)

SQ2 = math.sqrt(2.0)


# -- cube arithmetic ------------------------------------------------------


def test_cube_side_and_corners():
    q = DyadicCube(3, 5, -2, base_scale=2.0)
    assert q.side == 0.25
    assert np.allclose(q.lo, [1.25, -0.5])
    assert np.allclose(q.center, [1.375, -0.375])
    assert q.parent() == DyadicCube(2, 2, -1, 2.0)
    kids = q.children()
    assert len(kids) == 4 and all(k.parent() == q for k in kids)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 6), st.integers(-8, 8), st.integers(-8, 8),
       st.integers(0, 6), st.integers(-8, 8), st.integers(-8, 8))
def test_integer_tests_match_float_boxes(l1, x1, y1, l2, x2, y2):
    a = DyadicCube(l1, x1, y1)
    b = DyadicCube(l2, x2, y2)
    # float reference with closed/open boxes
    alo, ahi = a.lo, a.hi
    blo, bhi = b.lo, b.hi
    closed = (alo[0] <= bhi[0] and blo[0] <= ahi[0]
              and alo[1] <= bhi[1] and blo[1] <= ahi[1])
    opened = (alo[0] < bhi[0] and blo[0] < ahi[0]
              and alo[1] < bhi[1] and blo[1] < ahi[1])
    assert a.closure_touches(b) == closed
    assert a.open_overlaps(b) == opened


def test_distance_to_point():
    q = DyadicCube(1, 0, 0)  # [0, 1/2]^2
    assert q.distance_to_point((0.25, 0.25)) == 0.0
    assert q.distance_to_point((1.5, 0.25)) == pytest.approx(1.0)
    assert q.max_corner_distance((0.0, 0.0)) == pytest.approx(0.5 * SQ2)


# -- square Whitney enumeration ------------------------------------------


def _brute_square_cells(j_max):
    """All dyadic Q' in the unit square with l(Q') = dist(Q', dQ)."""
    out = []
    for j in range(1, j_max + 1):
        s = 2.0**-j
        n = 1 << j
        for ix in range(n):
            for iy in range(n):
                d = min(ix, iy, n - 1 - ix, n - 1 - iy) * s
                if d == s:
                    out.append((j, ix, iy))
    return set(out)


def test_square_whitney_matches_bruteforce():
    dec = whitney_of_square(5)
    got = {(c.level, c.ix, c.iy) for c in dec.cells}
    assert got == _brute_square_cells(5)


def test_square_layer_counts():
    dec = whitney_of_square(10)
    assert layer_count(dec, 2) == 4
    assert layer_count(dec, 3) == 20
    assert layer_count(dec, 4) == 52
    for j in range(2, 11):
        n = layer_count(dec, j)
        assert n == 4 * (2**j - 3)  # closed form
        assert n >= 2 ** (j - 1)  # the paper's layer bound, d = 2


def test_square_whitney_jmax_1_empty():
    assert len(whitney_of_square(1)) == 0


def test_layer_count_range_errors():
    dec = whitney_of_square(4)
    with pytest.raises(DecompositionError):
        layer_count(dec, 1)
    with pytest.raises(DecompositionError):
        layer_count(dec, 5)
    wrong = whitney_of_open_set(PlaneMinusPoint((0.3, 0.3)),
                                ((0, 0), (1, 1)), 4)
    with pytest.raises(DecompositionError):
        layer_count(wrong, 2)


# -- open-set Whitney ------------------------------------------------------


def test_whitney_of_unit_square_interior(square):
    dec = whitney_of_open_set(InteriorRegion(square), square.bbox,
                              max_level=6, base_scale=1.0)
    ref = whitney_of_square(dec.max_level)
    got = {(c.level, c.ix, c.iy) for c in dec.cells}
    # the accept rule keeps a subset of the exact square decomposition's
    # scales; every accepted cell is one of the exact cells at the same
    # or finer level, and the central block is covered
    for c in dec.cells:
        assert square.contains_one(c.center)
        d = cube_boundary_distance(square, c)
        assert c.side <= d <= 4.0 * SQ2 * c.side
    assert len(got) > 0


def test_whitney_plane_minus_point():
    p = (0.3, 0.7)
    dec = whitney_of_open_set(PlaneMinusPoint(p), ((-1, -1), (2, 2)),
                              max_level=8)
    assert len(dec) > 0
    for c in dec.cells:
        d_near = c.distance_to_point(p)
        assert c.side <= d_near or np.isclose(c.side, d_near)
        assert d_near <= 4.0 * SQ2 * c.side


def test_whitney_empty_region():
    dec = whitney_of_open_set(EmptyRegion(), ((0, 0), (1, 1)), max_level=4)
    assert len(dec) == 0
    assert dec.empty_warning


def test_whitney_disjointness(cone_quarter):
    dec = whitney_of_open_set(InteriorRegion(cone_quarter),
                              cone_quarter.bbox, max_level=7)
    cells = sorted(dec.cells)
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            assert not cells[i].open_overlaps(cells[j])


def test_whitney_truncation_recorded(koch_third_5):
    dec = whitney_of_open_set(PlaneMinusBoundary(koch_third_5),
                              koch_third_5.bbox, max_level=4)
    assert dec.truncated_count > 0
    assert dec.truncated_area > 0.0


def test_whitney_covering_bound(square):
    dec = whitney_of_open_set(InteriorRegion(square), square.bbox,
                              max_level=8, base_scale=1.0)
    gap = square.area - dec.total_area()
    lo, hi = square.bbox
    bound = 4.0 * float(np.linalg.norm(hi - lo)) * 2.0**-8 * 16
    assert 0.0 <= gap <= bound


# -- neighbors ------------------------------------------------------------


def test_neighbor_ratios_square():
    dec = whitney_of_square(6)
    for c in dec.cells:
        if c.level >= 5:
            continue
        for o in neighbors(dec, c):
            assert o.side / c.side in (0.5, 1.0, 2.0)


def test_neighbors_single_cell():
    dec = WhitneyDecomposition(cells=[DyadicCube(2, 1, 1)], base_scale=1.0,
                               kind="of_open_set", min_level=2, max_level=2)
    assert neighbors(dec, DyadicCube(2, 1, 1)) == []


def test_neighbors_requires_membership():
    dec = whitney_of_square(4)
    with pytest.raises(DecompositionError):
        neighbors(dec, DyadicCube(2, 0, 0))


def test_neighbors_cross_level():
    # corner cell of the level-2 ring touches level-3 ring cells
    dec = whitney_of_square(3)
    corner = DyadicCube(2, 1, 1)
    out = neighbors(dec, corner)
    assert any(o.level == 3 for o in out)
    got = {(o.level, o.ix, o.iy) for o in out}
    brute = {(o.level, o.ix, o.iy) for o in dec.cells
             if o != corner and corner.closure_touches(o)}
    assert got == brute


def test_touching_pairs_matches_bruteforce():
    dec = whitney_of_square(4)
    got = set()
    for a, b in touching_pairs(dec):
        key = tuple(sorted([(a.level, a.ix, a.iy), (b.level, b.ix, b.iy)]))
        got.add(key)
    brute = set()
    cells = dec.cells
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if cells[i].closure_touches(cells[j]):
                key = tuple(sorted([
                    (cells[i].level, cells[i].ix, cells[i].iy),
                    (cells[j].level, cells[j].ix, cells[j].iy)]))
                brute.add(key)
    assert got == brute


# -- serialization --------------------------------------------------------


def test_decomposition_json_roundtrip(tmp_path):
    dec = whitney_of_square(4)
    path = tmp_path / "w.json"
    dec.save(path)
    import json

    with open(path) as fh:
        obj = json.load(fh)
    assert obj["schema"] == 1
    back = WhitneyDecomposition.from_json(obj)
    assert {(c.level, c.ix, c.iy) for c in back.cells} == \
           {(c.level, c.ix, c.iy) for c in dec.cells}
