"""Box counting and dimension fits.

Counts on a small flake are cross-checked against a brute-force scan of
every candidate box using the independent segment/box clipping
predicate from the geometry module.
"""

import math

import numpy as np
import pytest

from porogeom.boxdim import (
    DimensionFit,
    FitError,
    box_count,
    box_dimension,
    koch_dimension_closed_form,
)
from porogeom.domain import build_koch_snowflake, build_unit_square
from porogeom.geometry import segment_box_intersects


# -- counts ---------------------------------------------------------------


def test_unit_segment_count():
    # generic horizontal unit segment at k=5: 32 cells of side 2^-5, plus
    # at most two extra where the endpoints spill over cell edges
    seg = np.array([[0.013, 0.3], [1.013, 0.3]])
    n = box_count(seg, 5, closed=False)
    assert 32 <= n <= 34


def test_segment_on_grid_line_counts_both_sides():
    # a segment lying exactly on y=0 belongs to the boxes above and below
    seg = np.array([[0.1, 0.0], [0.2, 0.0]])
    n = box_count(seg, 3, closed=False)
    assert n % 2 == 0 and n >= 2


def test_single_point_counts():
    assert box_count(np.array([[0.3, 0.4]]), 2) == 1
    # a point on a grid corner belongs to all four incident boxes
    assert box_count(np.array([[0.5, 0.5]]), 1) == 4


def test_counts_nested_between_levels(koch_third_5):
    prev = None
    for k in range(2, 8):
        n = box_count(koch_third_5, k)
        if prev is not None:
            assert prev <= n <= 4 * prev
        prev = n


def test_count_matches_bruteforce_scan():
    dom = build_koch_snowflake(1 / 3, 2)
    k = 4
    side = 2.0**-k
    a = dom.vertices
    b = np.roll(a, -1, axis=0)
    brute = 0
    for i in range(-20, 21):
        for j in range(-20, 21):
            lo = np.array([i * side, j * side])
            hi = lo + side
            if any(segment_box_intersects(a[m], b[m], lo, hi)
                   for m in range(len(a))):
                brute += 1
    assert box_count(dom, k) == brute


def test_empty_and_bad_inputs():
    with pytest.raises(FitError):
        box_count(np.zeros((0, 2)), 3)
    with pytest.raises(FitError):
        box_count(np.array([[0.0, 0.0]]), -1)


# -- dimension fits -------------------------------------------------------


def test_square_boundary_dimension_is_one(square):
    fit = box_dimension(square, 3, 8)
    assert fit.slope == pytest.approx(1.0, abs=0.02)
    assert fit.r2 > 0.999
    assert not fit.clamped


def test_straight_segment_dimension_is_one():
    seg = np.array([[0.007, 0.1], [1.007, 0.9]])
    fit = box_dimension(seg, 5, 11, closed=False)
    assert fit.slope == pytest.approx(1.0, abs=0.02)


def test_koch_dimension_close_to_similarity_value(koch_third_8):
    fit = box_dimension(koch_third_8, 6, 11, base_scale=4.0)
    dim, _ = koch_dimension_closed_form(1 / 3)
    assert abs(fit.slope - dim) <= 0.05
    assert fit.r2 > 0.999


def test_fit_translation_robust(koch_third_5):
    fit0 = box_dimension(koch_third_5, 3, 7, base_scale=4.0)

    class Shifted:
        vertices = koch_third_5.vertices + np.array([0.137, -0.261])

    fit1 = box_dimension(Shifted(), 3, 7, base_scale=4.0)
    assert abs(fit0.slope - fit1.slope) <= 0.1


def test_fit_clamps_at_twice_min_edge():
    dom = build_koch_snowflake(1 / 3, 4)  # min edge 3^-4 ~ 0.012
    fit = box_dimension(dom, 2, 10)
    assert fit.clamped
    assert fit.k_range[1] == int(math.floor(-math.log2(2.0 * (1 / 3) ** 4)))


def test_fit_counts_recorded(koch_third_5):
    fit = box_dimension(koch_third_5, 3, 7)
    assert [k for k, _ in fit.counts] == list(range(fit.k_range[0],
                                                   fit.k_range[1] + 1))
    for (k, n) in fit.counts:
        assert n == box_count(koch_third_5, k)


def test_fit_errors():
    with pytest.raises(FitError):
        box_dimension(build_unit_square(), 3, 5)  # span < 3
    with pytest.raises(FitError):
        box_dimension(np.array([[0.3, 0.4]]), 2, 6)  # constant counts


# -- closed forms ---------------------------------------------------------


def test_similarity_dimension_values():
    dim, bound = koch_dimension_closed_form(1 / 3)
    assert dim == pytest.approx(math.log(4) / math.log(3), abs=1e-12)
    assert bound == pytest.approx(2.0 - (4.0 / math.log(2.0)) / 6.0)
    assert dim >= bound
    d45, b45 = koch_dimension_closed_form(0.45)
    assert d45 > dim and b45 > bound


def test_similarity_dimension_domain_errors():
    for bad in (0.3, 0.5, 0.6):
        with pytest.raises(FitError):
            koch_dimension_closed_form(bad)
