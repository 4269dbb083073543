"""Weak mean porosity machinery.

The lazy annulus counter is cross-checked against the materialized
double decomposition on toy parameters; the schedule and counter
arithmetic follow the stated formulas exactly.
"""

import math

import numpy as np
import pytest

from porogeom.domain import build_koch_snowflake, build_unit_square, rasterize
from porogeom.dyadic import DyadicCube
from porogeom.porosity import (
    AnnulusCubeCounter,
    CubeFamily,
    PorosityError,
    PorosityParams,
    build_double_decomposition,
    chi_k,
    classical_porosity,
    dimension_bound_from_porosity,
    epsilon_schedule,
    porosity_profile,
    smallest_k0,
)


# -- parameters -----------------------------------------------------------


def test_epsilon_schedule_small_cases():
    assert epsilon_schedule(1.0) == 2.0**-14
    assert epsilon_schedule(2.0) == 2.0**-15
    assert epsilon_schedule(3.0) == 2.0**-16
    assert epsilon_schedule(72.0) == 2.0**-21


def test_epsilon_schedule_interval_property():
    for C in (1.0, 1.5, 7.0, 72.0, 500.0, 12345.6):
        eps = epsilon_schedule(C)
        assert 2.0**-15 / C < eps <= 2.0**-14 / C
        assert math.log2(eps) == int(math.log2(eps))


def test_epsilon_schedule_clamps_below_one():
    with pytest.warns(UserWarning):
        assert epsilon_schedule(0.5) == 2.0**-14


def test_params_validation_and_counts():
    p = PorosityParams(eps=2.0**-14)
    assert p.alpha(0.5) == 2.0**-15
    assert p.lambda_count(3) == p.lambda_count(9) == 2**4
    with pytest.raises(PorosityError):
        PorosityParams(eps=0.0)


def test_dimension_bound_arithmetic():
    assert dimension_bound_from_porosity(0.1, C_dc=1.0) == pytest.approx(1.9)
    a, b = dimension_bound_from_porosity(0.1, C_dc=1.0, curve_C=10.0, M=1.0)
    assert b == pytest.approx(1.9)
    with pytest.raises(PorosityError):
        dimension_bound_from_porosity(-0.1)


# -- chi_k on hand-built families ----------------------------------------


def test_chi_k_empty_family():
    fam = CubeFamily(cubes=[])
    params = PorosityParams(eps=2.0**-4, c=2.0**-2)
    assert chi_k(fam, (0.0, 0.0), 3, params) == 0


def test_chi_k_hand_placed_family():
    # lambda(k) = ceil(2^-2/2^-4) = 4 cubes of side alpha(2^-3) = 2^-7,
    # placed by hand inside A_3((0,0)) on the x axis: near points at
    # ix/128 >= 2^-4 and far corners at hypot((ix+1)/128, 1/128) <= 2^-3
    params = PorosityParams(eps=2.0**-4, c=2.0**-2)
    k = 3
    cubes = [DyadicCube(7, 9 + i, 0) for i in range(4)]
    fam = CubeFamily(cubes=cubes)
    assert fam.validate()
    assert chi_k(fam, (0.0, 0.0), k, params) == 1
    # one cube short -> 0
    fam2 = CubeFamily(cubes=cubes[:3])
    assert chi_k(fam2, (0.0, 0.0), k, params) == 0


def test_count_in_annulus_exact_corner_tests():
    fam = CubeFamily(cubes=[DyadicCube(3, 2, 0)])  # [1/4,3/8]x[0,1/8]
    # far corner at radius hypot(3/8,1/8) ~ 0.395 <= 2^-1, near point 1/4 >= 2^-2
    assert fam.count_in_annulus((0.0, 0.0), 1, 0.0) == 1
    # shrink the annulus: near point violates the inner disc
    assert fam.count_in_annulus((0.0, 0.0), 2, 0.0) == 0


# -- profiles -------------------------------------------------------------


def test_profile_prefix_sums_all_ones():
    class Stub:
        domain = None

        def count_in_annulus(self, x, k, min_side, target=None):
            return 10**9

    params = PorosityParams(eps=0.5, c=0.25)
    prof = porosity_profile(Stub(), (0.0, 0.0), 8, params)
    assert prof.chi == [1] * 8
    assert prof.S == list(range(1, 9))
    assert prof.verdict


def test_profile_alternating_fails():
    class Stub:
        domain = None

        def __init__(self):
            self.calls = 0

        def count_in_annulus(self, x, k, min_side, target=None):
            self.calls += 1
            return 10**9 if k % 2 == 1 else 0

    params = PorosityParams(eps=0.5, c=0.25)
    prof = porosity_profile(Stub(), (0.0, 0.0), 8, params)
    assert prof.chi == [1, 0] * 4
    assert not prof.verdict  # S_2/2 = 1/2, not > 1/2


def test_profile_S_prefix_law(square):
    counter = AnnulusCubeCounter(square)
    params = PorosityParams(eps=2.0**-6)
    prof = porosity_profile(counter, (0.5, 0.0), 8, params, domain=square)
    run = 0
    for c, s in zip(prof.chi, prof.S):
        if c is not None:
            run += c
        assert s == run
        assert c in (0, 1, None)


def test_smallest_k0(square, koch_third_5):
    assert 2.0 ** -smallest_k0(square) < square.diameter
    assert 2.0 ** -(smallest_k0(square) - 1) >= square.diameter or \
        smallest_k0(square) == 1
    assert smallest_k0(koch_third_5) == 1


def test_unit_square_boundary_is_porous(square):
    counter = AnnulusCubeCounter(square)
    params = PorosityParams(eps=2.0**-6)
    for x in square.sample_boundary(12, seed=3):
        prof = porosity_profile(counter, x, 10, params, domain=square)
        assert prof.verdict


# -- double decomposition and the lazy counter ---------------------------


def test_double_decomposition_disjoint_and_clear(square):
    fam = build_double_decomposition(square, ((-1.5, -1.5), (2.5, 2.5)),
                                     outer_max_level=4, inner_max_level=3,
                                     base_scale=4.0)
    assert len(fam) > 0
    assert fam.validate()


def test_double_decomposition_budget(square):
    with pytest.raises(MemoryError):
        build_double_decomposition(square, ((-1.5, -1.5), (2.5, 2.5)),
                                   outer_max_level=6, inner_max_level=8,
                                   base_scale=4.0, max_cubes=100)


def test_lazy_counter_matches_materialized_family(koch_third_5):
    # toy eps so both sides are computable; counts must agree exactly
    dom = koch_third_5
    lo, hi = dom.bbox
    m = dom.diameter
    fam = build_double_decomposition(dom, (lo - m, hi + m),
                                     outer_max_level=6, inner_max_level=4,
                                     base_scale=4.0)
    counter = AnnulusCubeCounter(dom, base_scale=4.0, inner_max_level=4,
                                 outer_max_level=6)
    for x in dom.sample_boundary(6, seed=11):
        for k in (2, 3, 4):
            min_side = 2.0 ** -(k + 6)
            want = fam.count_in_annulus(x, k, min_side)
            got = counter.count_in_annulus(x, k, min_side, target=10**9)
            assert got == want, (x, k)


def test_lazy_counter_early_exit(koch_third_5):
    counter = AnnulusCubeCounter(koch_third_5)
    x = koch_third_5.sample_boundary(1, seed=0)[0]
    n = counter.count_in_annulus(x, 4, 2.0**-18, target=5)
    assert n == 5  # stops exactly at the target


# -- classical porosity ---------------------------------------------------


def test_classical_porosity_single_point():
    class PointSet:
        def distance_to_boundary(self, pts):
            return np.linalg.norm(np.atleast_2d(pts), axis=-1)

        vertices = np.zeros((3, 2))

    r = 1.0
    field = rasterize(build_unit_square(), bbox=((-2, -2), (2, 2)), h=r / 256)
    # overwrite with distance to the single point at the origin
    xs, ys = field.node_xy()
    gx, gy = np.meshgrid(xs, ys)
    field.dist = np.hypot(gx, gy)
    por = classical_porosity(None, (0.0, 0.0), r, field)
    assert por >= 0.45


def test_classical_porosity_straight_line(square):
    # boundary edge y=0 of the unit square near x=(1/2, 0)
    field = rasterize(square, bbox=((-1, -1), (2, 2)), h=1 / 512)
    por = classical_porosity(square, (0.5, 0.0), 2.0**-3, field)
    assert por >= 0.45


def test_classical_porosity_monotone_in_wiggliness():
    flaky = build_koch_snowflake(0.45, 7, check=False)
    calm = build_koch_snowflake(1 / 3, 7, check=False)
    r = 2.0**-4
    x = np.array([0.0, 0.0])  # shared corner vertex of both flakes
    f1 = rasterize(flaky, bbox=((-0.3, -0.3), (0.3, 0.3)), h=r / 128)
    f2 = rasterize(calm, bbox=((-0.3, -0.3), (0.3, 0.3)), h=r / 128)
    p1 = classical_porosity(flaky, x, r, f1)
    p2 = classical_porosity(calm, x, r, f2)
    assert p1 < p2


def test_classical_porosity_coverage_error(square):
    field = rasterize(square, bbox=((-0.1, -0.1), (1.1, 1.1)), h=1 / 64)
    with pytest.raises(PorosityError):
        classical_porosity(square, (0.5, 0.0), 5.0, field)
