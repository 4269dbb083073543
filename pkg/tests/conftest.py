"""Shared fixtures.

Session scope for every domain build: the Koch polygons are the only
expensive constructions and all tests treat domains as immutable.
"""

import numpy as np
import pytest

from porogeom.domain import (
    build_cone_domain,
    build_koch_snowflake,
    build_regular_polygon,
    build_unit_square,
)


@pytest.fixture(scope="session")
def square():
    return build_unit_square()


@pytest.fixture(scope="session")
def disc():
    return build_regular_polygon(256)


@pytest.fixture(scope="session")
def cone_quarter():
    return build_cone_domain(0.25)


@pytest.fixture(scope="session")
def koch_third_5():
    return build_koch_snowflake(1.0 / 3.0, 5)


@pytest.fixture(scope="session")
def koch_third_6():
    return build_koch_snowflake(1.0 / 3.0, 6)


@pytest.fixture(scope="session")
def koch_third_8():
    return build_koch_snowflake(1.0 / 3.0, 8, check=False)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
