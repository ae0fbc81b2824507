from fractions import Fraction

import pytest

from cantorfull import fullgroup, groups, systems


@pytest.fixture(scope="session")
def binary():
    """Binary odometer with the three standard generator tables."""
    sys_ = systems.odometer_system((2,))
    plus = fullgroup.constant_table(sys_, (1,))
    minus = fullgroup.constant_table(sys_, (-1,))
    swap = fullgroup.digit_swap_table(sys_)
    return {"sys": sys_, "plus": plus, "minus": minus, "swap": swap}


@pytest.fixture(scope="session")
def z1():
    return groups.int_vector_context(1)


@pytest.fixture(scope="session")
def z2():
    return groups.int_vector_context(2)


@pytest.fixture
def half():
    return Fraction(1, 2)
