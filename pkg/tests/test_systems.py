from fractions import Fraction

import pytest

from cantorfull import systems


def test_odometer_carry_wraps_to_zero(binary):
    sys_ = binary["sys"]
    ones = systems.odometer_point(sys_, (), (1,))
    assert systems.translate(sys_, ones, (1,)) == systems.odometer_zero(sys_)


def test_odometer_borrow_wraps_to_ones(binary):
    sys_ = binary["sys"]
    zero = systems.odometer_zero(sys_)
    assert systems.translate(sys_, zero, (-1,)) == systems.odometer_point(sys_, (), (1,))


def test_translate_roundtrip_random(binary):
    sys_ = binary["sys"]
    import random

    rng = random.Random(7)
    for _ in range(50):
        k = rng.randrange(0, 256)
        g = rng.randrange(-40, 40)
        x = systems.odometer_from_int(sys_, k, 8)
        y = systems.translate(sys_, systems.translate(sys_, x, (g,)), (-g,))
        assert y == x


def test_translate_is_action(binary):
    sys_ = binary["sys"]
    x = systems.odometer_from_int(sys_, 11, 5)
    a = systems.translate(sys_, systems.translate(sys_, x, (3,)), (5,))
    b = systems.translate(sys_, x, (8,))
    assert a == b


def test_mixed_radix_bases():
    sys_ = systems.odometer_system((2, 3))
    x = systems.odometer_zero(sys_)
    # 2*3*2*3 = 36 steps return to the same first four digits
    y = systems.translate(sys_, x, (36,))
    assert [y.digit(i) for i in range(4)] == [0, 0, 0, 0]


def test_metric_and_window(binary):
    sys_ = binary["sys"]
    x = systems.odometer_from_int(sys_, 0, 4)
    y = systems.odometer_from_int(sys_, 8, 4)  # digits differ first at position 3
    assert systems.metric(sys_, x, y, 10) == Fraction(1, 2**3)
    assert systems.metric(sys_, x, x, 6) == Fraction(1, 2**6)
    w = systems.window(sys_, y, range(4))
    assert w.symbols == (0, 0, 0, 1)
    assert systems.in_cylinder(sys_, w, y)
    assert not systems.in_cylinder(sys_, w, x)


def test_point_canonicalization(binary):
    sys_ = binary["sys"]
    a = systems.odometer_point(sys_, (1, 0, 1, 0), (1, 0))
    b = systems.odometer_point(sys_, (1,), (0, 1))
    assert a == b


def test_invalid_digit_rejected(binary):
    with pytest.raises(ValueError):
        systems.odometer_point(binary["sys"], (2,), (0,))


def test_banach_density_lower(binary):
    sys_ = binary["sys"]
    zero = systems.odometer_zero(sys_)
    pat = systems.window(sys_, zero, range(1))  # cylinder d0 = 0
    dens = systems.banach_density_lower(sys_, pat, zero, 4)
    assert dens == Fraction(1, 2)
