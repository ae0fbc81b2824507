import random
from fractions import Fraction

import pytest

from cantorfull import fullgroup, sofic, systems


def _action(binary, n, radius=2):
    gens = [binary["plus"], binary["swap"]]
    ball = fullgroup.subgroup_ball(gens, radius)
    act = sofic.build_theta(
        binary["sys"], systems.odometer_zero(binary["sys"]), n, ball
    )
    return act, ball


def test_hamming_exact():
    assert sofic.hamming((0, 1, 2), (0, 2, 1)) == Fraction(2, 3)
    with pytest.raises(ValueError):
        sofic.hamming((0,), (0, 1))


def test_plus_one_is_exact_rotation(binary):
    act, _ = _action(binary, 3)
    p = act.perm(binary["plus"])
    assert p == tuple((i + 1) % 8 for i in range(8))
    assert act.displacement(binary["plus"]) == 1


def test_multi_basepoint_blocks(binary):
    sys_ = binary["sys"]
    b0 = systems.odometer_zero(sys_)
    b1 = systems.odometer_point(sys_, (), (1,))
    act = sofic.build_theta_multi(sys_, [b0, b1], 2, [binary["plus"]])
    p = act.perm(binary["plus"])
    # two blocks of four: the permutation never mixes tags
    for i in range(4):
        assert p[i] in range(4)
        assert p[4 + i] in range(4, 8)


def test_identity_and_mult_defect_small(binary):
    act, ball = _action(binary, 6)
    assert act.identity_ok()
    rep = sofic.check_injective_almost_action(act, ball, Fraction(3, 4))
    assert rep["conditions"]["mult_defect"] == Fraction(1, 32)
    assert rep["conditions"]["min_displacement"] == Fraction(1, 2)
    assert rep["pass"]


def test_amplification_law_explicit(binary):
    act, ball = _action(binary, 4)
    rng = random.Random(11)
    for _ in range(20):
        f, g = rng.choice(ball), rng.choice(ball)
        base = sofic.hamming(act.perm(f), act.perm(g))
        for l in (1, 2, 3):
            pw = sofic.amplify(act, l)
            assert pw.hamming_pair(f, g) == 1 - (1 - base) ** l
            if l > 1:
                # recompute on the explicit tuple carrier
                tuples = pw.explicit_tuples()
                moved = sum(
                    1
                    for t in tuples
                    if pw.perm_on_tuple(f, t) != pw.perm_on_tuple(g, t)
                )
                assert Fraction(moved, len(tuples)) == pw.hamming_pair(f, g)


def test_amplify_composes():
    # amplify stacking multiplies the exponent
    sys_ = systems.odometer_system((2,))
    plus = fullgroup.constant_table(sys_, (1,))
    act = sofic.build_theta(sys_, systems.odometer_zero(sys_), 2, [plus])
    assert sofic.amplify(sofic.amplify(act, 2), 3).l == 6


def test_measure_good_sets_perfect_case(binary):
    sys_ = binary["sys"]
    plus = binary["plus"]
    act = sofic.build_theta(sys_, systems.odometer_zero(sys_), 3, [plus])
    q1, q2 = sofic.measure_good_sets(sofic.amplify(act, 2), K=1, l=2)
    assert q1 == 1
    assert 0 <= q2 <= 1


def test_orbit_collision_raises(binary):
    sys_ = binary["sys"]
    with pytest.raises(sofic.OrbitCollisionError):
        sofic.AlmostAction(sys_, [(0, "x"), (0, "x")])


def test_schreier_graph_shape(binary):
    act, _ = _action(binary, 3)
    g = sofic.schreier_graph(act, [binary["plus"]])
    assert len(g.vertices) == 8
    assert len(g.edges) == 8
    assert g.labels == (0,)
