from fractions import Fraction

import pytest

from cantorfull import elekmonod, fullgroup, systems


def test_swap_is_involution(binary):
    swap = binary["swap"]
    square = fullgroup.compose(swap, swap)
    assert fullgroup.table_key(square) == fullgroup.table_key(
        fullgroup.identity_table(binary["sys"])
    )


def test_inverse_composes_to_identity(binary):
    for t in (binary["plus"], binary["swap"]):
        prod = fullgroup.compose(fullgroup.inverse(t), t)
        assert fullgroup.table_key(prod) == fullgroup.table_key(
            fullgroup.identity_table(binary["sys"])
        )


def test_evaluate_matches_translate(binary):
    sys_ = binary["sys"]
    swap = binary["swap"]
    x0 = systems.odometer_from_int(sys_, 0, 3)  # digit0 = 0
    x1 = systems.odometer_from_int(sys_, 1, 3)  # digit0 = 1
    assert fullgroup.evaluate(swap, x0) == systems.translate(sys_, x0, (1,))
    assert fullgroup.evaluate(swap, x1) == systems.translate(sys_, x1, (-1,))
    assert fullgroup.cocycle_at(swap, x0) == (1,)
    assert fullgroup.cocycle_at(swap, x1) == (-1,)


def test_prefix_partition_verifies(binary):
    swap = binary["swap"]
    rep = fullgroup.verify_partition(swap)
    assert rep["exact"] and rep["ok"]
    bad = fullgroup.CocycleTable(
        binary["sys"],
        ((fullgroup.PrefixPattern(1, 0), (1,)), (fullgroup.PrefixPattern(1, 0), (-1,))),
    )
    rep = fullgroup.verify_partition(bad)
    assert not rep["ok"]


def test_subgroup_ball_sizes(binary):
    gens = [binary["plus"], binary["swap"]]
    assert len(fullgroup.subgroup_ball(gens, 1)) == 4
    assert len(fullgroup.subgroup_ball(gens, 2)) == 10


def test_uniform_partition_constancy(binary):
    gens = [binary["swap"], binary["plus"]]
    patterns, mapping = fullgroup.uniform_partition(gens, 2)
    assert len(patterns) == 2
    ball = fullgroup.subgroup_ball(gens, 2)
    assert set(mapping) == {fullgroup.table_key(t) for t in ball}
    # each ball element is constant on each part: re-check by evaluation
    sys_ = binary["sys"]
    for t in ball:
        row = mapping[fullgroup.table_key(t)]
        for pat, g in zip(patterns, row):
            for tail in range(4):
                k = pat.value + tail * 2**pat.depth
                x = systems.odometer_from_int(sys_, k, pat.depth + 2)
                assert fullgroup.cocycle_at(t, x) == g


def test_compose_is_cocycle_product(binary):
    sys_ = binary["sys"]
    prod = fullgroup.compose(binary["swap"], binary["plus"])
    for k in range(8):
        x = systems.odometer_from_int(sys_, k, 5)
        expected = fullgroup.evaluate(binary["swap"], fullgroup.evaluate(binary["plus"], x))
        assert fullgroup.evaluate(prod, x) == expected


def test_edge_tables_involution():
    tA = elekmonod.involution_table("A")
    sq = fullgroup.compose(tA, tA)
    for i in range(-3, 4):
        for j in range(-3, 4):
            x = systems.OrbitPoint((i, j))
            assert fullgroup.evaluate(sq, x) == x


def test_edge_ball_commuting_letters():
    # A and B act on disjoint vertical columns, so they generate (Z/2)^2
    tA = elekmonod.involution_table("A")
    tB = elekmonod.involution_table("B")
    assert len(fullgroup.subgroup_ball([tA, tB], 2, grid_radius=8)) == 4


def test_edge_ball_distinct_lower_bound():
    tables = [elekmonod.involution_table(x) for x in "ABEF"]
    ball = fullgroup.subgroup_ball(tables, 2)
    assert len(ball) >= 10  # grid-certified distinctness is a lower bound


def test_grid_signature_separates():
    tA = elekmonod.involution_table("A")
    tB = elekmonod.involution_table("B")
    assert fullgroup.grid_signature(tA) != fullgroup.grid_signature(tB)


def test_evaluate_errors(binary):
    sys_ = binary["sys"]
    partial = fullgroup.CocycleTable(sys_, ((fullgroup.PrefixPattern(1, 0), (1,)),))
    x1 = systems.odometer_from_int(sys_, 1, 3)
    with pytest.raises(fullgroup.NoMatchingCylinder):
        fullgroup.evaluate(partial, x1)


def test_as_json_schema(binary):
    doc = binary["swap"].as_json()
    assert "parts" in doc and len(doc["parts"]) == 2
