import random
from fractions import Fraction

import pytest

from cantorfull import boxes, groups, hyperfinite as H


def path_graph(n, labels=(0,)):
    edges = tuple((i, i + 1, labels[0]) for i in range(n - 1))
    return H.LabeledGraph(tuple(range(n)), edges)


def random_perm_graph(rng, n, n_labels):
    edges = []
    for lab in range(n_labels):
        perm = list(range(n))
        rng.shuffle(perm)
        edges.extend((i, perm[i], lab) for i in range(n))
    return H.LabeledGraph(tuple(range(n)), tuple(edges))


def chunk_blocks(vertices, K):
    vs = sorted(vertices)
    return [frozenset(vs[i : i + K]) for i in range(0, len(vs), K)]


def test_proper_labeling_enforced():
    with pytest.raises(ValueError):
        H.LabeledGraph((0, 1), ((0, 1, "a"), (0, 0, "a")))


def test_verify_certificate_path8():
    G = path_graph(8)
    cert = H.verify_certificate(G, chunk_blocks(G.vertices, 4), 4, Fraction(1, 4))
    assert cert.crossing_edges == 1
    assert cert.fraction == Fraction(1, 8)


def test_verify_certificate_errors():
    G = path_graph(8)
    with pytest.raises(H.NotAPartitionError):
        H.verify_certificate(G, [frozenset({0, 1})], 4, 1)
    with pytest.raises(H.BlockSizeError):
        H.verify_certificate(G, [frozenset(range(8))], 4, 1)
    with pytest.raises(H.CrossingFractionError):
        H.verify_certificate(G, chunk_blocks(G.vertices, 1), 1, Fraction(1, 100))


def test_split_connected_preserves_crossing():
    G = path_graph(9)
    blocks = [frozenset({0, 1, 2, 8}), frozenset({3, 4, 5, 6, 7})]
    cert = H.verify_certificate(G, blocks, 5, Fraction(1, 2))
    split = H.split_connected(cert)
    assert split.crossing_edges == cert.crossing_edges
    assert len(split.blocks) == 3  # {0,1,2} | {8} | {3..7}


def test_power_bound_dominates_explicit():
    G = path_graph(8)
    cert = H.verify_certificate(G, chunk_blocks(G.vertices, 4), 4, Fraction(1, 4))
    bound = H.power_certificate(cert, 2, bound_only=True)
    assert bound.fraction_bound == Fraction(17, 64)
    explicit = H.power_certificate(cert, 2)
    assert explicit.fraction == Fraction(13, 64)
    assert explicit.fraction <= bound.fraction_bound


def test_certificate_algebra_random():
    rng = random.Random(3)
    for trial in range(50):
        n = rng.randrange(6, 16)
        G = random_perm_graph(rng, n, rng.randrange(1, 3))
        K = rng.randrange(2, 5)
        blocks = chunk_blocks(G.vertices, K)
        crossing = H.count_crossing(G, blocks)
        eps = Fraction(crossing, n) + 1
        cert = H.verify_certificate(G, blocks, K, eps)

        # restriction never increases crossing
        kept = tuple(e for e in G.edges if rng.random() < 0.7)
        sub = H.LabeledGraph(G.vertices, kept)
        assert H.restrict_certificate(cert, sub).crossing_edges <= crossing

        # union fraction is the average
        u = H.union_certificate([cert, cert])
        assert u.fraction == cert.fraction

        # shrink transport obeys the |V|/|V'| inflation bound
        keep = sorted(rng.sample(range(n), n - 2))
        keep_set = set(keep)
        sub_edges = tuple(
            (a, b, lab) for a, b, lab in G.edges if a in keep_set and b in keep_set
        )
        G_small = H.LabeledGraph(tuple(keep), sub_edges)
        d = max(G.degree_bound(), 1)
        small = H.transport_certificate(cert, G_small, d)
        assert small.fraction <= cert.fraction * Fraction(n, n - 2)

        # enlarge transport obeys the additive degree bound
        G_big = H.LabeledGraph(tuple(range(n + 2)), G.edges)
        big = H.transport_certificate(cert, G_big, d)
        assert big.fraction <= cert.fraction + Fraction(d * 2, n + 2)

        # power bound dominates the explicit power when affordable
        if n**2 <= 400:
            pb = H.power_certificate(cert, 2, bound_only=True)
            pe = H.power_certificate(cert, 2)
            assert pe.fraction <= pb.fraction_bound

        # component refinement never changes the crossing count
        assert H.split_connected(cert).crossing_edges == crossing


def test_quasitile_spec_example_grid():
    ctx = groups.int_vector_context(2)
    A = boxes.Box.cube(2, 1, 32)
    tiling = H.quasitile(ctx, A, [boxes.Box.cube(2, 1, 4)], Fraction(1, 4), grid_first=True)
    assert tiling.coverage == 1
    assert len(tiling.exact_tiles) == 64


def test_quasitile_lex_greedy_still_certifies():
    ctx = groups.int_vector_context(2)
    A = boxes.Box.cube(2, 1, 32)
    tiling = H.quasitile(ctx, A, [boxes.Box.cube(2, 1, 4)], Fraction(1, 4))
    assert tiling.coverage >= Fraction(3, 4)
    # exact tiles disjoint and above the (1-eps) threshold: re-verified
    H.verify_quasitiling(tiling, frozenset(A.members()))


def test_quasitile_greedy_failure():
    ctx = groups.int_vector_context(2)
    A = boxes.Box.cube(2, 1, 5)
    with pytest.raises(H.GreedyFailure):
        H.quasitile(ctx, A, [boxes.Box.cube(2, 1, 4)], Fraction(1, 10))


def test_tile_tower_z_half():
    ctx = groups.int_vector_context(1)
    tower = H.tile_tower(ctx, sorted(ctx.generators), Fraction(1, 2))
    assert tower.complete and len(tower.tiles) == tower.n_target == 3
    sizes = [t.size() for t in tower.tiles]
    assert sizes[0] == 3
    for ratio, prev in zip(tower.ratios, tower.tiles):
        assert ratio <= Fraction(1, 2) / (16 * prev.size() ** 2)
    H.verify_tile_tower(tower.tiles, tower.ratios, Fraction(1, 2))


def test_tile_tower_budget_partial():
    ctx = groups.int_vector_context(2)
    tower = H.tile_tower(ctx, sorted(ctx.generators), Fraction(1, 10), digit_budget=100)
    assert not tower.complete
    assert len(tower.tiles) >= 2
    H.verify_tile_tower(tower.tiles, tower.ratios, Fraction(1, 10))
    with pytest.raises(boxes.EnumerationBudgetError):
        H.tile_tower(
            ctx, sorted(ctx.generators), Fraction(1, 10), digit_budget=100, allow_partial=False
        )


def test_folner_graph_partition_example():
    ctx = groups.int_vector_context(2)
    S = [tuple(v) for v in ctx.generators]
    A = boxes.Box.cube(2, 1, 64)
    tiling = H.quasitile(ctx, A, [boxes.Box.cube(2, 1, 8)], Fraction(1, 4), grid_first=True)
    cert = H.folner_graph_partition(ctx, A, S, tiling, Fraction(1, 2))
    assert cert.fraction < Fraction(1, 2)
    assert max(len(b) for b in cert.blocks) <= cert.K == 64


def test_schedule_exact_sqrt_comparison():
    sched = H.folner_partition_schedule(Fraction(1, 2), 3)
    assert sched["rational"] == Fraction(1, 60)
    assert H.schedule_satisfied(Fraction(1, 60), sched)
    assert not H.schedule_satisfied(Fraction(1, 2), sched)
