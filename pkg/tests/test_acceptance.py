"""End-to-end acceptance suite: twelve exact, desk-scale checks with wall-clock
budgets.  Every asserted comparison is integer or Fraction arithmetic."""

import itertools
import random
import time
from fractions import Fraction

from cantorfull import (
    boxes,
    elekmonod as em,
    folner,
    fullgroup,
    groups,
    hyperfinite as H,
    lef,
    sofic,
    systems,
)


class Stopwatch:
    def __init__(self, budget_s):
        self.budget = budget_s
        self.start = time.monotonic()

    def check(self):
        elapsed = time.monotonic() - self.start
        assert elapsed < self.budget, f"over budget: {elapsed:.1f}s >= {self.budget}s"


def test_01_proper_coloring_large_region():
    sw = Stopwatch(5)
    ok, violation = em.check_proper((-256, 256, -256, 256))
    assert ok and violation is None
    sw.check()


def test_02_label_density():
    sw = Stopwatch(10)
    LO, HI = -(10**5), 10**5
    for n in range(1, 9):
        step = 2 ** (n + 1)
        # points labeled n are the residue class 2^n mod 2^(n+1)
        start = LO + ((2**n - LO) % step)
        marks = list(range(start, HI + 1, step))
        for m in marks:
            assert em.label(abs(m)) == n
        # consecutive labeled points are exactly 2^(n+1) apart, so every
        # window of that length contains one
        assert all(b - a == step for a, b in zip(marks, marks[1:]))
        assert marks[0] - LO < step and HI - marks[-1] < step
    sw.check()


def test_03_same_pattern_lemma():
    sw = Stopwatch(30)
    for n in range(1, 6):
        assert em.same_pattern_check(n, range(0, 51))
    sw.check()


def test_04_entropy_bound_and_decay():
    sw = Stopwatch(300)
    rows = em.entropy_table(4)  # h window 2^(n+6), exact per-column periods
    for r in rows:
        assert r["count"] <= r["bound"]
        assert r["h_range"][1] >= 2 ** (r["n"] + 6)
    logs = [r["normalized_log_count"] for r in rows]
    assert logs[1] > logs[2] > logs[3]  # strictly decreasing for n = 2..4
    sw.check()


def test_05_involutions_and_free_words():
    sw = Stopwatch(120)
    pts = [(i, j) for i in range(-50, 50) for j in range(-50, 50)]
    assert len(pts) == 10**4
    for letter in em.ALPHABET:
        for q in pts:
            assert em.apply_word(em.apply_word(q, letter), letter) == q
    words = [
        "".join(w)
        for length in range(1, 7)
        for w in itertools.product(em.WORD_LETTERS, repeat=length)
        if all(a != b for a, b in zip(w, w[1:]))
    ]
    assert len(words) == 189
    for word in words:
        res = em.word_acts_nontrivially(word, 32)
        assert res is not None, word
        assert em.apply_word(res["witness"], word) == res["image"]
        assert res["witness"] != res["image"]
    sw.check()


def test_06_sofic_checker(binary):
    sw = Stopwatch(60)
    ball = fullgroup.subgroup_ball([binary["plus"], binary["swap"]], 2)
    act = sofic.build_theta(
        binary["sys"], systems.odometer_zero(binary["sys"]), 12, ball
    )
    rep = sofic.check_injective_almost_action(act, ball, Fraction(1, 2**7))
    cond = rep["conditions"]
    assert cond["mult_defect"] <= Fraction(1, 2**7)
    assert cond["min_displacement"] >= Fraction(1, 4)
    assert cond["identity_ok"]
    sw.check()


def test_07_amplification_law(binary):
    ball = fullgroup.subgroup_ball([binary["plus"], binary["swap"]], 2)
    act = sofic.build_theta(
        binary["sys"], systems.odometer_zero(binary["sys"]), 5, ball
    )
    rng = random.Random(2026)
    pairs = [(rng.choice(ball), rng.choice(ball)) for _ in range(100)]
    for f, g in pairs:
        d = sofic.hamming(act.perm(f), act.perm(g))
        for l in (1, 2, 3):
            assert sofic.amplify(act, l).hamming_pair(f, g) == 1 - (1 - d) ** l


def test_08_quasi_tiler_pipeline():
    sw = Stopwatch(120)
    ctx = groups.int_vector_context(2)
    S = [tuple(v) for v in ctx.generators]
    # symbolic tile tower whose realized steps re-verify exactly
    tower = H.tile_tower(ctx, S, Fraction(1, 10), digit_budget=40_000)
    assert len(tower.tiles) >= 3
    H.verify_tile_tower(tower.tiles, tower.ratios, Fraction(1, 10))
    # quasi-tiling of [1,512]^2 with re-verified output conditions
    A = boxes.Box.cube(2, 1, 512)
    tiling = H.quasitile(
        ctx, A, [boxes.Box.cube(2, 1, 64)], Fraction(1, 10), grid_first=True
    )
    A_set = frozenset(A.members())
    H.verify_quasitiling(tiling, A_set)
    assert tiling.coverage >= 1 - Fraction(1, 10)
    cert = H.folner_graph_partition(ctx, A, S, tiling, Fraction(1, 10))
    assert cert.fraction < Fraction(1, 10)
    assert cert.fraction == Fraction(7, 128)
    # recount crossings directly
    assert cert.crossing_edges == H.count_crossing(cert.graph, cert.blocks)
    sw.check()


def test_09_folner_extraction_with_bounds(binary):
    sw = Stopwatch(60)
    sys_ = binary["sys"]
    plus = binary["plus"]
    T = [plus]
    eps = Fraction(1, 2)
    act = sofic.build_theta(sys_, systems.odometer_zero(sys_), 6, T)
    graph = sofic.schreier_graph(act, T)
    perm = act.perm(plus)
    # cut the cyclic orbit into intervals of length 4
    blocks, seen, i = [], set(), 0
    cur = []
    while len(seen) < len(perm):
        if i in seen:
            i = min(set(range(len(perm))) - seen)
        cur.append(i)
        seen.add(i)
        if len(cur) == 4:
            blocks.append(frozenset(cur))
            cur = []
        i = perm[i]
    if cur:
        blocks.append(frozenset(cur))
    cert = H.verify_certificate(graph, blocks, 4, eps)
    report = folner.extract_folner_set(cert, act, T, 2, eps)
    assert report.defect <= eps
    bounds = folner.folner_bound_zd(1, 1, [(0,), (1,), (-1,)], 2, eps)
    assert bounds["bound_statement"] == 480 and bounds["bound_proof"] == 960
    assert report.size <= bounds["bound_proof"]
    sw.check()


def test_10_recursion_tables(z1):
    sw = Stopwatch(60)
    S = sorted(z1.generators)
    phi = folner.phi_recursion(z1, S, Fraction(1, 2), 3)
    assert phi[0]["Phi"] == phi[0]["phi"] == 3
    assert [r["Phi"] for r in phi] == [3, 6912, 84623481964800]
    psi = folner.psi_tilde_recursion(z1, S, Fraction(1, 2), 3)
    assert psi[0]["Psi"] == 3
    assert [r["Psi"] for r in psi] == [3, 6913, 84574538367233]
    # every later oracle value carries a witness that re-verifies
    for row in phi[1:]:
        assert row["witness"].startswith("Box")
    sw.check()


def test_11_lef_conditions(binary):
    sw = Stopwatch(60)
    res = lef.minimal_model_size((2,), [binary["plus"], binary["swap"]], 2, 16)
    assert res["minimal_n"] is not None and res["minimal_n"] <= 16
    passing = next(h for h in res["history"] if h["pass"])
    assert passing["mult_exact"] and passing["mult_worst"] == 0
    assert all(d > 0 for d in passing["displacements"])
    sw.check()


def test_12_certificate_algebra_random():
    rng = random.Random(12)

    def perm_graph(n, n_labels):
        edges = []
        for lab in range(n_labels):
            p = list(range(n))
            rng.shuffle(p)
            edges.extend((i, p[i], lab) for i in range(n))
        return H.LabeledGraph(tuple(range(n)), tuple(edges))

    for _ in range(50):
        n = rng.randrange(6, 14)
        G = perm_graph(n, rng.randrange(1, 3))
        K = rng.randrange(2, 5)
        vs = sorted(G.vertices)
        blocks = [frozenset(vs[i : i + K]) for i in range(0, n, K)]
        crossing = H.count_crossing(G, blocks)
        cert = H.verify_certificate(G, blocks, K, Fraction(crossing, n) + 1)

        assert H.split_connected(cert).crossing_edges == crossing

        kept = tuple(e for e in G.edges if rng.random() < 0.8)
        assert (
            H.restrict_certificate(cert, H.LabeledGraph(G.vertices, kept)).crossing_edges
            <= crossing
        )

        u = H.union_certificate([cert, cert])
        assert u.fraction == cert.fraction

        d = max(G.degree_bound(), 1)
        keep = sorted(rng.sample(range(n), n - 2))
        ks = set(keep)
        sub = H.LabeledGraph(
            tuple(keep),
            tuple(e for e in G.edges if e[0] in ks and e[1] in ks),
        )
        assert H.transport_certificate(cert, sub, d).fraction <= cert.fraction * Fraction(
            n, n - 2
        )
        big = H.LabeledGraph(tuple(range(n + 3)), G.edges)
        assert H.transport_certificate(cert, big, d).fraction <= cert.fraction + Fraction(
            3 * d, n + 3
        )

        bound = H.power_certificate(cert, 2, bound_only=True)
        if n**2 <= 200:
            assert H.power_certificate(cert, 2).fraction <= bound.fraction_bound
