"""Finite almost actions of full-group elements on Folner orbits.

Given a free basepoint x and the box F_n, each cocycle table is turned into a
permutation of the finite orbit piece F_n x: apply the table where the image
stays inside the orbit piece, and match the leftover points to the missed
targets canonically (both sides sorted by carrier index, paired in order).
Diagonal powers are kept lazy: the Hamming distance of a diagonal power obeys
d(f^l, g^l) = 1 - (1 - d(f,g))^l exactly, so all statistics of the power are
exact rational functions of the factor statistics.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import fullgroup, groups, systems


class OrbitCollisionError(Exception):
    """Two Folner translates of the basepoint coincide."""


class BallBudgetError(Exception):
    pass


def hamming(f: Sequence[int], g: Sequence[int]) -> Fraction:
    """Normalized Hamming distance of two functions given as value tuples."""
    if len(f) != len(g):
        raise ValueError("functions live on different carriers")
    if not f:
        raise ValueError("empty carrier")
    return Fraction(sum(1 for a, b in zip(f, g) if a != b), len(f))


class AlmostAction:
    """Permutation assignment on a finite union of tagged orbit points."""

    def __init__(
        self,
        system: systems.SystemContext,
        carrier: Sequence[Tuple[int, object]],
        generator_tables: Sequence[fullgroup.CocycleTable] = (),
        basepoints: Sequence[object] = (),
        n: int = 0,
    ) -> None:
        self.system = system
        self.carrier = tuple(carrier)
        self.index = {p: i for i, p in enumerate(self.carrier)}
        if len(self.index) != len(self.carrier):
            raise OrbitCollisionError("Folner translates of a basepoint collide")
        self.generator_tables = tuple(generator_tables)
        self.basepoints = tuple(basepoints)
        self.n = n
        self.l = 1
        self._perms: Dict = {}
        self._tables: Dict = {}

    @property
    def size(self) -> int:
        return len(self.carrier)

    def identity_perm(self) -> Tuple[int, ...]:
        return tuple(range(self.size))

    def perm(self, table: fullgroup.CocycleTable) -> Tuple[int, ...]:
        key = fullgroup.table_key(table)
        if key in self._perms:
            return self._perms[key]
        images: List[Optional[int]] = []
        for tag, point in self.carrier:
            y = (tag, fullgroup.evaluate(table, point))
            images.append(self.index.get(y))
        hit = {j for j in images if j is not None}
        missed = sorted(set(range(self.size)) - hit)
        leftovers = sorted(i for i, j in enumerate(images) if j is None)
        if len(missed) != len(leftovers):
            raise AssertionError("leftover matching is not balanced")
        for i, j in zip(leftovers, missed):
            images[i] = j
        perm = tuple(images)  # type: ignore[arg-type]
        if sorted(perm) != list(range(self.size)):
            raise AssertionError("assignment is not a permutation")
        self._perms[key] = perm
        self._tables[key] = table
        return perm

    def displacement(self, table: fullgroup.CocycleTable) -> Fraction:
        return hamming(self.perm(table), self.identity_perm())

    def hamming_pair(
        self, f: fullgroup.CocycleTable, g: fullgroup.CocycleTable
    ) -> Fraction:
        return hamming(self.perm(f), self.perm(g))

    def mult_defect_pair(
        self, f: fullgroup.CocycleTable, g: fullgroup.CocycleTable
    ) -> Fraction:
        pf, pg = self.perm(f), self.perm(g)
        composed = tuple(pf[pg[i]] for i in range(self.size))
        return hamming(self.perm(fullgroup.compose(f, g)), composed)

    def identity_ok(self) -> bool:
        ident = fullgroup.identity_table(self.system)
        return self.perm(ident) == self.identity_perm()

    def fixed_indices(self, table: fullgroup.CocycleTable) -> frozenset:
        p = self.perm(table)
        return frozenset(i for i in range(self.size) if p[i] == i)

    def good_mult_indices(
        self, f: fullgroup.CocycleTable, g: fullgroup.CocycleTable
    ) -> frozenset:
        pf, pg = self.perm(f), self.perm(g)
        pfg = self.perm(fullgroup.compose(f, g))
        return frozenset(i for i in range(self.size) if pf[pg[i]] == pfg[i])


def build_theta(
    sys: systems.SystemContext,
    basepoint,
    n: int,
    gamma_set: Sequence[fullgroup.CocycleTable],
    family: str = "dyadic",
) -> AlmostAction:
    """Permutation almost action on the orbit piece F_n . basepoint."""
    return build_theta_multi(sys, [basepoint], n, gamma_set, family=family)


def build_theta_multi(
    sys: systems.SystemContext,
    basepoints: Sequence,
    n: int,
    gamma_set: Sequence[fullgroup.CocycleTable],
    family: str = "dyadic",
) -> AlmostAction:
    """Blockwise almost action on the tagged disjoint union of orbit pieces."""
    F = groups.folner_box(sys.group, n, family=family)
    carrier = []
    for tag, x in enumerate(basepoints):
        block = [(tag, systems.translate(sys, x, s)) for s in F]
        if len(set(block)) != len(block):
            raise OrbitCollisionError(f"orbit of basepoint {tag} is not injective")
        carrier.extend(block)
    action = AlmostAction(
        sys, carrier, generator_tables=gamma_set, basepoints=basepoints, n=n
    )
    for t in gamma_set:
        action.perm(t)
    return action


class PowerAction:
    """Lazy diagonal power of an almost action on carrier^l.

    All Hamming statistics are exact via the power law; explicit tuples are
    enumerated only on demand and below a cap.
    """

    def __init__(self, base: AlmostAction, l: int) -> None:
        if l < 1:
            raise ValueError("power must be >= 1")
        self.base = base
        self.l = l
        self.system = base.system
        self.basepoints = base.basepoints
        self.n = base.n

    @property
    def size(self) -> int:
        return self.base.size**self.l

    def _law(self, d: Fraction) -> Fraction:
        return 1 - (1 - d) ** self.l

    def displacement(self, table) -> Fraction:
        return self._law(self.base.displacement(table))

    def hamming_pair(self, f, g) -> Fraction:
        return self._law(hamming(self.base.perm(f), self.base.perm(g)))

    def mult_defect_pair(self, f, g) -> Fraction:
        return self._law(self.base.mult_defect_pair(f, g))

    def identity_ok(self) -> bool:
        return self.base.identity_ok()

    def perm_on_tuple(self, table, tup: Tuple[int, ...]) -> Tuple[int, ...]:
        p = self.base.perm(table)
        return tuple(p[i] for i in tup)

    def explicit_tuples(self, cap: int = 200_000):
        if self.size > cap:
            raise BallBudgetError(f"carrier power {self.size} exceeds cap {cap}")
        return list(product(range(self.base.size), repeat=self.l))


def amplify(A, l: int):
    """Diagonal power; l = 1 returns the action unchanged."""
    if l == 1:
        return A
    if isinstance(A, PowerAction):
        return PowerAction(A.base, A.l * l)
    return PowerAction(A, l)


def check_injective_almost_action(A, F: Sequence[fullgroup.CocycleTable], eps) -> dict:
    """Injectivity report: multiplicative up to eps, displacement above 1 - eps."""
    eps = Fraction(eps)
    ident_key = fullgroup.table_key(fullgroup.identity_table(A.system))
    mult_defect = Fraction(0)
    for f in F:
        for g in F:
            mult_defect = max(mult_defect, A.mult_defect_pair(f, g))
    nontrivial = [t for t in F if fullgroup.table_key(t) != ident_key]
    min_displacement = min(
        (A.displacement(t) for t in nontrivial), default=Fraction(1)
    )
    identity_ok = A.identity_ok()
    ok = identity_ok and mult_defect <= eps and min_displacement > 1 - eps
    return {
        "n": A.n,
        "l": A.l,
        "basepoints": [repr(b) for b in A.basepoints],
        "conditions": {
            "mult_defect": mult_defect,
            "min_displacement": min_displacement,
            "identity_ok": identity_ok,
        },
        "pass": ok,
    }


def measure_good_sets(A_powered, K: int, l: int, ball_cap: int = 2_000):
    """Exact fractions of l-tuples that are multiplicative (Q1) resp. moved by
    every nontrivial ball element (Q2), for the radius-K ball of the generator
    tables."""
    base = A_powered.base if isinstance(A_powered, PowerAction) else A_powered
    actual_l = A_powered.l if isinstance(A_powered, PowerAction) else 1
    if actual_l != l:
        raise ValueError(f"action has power {actual_l}, not {l}")
    gens = base.generator_tables
    if not gens:
        raise ValueError("action records no generator tables")
    ball = fullgroup.subgroup_ball(gens, K, cap=ball_cap)
    n = base.size
    good = frozenset(range(n))
    for f in ball:
        for g in ball:
            good &= base.good_mult_indices(f, g)
    q1 = Fraction(len(good), n) ** l

    ident_key = fullgroup.table_key(fullgroup.identity_table(base.system))
    fixed_sets = {
        base.fixed_indices(t)
        for t in ball
        if fullgroup.table_key(t) != ident_key
    }
    fixed_sets = [s for s in fixed_sets if s]
    if len(fixed_sets) > 20:
        raise BallBudgetError(
            f"inclusion-exclusion over {len(fixed_sets)} fixed-point sets is out of budget"
        )
    bad = 0
    for r in range(1, len(fixed_sets) + 1):
        for combo in combinations(fixed_sets, r):
            inter = combo[0]
            for s in combo[1:]:
                inter &= s
            bad += (-1) ** (r + 1) * len(inter) ** l
    q2 = Fraction(n**l - bad, n**l)
    return q1, q2


def schreier_graph(A: AlmostAction, T: Sequence[fullgroup.CocycleTable]):
    """Directed T-labeled graph with an edge (x, theta(t)(x)) per generator."""
    from . import hyperfinite

    edges = []
    for label, t in enumerate(T):
        p = A.perm(t)
        for i in range(A.size):
            edges.append((i, p[i], label))
    return hyperfinite.LabeledGraph(tuple(range(A.size)), tuple(edges))
