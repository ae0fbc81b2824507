"""Finite periodic models of the odometer and exact local embeddings.

A :class:`FiniteModel` is the set of the N = b_0 ... b_{n-1} genuine odometer
points with a fixed number of free digits and canonical zero tail, together
with the cyclic shift action k -> k + g (mod N).  Cocycle tables are mapped to
permutations of the model pointwise through their cocycle values; because the
shift is a true action of Z/N and table cylinders only read finitely many
digits, the resulting maps are exactly multiplicative once n is large enough,
which is precisely the local-embedding condition being verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import fullgroup, groups, systems
from .sofic import hamming


class CocycleOutsideModelError(Exception):
    pass


@dataclass(frozen=True)
class FiniteModel:
    system: systems.SystemContext
    n: int
    points: Tuple[systems.OdometerPoint, ...]
    quality: Fraction
    modeled_shifts: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.points)

    def beta_perm(self, g: int) -> Tuple[int, ...]:
        """The cyclic-shift permutation k -> k + g (mod N)."""
        N = self.size
        return tuple((k + g) % N for k in range(N))


def odometer_finite_model(bases: Sequence[int], n: int) -> FiniteModel:
    if n < 1:
        raise ValueError("n must be >= 1")
    sys = systems.odometer_system(bases)
    N = 1
    for i in range(n):
        N *= sys.base_at(i)
    points = tuple(systems.odometer_from_int(sys, k, n) for k in range(N))
    return FiniteModel(
        system=sys,
        n=n,
        points=points,
        quality=Fraction(1, 2**n),
        modeled_shifts=(0, 1, -1),
    )


def _metric_radius_for(eps: Fraction, n: int) -> int:
    r = 1
    while Fraction(1, 2**r) > eps:
        r += 1
    return max(r + 2, n + 2)


def check_residually_finite(
    model: FiniteModel,
    sample_points: Sequence[systems.OdometerPoint],
    F: Sequence[int],
    eps,
) -> dict:
    """Both finite-model conditions on a sample: the model is eps-dense, and
    the true action and the cyclic shift agree up to eps on model points."""
    eps = Fraction(eps)
    sys = model.system
    radius = _metric_radius_for(eps, model.n)
    density_worst = Fraction(0)
    for x in sample_points:
        d = min(systems.metric(sys, x, z, radius) for z in model.points)
        density_worst = max(density_worst, d)
    approx_worst = Fraction(0)
    for k, z in enumerate(model.points):
        for s in F:
            true_image = systems.translate(sys, z, (s,))
            shift_image = model.points[(k + s) % model.size]
            d = systems.metric(sys, true_image, shift_image, radius)
            approx_worst = max(approx_worst, d)
    density_ok = density_worst <= eps
    approx_ok = approx_worst <= eps
    return {
        "epsilon": eps,
        "density_ok": density_ok,
        "density_worst": density_worst,
        "approx_ok": approx_ok,
        "approx_worst": approx_worst,
        "pass": density_ok and approx_ok,
    }


def freeness_check(model: FiniteModel, radius: int = 0) -> dict:
    """Model points are pairwise distinct and, structurally, no nonzero shift
    in the search ball fixes any of them."""
    distinct = len(set(model.points)) == model.size
    moved = True
    for g in range(1, radius + 1):
        for z in model.points:
            if systems.translate(model.system, z, (g,)) == z:
                moved = False
            if systems.translate(model.system, z, (-g,)) == z:
                moved = False
    return {
        "structural": True,
        "distinct": distinct,
        "no_fixed_points": moved,
        "ok": distinct and moved,
    }


def build_lef_map(
    ball: Sequence[fullgroup.CocycleTable], model: FiniteModel
) -> Dict:
    """Map each table to the model permutation k -> k + cocycle(z_k) (mod N)."""
    out: Dict = {}
    N = model.size
    for table in ball:
        perm: List[int] = []
        for k, z in enumerate(model.points):
            g = fullgroup.cocycle_at(table, z)
            perm.append((k + g[0]) % N)
        if sorted(perm) != list(range(N)):
            raise CocycleOutsideModelError(
                f"table {table!r} does not act by a permutation on the model"
            )
        out[fullgroup.table_key(table)] = tuple(perm)
    ident = fullgroup.identity_table(model.system)
    assert out.get(fullgroup.table_key(ident), tuple(range(N))) == tuple(range(N))
    return out


def check_lef_conditions(
    ball: Sequence[fullgroup.CocycleTable],
    model: FiniteModel,
    eps_threshold,
) -> dict:
    """Condition (1): exact multiplicativity over all ball pairs; condition
    (2): every nontrivial element displaces more than the threshold."""
    eps_threshold = Fraction(eps_threshold)
    theta = build_lef_map(ball, model)
    N = model.size
    ident_key = fullgroup.table_key(fullgroup.identity_table(model.system))
    mult_exact = True
    worst_pair = Fraction(0)
    for f in ball:
        for g in ball:
            pf = theta[fullgroup.table_key(f)]
            pg = theta[fullgroup.table_key(g)]
            prod = fullgroup.compose(f, g)
            p_prod = build_lef_map([prod], model)[fullgroup.table_key(prod)]
            d = hamming(p_prod, tuple(pf[pg[i]] for i in range(N)))
            worst_pair = max(worst_pair, d)
            if d != 0:
                mult_exact = False
    displacements = {}
    disp_ok = True
    for t in ball:
        key = fullgroup.table_key(t)
        if key == ident_key:
            continue
        d = hamming(theta[key], tuple(range(N)))
        displacements[key] = d
        if not d > eps_threshold:
            disp_ok = False
    return {
        "mult_exact": mult_exact,
        "mult_worst": worst_pair,
        "displacements": tuple(sorted(displacements.values())),
        "displacement_ok": disp_ok,
        "pass": mult_exact and disp_ok,
    }


def minimal_model_size(
    bases: Sequence[int],
    generator_tables: Sequence[fullgroup.CocycleTable],
    ball_radius: int,
    max_n: int,
    eps_threshold=Fraction(1, 4),
) -> dict:
    """Smallest digit count n whose model passes both conditions for the
    given ball, with the per-n reports."""
    ball = fullgroup.subgroup_ball(generator_tables, ball_radius)
    history = []
    minimal_n: Optional[int] = None
    for n in range(1, max_n + 1):
        model = odometer_finite_model(bases, n)
        report = check_lef_conditions(ball, model, eps_threshold)
        history.append({"n": n, **report})
        if report["pass"] and minimal_n is None:
            minimal_n = n
    return {
        "minimal_n": minimal_n,
        "ball_size": len(ball),
        "history": history,
    }
