"""Elements of the topological full group as finite cocycle tables.

A :class:`CocycleTable` lists (cylinder pattern, group element) pairs: on each
cylinder the homeomorphism acts by the single group translation attached to
it.  Two pattern algebras are supported exactly:

* odometer prefix cylinders ``(depth, value)`` — a decidable Boolean algebra,
  so composition, inversion, normalization and partition checking are exact;
* edge-constraint cylinders on the coloring orbit — conjunctions of "this
  lattice edge has / does not have color c"; partition validity and table
  equality are certified on a deterministic grid of translates whose radius is
  recorded (orbit-closure membership is not decidable in general).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import groups, systems


class NoMatchingCylinder(Exception):
    pass


class AmbiguousMatch(Exception):
    pass


class TableBudgetError(Exception):
    pass


# -- patterns -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class PrefixPattern:
    """Odometer cylinder: the first ``depth`` digits encode ``value``."""

    depth: int
    value: int

    def __post_init__(self) -> None:
        if self.depth < 0 or not 0 <= self.value < 1 << 64 and self.depth:
            pass  # value range is validated against the bases at use time


FULL = PrefixPattern(0, 0)


def _modulus(sys: systems.SystemContext, depth: int) -> int:
    n = 1
    for i in range(depth):
        n *= sys.base_at(i)
    return n


def _prefix_value(sys: systems.SystemContext, x: systems.OdometerPoint, depth: int) -> int:
    val, mult = 0, 1
    for i in range(depth):
        val += x.digit(i) * mult
        mult *= sys.base_at(i)
    return val


def _prefix_matches(sys, pat: PrefixPattern, x) -> bool:
    return _prefix_value(sys, x, pat.depth) == pat.value


def _prefix_shift(sys, pat: PrefixPattern, t: int) -> PrefixPattern:
    n = _modulus(sys, pat.depth)
    return PrefixPattern(pat.depth, (pat.value + t) % n)


def _prefix_intersect(sys, a: PrefixPattern, b: PrefixPattern) -> Optional[PrefixPattern]:
    if a.depth > b.depth:
        a, b = b, a
    if b.value % _modulus(sys, a.depth) != a.value:
        return None
    return b


def prefix_pattern_of_digits(sys, digits: Sequence[int]) -> PrefixPattern:
    val, mult = 0, 1
    for i, d in enumerate(digits):
        if not 0 <= d < sys.base_at(i):
            raise ValueError(f"digit {d} invalid at position {i}")
        val += d * mult
        mult *= sys.base_at(i)
    return PrefixPattern(len(digits), val)


@dataclass(frozen=True, order=True)
class EdgePattern:
    """Conjunction of per-edge color constraints on the coloring orbit.

    Each constraint is (edge, mode, payload): mode "eq" fixes the color,
    mode "ne" forbids a tuple of colors.  The empty constraint set is the
    full space.
    """

    constraints: Tuple = ()

    def __post_init__(self) -> None:
        canon = []
        for edge, mode, payload in self.constraints:
            if mode == "eq":
                canon.append((edge, "eq", payload))
            elif mode == "ne":
                canon.append((edge, "ne", tuple(sorted(set(payload)))))
            else:
                raise ValueError(f"bad constraint mode {mode!r}")
        object.__setattr__(self, "constraints", tuple(sorted(canon)))


def _edge_merge(a: EdgePattern, b: EdgePattern) -> Optional[EdgePattern]:
    """Conjunction; None when formally empty."""
    from . import elekmonod

    per_edge: Dict = {}
    for edge, mode, payload in a.constraints + b.constraints:
        eq, ne = per_edge.get(edge, (None, set()))
        if mode == "eq":
            if eq is not None and eq != payload:
                return None
            eq = payload
        else:
            ne |= set(payload)
        per_edge[edge] = (eq, ne)
    out = []
    for edge, (eq, ne) in per_edge.items():
        if eq is not None:
            if eq in ne:
                return None
            out.append((edge, "eq", eq))
        else:
            if set(elekmonod.ALPHABET) <= ne:
                return None
            if ne:
                out.append((edge, "ne", tuple(sorted(ne))))
    return EdgePattern(tuple(out))


def _edge_shift(pat: EdgePattern, t: Tuple[int, int]) -> EdgePattern:
    return EdgePattern(
        tuple((edge.shift(t), mode, payload) for edge, mode, payload in pat.constraints)
    )


def _edge_matches(pat: EdgePattern, x: systems.OrbitPoint) -> bool:
    from . import elekmonod

    q = x.vector
    for edge, mode, payload in pat.constraints:
        c = elekmonod.sigma_color(edge.shift((-q[0], -q[1])))
        if mode == "eq" and c != payload:
            return False
        if mode == "ne" and c in payload:
            return False
    return True


# -- tables ---------------------------------------------------------------


@dataclass(frozen=True)
class CocycleTable:
    system: systems.SystemContext
    parts: Tuple

    def __post_init__(self) -> None:
        norm = []
        for pat, g in self.parts:
            norm.append((pat, groups.normal_form(self.system.group, g)))
        object.__setattr__(self, "parts", tuple(norm))

    def as_json(self):
        out = []
        for pat, g in self.parts:
            if isinstance(pat, PrefixPattern):
                pj = {"type": "prefix", "depth": pat.depth, "value": pat.value}
            else:
                pj = {
                    "type": "edges",
                    "constraints": [
                        {
                            "edge": [list(e.base), e.orient],
                            "mode": mode,
                            "payload": payload if mode == "eq" else list(payload),
                        }
                        for e, mode, payload in pat.constraints
                    ],
                }
            out.append({"pattern": pj, "element": list(g)})
        return {"parts": out}


def identity_table(sys: systems.SystemContext) -> CocycleTable:
    e = groups.identity(sys.group)
    if sys.kind == systems.ODOMETER:
        return CocycleTable(sys, ((FULL, e),))
    return CocycleTable(sys, ((EdgePattern(), e),))


def constant_table(sys: systems.SystemContext, g) -> CocycleTable:
    if sys.kind == systems.ODOMETER:
        return CocycleTable(sys, ((FULL, g),))
    return CocycleTable(sys, ((EdgePattern(), g),))


def digit_swap_table(sys: systems.SystemContext) -> CocycleTable:
    """Exchange the two depth-1 cylinders of a binary odometer (an involution)."""
    if sys.kind != systems.ODOMETER or sys.base_at(0) != 2:
        raise systems.SystemKindError("digit swap needs a binary first digit")
    return CocycleTable(
        sys,
        ((PrefixPattern(1, 0), (1,)), (PrefixPattern(1, 1), (-1,))),
    )


def _matches(sys, pat, x) -> bool:
    if isinstance(pat, PrefixPattern):
        return _prefix_matches(sys, pat, x)
    return _edge_matches(pat, x)


def evaluate(t: CocycleTable, x):
    hits = [(pat, g) for pat, g in t.parts if _matches(t.system, pat, x)]
    if not hits:
        raise NoMatchingCylinder(f"no cylinder of the table matches {x!r}")
    if len({g for _, g in hits}) > 1:
        raise AmbiguousMatch(f"point {x!r} matches parts with distinct elements")
    return systems.translate(t.system, x, hits[0][1])


def cocycle_at(t: CocycleTable, x):
    """The unique group element the table applies at x."""
    hits = [g for pat, g in t.parts if _matches(t.system, pat, x)]
    if not hits:
        raise NoMatchingCylinder(f"no cylinder of the table matches {x!r}")
    if len(set(hits)) > 1:
        raise AmbiguousMatch(f"point {x!r} matches parts with distinct elements")
    return hits[0]


def compose(a: CocycleTable, b: CocycleTable, part_budget: int = 20_000) -> CocycleTable:
    """Table for a o b (apply b, then a), by cylinder refinement."""
    if a.system != b.system:
        raise ValueError("tables live on different systems")
    sys = a.system
    grp = sys.group
    parts = []
    for q_pat, h in b.parts:
        for p_pat, g in a.parts:
            if isinstance(q_pat, PrefixPattern):
                pulled = _prefix_shift(sys, p_pat, -h[0])
                r = _prefix_intersect(sys, q_pat, pulled)
            else:
                pulled = _edge_shift(p_pat, (-h[0], -h[1]))
                r = _edge_merge(q_pat, pulled)
            if r is not None:
                parts.append((r, groups.multiply(grp, g, h)))
            if len(parts) > part_budget:
                raise TableBudgetError("composition exceeded the part budget")
    return normalize(CocycleTable(sys, tuple(parts)))


def inverse(t: CocycleTable) -> CocycleTable:
    sys = t.system
    grp = sys.group
    parts = []
    for pat, g in t.parts:
        if isinstance(pat, PrefixPattern):
            image = _prefix_shift(sys, pat, g[0])
        else:
            image = _edge_shift(pat, g)
        parts.append((image, groups.inverse(grp, g)))
    return normalize(CocycleTable(sys, tuple(parts)))


def normalize(t: CocycleTable) -> CocycleTable:
    """Canonical form: drop empty parts, merge sibling prefix cylinders with
    equal elements, sort parts canonically."""
    sys = t.system
    if all(isinstance(p, PrefixPattern) for p, _ in t.parts):
        by_elem: Dict = {}
        for pat, g in t.parts:
            by_elem.setdefault(g, set()).add(pat)
        out = []
        for g, pats in by_elem.items():
            pats = set(pats)
            changed = True
            while changed:
                changed = False
                for pat in sorted(pats):
                    if pat.depth == 0:
                        continue
                    k = pat.depth
                    base = sys.base_at(k - 1)
                    nk1 = _modulus(sys, k - 1)
                    stem = pat.value % nk1
                    siblings = {PrefixPattern(k, stem + j * nk1) for j in range(base)}
                    if siblings <= pats:
                        pats -= siblings
                        pats.add(PrefixPattern(k - 1, stem))
                        changed = True
                        break
            out.extend((p, g) for p in pats)
        out.sort(key=lambda pg: (pg[0].depth, pg[0].value))
        return CocycleTable(sys, tuple(out))
    # edge patterns: deduplicate identical parts and sort canonically
    seen = sorted(set(t.parts), key=lambda pg: (pg[0].constraints, pg[1]))
    return CocycleTable(sys, tuple(seen))


def table_key(t: CocycleTable):
    """Hashable canonical key of a normalized table."""
    n = normalize(t)
    return (n.system.kind, n.parts)


def verify_partition(t: CocycleTable, grid_radius: int = 3) -> dict:
    """Check that the parts' cylinders are disjoint and cover the space.

    Exact for prefix-structured tables; certified on the deterministic grid of
    translates (radius recorded) for the coloring orbit.
    """
    sys = t.system
    if all(isinstance(p, PrefixPattern) for p, _ in t.parts):
        depth = max((p.depth for p, _ in t.parts), default=0)
        n = _modulus(sys, depth)
        counts = [0] * n
        for pat, _ in t.parts:
            step = _modulus(sys, pat.depth)
            for v in range(pat.value, n, step):
                counts[v] += 1
        ok = all(c == 1 for c in counts)
        return {"exact": True, "ok": ok, "depth": depth}
    hits_ok = True
    for i in range(-grid_radius, grid_radius + 1):
        for j in range(-grid_radius, grid_radius + 1):
            x = systems.OrbitPoint((i, j))
            hits = sum(1 for pat, _ in t.parts if _matches(sys, pat, x))
            if hits != 1:
                hits_ok = False
    return {"exact": False, "ok": hits_ok, "grid_radius": grid_radius}


def open_support(t: CocycleTable) -> List:
    """Patterns moved by the table.  Only for systems declared free on the
    represented points (odometer structurally; the coloring orbit by the
    declared-freeness convention, which is recorded in the result)."""
    if t.system.kind not in (systems.ODOMETER, systems.ELEK_MONOD):
        raise ValueError("support requires a system declared free")
    e = groups.identity(t.system.group)
    n = normalize(t)
    return [pat for pat, g in n.parts if g != e]


def grid_signature(t: CocycleTable, radius: int = 3):
    """Deterministic evaluation signature on the grid of translates."""
    sig = []
    for i in range(-radius, radius + 1):
        for j in range(-radius, radius + 1):
            sig.append(cocycle_at(t, systems.OrbitPoint((i, j))))
    return tuple(sig)


def _dedup_key(t: CocycleTable, grid_radius: int):
    if t.system.kind == systems.ELEK_MONOD:
        return grid_signature(t, grid_radius)
    return table_key(t)


def subgroup_ball(
    T: Sequence[CocycleTable],
    radius: int,
    cap: int = 100_000,
    grid_radius: int = 3,
) -> List[CocycleTable]:
    """All normalized products of at most ``radius`` generators.

    Deduplication is by normal form (odometer) or by the deterministic grid
    signature (coloring orbit — a certified-distinctness lower bound).
    """
    if not T:
        raise ValueError("empty generator list")
    sys = T[0].system
    gens = []
    for t in T:
        gens.append(normalize(t))
        gens.append(inverse(t))
    ident = identity_table(sys)
    seen = {_dedup_key(ident, grid_radius): ident}
    frontier = [ident]
    for _ in range(radius):
        nxt = []
        for t in frontier:
            for g in gens:
                prod = compose(g, t)
                key = _dedup_key(prod, grid_radius)
                if key not in seen:
                    seen[key] = prod
                    nxt.append(prod)
                    if len(seen) > cap:
                        raise TableBudgetError("ball enumeration exceeded cap")
        frontier = nxt
    return list(seen.values())


def uniform_partition(T: Sequence[CocycleTable], radius: int, grid_radius: int = 3):
    """Common refinement of all ball tables plus the certified constant map.

    Returns (patterns, mapping) where mapping[table_key][part_index] is the
    single group element that ball element applies on the part.
    """
    ball = subgroup_ball(T, radius, grid_radius=grid_radius)
    sys = T[0].system
    if sys.kind == systems.ODOMETER:
        depth = max(
            (p.depth for t in ball for p, _ in t.parts), default=0
        )
        n = _modulus(sys, depth)
        patterns = [PrefixPattern(depth, v) for v in range(n)]
        mapping = {}
        for t in ball:
            row = []
            for pat in patterns:
                elems = {
                    g
                    for p, g in t.parts
                    if _prefix_intersect(sys, p, pat) is not None
                }
                if len(elems) != 1:
                    raise AmbiguousMatch(f"part {pat} not constant for a ball table")
                row.append(next(iter(elems)))
            mapping[table_key(t)] = tuple(row)
        return patterns, mapping
    # coloring orbit: conjunction refinement with per-table element tracking
    parts = [(EdgePattern(), {})]
    for t in ball:
        key = table_key(t)
        new_parts = []
        for pat, assignment in parts:
            for p, g in t.parts:
                merged = _edge_merge(pat, p)
                if merged is not None:
                    a2 = dict(assignment)
                    a2[key] = g
                    new_parts.append((merged, a2))
        parts = new_parts
    patterns = [p for p, _ in parts]
    mapping = {}
    for t in ball:
        key = table_key(t)
        mapping[key] = tuple(a[key] for _, a in parts)
    return patterns, mapping
