"""Hyperfiniteness certificates for labeled graphs and quasi-tilings.

A :class:`PartitionCertificate` witnesses that a finite labeled graph can be
cut into blocks of size at most K with few crossing edges.  Certificates can
be transported along the standard closure operations (subgraph, disjoint
union, vertex shrink/enlarge, diagonal power), each time re-verifying the
crossing count exactly.  The module also implements the effective greedy form
of the Ornstein-Weiss quasi-tiling theorem, the construction of tile towers
with exponentially good boundary ratios, and the partition of a Folner box
induced by a quasi-tiling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import boxes, groups


class CertificateError(Exception):
    pass


class NotAPartitionError(CertificateError):
    pass


class BlockSizeError(CertificateError):
    pass


class CrossingFractionError(CertificateError):
    pass


class SubgraphError(CertificateError):
    pass


class HypothesisError(Exception):
    """A stated precondition fails (only raised in strict mode)."""


class GreedyFailure(Exception):
    """The greedy tiler missed the coverage target; carries the fraction."""

    def __init__(self, achieved: Fraction):
        super().__init__(f"greedy coverage only reached {achieved}")
        self.achieved = achieved


@dataclass(frozen=True)
class LabeledGraph:
    """Directed graph with edges (source, target, label), properly labeled:
    no vertex emits two edges with the same label."""

    vertices: Tuple
    edges: Tuple[Tuple[object, object, object], ...]

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        out_labels = set()
        for u, v, label in self.edges:
            if u not in vs or v not in vs:
                raise ValueError(f"edge ({u!r}, {v!r}) leaves the vertex set")
            if (u, label) in out_labels:
                raise ValueError(f"vertex {u!r} emits two edges labeled {label!r}")
            out_labels.add((u, label))

    @property
    def labels(self) -> Tuple:
        return tuple(sorted({label for _, _, label in self.edges}, key=repr))

    def out_map(self, label) -> Dict:
        return {u: v for u, v, lab in self.edges if lab == label}

    def degree_bound(self) -> int:
        deg: Dict = {}
        for u, v, _ in self.edges:
            deg[u] = deg.get(u, 0) + 1
            if v != u:
                deg[v] = deg.get(v, 0) + 1
        return max(deg.values(), default=0)


@dataclass(frozen=True)
class PartitionCertificate:
    graph: LabeledGraph
    blocks: Tuple[FrozenSet, ...]
    K: int
    epsilon: Fraction
    crossing_edges: int
    fraction: Fraction

    def as_json(self):
        return {
            "K": self.K,
            "epsilon": str(self.epsilon),
            "blocks": [sorted(map(repr, b)) for b in self.blocks],
            "crossing_edges": self.crossing_edges,
            "fraction": str(self.fraction),
        }


def _block_id(blocks: Sequence[FrozenSet]) -> Dict:
    owner: Dict = {}
    for i, b in enumerate(blocks):
        for v in b:
            if v in owner:
                raise NotAPartitionError(f"vertex {v!r} appears in two blocks")
            owner[v] = i
    return owner


def count_crossing(G: LabeledGraph, blocks: Sequence[FrozenSet]) -> int:
    owner = _block_id(blocks)
    return sum(1 for u, v, _ in G.edges if owner[u] != owner[v])


def verify_certificate(
    G: LabeledGraph, blocks: Iterable[Iterable], K: int, eps
) -> PartitionCertificate:
    eps = Fraction(eps)
    blocks = tuple(frozenset(b) for b in blocks if b)
    owner = _block_id(blocks)
    if set(owner) != set(G.vertices):
        raise NotAPartitionError("blocks do not cover the vertex set")
    for b in blocks:
        if len(b) > K:
            raise BlockSizeError(f"block of size {len(b)} exceeds K={K}")
    crossing = count_crossing(G, blocks)
    fraction = Fraction(crossing, len(G.vertices))
    if fraction >= eps:
        raise CrossingFractionError(f"crossing fraction {fraction} >= {eps}")
    return PartitionCertificate(G, blocks, K, eps, crossing, fraction)


def split_connected(cert: PartitionCertificate) -> PartitionCertificate:
    """Refine each block into its connected components (undirected, within
    the block); the crossing count is unchanged."""
    G = cert.graph
    adj: Dict = {v: set() for v in G.vertices}
    for u, v, _ in G.edges:
        adj[u].add(v)
        adj[v].add(u)
    new_blocks: List[FrozenSet] = []
    for b in cert.blocks:
        todo = set(b)
        while todo:
            comp = {todo.pop()}
            frontier = list(comp)
            while frontier:
                w = frontier.pop()
                for z in adj[w]:
                    if z in todo:
                        todo.discard(z)
                        comp.add(z)
                        frontier.append(z)
            new_blocks.append(frozenset(comp))
    out = verify_certificate(G, new_blocks, cert.K, cert.epsilon)
    assert out.crossing_edges == cert.crossing_edges
    return out


def restrict_certificate(cert: PartitionCertificate, G_sub: LabeledGraph) -> PartitionCertificate:
    if set(G_sub.vertices) != set(cert.graph.vertices):
        raise SubgraphError("restriction must keep the vertex set")
    if not set(G_sub.edges) <= set(cert.graph.edges):
        raise SubgraphError("edges are not a subset of the original graph")
    out = verify_certificate(G_sub, cert.blocks, cert.K, cert.epsilon)
    assert out.crossing_edges <= cert.crossing_edges
    return out


def union_certificate(certs: Sequence[PartitionCertificate]) -> PartitionCertificate:
    sizes = {len(c.graph.vertices) for c in certs}
    if len(sizes) != 1:
        raise CertificateError("disjoint union requires equal vertex counts")
    vertices = tuple((i, v) for i, c in enumerate(certs) for v in c.graph.vertices)
    edges = tuple(
        ((i, u), (i, v), (i, lab))
        for i, c in enumerate(certs)
        for u, v, lab in c.graph.edges
    )
    blocks = [
        frozenset((i, v) for v in b)
        for i, c in enumerate(certs)
        for b in c.blocks
    ]
    G = LabeledGraph(vertices, edges)
    K = max(c.K for c in certs)
    eps = max(c.epsilon for c in certs)
    out = verify_certificate(G, blocks, K, eps)
    avg = sum((c.fraction for c in certs), Fraction(0)) / len(certs)
    assert out.fraction == avg
    return out


def transport_certificate(
    cert: PartitionCertificate, G_new: LabeledGraph, d: int
) -> PartitionCertificate:
    """Move a certificate to a graph on fewer (shrink) or more (enlarge)
    vertices, with the uniform degree bound d verified."""
    if G_new.degree_bound() > d:
        raise CertificateError(f"degree bound {d} violated")
    old_v = set(cert.graph.vertices)
    new_v = set(G_new.vertices)
    old_edges = set(cert.graph.edges)
    if new_v <= old_v:
        old_pairs = {(a, b) for a, b, _ in old_edges}
        for u, v, _ in G_new.edges:
            if (u, v) not in old_pairs:
                raise SubgraphError("shrunk graph has an edge the original lacks")
        blocks = [b & new_v for b in cert.blocks]
        out = verify_certificate(G_new, blocks, cert.K, cert.epsilon * len(old_v) / len(new_v) + 1)
        bound = cert.fraction * Fraction(len(old_v), len(new_v))
        assert out.fraction <= bound
        return PartitionCertificate(
            G_new, out.blocks, cert.K, cert.epsilon, out.crossing_edges, out.fraction
        )
    if old_v <= new_v:
        for u, v, lab in G_new.edges:
            if u in old_v and v in old_v and (u, v, lab) not in old_edges:
                raise SubgraphError("enlarged graph adds an edge between old vertices")
        extra = new_v - old_v
        blocks = list(cert.blocks) + [frozenset({v}) for v in sorted(extra, key=repr)]
        bound = cert.fraction + Fraction(d * len(extra), len(new_v))
        out = verify_certificate(G_new, blocks, cert.K, bound + 1)
        assert out.fraction <= bound
        return PartitionCertificate(
            G_new, out.blocks, cert.K, cert.epsilon, out.crossing_edges, out.fraction
        )
    raise CertificateError("new vertex set neither contains nor is contained in the old one")


@dataclass(frozen=True)
class PowerBound:
    """Bound-only result of a diagonal power: the crossing fraction of G^l is
    at most `fraction_bound` with blocks of size at most K."""

    K: int
    l: int
    fraction_bound: Fraction


def power_fraction_bound(cert: PartitionCertificate, l: int) -> Fraction:
    n_labels = len(cert.graph.labels)
    ratio = Fraction(cert.crossing_edges, len(cert.graph.vertices))
    return sum(
        (comb(l, m) * n_labels * ratio**m for m in range(1, l + 1)),
        Fraction(0),
    )


def power_certificate(
    cert: PartitionCertificate, l: int, bound_only: bool = False, cap: int = 100_000
):
    """Diagonal power of a properly labeled graph with product blocks."""
    if l == 1 and not bound_only:
        return cert
    if bound_only:
        return PowerBound(cert.K**l, l, power_fraction_bound(cert, l))
    G = cert.graph
    if len(G.vertices) ** l > cap:
        raise CertificateError(
            f"power graph of size {len(G.vertices) ** l} exceeds cap; use bound_only"
        )
    vertices = tuple(itertools.product(G.vertices, repeat=l))
    edges = []
    for label in G.labels:
        step = G.out_map(label)
        for u in vertices:
            if all(x in step for x in u):
                edges.append((u, tuple(step[x] for x in u), label))
    Gl = LabeledGraph(vertices, tuple(edges))
    blocks = [
        frozenset(itertools.product(*combo))
        for combo in itertools.product(cert.blocks, repeat=l)
    ]
    out = verify_certificate(Gl, blocks, cert.K**l, power_fraction_bound(cert, l) + 1)
    assert out.fraction <= power_fraction_bound(cert, l)
    return PartitionCertificate(
        Gl, out.blocks, cert.K**l, cert.epsilon, out.crossing_edges, out.fraction
    )


# -- quasi-tiling ---------------------------------------------------------


@dataclass(frozen=True)
class QuasiTiling:
    tiles: Tuple[Tuple, ...]
    centers: Tuple[Tuple, ...]
    exact_tiles: Tuple[Tuple[int, Tuple, FrozenSet], ...]
    coverage: Fraction
    epsilon: Fraction
    hypotheses: Tuple[dict, ...]

    def covered_set(self) -> FrozenSet:
        out: set = set()
        for k, c, _ in self.exact_tiles:
            for t in self.tiles[k]:
                out.add(tuple(x + y for x, y in zip(t, c)))
        return frozenset(out)

    def as_json(self):
        return {
            "tiles": [[list(t) for t in tile] for tile in self.tiles],
            "centers": [[list(c) for c in cs] for cs in self.centers],
            "exact_tiles": [
                {"tile": k, "center": list(c), "points": sorted(map(list, pts))}
                for k, c, pts in self.exact_tiles
            ],
            "coverage": str(self.coverage),
            "epsilon": str(self.epsilon),
        }


def _materialize(A) -> Tuple[FrozenSet, Optional[boxes.Box]]:
    if isinstance(A, boxes.Box):
        return frozenset(A.members()), A
    return frozenset(tuple(v) for v in A), None


def _tile_points(tile) -> Tuple[Tuple[int, ...], ...]:
    if isinstance(tile, boxes.Box):
        return tuple(tile.members())
    return tuple(sorted(tuple(v) for v in tile))


def _candidate_centers(A_set, A_box, tile_pts, d):
    """All c with tile + c inside A, in lexicographic order."""
    if A_box is not None:
        shape = boxes.VecSet(tile_pts)
        core = boxes.core_box(A_box, shape)
        return list(core.members()) if core is not None else []
    out = []
    t0 = tile_pts[0]
    for a in sorted(A_set):
        c = tuple(x - y for x, y in zip(a, t0))
        if all(tuple(t + x for t, x in zip(tp, c)) in A_set for tp in tile_pts):
            out.append(c)
    return sorted(set(out))


def quasitile_hypotheses(ctx, A, tiles, eps, defect_cost_cap: int = 5_000_000):
    """The stated preconditions, each computed exactly where affordable."""
    eps = Fraction(eps)
    A_set, A_box = _materialize(A)
    tile_sets = [frozenset(_tile_points(t)) for t in tiles]
    n = len(tile_sets)
    report = [
        {"name": "epsilon-range", "ok": 0 < eps < Fraction(1, 2), "detail": str(eps)},
        {
            "name": "tile-count",
            "ok": (1 - eps / 2) ** n < eps,
            "detail": f"(1-eps/2)^{n} = {(1 - eps / 2) ** n}",
        },
    ]
    for k in range(1, n):
        prev, cur = tile_sets[k - 1], tile_sets[k]
        if not prev <= cur:
            report.append({"name": f"tower-nesting-{k}", "ok": False, "detail": "not nested"})
            continue
        if len(cur) * len(prev) <= defect_cost_cap:
            bcount = len(groups.boundary(ctx, cur, prev, "interior"))
            ok = Fraction(bcount, len(cur)) <= eps / 8
            detail = f"|boundary| = {bcount} of {len(cur)}"
        else:
            ok, detail = None, "skipped: out of budget"
        report.append({"name": f"tower-boundary-{k}", "ok": ok, "detail": detail})
    top = tile_sets[-1]
    if A_box is not None:
        bcount = boxes.interior_boundary_count(A_box, boxes.VecSet(tuple(top)))
        ok = Fraction(bcount, len(A_set)) < eps
        detail = f"|boundary| = {bcount} of {len(A_set)}"
    elif len(A_set) * len(top) <= defect_cost_cap:
        bcount = len(groups.boundary(ctx, A_set, top, "interior"))
        ok = Fraction(bcount, len(A_set)) < eps
        detail = f"|boundary| = {bcount} of {len(A_set)}"
    else:
        ok, detail = None, "skipped: out of budget"
    report.append({"name": "invariance", "ok": ok, "detail": detail})
    return tuple(report)


def quasitile(ctx, A, tiles, eps, strict: bool = False, grid_first: bool = False) -> QuasiTiling:
    """Greedy quasi-tiling: largest tile first, centers lexicographic, accept
    a placement iff at least (1 - eps) of its points are uncovered."""
    eps = Fraction(eps)
    A_set, A_box = _materialize(A)
    tile_pts = [_tile_points(t) for t in tiles]
    hyps = quasitile_hypotheses(ctx, A, tiles, eps)
    if strict:
        for h in hyps:
            if h["ok"] is False:
                raise HypothesisError(f"{h['name']}: {h['detail']}")
    covered: set = set()
    placements: List[Tuple[int, Tuple, FrozenSet]] = []
    centers_by_tile: List[List[Tuple]] = [[] for _ in tiles]

    def try_place(k: int, c: Tuple) -> bool:
        pts = tile_pts[k]
        allow_covered = (eps * len(pts)).__floor__()
        fresh = []
        hit = 0
        for t in pts:
            p = tuple(x + y for x, y in zip(t, c))
            if p in covered:
                hit += 1
                if hit > allow_covered:
                    return False
            else:
                fresh.append(p)
        covered.update(tuple(x + y for x, y in zip(t, c)) for t in pts)
        placements.append((k, c, frozenset(fresh)))
        centers_by_tile[k].append(c)
        return True

    for k in range(len(tiles) - 1, -1, -1):
        pts = tile_pts[k]
        need_fresh = len(pts) - (eps * len(pts)).__floor__()
        candidates = _candidate_centers(A_set, A_box, pts, len(pts[0]))
        if grid_first and A_box is not None:
            shape = boxes.VecSet(pts)
            sides = [hi - lo + 1 for lo, hi in boxes._spans(shape)]
            core = boxes.core_box(A_box, shape)
            if core is not None:
                grid_ranges = [
                    range(lo, hi + 1, side)
                    for (lo, hi), side in zip(core.intervals, sides)
                ]
                for c in itertools.product(*grid_ranges):
                    try_place(k, c)
        for c in candidates:
            if len(A_set) - len(covered) < need_fresh:
                break
            try_place(k, c)

    coverage = Fraction(len(covered), len(A_set))
    tiling = QuasiTiling(
        tiles=tuple(tile_pts),
        centers=tuple(tuple(cs) for cs in centers_by_tile),
        exact_tiles=tuple(placements),
        coverage=coverage,
        epsilon=eps,
        hypotheses=hyps,
    )
    verify_quasitiling(tiling, A_set)
    if coverage < 1 - eps:
        raise GreedyFailure(coverage)
    return tiling


def verify_quasitiling(tiling: QuasiTiling, A_set: FrozenSet) -> None:
    """Independent recheck of the two output conditions."""
    covered = tiling.covered_set()
    if not covered <= A_set:
        raise CertificateError("a placed tile leaves A")
    if tiling.coverage != Fraction(len(covered), len(A_set)):
        raise CertificateError("stored coverage does not match a recount")
    seen: set = set()
    for k, c, pts in tiling.exact_tiles:
        if pts & seen:
            raise CertificateError("exact tiles are not pairwise disjoint")
        seen |= pts
        full = len(tiling.tiles[k])
        if len(pts) < (1 - tiling.epsilon) * full:
            raise CertificateError("an exact tile is below the (1-eps) threshold")


# -- tile towers ----------------------------------------------------------


@dataclass(frozen=True)
class TileTower:
    """Nested tiles T_1 = S subset ... subset T_n with verified boundary
    ratios; large steps are symbolic centered boxes."""

    tiles: Tuple
    ratios: Tuple[Fraction, ...]
    n_target: int
    complete: bool


def _shape_of(tile):
    if isinstance(tile, (boxes.Box, boxes.VecSet)):
        return tile
    return boxes.VecSet(tuple(tile))


def _box_defect_ok(r: int, d: int, shape, bound: Fraction) -> bool:
    box = boxes.Box.centered(d, r)
    return Fraction(boxes.interior_boundary_count(box, shape), box.size()) <= bound


def tile_tower(
    ctx: groups.GroupContext,
    S: Sequence,
    eps,
    digit_budget: int = 40_000,
    allow_partial: bool = True,
) -> TileTower:
    """Build the nested tile family whose steps satisfy
    |boundary_{T_i}(K_i)| <= eps/(16 |T_i|^2) |K_i|, taking K_i to be centered
    boxes (found by doubling and bisection on the radius, all arithmetic over
    big integers)."""
    eps = Fraction(eps)
    if not 0 < eps:
        raise ValueError("eps must be positive")
    d = ctx.d
    n = 1
    while (1 - eps / 2) ** n >= eps:
        n += 1
    S_pts = tuple(sorted(tuple(v) for v in S))
    tiles: List = [boxes.VecSet(S_pts)]
    ratios: List[Fraction] = []
    complete = True
    while len(tiles) < n:
        cur = tiles[-1]
        shape = _shape_of(cur)
        size = shape.size()
        bound = eps / (16 * size**2)
        spans = [shape.span(i) for i in range(d)]
        min_r = max(max(abs(a), abs(b)) for a, b in spans)
        w_max = max(b - a for a, b in spans)
        # sufficient closed-form radius: the defect of a centered box is at
        # most d * w_max / (2r + 1); minimality is not needed, validity is
        num, den = bound.numerator, bound.denominator
        r = max(min_r + 1, (d * w_max * den + num) // (2 * num) + 1)
        while not _box_defect_ok(r, d, shape, bound):
            r *= 2
        # decimal digit budget, tested via bit length (10/3 bits per digit)
        if (2 * r + 1).bit_length() * 3 > digit_budget * 10:
            complete = False
            break
        box = boxes.Box.centered(d, r)
        ratio = Fraction(boxes.interior_boundary_count(box, shape), box.size())
        assert ratio <= bound
        # the box contains the span of the previous tile, so the union is
        # the box itself and the tower stays nested
        tiles.append(box)
        ratios.append(ratio)
    if not complete and not allow_partial:
        raise boxes.EnumerationBudgetError("tile tower exceeded the digit budget")
    verify_tile_tower(tiles, ratios, eps)
    return TileTower(tuple(tiles), tuple(ratios), n, complete)


def verify_tile_tower(tiles: Sequence, ratios: Sequence[Fraction], eps) -> None:
    """Re-verify both the step condition and the conclusion ratio eps/8."""
    eps = Fraction(eps)
    for i in range(len(tiles) - 1):
        prev_shape = _shape_of(tiles[i])
        size = prev_shape.size()
        cur = tiles[i + 1]
        if not isinstance(cur, boxes.Box):
            raise CertificateError("tower steps above the base must be boxes")
        count = boxes.interior_boundary_count(cur, prev_shape)
        if Fraction(count, cur.size()) != ratios[i]:
            raise CertificateError("stored boundary ratio does not match recount")
        if ratios[i] > eps / (16 * size**2):
            raise CertificateError("tower step violates the boundary condition")
        if Fraction(count, cur.size()) > eps / 8:
            raise CertificateError("tower conclusion ratio above eps/8")


# -- Folner graph partition ----------------------------------------------


def _sqrt_branch_leq(q: Fraction, radicand: Fraction) -> bool:
    """Exact test of q <= 1 - sqrt(radicand) for rationals in [0, 1]."""
    if q > 1:
        return False
    return radicand <= (1 - q) ** 2


def folner_partition_schedule(eps, s_size: int) -> dict:
    """The delta threshold a tiling must meet: min of eps/(2|S|(|S|+2)) and
    1 - sqrt(1 - eps/(2|S|)), with exact comparison helpers."""
    eps = Fraction(eps)
    rational = eps / (2 * s_size * (s_size + 2))
    radicand = 1 - eps / (2 * s_size)
    if radicand < 0:
        radicand = Fraction(0)
    return {"rational": rational, "radicand": radicand}


def schedule_satisfied(tiling_eps: Fraction, schedule: dict) -> bool:
    """tiling_eps <= min(rational branch, 1 - sqrt(radicand)), exactly."""
    return tiling_eps <= schedule["rational"] and _sqrt_branch_leq(
        tiling_eps, schedule["radicand"]
    )


def box_graph(ctx: groups.GroupContext, F, S: Sequence) -> LabeledGraph:
    """S-labeled translation graph on a finite subset of the group."""
    F_set, F_box = _materialize(F)
    vertices = tuple(sorted(F_set))
    edges = []
    for label, s in enumerate(S):
        s = tuple(s)
        for g in vertices:
            h = tuple(x + y for x, y in zip(s, g))
            if h in F_set:
                edges.append((g, h, label))
    return LabeledGraph(vertices, tuple(edges))


def folner_graph_partition(
    ctx: groups.GroupContext,
    F,
    S: Sequence,
    tiling: QuasiTiling,
    eps,
    strict: bool = False,
) -> PartitionCertificate:
    """Certificate for the S-translation graph on F: blocks are the exact
    tiles of the tiling plus singletons for uncovered points."""
    eps = Fraction(eps)
    F_set, _ = _materialize(F)
    schedule = folner_partition_schedule(eps, len(S))
    sched_ok = schedule_satisfied(tiling.epsilon, schedule)
    if strict and not sched_ok:
        raise HypothesisError(
            f"tiling epsilon {tiling.epsilon} misses the delta schedule {schedule}"
        )
    G = box_graph(ctx, F, S)
    covered: set = set()
    blocks: List[FrozenSet] = []
    for k, c, pts in tiling.exact_tiles:
        # the exact (fresh) parts are pairwise disjoint, unlike the full tiles
        if not pts <= F_set:
            raise CertificateError("tiling tile leaves F")
        blocks.append(pts)
        covered |= pts
    blocks.extend(frozenset({g}) for g in sorted(F_set - covered))
    K = max(len(tiling.tiles[k]) for k, _, _ in tiling.exact_tiles)
    cert = verify_certificate(G, blocks, K, eps)
    return cert
