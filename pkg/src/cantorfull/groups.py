"""Finitely generated acting groups.

Three kinds of groups act in this package:

* ``IntVector(d)`` — Z^d, elements are dense integer tuples;
* ``DirectSumInt`` — a direct sum of copies of Z over a declared finite index
  window, elements are sparse sorted ``(index, value)`` tuples;
* ``FreeInvolutionProduct`` — the free product of order-2 generators, elements
  are reduced letter tuples (no two equal adjacent letters).

Every element is kept in normal form so that equality, hashing and
deduplication are exact.  All ratios are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

INT_VECTOR = "IntVector"
DIRECT_SUM = "DirectSumInt"
FREE_INVOLUTION = "FreeInvolutionProduct"


class GroupKindError(TypeError):
    """An element does not belong to the context it was used with."""


class BudgetExceededError(Exception):
    """An enumeration grew beyond the configured cap."""


@dataclass(frozen=True)
class GroupContext:
    kind: str
    d: int = 0
    letters: Tuple[str, ...] = ()
    index_window: Tuple[int, ...] = ()
    generators: Tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in (INT_VECTOR, DIRECT_SUM, FREE_INVOLUTION):
            raise ValueError(f"unknown group kind {self.kind!r}")
        gens = tuple(self.generators)
        if not gens:
            gens = self._default_generators()
        gens = tuple(sorted({normal_form(self, g) for g in gens}))
        object.__setattr__(self, "generators", gens)
        e = identity(self)
        if e not in set(gens):
            raise ValueError("generator set must contain the identity")
        for g in gens:
            if inverse(self, g) not in set(gens):
                raise ValueError(f"generator set not symmetric: missing inverse of {g}")

    def _default_generators(self) -> Tuple:
        if self.kind == INT_VECTOR:
            gens = [tuple(0 for _ in range(self.d))]
            for i in range(self.d):
                for s in (1, -1):
                    v = [0] * self.d
                    v[i] = s
                    gens.append(tuple(v))
            return tuple(gens)
        if self.kind == DIRECT_SUM:
            gens = [()]
            for i in self.index_window:
                gens.append(((i, 1),))
                gens.append(((i, -1),))
            return tuple(gens)
        return ("",) + tuple(self.letters)


def int_vector_context(d: int, generators: Iterable = ()) -> GroupContext:
    return GroupContext(kind=INT_VECTOR, d=d, generators=tuple(generators))


def direct_sum_context(index_window: Iterable[int], generators: Iterable = ()) -> GroupContext:
    return GroupContext(
        kind=DIRECT_SUM, index_window=tuple(sorted(index_window)), generators=tuple(generators)
    )


def free_involution_context(letters: Iterable[str]) -> GroupContext:
    return GroupContext(kind=FREE_INVOLUTION, letters=tuple(letters))


def identity(ctx: GroupContext):
    if ctx.kind == INT_VECTOR:
        return tuple(0 for _ in range(ctx.d))
    if ctx.kind == DIRECT_SUM:
        return ()
    return ""


def normal_form(ctx: GroupContext, g):
    """Validate ``g`` against ``ctx`` and return its canonical form."""
    if ctx.kind == INT_VECTOR:
        if not isinstance(g, tuple) or len(g) != ctx.d or not all(
            isinstance(x, int) for x in g
        ):
            raise GroupKindError(f"{g!r} is not a Z^{ctx.d} vector")
        return g
    if ctx.kind == DIRECT_SUM:
        try:
            pairs = tuple(sorted((int(i), int(v)) for i, v in g if int(v) != 0))
        except (TypeError, ValueError) as exc:
            raise GroupKindError(f"{g!r} is not a sparse integer map") from exc
        return pairs
    if not isinstance(g, str):
        raise GroupKindError(f"{g!r} is not an involution word")
    letters = set(ctx.letters)
    word = []
    for ch in g:
        if ch not in letters:
            raise GroupKindError(f"letter {ch!r} not in alphabet {ctx.letters}")
        if word and word[-1] == ch:
            word.pop()
        else:
            word.append(ch)
    return "".join(word)


def multiply(ctx: GroupContext, a, b):
    a = normal_form(ctx, a)
    b = normal_form(ctx, b)
    if ctx.kind == INT_VECTOR:
        return tuple(x + y for x, y in zip(a, b))
    if ctx.kind == DIRECT_SUM:
        acc = dict(a)
        for i, v in b:
            acc[i] = acc.get(i, 0) + v
        return tuple(sorted((i, v) for i, v in acc.items() if v != 0))
    word = list(a)
    for ch in b:
        if word and word[-1] == ch:
            word.pop()
        else:
            word.append(ch)
    return "".join(word)


def inverse(ctx: GroupContext, a):
    a = normal_form(ctx, a)
    if ctx.kind == INT_VECTOR:
        return tuple(-x for x in a)
    if ctx.kind == DIRECT_SUM:
        return tuple((i, -v) for i, v in a)
    return a[::-1]


def ball(ctx: GroupContext, r: int, cap: int = 1_000_000) -> frozenset:
    """All products of at most ``r`` generators, in normal form."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    seen = {identity(ctx)}
    frontier = [identity(ctx)]
    for _ in range(r):
        nxt = []
        for g in frontier:
            for s in ctx.generators:
                h = multiply(ctx, s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise BudgetExceededError(
                            f"ball enumeration exceeded cap {cap}"
                        )
        frontier = nxt
    return frozenset(seen)


def boundary(ctx: GroupContext, A: Iterable, S: Iterable, kind: str = "both") -> frozenset:
    """Interior/exterior/full boundary of a finite set with respect to S.

    interior: elements of A with an S-translate outside A;
    exterior: elements outside A with an S-translate inside A.
    """
    A = frozenset(normal_form(ctx, g) for g in A)
    S = [normal_form(ctx, s) for s in S]
    if kind not in ("interior", "exterior", "both"):
        raise ValueError(f"unknown boundary kind {kind!r}")
    out: set = set()
    if kind in ("interior", "both"):
        for g in A:
            if any(multiply(ctx, s, g) not in A for s in S):
                out.add(g)
    if kind in ("exterior", "both"):
        for s in S:
            s_inv = inverse(ctx, s)
            for a in A:
                g = multiply(ctx, s_inv, a)
                if g not in A:
                    out.add(g)
    return frozenset(out)


def is_invariant(ctx: GroupContext, A: Iterable, S: Iterable, eps: Fraction):
    """(S, eps)-invariance: |interior boundary| < eps * |A| (strict)."""
    A = frozenset(normal_form(ctx, g) for g in A)
    if not A:
        raise ValueError("invariance is undefined for the empty set")
    defect = Fraction(len(boundary(ctx, A, S, "interior")), len(A))
    return defect < Fraction(eps), defect


def folner_box(ctx: GroupContext, n: int, family: str = "dyadic", cap: int = 10_000_000):
    """[1, 2^n]^d (dyadic) or [1, n]^d (linear), enumerated lexicographically."""
    if ctx.kind != INT_VECTOR:
        raise GroupKindError("folner_box requires an IntVector context")
    if n < 1:
        raise ValueError("n must be >= 1")
    side = 2**n if family == "dyadic" else n
    if family not in ("dyadic", "linear"):
        raise ValueError(f"unknown box family {family!r}")
    if side**ctx.d > cap:
        raise BudgetExceededError(f"box of size {side ** ctx.d} exceeds cap {cap}")
    return [tuple(v) for v in itertools.product(range(1, side + 1), repeat=ctx.d)]


def context_from_json(doc) -> GroupContext:
    """Load a generator set from {"kind": ..., "d": ..., "generators": [...]}. """
    if isinstance(doc, str):
        doc = json.loads(doc)
    kind = doc["kind"]
    if kind == INT_VECTOR:
        gens = tuple(tuple(int(x) for x in g) for g in doc.get("generators", []))
        return int_vector_context(int(doc["d"]), gens)
    if kind == DIRECT_SUM:
        gens = tuple(
            tuple((int(i), int(v)) for i, v in g) for g in doc.get("generators", [])
        )
        return direct_sum_context([int(i) for i in doc["index_window"]], gens)
    if kind == FREE_INVOLUTION:
        return free_involution_context([str(x) for x in doc["letters"]])
    raise ValueError(f"unknown group kind {kind!r}")
