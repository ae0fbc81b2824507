"""Symbolic axis-aligned integer boxes and exact boundary calculus.

Folner witnesses and tile towers in Z^d grow far beyond anything that can be
enumerated, but boxes admit closed-form cardinalities and boundary counts with
plain (big) integers.  A :class:`Box` is the product of closed integer
intervals; a :class:`VecSet` wraps a small explicit set of vectors.  Both
support the operations the boundary calculus needs: size, per-dimension span,
membership, and (guarded) enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Tuple

Vec = Tuple[int, ...]

ENUMERATION_CAP = 10_000_000


class EnumerationBudgetError(Exception):
    """Raised when an explicit enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class Box:
    """Product of closed integer intervals ``[lo_i, hi_i]``."""

    intervals: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def size(self) -> int:
        n = 1
        for lo, hi in self.intervals:
            n *= hi - lo + 1
        return n

    def contains(self, v: Vec) -> bool:
        return len(v) == self.dim and all(
            lo <= x <= hi for x, (lo, hi) in zip(v, self.intervals)
        )

    def shift(self, g: Vec) -> "Box":
        return Box(tuple((lo + x, hi + x) for x, (lo, hi) in zip(g, self.intervals)))

    def span(self, i: int) -> Tuple[int, int]:
        return self.intervals[i]

    def members(self, cap: int = ENUMERATION_CAP) -> Iterator[Vec]:
        if self.size() > cap:
            raise EnumerationBudgetError(
                f"box of size {self.size()} exceeds enumeration cap {cap}"
            )
        ranges = [range(lo, hi + 1) for lo, hi in self.intervals]
        return iter(itertools.product(*ranges))

    def intersect(self, other: "Box") -> "Box | None":
        ivs = []
        for (a, b), (c, d) in zip(self.intervals, other.intervals):
            lo, hi = max(a, c), min(b, d)
            if lo > hi:
                return None
            ivs.append((lo, hi))
        return Box(tuple(ivs))

    @staticmethod
    def cube(d: int, lo: int, hi: int) -> "Box":
        return Box(tuple((lo, hi) for _ in range(d)))

    @staticmethod
    def centered(d: int, radius: int) -> "Box":
        return Box.cube(d, -radius, radius)


@dataclass(frozen=True)
class VecSet:
    """Small explicit set of integer vectors with the Box-like interface."""

    vectors: Tuple[Vec, ...]

    def __post_init__(self) -> None:
        if not self.vectors:
            raise ValueError("empty vector set")
        object.__setattr__(self, "vectors", tuple(sorted(set(self.vectors))))

    @property
    def dim(self) -> int:
        return len(self.vectors[0])

    def size(self) -> int:
        return len(self.vectors)

    def contains(self, v: Vec) -> bool:
        return tuple(v) in set(self.vectors)

    def shift(self, g: Vec) -> "VecSet":
        return VecSet(tuple(tuple(x + y for x, y in zip(v, g)) for v in self.vectors))

    def span(self, i: int) -> Tuple[int, int]:
        vals = [v[i] for v in self.vectors]
        return min(vals), max(vals)

    def members(self, cap: int = ENUMERATION_CAP) -> Iterator[Vec]:
        return iter(self.vectors)


Shape = "Box | VecSet"


def _spans(shape) -> Tuple[Tuple[int, int], ...]:
    return tuple(shape.span(i) for i in range(shape.dim))


def core_box(box: Box, s_shape) -> Box | None:
    """{g : g + s in box for every s in S} — a box for any finite S.

    The constraint decomposes per dimension through the min/max of the
    S-coordinates, regardless of whether S is a product set.
    """
    ivs = []
    for (lo, hi), (smin, smax) in zip(box.intervals, _spans(s_shape)):
        a, b = lo - smin, hi - smax
        if a > b:
            return None
        ivs.append((a, b))
    return Box(tuple(ivs))


def interior_boundary_count(box: Box, s_shape) -> int:
    """|{g in box : S g meets the complement}| for a box, exactly."""
    core = core_box(box, s_shape)
    if core is None:
        return box.size()
    inner = core.intersect(box)
    return box.size() - (inner.size() if inner is not None else 0)


def reach_size(box: Box, s_shape) -> int:
    """|union over s in S of (box - s)|, exactly.

    For a Box-shaped S the union is itself a box; for a small explicit S it is
    computed by inclusion-exclusion over the shifted boxes.
    """
    if isinstance(s_shape, Box):
        ivs = []
        for (lo, hi), (smin, smax) in zip(box.intervals, _spans(s_shape)):
            ivs.append((lo - smax, hi - smin))
        return Box(tuple(ivs)).size()
    vectors = tuple(s_shape.vectors)
    if len(vectors) > 20:
        raise EnumerationBudgetError(
            f"inclusion-exclusion over {len(vectors)} shifts is out of budget"
        )
    neg = [tuple(-x for x in v) for v in vectors]
    shifted = [box.shift(v) for v in neg]
    total = 0
    for r in range(1, len(shifted) + 1):
        for combo in itertools.combinations(shifted, r):
            inter = combo[0]
            for b in combo[1:]:
                inter = inter.intersect(b)
                if inter is None:
                    break
            if inter is not None:
                total += (-1) ** (r + 1) * inter.size()
    return total


def exterior_boundary_count(box: Box, s_shape) -> int:
    """|{g not in box : S g meets box}| for a box, exactly."""
    # reach = union over s of (box - s); it always contains box (0 in S is not
    # required here: subtract |reach ∩ box| rather than |box|).
    reach = reach_size(box, s_shape)
    if isinstance(s_shape, Box):
        ivs = tuple(
            (lo - smax, hi - smin)
            for (lo, hi), (smin, smax) in zip(box.intervals, _spans(s_shape))
        )
        inner = Box(ivs).intersect(box)
        inside = inner.size() if inner is not None else 0
        return reach - inside
    # explicit S: count reach ∩ box by inclusion-exclusion restricted to box
    vectors = tuple(s_shape.vectors)
    neg = [tuple(-x for x in v) for v in vectors]
    shifted = []
    for v in neg:
        b = box.shift(v).intersect(box)
        if b is not None:
            shifted.append(b)
    inside = 0
    for r in range(1, len(shifted) + 1):
        for combo in itertools.combinations(shifted, r):
            inter = combo[0]
            for b in combo[1:]:
                inter = inter.intersect(b)
                if inter is None:
                    break
            if inter is not None:
                inside += (-1) ** (r + 1) * inter.size()
    return reach - inside


def full_boundary_count(box: Box, s_shape) -> int:
    return interior_boundary_count(box, s_shape) + exterior_boundary_count(box, s_shape)


def interior_defect(box: Box, s_shape) -> Fraction:
    return Fraction(interior_boundary_count(box, s_shape), box.size())
