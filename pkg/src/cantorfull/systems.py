"""Cantor dynamical systems with computable clopen structure.

Three systems are built in:

* ``Odometer`` — the adding machine over a cycled base sequence.  Points are
  eventually periodic digit streams ``(prefix, period)``, canonicalized to the
  shortest prefix and period, and closed under adding any integer (carries and
  borrows into the periodic tail re-canonicalize; uniform all-max/all-zero
  tails wrap exactly, e.g. ...111 + 1 = ...000).
* ``ElekMonodOrbit`` — the Z^2 orbit of the proper lattice edge coloring from
  :mod:`cantorfull.elekmonod`.  A point is the translation vector ``q`` and the
  configuration read at an edge ``e`` is the coloring at ``e - q``.
* ``Product`` — finite products with the max metric and concatenated windows.

Everything is immutable and exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Tuple

from . import groups

ODOMETER = "Odometer"
ELEK_MONOD = "ElekMonodOrbit"
PRODUCT = "Product"


class SystemKindError(TypeError):
    pass


@dataclass(frozen=True)
class SystemContext:
    kind: str
    group: groups.GroupContext
    bases: Tuple[int, ...] = ()
    factors: Tuple["SystemContext", ...] = ()

    def __post_init__(self) -> None:
        if self.kind == ODOMETER:
            if not self.bases or any(b < 2 for b in self.bases):
                raise ValueError("odometer bases must all be >= 2")
        elif self.kind == ELEK_MONOD:
            if self.group.kind != groups.INT_VECTOR or self.group.d != 2:
                raise ValueError("ElekMonodOrbit acts by Z^2")
        elif self.kind == PRODUCT:
            if not self.factors:
                raise ValueError("product needs at least one factor")
        else:
            raise ValueError(f"unknown system kind {self.kind!r}")

    def base_at(self, i: int) -> int:
        return self.bases[i % len(self.bases)]


def odometer_system(bases: Sequence[int]) -> SystemContext:
    return SystemContext(
        kind=ODOMETER, group=groups.int_vector_context(1), bases=tuple(bases)
    )


def elek_monod_system() -> SystemContext:
    return SystemContext(kind=ELEK_MONOD, group=groups.int_vector_context(2))


def product_system(factors: Sequence[SystemContext]) -> SystemContext:
    return SystemContext(
        kind=PRODUCT,
        group=factors[0].group,
        factors=tuple(factors),
    )


@dataclass(frozen=True)
class OdometerPoint:
    prefix: Tuple[int, ...]
    period: Tuple[int, ...]

    def digit(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]


@dataclass(frozen=True)
class Pattern:
    """A cylinder: finite domain mapped to symbols, both canonically ordered."""

    kind: str
    domain: Tuple
    symbols: Tuple

    def __post_init__(self) -> None:
        if not self.domain:
            raise ValueError("pattern domain must be nonempty")
        pairs = sorted(zip(self.domain, self.symbols))
        object.__setattr__(self, "domain", tuple(p[0] for p in pairs))
        object.__setattr__(self, "symbols", tuple(p[1] for p in pairs))

    def as_json(self):
        return {"domain": [list(d) if isinstance(d, tuple) else d for d in self.domain],
                "symbols": list(self.symbols)}


def _minimal_period(period: Sequence[int]) -> Tuple[int, ...]:
    m = len(period)
    for mp in range(1, m):
        if m % mp:
            continue
        if all(period[j] == period[j % mp] for j in range(m)):
            return tuple(period[:mp])
    return tuple(period)


def odometer_point(sys: SystemContext, prefix: Sequence[int], period: Sequence[int]) -> OdometerPoint:
    """Build and canonicalize a digit stream, validating digits against bases."""
    if sys.kind != ODOMETER:
        raise SystemKindError("odometer_point requires an Odometer system")
    prefix = list(prefix)
    period = list(period)
    if not period:
        raise ValueError("period must be nonempty")
    for i, d in enumerate(prefix):
        if not 0 <= d < sys.base_at(i):
            raise ValueError(f"digit {d} invalid at position {i}")
    L = len(sys.bases)
    m0 = len(period)
    for j in range(lcm(m0, L)):
        d = period[j % m0]
        pos = len(prefix) + j
        if not 0 <= d < sys.base_at(pos):
            raise ValueError(f"periodic digit {d} invalid at position {pos}")
    period = list(_minimal_period(period))
    # absorb trailing prefix digits into the (rotated) period
    while prefix and prefix[-1] == period[-1]:
        prefix.pop()
        period = [period[-1]] + period[:-1]
    period = list(_minimal_period(period))
    return OdometerPoint(tuple(prefix), tuple(period))


def odometer_zero(sys: SystemContext) -> OdometerPoint:
    return odometer_point(sys, (), (0,))


def odometer_from_int(sys: SystemContext, k: int, n_digits: int) -> OdometerPoint:
    """The point whose first ``n_digits`` digits encode ``k`` (0 <= k < N), zero tail."""
    digits = []
    t = k
    for i in range(n_digits):
        b = sys.base_at(i)
        digits.append(t % b)
        t //= b
    if t:
        raise ValueError(f"{k} does not fit in {n_digits} digits")
    return odometer_point(sys, digits, (0,))


def _odometer_add(sys: SystemContext, x: OdometerPoint, k: int) -> OdometerPoint:
    if k == 0:
        return x
    L = len(sys.bases)
    m = len(x.period)
    ext = lcm(m, L)
    # materialize enough digits that |k| cannot carry past them, plus one full
    # aligned period window to absorb any single carry/borrow
    M0 = len(x.prefix)
    N = 1
    for i in range(M0):
        N *= sys.base_at(i)
    while N <= abs(k):
        N *= sys.base_at(M0)
        M0 += 1
    M1 = M0 + ext
    digits = [x.digit(i) for i in range(M1)]
    NM = N
    for i in range(M0, M1):
        NM *= sys.base_at(i)
    val = 0
    mult = 1
    for i in range(M1):
        val += digits[i] * mult
        mult *= sys.base_at(i)
    t = val + k
    if 0 <= t < NM:
        tail_period = tuple(x.digit(M1 + j) for j in range(m))
        return _decomposed(sys, t, M1, tail_period)
    if t >= NM:
        # carry escaped a full aligned window: the tail is uniformly maximal
        # and wraps to the all-zero tail
        return _decomposed(sys, t - NM, M1, (0,) * L or (0,))
    # borrow escaped: the tail is uniformly zero and wraps to the all-max tail
    max_tail = tuple(sys.base_at(M1 + j) - 1 for j in range(L))
    return _decomposed(sys, NM + t, M1, max_tail)


def _decomposed(sys: SystemContext, value: int, n_digits: int, tail_period: Tuple[int, ...]) -> OdometerPoint:
    digits = []
    t = value
    for i in range(n_digits):
        b = sys.base_at(i)
        digits.append(t % b)
        t //= b
    assert t == 0
    return odometer_point(sys, digits, tail_period)


@dataclass(frozen=True)
class OrbitPoint:
    """A translate q of the generating coloring (configuration at e is read at e - q)."""

    vector: Tuple[int, int]


def translate(sys: SystemContext, x, g):
    """The point g.x; satisfies translate(translate(x,g),h) = translate(x, h*g)."""
    g = groups.normal_form(sys.group, g)
    if sys.kind == ODOMETER:
        if not isinstance(x, OdometerPoint):
            raise SystemKindError(f"{x!r} is not an odometer point")
        return _odometer_add(sys, x, g[0])
    if sys.kind == ELEK_MONOD:
        if not isinstance(x, OrbitPoint):
            raise SystemKindError(f"{x!r} is not an orbit point")
        return OrbitPoint((x.vector[0] + g[0], x.vector[1] + g[1]))
    if sys.kind == PRODUCT:
        return tuple(
            translate(f, xi, gi) for f, xi, gi in zip(sys.factors, x, g)
        )
    raise SystemKindError(sys.kind)


def window(sys: SystemContext, x, domain) -> Pattern:
    """The configuration of x restricted to a finite domain."""
    if sys.kind == ODOMETER:
        dom = tuple(sorted(set(int(i) for i in domain)))
        return Pattern("odometer", dom, tuple(x.digit(i) for i in dom))
    if sys.kind == ELEK_MONOD:
        from . import elekmonod

        dom = tuple(sorted(set(domain)))
        q = x.vector
        syms = tuple(
            elekmonod.sigma_color(e.shift((-q[0], -q[1]))) for e in dom
        )
        return Pattern("edges", dom, syms)
    if sys.kind == PRODUCT:
        parts = [window(f, xi, di) for f, xi, di in zip(sys.factors, x, domain)]
        dom = tuple((i, d) for i, p in enumerate(parts) for d in p.domain)
        syms = tuple(s for p in parts for s in p.symbols)
        return Pattern("product", dom, syms)
    raise SystemKindError(sys.kind)


def _ball_domain(sys: SystemContext, r: int):
    if sys.kind == ODOMETER:
        return range(r)
    if sys.kind == ELEK_MONOD:
        from . import elekmonod

        return elekmonod.edges_in_box(-r, r, -r, r)
    raise SystemKindError(sys.kind)


def metric(sys: SystemContext, x, y, max_radius: int) -> Fraction:
    """2^(-r) for the largest r <= max_radius with equal radius-r windows."""
    if max_radius < 1:
        raise ValueError("max_radius must be >= 1")
    if sys.kind == PRODUCT:
        return max(metric(f, xi, yi, max_radius) for f, xi, yi in zip(sys.factors, x, y))
    r = 0
    while r < max_radius:
        dom = _ball_domain(sys, r + 1)
        if window(sys, x, dom) != window(sys, y, dom):
            break
        r += 1
    return Fraction(1, 2**r)


def in_cylinder(sys: SystemContext, pattern: Pattern, x) -> bool:
    return window(sys, x, pattern.domain) == pattern


def banach_density_lower(
    sys: SystemContext, pattern: Pattern, basepoint, n: int, family: str = "dyadic"
) -> Fraction:
    """Empirical Folner average of cylinder visits along the orbit of basepoint."""
    F = groups.folner_box(sys.group, n, family=family)
    hits = sum(1 for s in F if in_cylinder(sys, pattern, translate(sys, basepoint, s)))
    return Fraction(hits, len(F))
