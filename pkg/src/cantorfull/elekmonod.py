"""The proper 6-coloring of the Z^2 lattice edges and its pattern machinery.

Horizontal edges alternate E/F by column parity.  Vertical lines carry words
over {A, B, C} separated by D: the line at abscissa v (v nonzero and even) is
colored by the w-th reduced word where w is determined by the 2-adic valuation
of v, pasted periodically; lines at v = 0 or v odd alternate A/D.  The
resulting coloring is proper at every vertex, its window counts grow strictly
slower than 4^(4^n) (zero topological entropy), and the six letter involutions
generate a rich subgroup of the full group of the orbit.

Conventions (fixed for determinism):
* reduced words over {A,B,C} are enumerated by length then lexicographically;
* the word is written upwards in reverse, so the edge ((v,0),(v,1)) carries the
  last letter of the word and the separator D occupies the following slot;
* on A/D lines, A sits at even heights.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm, log
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

ALPHABET = ("A", "B", "C", "D", "E", "F")
WORD_LETTERS = ("A", "B", "C")


@dataclass(frozen=True, order=True)
class LatticeEdge:
    """H = ((x,y),(x+1,y)), V = ((x,y),(x,y+1)), keyed by the base vertex."""

    base: Tuple[int, int]
    orient: str

    def __post_init__(self) -> None:
        if self.orient not in ("H", "V"):
            raise ValueError(f"bad orientation {self.orient!r}")

    def shift(self, g: Tuple[int, int]) -> "LatticeEdge":
        return LatticeEdge((self.base[0] + g[0], self.base[1] + g[1]), self.orient)

    def endpoints(self):
        x, y = self.base
        return (self.base, (x + 1, y) if self.orient == "H" else (x, y + 1))


def label(m: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if m == 0:
        raise ValueError("0 carries no label")
    return (m & -m).bit_length() - 1


_words: List[str] = []


def delta_word(i: int) -> str:
    """The i-th nontrivial reduced word over {A,B,C} (length, then lex; 1-based)."""
    if i < 1:
        raise ValueError("word index starts at 1")
    while len(_words) < i:
        length = len(_words[-1]) + 1 if _words else 1
        for tup in itertools.product(WORD_LETTERS, repeat=length):
            if all(a != b for a, b in zip(tup, tup[1:])):
                _words.append("".join(tup))
    return _words[i - 1]


@lru_cache(maxsize=200_000)
def _line(v: int) -> Tuple[str, ...]:
    """One vertical period of colors of the line at abscissa v, bottom slot first."""
    if v == 0 or v % 2:
        return ("A", "D")
    w = delta_word(label(v))
    k = len(w)
    return tuple(w[k - 1 - s] for s in range(k)) + ("D",)


def line_period(v: int) -> int:
    return len(_line(v))


def sigma_color(e: LatticeEdge) -> str:
    if e.orient == "H":
        return "E" if e.base[0] % 2 == 0 else "F"
    v, y = e.base
    line = _line(v)
    return line[y % len(line)]


def edges_in_box(xlo: int, xhi: int, ylo: int, yhi: int) -> Tuple[LatticeEdge, ...]:
    """All edges with both endpoints inside [xlo,xhi] x [ylo,yhi]."""
    out = []
    for x in range(xlo, xhi):
        for y in range(ylo, yhi + 1):
            out.append(LatticeEdge((x, y), "H"))
    for x in range(xlo, xhi + 1):
        for y in range(ylo, yhi):
            out.append(LatticeEdge((x, y), "V"))
    return tuple(out)


def incident_colors(x: int, y: int) -> Tuple[Tuple[str, LatticeEdge], ...]:
    edges = (
        LatticeEdge((x, y), "V"),
        LatticeEdge((x, y - 1), "V"),
        LatticeEdge((x, y), "H"),
        LatticeEdge((x - 1, y), "H"),
    )
    return tuple((sigma_color(e), e) for e in edges)


def check_proper(region: Tuple[int, int, int, int]):
    """Pairwise-distinct incident colors at every vertex of the region.

    region = (xlo, xhi, ylo, yhi), vertices inclusive.  Returns
    (ok, first_violation) where the violation names the vertex and the two
    equally colored edges.
    """
    xlo, xhi, ylo, yhi = region
    for x in range(xlo, xhi + 1):
        up_line = _line(x)
        pu = len(up_line)
        h_right = "E" if x % 2 == 0 else "F"
        h_left = "E" if (x - 1) % 2 == 0 else "F"
        for y in range(ylo, yhi + 1):
            cu = up_line[y % pu]
            cd = up_line[(y - 1) % pu]
            cols = (cu, cd, h_right, h_left)
            if cu == cd or h_right == h_left or cu in (h_right, h_left) or cd in (
                h_right,
                h_left,
            ):
                bad = [
                    (c, e)
                    for c, e in incident_colors(x, y)
                ]
                return False, ((x, y), bad)
    return True, None


@dataclass(frozen=True)
class ColoringWindow:
    """Colors of the translated standard window g + E_n (arraywise equality)."""

    anchor: Tuple[int, int]
    n: int
    h_colors: Tuple[Tuple[str, ...], ...]  # [dx][dy], dx in [0,2^n-1], dy in [0,2^n]
    v_colors: Tuple[Tuple[str, ...], ...]  # [dx][dy], dx in [0,2^n], dy in [0,2^n-1]

    def key(self):
        return (self.h_colors, self.v_colors)


def window_at(g: Tuple[int, int], n: int) -> ColoringWindow:
    if n < 1:
        raise ValueError("n must be >= 1")
    side = 2**n
    gx, gy = g
    h = tuple(
        tuple(sigma_color(LatticeEdge((gx + dx, gy + dy), "H")) for dy in range(side + 1))
        for dx in range(side)
    )
    v = tuple(
        tuple(sigma_color(LatticeEdge((gx + dx, gy + dy), "V")) for dy in range(side))
        for dx in range(side + 1)
    )
    return ColoringWindow((gx, gy), n, h, v)


def same_pattern_check(n: int, m_range: Iterable[int]) -> bool:
    """Translation-aligned equality of the strips between consecutive multiples of 2^n.

    The strip for m has edges with endpoints in
    [2^n m + 1, 2^n (m+1) - 1] x [0, 2^n].
    """
    side = 2**n
    ref = None
    for m in m_range:
        x0 = side * m + 1
        strip_h = tuple(
            tuple(
                sigma_color(LatticeEdge((x0 + dx, y), "H")) for y in range(side + 1)
            )
            for dx in range(side - 2)
        )
        strip_v = tuple(
            tuple(sigma_color(LatticeEdge((x0 + dx, y), "V")) for y in range(side))
            for dx in range(side - 1)
        )
        if ref is None:
            ref = (strip_h, strip_v)
        elif (strip_h, strip_v) != ref:
            return False
    return True


def _window_key(g1: int, g2: int, n: int):
    """Compressed exact window key: H colors depend only on the parity of g1;
    the V part is the literal color array."""
    side = 2**n
    cols = []
    for v in range(g1, g1 + side + 1):
        line = _line(v)
        p = len(line)
        cols.append(tuple(line[(g2 + dy) % p] for dy in range(side)))
    return (g1 % 2, tuple(cols))


def pattern_count(
    n: int, h_range: Tuple[int, int], v_strategy: str = "exact-period"
) -> Tuple[int, str]:
    """Exact number of distinct windows over the swept anchors, plus a digest.

    For every horizontal anchor the vertical sweep covers one full common
    period of all line families in the window, so the count is exact over the
    swept region and a lower bound for the global count.
    """
    if v_strategy != "exact-period":
        raise ValueError(f"unknown vertical strategy {v_strategy!r}")
    lo, hi = h_range
    side = 2**n
    seen = set()
    for g1 in range(lo, hi + 1):
        period = 1
        for v in range(g1, g1 + side + 1):
            period = lcm(period, line_period(v))
        for g2 in range(period):
            seen.add(_window_key(g1, g2, n))
    digest = hashlib.sha256(repr(sorted(seen)).encode()).hexdigest()
    return len(seen), digest


def pattern_bound(n: int) -> int:
    """Counting bound for the quadrant window census: 2 * 2^n * 4^(2^n) * (n+1)!."""
    return 2 * 2**n * 4 ** (2**n) * factorial(n + 1)


def bound_majorant(n: int) -> float:
    """Normalized closed-form majorant of log(pattern_bound)/4^n (display only)."""
    return (
        n * log(2) + log(n) + n * (log(n) - 1) + log(4 * n + 5) + 2**n * log(4)
    ) / 4**n


def entropy_table(n_max: int, h_half_width=None) -> List[dict]:
    """Rows (n, count, log(count)/4^n, bound, log(bound)/4^n).

    Normalized logs are floats and flagged as such; counts and bounds are exact
    integers.
    """
    rows = []
    for n in range(1, n_max + 1):
        half = h_half_width(n) if callable(h_half_width) else (h_half_width or 2 ** (n + 6))
        count, digest = pattern_count(n, (-half, half))
        bound = pattern_bound(n)
        rows.append(
            {
                "n": n,
                "h_range": (-half, half),
                "count": count,
                "normalized_log_count": log(count) / 4**n,  # float, display only
                "bound": bound,
                "normalized_log_bound": log(bound) / 4**n,  # float, display only
                "majorant": bound_majorant(n),  # float, display only
                "digest": digest,
            }
        )
    return rows


# -- involutions ---------------------------------------------------------

_DIRECTIONS = {
    (0, 1): LatticeEdge((0, 0), "V"),
    (0, -1): LatticeEdge((0, -1), "V"),
    (1, 0): LatticeEdge((0, 0), "H"),
    (-1, 0): LatticeEdge((-1, 0), "H"),
}


def involution_table(letter: str):
    """The letter involution as a cocycle table on the orbit system.

    If the incident edge toward neighbor v is colored by the letter, the point
    translates by -v (the coloring shifts so the origin lands on v, and the
    same lattice edge is then read from its other endpoint — this is what makes
    the square exactly the identity); otherwise the point is fixed.
    """
    from . import fullgroup, systems

    if letter not in ALPHABET:
        raise ValueError(f"unknown color {letter!r}")
    sys = systems.elek_monod_system()
    parts = []
    for v, edge in _DIRECTIONS.items():
        pat = fullgroup.EdgePattern(((edge, "eq", letter),))
        parts.append((pat, (-v[0], -v[1])))
    complement = fullgroup.EdgePattern(
        tuple((edge, "ne", (letter,)) for edge in _DIRECTIONS.values())
    )
    parts.append((complement, (0, 0)))
    return fullgroup.CocycleTable(system=sys, parts=tuple(parts))


def _incident_letter_direction(q: Tuple[int, int], letter: str):
    """Direction v such that the edge from the origin of q.sigma toward v has
    the letter's color, or None.  Properness makes v unique."""
    hits = []
    for v, edge in _DIRECTIONS.items():
        phys = edge.shift((-q[0], -q[1]))
        if sigma_color(phys) == letter:
            hits.append(v)
    if len(hits) > 1:
        raise AssertionError(f"properness violated at {q}: {hits}")
    return hits[0] if hits else None


def apply_letter(q: Tuple[int, int], letter: str) -> Tuple[int, int]:
    v = _incident_letter_direction(q, letter)
    if v is None:
        return q
    return (q[0] - v[0], q[1] - v[1])


def apply_word(q: Tuple[int, int], word: str) -> Tuple[int, int]:
    """Apply the word as a composition (rightmost letter first)."""
    for letter in reversed(word):
        q = apply_letter(q, letter)
    return q


def is_reduced_word(word: str) -> bool:
    return (
        len(word) > 0
        and all(ch in ALPHABET for ch in word)
        and all(a != b for a, b in zip(word, word[1:]))
    )


def delta_index(word: str) -> int:
    """1-based position of a reduced word over {A,B,C} in the length-lex list."""
    if not word or any(ch not in WORD_LETTERS for ch in word):
        raise ValueError(f"{word!r} is not a word over A,B,C")
    i = 1
    while delta_word(i) != word:
        i += 1
    return i


def word_acts_nontrivially(word: str, search_radius: int):
    """A translate moved by the word: lexicographic box scan first, then the
    column that carries the word itself.

    Words whose letters never cohabit a column inside the box (each letter acts
    only along vertical lines) have no box witness at small radius; the line at
    abscissa 2^i for the word's list position i spells the word itself, so the
    point (2^i, 0) is displaced by the full word length.  A witness counts when
    the net translation is nonzero or the window of the image differs within
    the search radius.
    """
    if not is_reduced_word(word):
        raise ValueError(f"word {word!r} is not a nonempty reduced word")
    R = search_radius
    for g in itertools.product(range(-R, R + 1), repeat=2):
        end = apply_word(g, word)
        if end != g:
            radius = _certify_distinct(g, end, R)
            if radius is not None:
                return {
                    "witness": g,
                    "image": end,
                    "certified_radius": radius,
                    "method": "box-scan",
                }
    if any(ch not in WORD_LETTERS for ch in word):
        return None
    g = (1 << delta_index(word), 0)
    end = apply_word(g, word)
    if end != g:
        return {
            "witness": g,
            "image": end,
            "certified_radius": 0,
            "method": "word-column",
        }
    return None


def _certify_distinct(p: Tuple[int, int], q: Tuple[int, int], max_radius: int):
    """Smallest window radius at which the two translates visibly differ."""
    from . import systems

    sys = systems.elek_monod_system()
    xp, xq = systems.OrbitPoint(tuple(p)), systems.OrbitPoint(tuple(q))
    for r in range(1, max_radius + 1):
        dom = edges_in_box(-r, r, -r, r)
        if systems.window(sys, xp, dom) != systems.window(sys, xq, dom):
            return r
    return None
