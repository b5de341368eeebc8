"""Compositions, partitions, generalized words, and their containment orders.

A composition is a finite word over the positive integers, ordered by the
generalized subword order: u <= w iff the parts of u can be matched, left to
right, to a strictly increasing selection of columns of w that dominate them.
A generalized word extends the alphabet with three kinds of infinite symbols
(an infinite column, infinitely many columns of a fixed height, infinitely
many infinite columns) and denotes the downset of all compositions embedding
into it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class Composition:
    """A finite sequence of positive integers; the empty composition is allowed."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = self.parts
        if not isinstance(parts, tuple):
            parts = tuple(parts)
            object.__setattr__(self, "parts", parts)
        for p in parts:
            if not isinstance(p, int) or p < 1:
                raise ValueError(f"composition parts must be >= 1, got {parts}")

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return " ".join(str(p) for p in self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def reverse(self) -> "Composition":
        return Composition(self.parts[::-1])

    def concat(self, other: "Composition") -> "Composition":
        return Composition(self.parts + other.parts)


EPSILON = Composition()


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing sequence of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be >= 1, got {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing, got {parts}")
        object.__setattr__(self, "parts", parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return " ".join(str(p) for p in self.parts)

    def as_composition(self) -> Composition:
        return Composition(self.parts)


# word symbol kinds
FIN = "fin"          # a single column of height n
REP = "rep"          # infinitely many columns of height n  (n^w)
OMEGA = "omega"      # a single infinite column             (w)
OMEGA2 = "omega2"    # infinitely many infinite columns     (w^w)


@dataclass(frozen=True)
class WordSymbol:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in (FIN, REP, OMEGA, OMEGA2):
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind in (FIN, REP) and self.n < 1:
            raise ValueError(f"{self.kind} symbol needs n >= 1, got {self.n}")

    def __str__(self) -> str:
        if self.kind == FIN:
            return str(self.n)
        if self.kind == REP:
            return f"{self.n}^w"
        if self.kind == OMEGA:
            return "w"
        return "w^w"


def fin(n: int) -> WordSymbol:
    return WordSymbol(FIN, n)


def rep(n: int) -> WordSymbol:
    return WordSymbol(REP, n)


W = WordSymbol(OMEGA)
WW = WordSymbol(OMEGA2)


@dataclass(frozen=True)
class GeneralizedWord:
    """A finite sequence of word symbols; denotes the age of compositions embedding into it."""

    symbols: tuple[WordSymbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[WordSymbol]:
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.symbols)

    def reverse(self) -> "GeneralizedWord":
        return GeneralizedWord(self.symbols[::-1])

    def concat(self, other: "GeneralizedWord") -> "GeneralizedWord":
        return GeneralizedWord(self.symbols + other.symbols)


def word_of(*items) -> GeneralizedWord:
    """Build a word from ints (finite columns) and WordSymbols."""
    syms = []
    for it in items:
        if isinstance(it, WordSymbol):
            syms.append(it)
        elif isinstance(it, int):
            syms.append(fin(it))
        elif isinstance(it, Composition):
            syms.extend(fin(p) for p in it.parts)
        else:
            raise TypeError(f"cannot interpret {it!r} as a word symbol")
    return GeneralizedWord(tuple(syms))


@dataclass(frozen=True)
class TruncationSpec:
    """Finite window into an infinite age.

    omega_cap is the column height substituted for an infinite column (and used
    for the columns of w^w); repeat_cap is the number of columns substituted
    for each repeated symbol.
    """

    omega_cap: int = 4
    repeat_cap: int = 4

    def __post_init__(self):
        if self.omega_cap < 1:
            raise ValueError("omega_cap must be >= 1")
        if self.repeat_cap < 0:
            raise ValueError("repeat_cap must be >= 0")


# ---------------------------------------------------------------------------
# containment primitives


def subword_le(u: Composition, w: Composition) -> bool:
    """Generalized subword order: greedy earliest-match scan."""
    up, wp = u.parts, w.parts
    if len(up) > len(wp):
        return False
    i = 0
    for part in up:
        while i < len(wp) and wp[i] < part:
            i += 1
        if i == len(wp):
            return False
        i += 1
    return True


def subword_embedding(u: Composition, w: Composition) -> Optional[tuple[int, ...]]:
    """The greedy embedding of u into w as 0-based column indices, or None."""
    wp = w.parts
    out = []
    i = 0
    for part in u.parts:
        while i < len(wp) and wp[i] < part:
            i += 1
        if i == len(wp):
            return None
        out.append(i)
        i += 1
    return tuple(out)


def partition_le(lam: Partition, mu: Partition) -> bool:
    """Containment of Ferrers diagrams: rowwise dominance."""
    if len(lam) > len(mu):
        return False
    return all(a <= b for a, b in zip(lam.parts, mu.parts))


def conjugate(lam: Partition) -> Partition:
    """Transpose the Ferrers diagram."""
    if not lam.parts:
        return Partition()
    width = lam.parts[0]
    return Partition(tuple(sum(1 for p in lam.parts if p > i) for i in range(width)))


def young_join(lam: Partition, mu: Partition) -> Partition:
    """Least upper bound in Young's lattice: componentwise maximum."""
    n = max(len(lam), len(mu))
    a = lam.parts + (0,) * (n - len(lam))
    b = mu.parts + (0,) * (n - len(mu))
    return Partition(tuple(max(x, y) for x, y in zip(a, b)))


def age_member(c: Composition, w: GeneralizedWord) -> bool:
    """Whether c embeds into the (possibly infinite) word w.

    A finite column hosts at most one part up to its height, an infinite
    column hosts one part of any size, a repeated symbol hosts any run of
    parts up to its height, and w^w hosts everything that remains.  The scan
    is greedy: each symbol consumes as many parts as it may.
    """
    parts = c.parts
    i = 0
    for sym in w.symbols:
        if i == len(parts):
            return True
        if sym.kind == FIN:
            if parts[i] <= sym.n:
                i += 1
        elif sym.kind == OMEGA:
            i += 1
        elif sym.kind == REP:
            while i < len(parts) and parts[i] <= sym.n:
                i += 1
        else:  # OMEGA2
            return True
    return i == len(parts)


def word_substitute(w: GeneralizedWord, t: TruncationSpec) -> GeneralizedWord:
    """Replace infinite symbols by finite columns per the truncation spec."""
    syms: list[WordSymbol] = []
    for sym in w.symbols:
        if sym.kind == FIN:
            syms.append(sym)
        elif sym.kind == OMEGA:
            syms.append(fin(t.omega_cap))
        elif sym.kind == REP:
            syms.extend(fin(sym.n) for _ in range(t.repeat_cap))
        else:  # OMEGA2
            syms.extend(fin(t.omega_cap) for _ in range(t.repeat_cap))
    return GeneralizedWord(tuple(syms))


def age_truncation(w: GeneralizedWord, t: TruncationSpec) -> tuple[Composition, ...]:
    """All compositions embedding into the truncated word, sorted shortlex."""
    heights = tuple(s.n for s in word_substitute(w, t).symbols)
    members = _downset_of_columns(heights)
    return tuple(Composition(p) for p in sorted(members, key=lambda p: (len(p), p)))


@lru_cache(maxsize=None)
def _downset_of_columns(heights: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    # suffix = all members embeddable into columns i..end, built right to left
    suffix: frozenset[tuple[int, ...]] = frozenset({()})
    for i in range(len(heights) - 1, -1, -1):
        grown = set(suffix)
        h = heights[i]
        for tail in suffix:
            for v in range(1, h + 1):
                grown.add((v,) + tail)
        suffix = frozenset(grown)
    return suffix


def strip_core(d: Composition) -> tuple[int, Composition, int]:
    """Unique decomposition d = 1^i . core . 1^j with core empty or ends >= 2.

    Pure-ones compositions take the all-prefix convention (core empty, j = 0).
    """
    parts = d.parts
    lo = 0
    while lo < len(parts) and parts[lo] == 1:
        lo += 1
    if lo == len(parts):
        return len(parts), EPSILON, 0
    hi = len(parts)
    while parts[hi - 1] == 1:
        hi -= 1
    return lo, Composition(parts[lo:hi]), len(parts) - hi


# ---------------------------------------------------------------------------
# canonical total orders on compositions


def shortlex_key(c: Composition) -> tuple:
    return (len(c.parts), c.parts)


def shortcolex_key(c: Composition) -> tuple:
    return (len(c.parts), c.parts[::-1])


def two_max_key(c: Composition) -> tuple[int, int]:
    """(largest part, second largest part), missing parts read as 0."""
    if not c.parts:
        return (0, 0)
    top = sorted(c.parts, reverse=True)
    return (top[0], top[1] if len(top) > 1 else 0)
