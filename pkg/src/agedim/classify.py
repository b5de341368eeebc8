"""Finite/infinite dimension decision procedures for ages and their unions.

For compositions, an age is infinite dimensional exactly when its word hosts
one of four minimal obstructions; over the reduced alphabet (positive
integers, 1^w, w) these collapse to ordered symbol patterns, which is what
the rules below test.  For partitions the single obstruction is w^w, and
every other word fits into a shape with k infinite rows, a finite partition
body, and an infinite tail of bounded rows, giving the dimension bound
k + |body| + tail-height.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .orders import (
    FIN,
    OMEGA,
    OMEGA2,
    REP,
    GeneralizedWord,
    Partition,
    WordSymbol,
    fin,
    rep,
    W,
)

FORBIDDEN_AGES = {
    "omega3": "w w w",
    "ones2": "1^w 2 1^w 2 1^w",
    "w1w": "w 1^w w 1^w",
    "w1w-mirror": "1^w w 1^w w",
}

# crown generator validating each obstruction (see the crowns module)
WITNESS_CROWNS = {
    "omega3": "omega3",
    "ones2": "ones2",
    "w1w": "w1w",
    "w1w-mirror": "w1w-mirror",
    "heavy-rep": "2w",
    "heavy-omega2": "omega3",
}


@dataclass
class InfiniteWitness:
    forbidden_age: str            # key into FORBIDDEN_AGES, or "heavy-*" for rule h1
    positions: tuple[int, ...]    # 0-based symbol positions realizing the pattern
    crown_family: str             # generator whose crowns live inside the word

    def to_dict(self) -> dict:
        return {
            "forbidden_age": FORBIDDEN_AGES.get(self.forbidden_age, self.forbidden_age),
            "positions": list(self.positions),
            "crown_family": self.crown_family,
        }


def normalize_word(w: GeneralizedWord) -> GeneralizedWord:
    """Merge runs of 1^w separated only by height-1 columns; drop height-1
    columns adjacent to a 1^w (they are absorbed)."""
    syms: list[WordSymbol] = []
    pending_ones = 0
    for sym in w.symbols:
        if sym.kind == FIN and sym.n == 1:
            pending_ones += 1
            continue
        if sym.kind == REP and sym.n == 1:
            if syms and syms[-1] == rep(1):
                pending_ones = 0
                continue
            pending_ones = 0
            syms.append(rep(1))
            continue
        if pending_ones and not (syms and syms[-1] == rep(1)):
            syms.extend([fin(1)] * pending_ones)
        pending_ones = 0
        syms.append(sym)
    if pending_ones and not (syms and syms[-1] == rep(1)):
        syms.extend([fin(1)] * pending_ones)
    return GeneralizedWord(tuple(syms))


def has_forbidden_age(w: GeneralizedWord) -> Optional[InfiniteWitness]:
    """A witness that Age(w) is infinite dimensional, or None if it is finite."""
    # h1: any symbol hosting unboundedly many columns of height >= 2
    for p, sym in enumerate(w.symbols):
        if sym.kind == OMEGA2:
            return InfiniteWitness("heavy-omega2", (p,), WITNESS_CROWNS["heavy-omega2"])
        if sym.kind == REP and sym.n >= 2:
            return InfiniteWitness("heavy-rep", (p,), WITNESS_CROWNS["heavy-rep"])

    omega_pos = [p for p, s in enumerate(w.symbols) if s.kind == OMEGA]
    # h2: three infinite columns
    if len(omega_pos) >= 3:
        return InfiniteWitness("omega3", tuple(omega_pos[:3]), "omega3")

    def provides_two(s: WordSymbol) -> bool:
        return (s.kind == FIN and s.n >= 2) or s.kind == OMEGA

    # h3: 1^w, (>=2), 1^w, (>=2), 1^w at increasing positions
    hit = _match_pattern(w.symbols, [_is_rep1, provides_two, _is_rep1, provides_two, _is_rep1])
    if hit:
        return InfiniteWitness("ones2", hit, "ones2")
    # h4: w, 1^w, w, 1^w
    hit = _match_pattern(w.symbols, [_is_omega, _is_rep1, _is_omega, _is_rep1])
    if hit:
        return InfiniteWitness("w1w", hit, "w1w")
    # h5: 1^w, w, 1^w, w
    hit = _match_pattern(w.symbols, [_is_rep1, _is_omega, _is_rep1, _is_omega])
    if hit:
        return InfiniteWitness("w1w-mirror", hit, "w1w-mirror")
    return None


def _is_rep1(s: WordSymbol) -> bool:
    return s.kind == REP and s.n == 1


def _is_omega(s: WordSymbol) -> bool:
    return s.kind == OMEGA


def _match_pattern(symbols, predicates) -> Optional[tuple[int, ...]]:
    pos = []
    start = 0
    for pred in predicates:
        p = next((i for i in range(start, len(symbols)) if pred(symbols[i])), None)
        if p is None:
            return None
        pos.append(p)
        start = p + 1
    return tuple(pos)


# ---------------------------------------------------------------------------
# maximal finite-dimensional templates


TEMPLATE_1 = "a w b 1^w c 1^w d w e"
TEMPLATE_2 = "a 1^w b w c w d 1^w e"


@dataclass
class TemplateMatch:
    template: int                      # 1 or 2
    blocks: dict[str, tuple[int, ...]]  # finite blocks a..e as part tuples

    def to_dict(self) -> dict:
        return {
            "template": TEMPLATE_1 if self.template == 1 else TEMPLATE_2,
            "blocks": {k: list(v) for k, v in self.blocks.items()},
        }


def maximal_shape_match(w: GeneralizedWord) -> Optional[TemplateMatch]:
    """Match the word's unbounded symbols into one of the two maximal shapes.

    Only defined over the reduced alphabet; heavier symbols are rejected.
    Returns None exactly when the word hosts a forbidden pattern (the
    finite/infinite dichotomy, checked exhaustively in the tests).
    """
    for sym in w.symbols:
        if sym.kind == OMEGA2 or (sym.kind == REP and sym.n >= 2):
            raise ValueError(f"symbol {sym} outside the reduced alphabet")
    norm = normalize_word(w)
    slots_1 = [_is_omega, _is_rep1, _is_rep1, _is_omega]
    slots_2 = [_is_rep1, _is_omega, _is_omega, _is_rep1]
    for template, slots in ((1, slots_1), (2, slots_2)):
        assignment = _assign_slots(norm.symbols, slots)
        if assignment is not None:
            blocks = _extract_blocks(norm.symbols, assignment)
            return TemplateMatch(template, blocks)
    return None


def _assign_slots(symbols, slots) -> Optional[list[Optional[int]]]:
    """Leftmost assignment of every unbounded symbol to a compatible slot."""
    unbounded = [(p, s) for p, s in enumerate(symbols) if s.kind in (OMEGA, REP)]

    def rec(u: int, slot: int) -> Optional[list[Optional[int]]]:
        if u == len(unbounded):
            return [None] * len(slots)
        if slot == len(slots):
            return None
        p, s = unbounded[u]
        if slots[slot](s):
            rest = rec(u + 1, slot + 1)
            if rest is not None:
                out = list(rest)
                out[slot] = p
                return out
        skipped = rec(u, slot + 1)
        return skipped

    return rec(0, 0)


def _extract_blocks(symbols, assignment) -> dict[str, tuple[int, ...]]:
    """Finite blocks a..e; a column in a merged gap goes to the earliest block."""
    names = "abcde"
    blocks: dict[str, list[int]] = {name: [] for name in names}
    for p, s in enumerate(symbols):
        if s.kind != FIN:
            continue
        g = 0
        for idx, q in enumerate(assignment):
            if q is not None and q < p:
                g = idx + 1
        blocks[names[g]].append(s.n)
    return {name: tuple(v) for name, v in blocks.items()}


# ---------------------------------------------------------------------------
# partition-side normalization


@dataclass(frozen=True)
class PartitionShape:
    """The shape with k infinite rows, body lam (all parts > ell), and an
    infinite tail of rows of height ell."""

    k: int
    lam: Partition
    ell: int

    def __post_init__(self):
        if self.lam.parts and self.lam.parts[-1] <= self.ell:
            raise ValueError("body parts must exceed the tail height")

    @property
    def bound(self) -> int:
        return self.k + len(self.lam) + self.ell

    def to_dict(self) -> dict:
        return {"k": self.k, "lambda": list(self.lam.parts), "ell": self.ell, "bound": self.bound}


def normalize_partition_word(w: GeneralizedWord) -> PartitionShape:
    """Smallest covering shape for the partition age of a word without w^w."""
    k = 0
    ell = 0
    finite: list[int] = []
    for sym in w.symbols:
        if sym.kind == OMEGA2:
            raise ValueError("w^w has no finite covering shape")
        if sym.kind == OMEGA:
            k += 1
        elif sym.kind == REP:
            ell = max(ell, sym.n)
        else:
            finite.append(sym.n)
    lam = Partition(tuple(sorted((n for n in finite if n > ell), reverse=True)))
    return PartitionShape(k, lam, ell)


# ---------------------------------------------------------------------------
# downset classification (unions of ages)


@dataclass
class ClassificationReport:
    kind: str                          # "composition" | "partition"
    verdict: str                       # "Finite" | "Infinite"
    words: list[str] = field(default_factory=list)
    witness: Optional[InfiniteWitness] = None
    witness_word: Optional[int] = None
    matches: list[Optional[dict]] = field(default_factory=list)
    bound: Optional[int] = None
    shapes: list[Optional[dict]] = field(default_factory=list)
    justification: str = ""

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "verdict": self.verdict,
            "words": self.words,
        }
        if self.verdict == "Infinite":
            out["witness_word"] = self.witness_word
            out["witness"] = self.witness.to_dict() if self.witness else None
        elif self.kind == "composition":
            out["templates"] = self.matches
        else:
            out["bound"] = self.bound
            out["shapes"] = self.shapes
        out["justification"] = self.justification
        return out


UNION_RULE = (
    "a union of ages is infinite dimensional iff some single age is: ages are "
    "exactly the downsets that are not unions of proper subdownsets, so an "
    "obstruction inside the union lies inside one age, and a finite union of "
    "finite-dimensional downsets is finite dimensional (dimension of a union "
    "of two downsets is at most the sum)"
)


def classify_composition_downset(words: Sequence[GeneralizedWord]) -> ClassificationReport:
    matches: list[Optional[dict]] = []
    for idx, w in enumerate(words):
        witness = has_forbidden_age(w)
        if witness is not None:
            return ClassificationReport(
                "composition",
                "Infinite",
                [str(x) for x in words],
                witness,
                idx,
                justification=UNION_RULE,
            )
        match = maximal_shape_match(w)
        matches.append(match.to_dict() if match else None)
    return ClassificationReport(
        "composition",
        "Finite",
        [str(x) for x in words],
        matches=matches,
        justification=UNION_RULE,
    )


def classify_partition_downset(words: Sequence[GeneralizedWord]) -> ClassificationReport:
    shapes: list[Optional[dict]] = []
    bound = 0
    for idx, w in enumerate(words):
        if any(s.kind == OMEGA2 for s in w.symbols):
            p = next(p for p, s in enumerate(w.symbols) if s.kind == OMEGA2)
            witness = InfiniteWitness("heavy-omega2", (p,), "partition")
            return ClassificationReport(
                "partition",
                "Infinite",
                [str(x) for x in words],
                witness,
                idx,
                justification="w^w hosts every partition",
            )
        shape = normalize_partition_word(w)
        shapes.append(shape.to_dict())
        bound = max(bound, shape.bound)
    return ClassificationReport(
        "partition",
        "Finite",
        [str(x) for x in words],
        bound=bound,
        shapes=shapes,
        justification=UNION_RULE,
    )
