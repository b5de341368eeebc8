"""Text grammar, ASCII diagram rendering, and the structured report format.

Grammar: a composition is whitespace-separated positive integers ("3 4 1 3",
empty string for the empty composition); a word adds the tokens N^w, w and
w^w ("1^w w 2 1 3 1^w").  Structured reports are JSON with a stable field
order so runs can be diffed.
"""

from __future__ import annotations

import json
from typing import Any

from .orders import (
    Composition,
    GeneralizedWord,
    Partition,
    WordSymbol,
    W,
    WW,
    fin,
    rep,
)


class ParseError(ValueError):
    pass


def parse_composition(text: str) -> Composition:
    tokens = text.split()
    parts = []
    for pos, tok in enumerate(tokens):
        if not tok.isdigit() or int(tok) < 1:
            raise ParseError(f"bad composition part {tok!r} at position {pos}")
        parts.append(int(tok))
    return Composition(tuple(parts))


def parse_partition(text: str) -> Partition:
    c = parse_composition(text)
    try:
        return Partition(c.parts)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_word(text: str) -> GeneralizedWord:
    syms: list[WordSymbol] = []
    for pos, tok in enumerate(text.split()):
        if tok == "w":
            syms.append(W)
        elif tok == "w^w":
            syms.append(WW)
        elif tok.endswith("^w") and tok[:-2].isdigit() and int(tok[:-2]) >= 1:
            syms.append(rep(int(tok[:-2])))
        elif tok.isdigit() and int(tok) >= 1:
            syms.append(fin(int(tok)))
        else:
            raise ParseError(f"bad word token {tok!r} at position {pos}")
    return GeneralizedWord(tuple(syms))


# ---------------------------------------------------------------------------
# ASCII diagrams


def render_skyline(c: Composition) -> str:
    """One text row per unit of height, tallest row first."""
    if not c.parts:
        return "(empty)"
    height = max(c.parts)
    rows = []
    for h in range(height, 0, -1):
        rows.append("".join("#" if p >= h else "." for p in c.parts))
    return "\n".join(rows)


def render_ferrers(lam: Partition) -> str:
    if not lam.parts:
        return "(empty)"
    return "\n".join("#" * p for p in lam.parts)


def render_word_skyline(w: GeneralizedWord) -> str:
    """Skyline sketch of a word; infinite heights drawn as a capped column."""
    if not w.symbols:
        return "(empty)"
    finite = [s.n for s in w.symbols if s.kind in ("fin", "rep")]
    cap = max(finite, default=1) + 2
    heights = []
    marks = []
    for s in w.symbols:
        if s.kind == "fin":
            heights.append(s.n)
            marks.append(" ")
        elif s.kind == "rep":
            heights.append(s.n)
            marks.append("*")
        elif s.kind == "omega":
            heights.append(cap)
            marks.append("^")
        else:
            heights.append(cap)
            marks.append("@")
    rows = []
    for h in range(cap, 0, -1):
        rows.append("".join("#" if p >= h else "." for p in heights))
    rows.append("".join(marks))
    rows.append("(* repeated column, ^ infinite column, @ repeated infinite)")
    return "\n".join(rows)


# ---------------------------------------------------------------------------
# structured reports


def to_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2)


def from_json(text: str) -> dict[str, Any]:
    return json.loads(text)
