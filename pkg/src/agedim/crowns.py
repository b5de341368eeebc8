"""Crown families witnessing infinite dimension inside specific ages.

The crown on 2n elements has a_i < b_j exactly when i != j and has dimension
n.  Each generator below instantiates one concrete family of compositions or
partitions together with the age that hosts it, so membership and the crown
comparison pattern can be machine-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .orders import (
    Composition,
    GeneralizedWord,
    Partition,
    W,
    WW,
    age_member,
    fin,
    partition_le,
    rep,
    subword_le,
    word_of,
    young_join,
)
from .posets import FinitePoset


@dataclass
class CrownFamily:
    name: str
    n: int
    lower: list[Hashable]
    upper: list[Hashable]
    host: GeneralizedWord
    claimed_dimension: int
    le: Callable[[Hashable, Hashable], bool]

    def elements(self) -> list[Hashable]:
        return list(self.lower) + list(self.upper)

    def poset(self) -> FinitePoset:
        return FinitePoset.from_le(self.elements(), self.le)

    def to_dict(self) -> dict:
        return {
            "family": self.name,
            "n": self.n,
            "claimed_dimension": self.claimed_dimension,
            "host": str(self.host),
            "lower": [str(x) for x in self.lower],
            "upper": [str(x) for x in self.upper],
        }


@dataclass
class CrownReport:
    verified: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.verified


def abstract_crown(n: int) -> FinitePoset:
    """The standard crown poset on labels a1..an, b1..bn."""
    if n < 3:
        raise ValueError("crown needs n >= 3")
    labels = [f"a{i}" for i in range(1, n + 1)] + [f"b{i}" for i in range(1, n + 1)]
    pairs = [
        (f"a{i}", f"b{j}")
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
    ]
    return FinitePoset.from_pairs(labels, pairs)


def _ones(k: int) -> tuple[int, ...]:
    return (1,) * k


def partition_crown(n: int) -> CrownFamily:
    """Partitions a_i with i parts equal to n-i; b_i the join of the others."""
    if n < 4:
        raise ValueError("partition crown needs n >= 4")
    lower = [Partition(((n - i),) * i) for i in range(1, n)]
    upper = []
    for i in range(1, n):
        join = Partition()
        for j in range(1, n):
            if j != i:
                join = young_join(join, lower[j - 1])
        upper.append(join)
    return CrownFamily(
        "partition", n, lower, upper, GeneralizedWord((WW,)), n - 1, partition_le
    )


def crown_omega3(n: int) -> CrownFamily:
    """Crown of dimension n-3 inside the age of three infinite columns."""
    if n < 5:
        raise ValueError("needs n >= 5")
    lower = [Composition((i + 1, n - 1 - i)) for i in range(1, n - 2)]
    upper = [Composition((i, n, n - 2 - i)) for i in range(1, n - 2)]
    return CrownFamily(
        "omega3", n, lower, upper, word_of(W, W, W), n - 3, subword_le
    )


def crown_ones2(n: int) -> CrownFamily:
    """Crown of dimension n-3 inside Age(1^w 2 1^w 2 1^w)."""
    if n < 5:
        raise ValueError("needs n >= 5")
    lower = [Composition(_ones(i + 1) + (2,) + _ones(n - 1 - i)) for i in range(1, n - 2)]
    upper = [
        Composition(_ones(i) + (2,) + _ones(n) + (2,) + _ones(n - 2 - i))
        for i in range(1, n - 2)
    ]
    host = GeneralizedWord((rep(1), fin(2), rep(1), fin(2), rep(1)))
    return CrownFamily("ones2", n, lower, upper, host, n - 3, subword_le)


def crown_w1w(n: int) -> CrownFamily:
    """Crown of dimension n-1 inside Age(w 1^w w 1^w)."""
    if n < 3:
        raise ValueError("needs n >= 3")
    lower = [Composition((i + 1,) + _ones(n - i + 1)) for i in range(1, n)]
    upper = [
        Composition((i,) + _ones(i - 1) + (n,) + _ones(n - i))
        for i in range(1, n)
    ]
    host = GeneralizedWord((W, rep(1), W, rep(1)))
    return CrownFamily("w1w", n, lower, upper, host, n - 1, subword_le)


def crown_w1w_mirror(n: int) -> CrownFamily:
    """Reversal of crown_w1w inside the isomorphic age Age(1^w w 1^w w)."""
    base = crown_w1w(n)
    host = GeneralizedWord((rep(1), W, rep(1), W))
    return CrownFamily(
        "w1w-mirror",
        n,
        [c.reverse() for c in base.lower],
        [c.reverse() for c in base.upper],
        host,
        base.claimed_dimension,
        subword_le,
    )


def crown_2w(n: int) -> CrownFamily:
    """Crown of dimension n inside the age of infinitely many height-2 columns."""
    if n < 3:
        raise ValueError("needs n >= 3")
    lower = [Composition(_ones(i - 1) + (2,) + _ones(n - i)) for i in range(1, n + 1)]
    upper = [
        Composition((2,) * (i - 1) + (1,) + (2,) * (n - i)) for i in range(1, n + 1)
    ]
    return CrownFamily("2w", n, lower, upper, GeneralizedWord((rep(2),)), n, subword_le)


CROWN_GENERATORS: dict[str, Callable[[int], CrownFamily]] = {
    "partition": partition_crown,
    "omega3": crown_omega3,
    "ones2": crown_ones2,
    "w1w": crown_w1w,
    "w1w-mirror": crown_w1w_mirror,
    "2w": crown_2w,
}


def verify_crown(family: CrownFamily) -> CrownReport:
    """Check the crown comparison pattern and host-age membership."""
    failures = []
    m = len(family.lower)
    le = family.le
    if len(family.upper) != m or m != family.claimed_dimension:
        failures.append(
            f"size mismatch: {m} lower / {len(family.upper)} upper vs claimed {family.claimed_dimension}"
        )
    for i, a in enumerate(family.lower):
        for j, b in enumerate(family.upper):
            below = le(a, b)
            if i == j and below:
                failures.append(f"a{i+1} <= b{j+1}: {a} <= {b}")
            if i != j and not below:
                failures.append(f"a{i+1} !<= b{j+1}: {a} !<= {b}")
            if le(b, a):
                failures.append(f"b{j+1} <= a{i+1}: {b} <= {a}")
    for tier, name in ((family.lower, "a"), (family.upper, "b")):
        for i in range(m):
            for j in range(m):
                if i != j and le(tier[i], tier[j]):
                    failures.append(f"{name}{i+1} <= {name}{j+1}: {tier[i]} <= {tier[j]}")
    for x in family.elements():
        c = x.as_composition() if isinstance(x, Partition) else x
        if not age_member(c, family.host):
            failures.append(f"{x} not a member of Age({family.host})")
    return CrownReport(not failures, failures)
