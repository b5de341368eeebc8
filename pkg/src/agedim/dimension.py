"""Exact Dushnik-Miller dimension of finite posets.

Dimension is computed as the least number of parts in a partition of the
critical pairs into reversible sets: a set of critical pairs is reversible
iff the poset together with the reversed pairs is acyclic, and any family of
linear extensions realizes the poset iff it reverses every critical pair.
The solver runs a greedy first-fit pass for an upper bound, a greedy clique
on the pairwise-conflict graph for a lower bound, and a backtracking search
with incremental cycle detection and first-fit symmetry breaking in between.
A node budget turns an undecided search into an explicit "inconclusive"
answer, never a wrong one.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .posets import FinitePoset, LinearExtension, extend_to_linear, Refinement, verify_realizer

DEFAULT_NODE_LIMIT = 2_000_000


@dataclass
class DimensionResult:
    value: Optional[int]              # exact dimension when status == "exact"
    status: str                       # "exact" | "exceeds" | "inconclusive"
    witness: list[LinearExtension] = field(default_factory=list)
    lower_bound: int = 1
    upper_bound: Optional[int] = None
    exhausted_below: bool = False     # certified that value-1 is impossible
    nodes: int = 0

    def __str__(self) -> str:
        if self.status == "exact":
            return str(self.value)
        if self.status == "exceeds":
            return f"exceeds {self.upper_bound}"
        return f"inconclusive in [{self.lower_bound}, {self.upper_bound}]"


def critical_pairs(P: FinitePoset) -> list[tuple[int, int]]:
    """Ordered incomparable pairs (x, y) with D(x) subset D(y) and U(y) subset U(x)."""
    out = []
    for x in range(P.n):
        down_x, up_x = P.lt_cols[x], P.lt_rows[x]
        for y in range(P.n):
            if x == y or P.lt(x, y) or P.lt(y, x):
                continue
            if down_x & ~P.lt_cols[y]:
                continue
            if P.lt_rows[y] & ~up_x:
                continue
            out.append((x, y))
    return out


class _Bucket:
    """Reversed critical pairs plus the host order, kept transitively closed."""

    __slots__ = ("reach", "members")

    def __init__(self, P: FinitePoset):
        self.reach = list(P.lt_rows)
        self.members: list[tuple[int, int]] = []

    def can_add(self, x: int, y: int) -> bool:
        # adding the edge y -> x must not close a cycle: no existing path x -> y
        return not self.reach[x] >> y & 1

    def add(self, x: int, y: int) -> list[tuple[int, int]]:
        """Insert edge y -> x; returns an undo log of (index, old_row)."""
        undo = []
        target = self.reach[x] | 1 << x
        for v in range(len(self.reach)):
            if v == y or self.reach[v] >> y & 1:
                new = self.reach[v] | target
                if new != self.reach[v]:
                    undo.append((v, self.reach[v]))
                    self.reach[v] = new
        self.members.append((x, y))
        return undo

    def undo(self, log: list[tuple[int, int]]) -> None:
        for v, old in log:
            self.reach[v] = old
        self.members.pop()


def _pairs_conflict(P: FinitePoset, p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Whether two critical pairs cannot be reversed by the same extension."""
    (x1, y1), (x2, y2) = p, q
    # cycle y1 -> x1 ~> y2 -> x2 ~> y1 (paths in P, reflexively)
    le = P.le
    return le(x1, y2) and le(x2, y1)


def _greedy_clique(P: FinitePoset, pairs: list[tuple[int, int]], adj: list[int]) -> int:
    best = 0
    n = len(pairs)
    for start in range(n):
        clique = [start]
        ok = adj[start]
        for j in range(n):
            if ok >> j & 1:
                if all(adj[c] >> j & 1 for c in clique):
                    clique.append(j)
        best = max(best, len(clique))
    return best


def _greedy_cover(P: FinitePoset, pairs: list[tuple[int, int]]) -> list[_Bucket]:
    buckets: list[_Bucket] = []
    for (x, y) in pairs:
        for b in buckets:
            if b.can_add(x, y):
                b.add(x, y)
                break
        else:
            b = _Bucket(P)
            b.add(x, y)
            buckets.append(b)
    return buckets


def _buckets_to_witness(P: FinitePoset, buckets: Sequence[_Bucket]) -> list[LinearExtension]:
    out = []
    for k, b in enumerate(buckets):
        ref = Refinement.from_edges(
            P, P.labels, [(P.labels[y], P.labels[x]) for x, y in b.members], note=f"solver-bucket-{k}"
        )
        out.append(extend_to_linear(P, ref))
    if not out:
        out.append(extend_to_linear(P))
    return out


def _search_exact(
    P: FinitePoset,
    pairs: list[tuple[int, int]],
    d: int,
    node_limit: int,
) -> tuple[Optional[list[_Bucket]], bool, int]:
    """Try to partition pairs into d reversible buckets.

    Returns (buckets or None, search_completed, nodes_used).
    """
    buckets = [_Bucket(P) for _ in range(d)]
    nodes = 0
    completed = True

    # most-conflicting pairs first, canonical tie-break for determinism
    n = len(pairs)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if _pairs_conflict(P, pairs[i], pairs[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    order = sorted(range(n), key=lambda i: (-adj[i].bit_count(), i))
    seq = [pairs[i] for i in order]
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * len(seq) + 1000))

    def dfs(k: int, used: int) -> Optional[bool]:
        nonlocal nodes, completed
        if k == len(seq):
            return True
        x, y = seq[k]
        limit = min(used + 1, d)
        for bi in range(limit):
            nodes += 1
            if nodes > node_limit:
                completed = False
                return None
            b = buckets[bi]
            if b.can_add(x, y):
                log = b.add(x, y)
                res = dfs(k + 1, max(used, bi + 1))
                if res:
                    return True
                b.undo(log)
                if res is None:
                    return None
        return False

    found = dfs(0, 0)
    if found:
        return buckets, True, nodes
    return None, completed, nodes


def exact_dimension(
    P: FinitePoset,
    d_max: Optional[int] = None,
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> DimensionResult:
    """Least d such that the critical pairs split into d reversible sets.

    The returned witness is a verified realizer of that size.  If the node
    budget is hit before d is certified, the result is marked inconclusive
    and carries the best verified bounds instead of a guess.
    """
    if P.n == 0:
        raise ValueError("empty poset")
    pairs = critical_pairs(P)
    if not pairs:
        return DimensionResult(1, "exact", [extend_to_linear(P)], 1, 1, True)

    greedy = _greedy_cover(P, pairs)
    ub = len(greedy)
    best_buckets = greedy

    n = len(pairs)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if _pairs_conflict(P, pairs[i], pairs[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    lb = max(2, _greedy_clique(P, pairs, adj))

    if d_max is not None and lb > d_max:
        return DimensionResult(None, "exceeds", [], lb, None, False)

    nodes_total = 0
    d = lb
    exhausted = True
    while d < ub and (d_max is None or d <= d_max):
        buckets, completed, nodes = _search_exact(P, pairs, d, max(1, node_limit - nodes_total))
        nodes_total += nodes
        if buckets is not None:
            best_buckets = buckets
            ub = d
            break
        if not completed:
            witness = _buckets_to_witness(P, best_buckets)
            return DimensionResult(None, "inconclusive", witness, d, ub, False, nodes_total)
        d += 1
        exhausted = True

    if d_max is not None and ub > d_max:
        return DimensionResult(None, "exceeds", [], max(lb, d_max + 1), None, True, nodes_total)

    witness = _buckets_to_witness(P, best_buckets)
    report = verify_realizer(P, [ext.as_refinement() for ext in witness])
    if not report.verified:
        raise AssertionError(f"solver produced an invalid witness: {report.to_dict()}")
    return DimensionResult(ub, "exact", witness, ub, ub, exhausted, nodes_total)


def dimension_at_most(
    P: FinitePoset,
    d: int,
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> Optional[list[LinearExtension]]:
    """A verified realizer with at most d extensions, or None if impossible.

    Raises TimeoutError when the node budget runs out undecided.
    """
    if d < 1:
        return None
    pairs = critical_pairs(P)
    if not pairs:
        return [extend_to_linear(P)]
    greedy = _greedy_cover(P, pairs)
    if len(greedy) <= d:
        witness = _buckets_to_witness(P, greedy)
    else:
        buckets, completed, _ = _search_exact(P, pairs, d, node_limit)
        if buckets is None:
            if not completed:
                raise TimeoutError(f"undecided at d={d} within the node budget")
            return None
        witness = _buckets_to_witness(P, buckets)
    report = verify_realizer(P, [ext.as_refinement() for ext in witness])
    if not report.verified:
        raise AssertionError("solver produced an invalid witness")
    return witness
