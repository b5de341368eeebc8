"""Finite posets, partial refinements, linear extensions, and realizer checks.

The strict order is stored as one Python int per element, used as a bitset of
successors; transitive closure and all pairwise queries are bit-parallel.
A Refinement is a strict partial order on a subset of the ground set that
contains the host order restricted to that subset; a family of refinements
realizes the poset when every ordered incomparable pair is placed both ways
somewhere in the family.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence


class OrderError(ValueError):
    pass


def _closure_inplace(rows: list[int], n: int) -> None:
    """Warshall closure over bitset rows."""
    for k in range(n):
        rk = rows[k]
        if not rk:
            continue
        bit = 1 << k
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk


def _find_cycle_pair(rows: list[int], n: int) -> Optional[tuple[int, int]]:
    for i in range(n):
        if rows[i] >> i & 1:
            # recover some j on the cycle through i
            for j in range(n):
                if i != j and (rows[i] >> j & 1) and (rows[j] >> i & 1):
                    return (i, j)
            return (i, i)
    return None


class FinitePoset:
    """Ground set with a transitively closed strict order."""

    def __init__(self, labels: Sequence[Hashable], lt_rows: list[int], _trusted: bool = False):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != self.n:
            raise OrderError("duplicate labels")
        self.lt_rows = list(lt_rows)
        if not _trusted:
            _closure_inplace(self.lt_rows, self.n)
            bad = _find_cycle_pair(self.lt_rows, self.n)
            if bad is not None:
                raise OrderError(f"not a partial order: cycle through {self.labels[bad[0]]!r}, {self.labels[bad[1]]!r}")
        self.lt_cols = [0] * self.n
        for i in range(self.n):
            row = self.lt_rows[i]
            while row:
                low = row & -row
                self.lt_cols[low.bit_length() - 1] |= 1 << i
                row ^= low
        self.full_mask = (1 << self.n) - 1

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_le(cls, labels: Sequence[Hashable], le: Callable[[Hashable, Hashable], bool]) -> "FinitePoset":
        """Materialize from a reflexive comparison; verifies it is a partial order."""
        labels = tuple(labels)
        n = len(labels)
        rows = [0] * n
        for i, a in enumerate(labels):
            for j, b in enumerate(labels):
                if i != j and le(a, b):
                    rows[i] |= 1 << j
        # antisymmetry
        for i in range(n):
            for j in range(i + 1, n):
                if (rows[i] >> j & 1) and (rows[j] >> i & 1):
                    raise OrderError(f"not a partial order: {labels[i]!r} <= {labels[j]!r} <= {labels[i]!r}")
        # transitivity: closure must not add anything
        closed = list(rows)
        _closure_inplace(closed, n)
        if closed != rows:
            for i in range(n):
                extra = closed[i] & ~rows[i]
                if extra:
                    k = extra.bit_length() - 1
                    mid = next(m for m in range(n) if (rows[i] >> m & 1) and (rows[m] >> k & 1))
                    raise OrderError(
                        f"not a partial order: {labels[i]!r} <= {labels[mid]!r} <= {labels[k]!r} "
                        f"but not {labels[i]!r} <= {labels[k]!r}"
                    )
        return cls(labels, rows, _trusted=True)

    @classmethod
    def from_pairs(cls, labels: Sequence[Hashable], pairs: Iterable[tuple[Hashable, Hashable]]) -> "FinitePoset":
        """Transitive closure of the given strict relations."""
        labels = tuple(labels)
        idx = {lab: i for i, lab in enumerate(labels)}
        rows = [0] * len(labels)
        for a, b in pairs:
            rows[idx[a]] |= 1 << idx[b]
        return cls(labels, rows)

    # -- queries -----------------------------------------------------------

    def lt(self, i: int, j: int) -> bool:
        return bool(self.lt_rows[i] >> j & 1)

    def le(self, i: int, j: int) -> bool:
        return i == j or self.lt(i, j)

    def lt_labels(self, a: Hashable, b: Hashable) -> bool:
        return self.lt(self.index[a], self.index[b])

    def incomparable_pairs(self) -> list[tuple[int, int]]:
        """Unordered incomparable pairs as (i, j) with i < j."""
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if not self.lt(i, j) and not self.lt(j, i):
                    out.append((i, j))
        return out

    def is_chain(self) -> bool:
        return not self.incomparable_pairs()

    def covers(self) -> list[tuple[int, int]]:
        """Edges of the Hasse diagram."""
        out = []
        for i in range(self.n):
            row = self.lt_rows[i]
            rest = row
            while rest:
                low = rest & -rest
                j = low.bit_length() - 1
                rest ^= low
                via = row & self.lt_cols[j]
                if not via:
                    out.append((i, j))
        return out

    def induced(self, sub_labels: Sequence[Hashable]) -> "FinitePoset":
        ids = [self.index[lab] for lab in sub_labels]
        rows = []
        for i in ids:
            row = 0
            for jj, j in enumerate(ids):
                if self.lt(i, j):
                    row |= 1 << jj
            rows.append(row)
        return FinitePoset(tuple(sub_labels), rows, _trusted=True)

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"poset {self.n}"]
        lines.extend(str(lab) for lab in self.labels)
        lines.append("relations")
        for i in range(self.n):
            row = self.lt_rows[i]
            while row:
                low = row & -row
                j = low.bit_length() - 1
                row ^= low
                lines.append(f"{i} < {j}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, label_parser: Callable[[str], Hashable] = lambda s: s) -> "FinitePoset":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("poset "):
            raise OrderError("missing poset header")
        n = int(lines[0].split()[1])
        labels = [label_parser(lines[1 + i]) for i in range(n)]
        if lines[1 + n].strip() != "relations":
            raise OrderError("missing relations section")
        rows = [0] * n
        for line in lines[2 + n:]:
            line = line.strip()
            if not line:
                continue
            i, _, j = line.split()
            rows[int(i)] |= 1 << int(j)
        return cls(labels, rows)


def poset_from(elements: Sequence[Hashable], le_predicate: Callable[[Hashable, Hashable], bool]) -> FinitePoset:
    return FinitePoset.from_le(elements, le_predicate)


# ---------------------------------------------------------------------------
# refinements


class Refinement:
    """A strict partial order on a subset of the host's elements, containing
    the host order restricted to that subset."""

    def __init__(self, host: FinitePoset, domain_mask: int, rows: list[int], note: str = "", _trusted: bool = False):
        self.host = host
        self.domain_mask = domain_mask
        self.rows = rows
        self.note = note
        if not _trusted:
            self._validate()

    def _validate(self) -> None:
        host = self.host
        dm = self.domain_mask
        for i in range(host.n):
            if not dm >> i & 1:
                if self.rows[i]:
                    raise OrderError("refinement relates elements outside its domain")
                continue
            if self.rows[i] & ~dm:
                raise OrderError("refinement relates elements outside its domain")
            if self.rows[i] >> i & 1:
                raise OrderError(f"refinement not irreflexive at {host.labels[i]!r}")
            missing = (host.lt_rows[i] & dm) & ~self.rows[i]
            if missing:
                j = missing.bit_length() - 1
                raise OrderError(
                    f"refinement drops host relation {host.labels[i]!r} < {host.labels[j]!r}"
                )
        for i in range(host.n):
            row = self.rows[i]
            rest = row
            while rest:
                low = rest & -rest
                j = low.bit_length() - 1
                rest ^= low
                if self.rows[j] >> i & 1:
                    raise OrderError(
                        f"refinement not antisymmetric on {host.labels[i]!r}, {host.labels[j]!r}"
                    )
                if self.rows[j] & ~row:
                    raise OrderError("refinement not transitively closed")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        host: FinitePoset,
        domain: Iterable[Hashable],
        edges: Iterable[tuple[Hashable, Hashable]] = (),
        note: str = "",
    ) -> "Refinement":
        """Transitive closure of host|domain plus the given strict edges."""
        dm = 0
        for lab in domain:
            dm |= 1 << host.index[lab]
        rows = [host.lt_rows[i] & dm if dm >> i & 1 else 0 for i in range(host.n)]
        for a, b in edges:
            ia, ib = host.index[a], host.index[b]
            if not (dm >> ia & 1) or not (dm >> ib & 1):
                raise OrderError("edge endpoint outside refinement domain")
            rows[ia] |= 1 << ib
        _closure_inplace(rows, host.n)
        bad = _find_cycle_pair(rows, host.n)
        if bad is not None:
            raise OrderError(
                f"refinement conflicts with host order: cycle through "
                f"{host.labels[bad[0]]!r}, {host.labels[bad[1]]!r}"
            )
        return cls(host, dm, rows, note)

    @classmethod
    def from_total_order(cls, host: FinitePoset, order: Sequence[Hashable], note: str = "") -> "Refinement":
        """Total order on its domain, given as a sequence from bottom to top."""
        ids = [host.index[lab] for lab in order]
        dm = 0
        for i in ids:
            dm |= 1 << i
        rows = [0] * host.n
        seen = 0
        for i in reversed(ids):
            rows[i] = seen
            seen |= 1 << i
        ref = cls(host, dm, rows, note, _trusted=True)
        ref._validate_extension()
        return ref

    def _validate_extension(self) -> None:
        # containment of host|domain (total orders are transitive by construction)
        host = self.host
        dm = self.domain_mask
        for i in range(host.n):
            if dm >> i & 1:
                missing = (host.lt_rows[i] & dm) & ~self.rows[i]
                if missing:
                    j = missing.bit_length() - 1
                    raise OrderError(
                        f"order violates host relation {host.labels[i]!r} < {host.labels[j]!r}"
                    )

    # -- views -------------------------------------------------------------

    @property
    def domain_indices(self) -> list[int]:
        out = []
        dm = self.domain_mask
        while dm:
            low = dm & -dm
            out.append(low.bit_length() - 1)
            dm ^= low
        return out

    def domain_labels(self) -> list[Hashable]:
        return [self.host.labels[i] for i in self.domain_indices]

    def places_below(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def pairs(self) -> list[tuple[int, int]]:
        out = []
        for i in self.domain_indices:
            row = self.rows[i]
            while row:
                low = row & -row
                out.append((i, low.bit_length() - 1))
                row ^= low
        return out

    def restrict(self, sub_labels: Iterable[Hashable]) -> "Refinement":
        sm = 0
        for lab in sub_labels:
            sm |= 1 << self.host.index[lab]
        sm &= self.domain_mask
        rows = [self.rows[i] & sm if sm >> i & 1 else 0 for i in range(self.host.n)]
        return Refinement(self.host, sm, rows, f"{self.note}|restricted", _trusted=True)


@dataclass(frozen=True)
class LinearExtension:
    """A total order on a subset of the host, consistent with the host order."""

    host: FinitePoset
    order: tuple[int, ...]
    note: str = ""

    def labels_order(self) -> list[Hashable]:
        return [self.host.labels[i] for i in self.order]

    def as_refinement(self) -> Refinement:
        return Refinement.from_total_order(self.host, self.labels_order(), self.note)

    def position(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self.order)}


def extend_to_linear(host: FinitePoset, ref: Optional[Refinement] = None) -> LinearExtension:
    """Deterministic topological extension; ties broken by canonical index."""
    n = host.n
    rows = list(host.lt_rows) if ref is None else [host.lt_rows[i] | ref.rows[i] for i in range(n)]
    indeg = [0] * n
    for i in range(n):
        row = rows[i]
        while row:
            low = row & -row
            indeg[low.bit_length() - 1] += 1
            row ^= low
    ready = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        i = heapq.heappop(ready)
        out.append(i)
        row = rows[i]
        while row:
            low = row & -row
            j = low.bit_length() - 1
            row ^= low
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, j)
    if len(out) != n:
        raise OrderError("cycle: refinement is inconsistent with the poset")
    note = "" if ref is None else ref.note
    return LinearExtension(host, tuple(out), note)


def extend_on_domain(host: FinitePoset, ref: Refinement) -> LinearExtension:
    """Linear extension of the subposet induced on the refinement's domain."""
    ids = ref.domain_indices
    pos = {i: p for p, i in enumerate(ids)}
    rows = [0] * len(ids)
    for p, i in enumerate(ids):
        row = (host.lt_rows[i] | ref.rows[i]) & ref.domain_mask
        while row:
            low = row & -row
            rows[p] |= 1 << pos[low.bit_length() - 1]
            row ^= low
    indeg = [0] * len(ids)
    for p in range(len(ids)):
        row = rows[p]
        while row:
            low = row & -row
            indeg[low.bit_length() - 1] += 1
            row ^= low
    ready = [p for p in range(len(ids)) if indeg[p] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        p = heapq.heappop(ready)
        out.append(ids[p])
        row = rows[p]
        while row:
            low = row & -row
            q = low.bit_length() - 1
            row ^= low
            indeg[q] -= 1
            if indeg[q] == 0:
                heapq.heappush(ready, q)
    if len(out) != len(ids):
        raise OrderError("cycle: refinement is inconsistent with the poset")
    return LinearExtension(host, tuple(out), ref.note)


# ---------------------------------------------------------------------------
# realizer verification


@dataclass
class RealizerReport:
    verified: bool
    unbroken_pairs: list[tuple[Hashable, Hashable]] = field(default_factory=list)
    non_extension_violations: list[tuple[str, Hashable, Hashable]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.verified

    def to_dict(self) -> dict:
        return {
            "verified": self.verified,
            "unbroken_pairs": [[str(a), str(b)] for a, b in self.unbroken_pairs],
            "violations": [[note, str(a), str(b)] for note, a, b in self.non_extension_violations],
        }


def verify_realizer(host: FinitePoset, refinements: Sequence[Refinement]) -> RealizerReport:
    """Check the incomparable-pair criterion over a family of partial refinements.

    verified iff every refinement extends the host on its domain and, for
    every ordered incomparable pair (x, y), some refinement places y below x.
    """
    n = host.n
    violations = []
    for ref in refinements:
        if ref.host is not host:
            raise OrderError("refinement built against a different poset")
        for i in ref.domain_indices:
            bad = ref.rows[i] & host.lt_cols[i]
            while bad:
                low = bad & -bad
                j = low.bit_length() - 1
                bad ^= low
                violations.append((ref.note, host.labels[i], host.labels[j]))
    covered = [0] * n  # covered[y] bit x set: some refinement places y below x
    for ref in refinements:
        for y in ref.domain_indices:
            covered[y] |= ref.rows[y]
    unbroken = []
    for x, y in _incomparable(host):
        if not covered[y] >> x & 1:
            unbroken.append((host.labels[x], host.labels[y]))
        if not covered[x] >> y & 1:
            unbroken.append((host.labels[y], host.labels[x]))
    return RealizerReport(not violations and not unbroken, unbroken, violations)


def _incomparable(host: FinitePoset):
    for i in range(host.n):
        for j in range(i + 1, host.n):
            if not host.lt(i, j) and not host.lt(j, i):
                yield (i, j)


def realizer_intersection(host: FinitePoset, extensions: Sequence[LinearExtension]) -> list[int]:
    """Strict-order rows of the intersection of full linear extensions."""
    rows = [host.full_mask & ~(1 << i) for i in range(host.n)]
    for ext in extensions:
        ext_rows = [0] * host.n
        seen = 0
        for i in reversed(ext.order):
            ext_rows[i] = seen
            seen |= 1 << i
        for i in range(host.n):
            rows[i] &= ext_rows[i]
    return rows


# ---------------------------------------------------------------------------
# combinators


def ordinal_sum(
    host: FinitePoset,
    lower: Refinement | Iterable[Hashable],
    upper: Iterable[Hashable],
    note: str = "ordinal-sum",
) -> Refinement:
    """All lower relations, host relations within upper, and lower < upper."""
    if isinstance(lower, Refinement):
        low_mask = lower.domain_mask
        low_rows = lower.rows
    else:
        low_mask = 0
        for lab in lower:
            low_mask |= 1 << host.index[lab]
        low_rows = [host.lt_rows[i] & low_mask if low_mask >> i & 1 else 0 for i in range(host.n)]
    up_mask = 0
    for lab in upper:
        up_mask |= 1 << host.index[lab]
    if low_mask & up_mask:
        shared = (low_mask & up_mask).bit_length() - 1
        raise OrderError(f"ordinal sum parts overlap at {host.labels[shared]!r}")
    # guard: no upper element may sit below a lower element in the host
    for j in range(host.n):
        if up_mask >> j & 1 and host.lt_rows[j] & low_mask:
            i = (host.lt_rows[j] & low_mask).bit_length() - 1
            raise OrderError(
                f"ordinal sum invalid: {host.labels[j]!r} < {host.labels[i]!r} in the host"
            )
    rows = [0] * host.n
    for i in range(host.n):
        if low_mask >> i & 1:
            rows[i] = low_rows[i] | up_mask
        elif up_mask >> i & 1:
            rows[i] = host.lt_rows[i] & up_mask
    return Refinement(host, low_mask | up_mask, rows, note, _trusted=True)


def substitute_intervals(
    host: FinitePoset,
    base_order: Sequence[Hashable],
    expansion: dict[Hashable, Sequence[Hashable]],
    note: str = "interval-substitution",
) -> Refinement:
    """Replace each element of a linear order by an ordered chain of host elements.

    The result is the total order on the union of the chains that keeps the
    base order between chains and each chain's internal order.  Chains must be
    pairwise disjoint; the result must still refine the host order on its
    domain (validated).
    """
    seen: set[Hashable] = set()
    order: list[Hashable] = []
    for v in base_order:
        chain = expansion.get(v, (v,))
        for lab in chain:
            if lab in seen:
                raise OrderError(f"overlapping chains at {lab!r}")
            seen.add(lab)
            order.append(lab)
    return Refinement.from_total_order(host, order, note)


def sort_by(
    host: FinitePoset,
    elements: Iterable[Hashable],
    key: Callable[[Hashable], object],
    note: str = "sort",
) -> Refinement:
    """Refinement induced by a monotone key: x < y iff key(x) < key(y), plus
    the host order on ties; monotonicity is checked on the given elements."""
    labs = list(elements)
    ids = [host.index[lab] for lab in labs]
    keys = {i: key(lab) for i, lab in zip(ids, labs)}
    dm = 0
    for i in ids:
        dm |= 1 << i
    for i in ids:
        row = host.lt_rows[i] & dm
        while row:
            low = row & -row
            j = low.bit_length() - 1
            row ^= low
            if keys[i] > keys[j]:  # type: ignore[operator]
                raise OrderError(
                    f"key not monotone: {host.labels[i]!r} < {host.labels[j]!r} "
                    f"but key {keys[i]!r} > {keys[j]!r}"
                )
    rows = [0] * host.n
    for i in ids:
        for j in ids:
            if i != j and keys[i] < keys[j]:  # type: ignore[operator]
                rows[i] |= 1 << j
        rows[i] |= host.lt_rows[i] & dm
    return Refinement(host, dm, rows, note, _trusted=True)


def restrict_realizer(refinements: Sequence[Refinement], subset: Iterable[Hashable]) -> list[Refinement]:
    subset = list(subset)
    return [ref.restrict(subset) for ref in refinements]


# ---------------------------------------------------------------------------
# realizer serialization (structured)


def realizer_to_dict(host: FinitePoset, refinements: Sequence[Refinement]) -> dict:
    return {
        "elements": [str(lab) for lab in host.labels],
        "refinements": [
            {
                "note": ref.note,
                "domain": ref.domain_indices,
                "pairs": ref.pairs(),
            }
            for ref in refinements
        ],
    }


def realizer_from_dict(host: FinitePoset, data: dict) -> list[Refinement]:
    out = []
    for entry in data["refinements"]:
        dm = 0
        for i in entry["domain"]:
            dm |= 1 << i
        rows = [0] * host.n
        for i, j in entry["pairs"]:
            rows[i] |= 1 << j
        out.append(Refinement(host, dm, rows, entry.get("note", "")))
    return out
