"""Constructive realizers for truncated ages, mirroring the finite-dimension proofs.

Each builder returns a RealizerBundle: the truncated age as a poset together
with a family of partial refinements that passes verify_realizer.  The family
sizes depend only on the word, never on the truncation window.

The constructions compose recursively:

  * a word over positive integers and 1^w alone reduces, by stripping finite
    prefixes/suffixes and reversing, to the banded shape 1^w c 1^w;
  * a single infinite column is handled by capping it one unit above the
    tallest finite column, realizing the capped age, and re-expanding every
    capped element into the chain of its uncapped versions;
  * two infinite columns additionally use a coordinate-product realizer for
    the elements using both, and the same expansion applied to each one-sided
    capping and to the doubly-capped core.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .classify import PartitionShape, has_forbidden_age
from .orders import (
    FIN,
    OMEGA,
    REP,
    Composition,
    GeneralizedWord,
    Partition,
    TruncationSpec,
    W,
    age_truncation,
    conjugate,
    fin,
    partition_le,
    rep,
    shortcolex_key,
    shortlex_key,
    strip_core,
    subword_le,
    two_max_key,
    word_of,
    word_substitute,
)
from .posets import (
    FinitePoset,
    LinearExtension,
    OrderError,
    RealizerReport,
    Refinement,
    extend_on_domain,
    extend_to_linear,
    ordinal_sum,
    restrict_realizer,
    sort_by,
    substitute_intervals,
    verify_realizer,
)

# ---------------------------------------------------------------------------
# shared plumbing


@dataclass
class RealizerBundle:
    word: GeneralizedWord
    truncation: TruncationSpec
    poset: FinitePoset
    family: list[Refinement]

    @property
    def size(self) -> int:
        return len(self.family)

    def verify(self) -> RealizerReport:
        return verify_realizer(self.poset, self.family)

    def notes(self) -> list[str]:
        return [ref.note for ref in self.family]


_POSET_CACHE: dict = {}
_REALIZE_CACHE: dict = {}


def clear_caches() -> None:
    _POSET_CACHE.clear()
    _REALIZE_CACHE.clear()


def age_poset(word: GeneralizedWord, t: TruncationSpec) -> FinitePoset:
    """Truncated age as a poset under subword order, labels sorted shortlex."""
    key = (word, t)
    if key not in _POSET_CACHE:
        members = age_truncation(word, t)
        _POSET_CACHE[key] = FinitePoset.from_le(members, subword_le)
    return _POSET_CACHE[key]


def shortlex_cmp(u: Composition, w: Composition) -> int:
    a, b = shortlex_key(u), shortlex_key(w)
    return (a > b) - (a < b)


def shortcolex_cmp(u: Composition, w: Composition) -> int:
    a, b = shortcolex_key(u), shortcolex_key(w)
    return (a > b) - (a < b)


def shortlex_refinement(host: FinitePoset) -> Refinement:
    order = sorted(host.labels, key=shortlex_key)
    return Refinement.from_total_order(host, order, "shortlex")


def shortcolex_refinement(host: FinitePoset) -> Refinement:
    order = sorted(host.labels, key=shortcolex_key)
    return Refinement.from_total_order(host, order, "shortcolex")


def two_max_refinement(host: FinitePoset, elements: Optional[Sequence[Composition]] = None) -> Refinement:
    elems = host.labels if elements is None else elements
    return sort_by(host, elems, two_max_key, "largest-then-second-largest")


def largest_entry_refinement(host: FinitePoset) -> Refinement:
    return sort_by(host, host.labels, lambda c: max(c.parts, default=0), "largest-entry")


def length_refinement(host: FinitePoset) -> Refinement:
    return sort_by(host, host.labels, lambda c: len(c.parts), "length")


def _import_refinement(target: FinitePoset, ref: Refinement, note: str = "") -> Refinement:
    """Re-register a refinement over a poset that shares its labels."""
    rows = [0] * target.n
    dm = 0
    src = ref.host
    to_target = [target.index.get(lab, -1) for lab in src.labels]
    for i in ref.domain_indices:
        dm |= 1 << to_target[i]
    for i, j in ref.pairs():
        rows[to_target[i]] |= 1 << to_target[j]
    return Refinement(target, dm, rows, note or ref.note, _trusted=True)


def _import_extensions(
    target: FinitePoset, bundle: RealizerBundle, note: str, tail: Sequence[Composition] = ()
) -> list[Refinement]:
    """Carry a bundle's family over to a larger poset as linear extensions of
    the bundle's ground set, optionally stacking extra elements on top.

    Totalizing a partial refinement of the subposet keeps every incomparison
    it broke and stays a valid refinement, while costing O(n) per member
    instead of a dense relation copy.
    """
    exts = [extend_to_linear(bundle.poset, ref) for ref in bundle.family]
    if not exts:
        exts = [extend_to_linear(bundle.poset)]
    tail_order = sorted(tail, key=shortlex_key)
    out = []
    for idx, ext in enumerate(exts):
        order = ext.labels_order() + tail_order
        out.append(Refinement.from_total_order(target, order, f"{note}:{idx}"))
    return out


def _reach_add(reach: list[int], tr: list[int], ia: int, ib: int) -> None:
    """Add edge ia -> ib to a closed reachability table with transpose tr."""
    tgt = reach[ib] | 1 << ib
    srcs = tr[ia] | 1 << ia
    s = srcs
    while s:
        low = s & -s
        v = low.bit_length() - 1
        s ^= low
        new = tgt & ~reach[v]
        if new:
            reach[v] |= new
            bit_v = 1 << v
            nn = new
            while nn:
                l2 = nn & -nn
                tr[l2.bit_length() - 1] |= bit_v
                nn ^= l2


def _edge_batch_refinements(
    host: FinitePoset,
    domain: Sequence[Composition],
    edges: Sequence[tuple[Composition, Composition]],
    note: str,
) -> list[Refinement]:
    """Deterministic first-fit packing of strict edges into acyclic refinements."""
    if not edges:
        return []
    batches: list[tuple[list[int], list[int], list[tuple[Composition, Composition]]]] = []
    for a, b in edges:
        ia, ib = host.index[a], host.index[b]
        for reach, tr, elist in batches:
            if not reach[ib] >> ia & 1:
                _reach_add(reach, tr, ia, ib)
                elist.append((a, b))
                break
        else:
            reach = list(host.lt_rows)
            tr = list(host.lt_cols)
            _reach_add(reach, tr, ia, ib)
            batches.append((reach, tr, [(a, b)]))
    out = []
    for i, (_, _, elist) in enumerate(batches):
        suffix = f"[{i}]" if len(batches) > 1 else ""
        out.append(Refinement.from_edges(host, domain, elist, note + suffix))
    return out


# ---------------------------------------------------------------------------
# slot decomposition for words with infinite columns


def _column_cap(word: GeneralizedWord, t: TruncationSpec) -> int:
    """Tallest non-infinite column of the truncated word (0 if none)."""
    heights = [s.n for s in word_substitute(word, t).symbols]
    return max(heights, default=0)


def _slots(c: Composition, cap: int) -> list[int]:
    return [i for i, p in enumerate(c.parts) if p > cap]


def _cap_at(c: Composition, positions: Sequence[int], cap: int) -> Composition:
    parts = list(c.parts)
    for p in positions:
        if parts[p] > cap:
            parts[p] = cap
    return Composition(parts)


def _expand_family(
    target: FinitePoset,
    base: RealizerBundle,
    sigma: Callable[[Composition], Composition],
    note: str,
) -> list[Refinement]:
    """Lift a realizer of the capped age to the full age.

    Every element of the target maps under sigma to a member of the capped
    age; the fibers partition the target.  Each extension of the capped
    realizer is expanded by replacing every capped element with its fiber in
    lexicographic order, which yields a linear extension of the target
    because sigma is monotone and fibers carry the product order.
    """
    fibers: dict[Composition, list[Composition]] = {}
    for lab in target.labels:
        fibers.setdefault(sigma(lab), []).append(lab)
    for head, chain in fibers.items():
        if head not in base.poset.index:
            raise OrderError(f"expansion head {head} is not a member of the capped age")
        chain.sort(key=lambda c: c.parts)
    out = []
    exts = [extend_to_linear(base.poset, ref) for ref in base.family]
    if not exts:
        exts = [extend_to_linear(base.poset)]
    for idx, ext in enumerate(exts):
        order: list[Composition] = []
        for lab in ext.labels_order():
            # non-head members of the capped age ride inside their fiber
            order.extend(fibers.get(lab, ()))
        out.append(Refinement.from_total_order(target, order, f"{note}:{idx}"))
    return out


def _slot_count_tiles(
    host: FinitePoset,
    cap: int,
    base: FinitePoset,
    sigma_all: Callable[[Composition], Composition],
    note: str,
) -> list[Refinement]:
    """Break incomparisons by placing elements with more uncapped columns below
    elements with fewer.

    A composition with more above-cap parts can never embed into one with
    fewer, so these edges never oppose the host order.  Only pairs whose
    capped shadows are comparable need an edge: shadow-incomparable pairs are
    already broken both ways by the capped-age expansion.  The edges are
    packed into transitively consistent batches deterministically.
    """
    counts = [len(_slots(lab, cap)) for lab in host.labels]
    heads = [base.index[sigma_all(lab)] for lab in host.labels]
    edges = []
    for i in range(host.n):
        for j in range(host.n):
            if (
                counts[i] > counts[j]
                and not host.lt(i, j)
                and not host.lt(j, i)
                and base.le(heads[j], heads[i])
            ):
                edges.append((host.labels[i], host.labels[j]))
    edges.sort(key=lambda e: (shortlex_key(e[0]), shortlex_key(e[1])))
    return _edge_batch_refinements(host, list(host.labels), edges, note)


def _lifted_sorts(
    host: FinitePoset,
    domain: Sequence[Composition],
    component: Callable[[Composition], Composition],
    comp_bundle: RealizerBundle,
    note: str,
) -> list[Refinement]:
    """One sort per extension of a component realizer, keyed by the position
    of the element's component in that extension."""
    out = []
    exts = [extend_to_linear(comp_bundle.poset, ref) for ref in comp_bundle.family]
    exts.append(extend_to_linear(comp_bundle.poset))
    for idx, ext in enumerate(exts):
        pos = {comp_bundle.poset.labels[i]: p for p, i in enumerate(ext.order)}
        out.append(
            sort_by(host, domain, lambda c, _pos=pos: _pos[component(c)], f"{note}:{idx}")
        )
    return out


# ---------------------------------------------------------------------------
# Age(ww): shortlex + shortcolex + two-largest-entries


def _ww_family(host: FinitePoset) -> list[Refinement]:
    return [
        shortlex_refinement(host),
        shortcolex_refinement(host),
        two_max_refinement(host),
    ]


def realizer_age_ww(t: TruncationSpec) -> RealizerBundle:
    if t.repeat_cap != 0:
        raise ValueError("the two-column age has no repeated symbols; use repeat_cap=0")
    word = word_of(W, W)
    host = age_poset(word, t)
    return RealizerBundle(word, t, host, _ww_family(host))


# ---------------------------------------------------------------------------
# banded words 1^w c 1^w


@dataclass(frozen=True)
class CompactEmbedding:
    """A window of b carrying an embedding of a that cannot be shrunk (1-based)."""

    alpha: int
    beta: int


@dataclass
class Tile:
    k: int
    ell: int
    members: frozenset[tuple[int, int]]


def compact_embeddings(a: Composition, b: Composition) -> list[CompactEmbedding]:
    """All windows of b minimal on both sides that still contain a."""
    if not a.parts or not b.parts:
        raise ValueError("compact embeddings need nonempty compositions")
    if not subword_le(a, b):
        raise ValueError("a must embed into b")
    n = len(b.parts)
    out = []
    for beta in range(1, n + 1):
        # largest alpha with a <= b(alpha..beta): window containment shrinks
        # monotonically as alpha grows
        best = None
        for alpha in range(1, beta + 1):
            if subword_le(a, Composition(b.parts[alpha - 1:beta])):
                best = alpha
            else:
                break
        if best is None:
            continue
        # minimal on the right: dropping the last column must break it
        if subword_le(a, Composition(b.parts[best - 1:beta - 1])):
            continue
        out.append(CompactEmbedding(best, beta))
    return out


def band_realizer(c: Composition, t: TruncationSpec) -> RealizerBundle:
    """Realizer of the truncated age of 1^w c 1^w, built from core intervals,
    per-interval grid sorts, interval ordinal sums, margin sorts, and the
    modular tiling that places each banded core-b element below the finitely
    many core-a elements it fails to absorb."""
    word = GeneralizedWord((rep(1),) + tuple(fin(p) for p in c.parts) + (rep(1),))
    host = age_poset(word, t)
    return RealizerBundle(word, t, host, _band_family(host))


def _band_family(host: FinitePoset) -> list[Refinement]:
    """Core-interval family for any age whose members are ones-padded cores."""
    intervals: dict[Composition, list[tuple[int, int, Composition]]] = {}
    for lab in host.labels:
        i, core, j = strip_core(lab)
        intervals.setdefault(core, []).append((i, j, lab))

    family: list[Refinement] = []
    cores = sorted(intervals, key=shortlex_key)

    for core in cores:
        cells = intervals[core]
        labs = [lab for _, _, lab in cells]
        ones_prefix = {lab: i for i, _, lab in cells}
        ones_suffix = {lab: j for _, j, lab in cells}
        family.append(sort_by(host, labs, lambda d: ones_prefix[d], f"interval({core}):ones-prefix"))
        family.append(sort_by(host, labs, lambda d: ones_suffix[d], f"interval({core}):ones-suffix"))

    for a in cores:
        for b in cores:
            if a != b and not subword_le(b, a):
                family.append(
                    ordinal_sum(
                        host,
                        [lab for _, _, lab in intervals[a]],
                        [lab for _, _, lab in intervals[b]],
                        f"interval({a}) below interval({b})",
                    )
                )

    for a in cores:
        for b in cores:
            if a == b or not subword_le(a, b) or not a.parts:
                continue
            domain = [lab for _, _, lab in intervals[a]] + [lab for _, _, lab in intervals[b]]

            def left_margin(d: Composition, _a=a) -> int:
                best = 0
                for r in range(len(d.parts) + 1):
                    if subword_le(Composition((1,) * r + _a.parts), d):
                        best = r
                return best

            def right_margin(d: Composition, _a=a) -> int:
                best = 0
                for r in range(len(d.parts) + 1):
                    if subword_le(Composition(_a.parts + (1,) * r), d):
                        best = r
                return best

            family.append(sort_by(host, domain, left_margin, f"pair({a})<({b}):left-margin"))
            family.append(sort_by(host, domain, right_margin, f"pair({a})<({b}):right-margin"))

            compacts = compact_embeddings(a, b)
            alpha_q = compacts[-1].alpha
            beta_1 = compacts[0].beta
            n_b = len(b.parts)
            a_cells = {(i, j): lab for i, j, lab in intervals[a]}
            classes: dict[tuple[int, int], list[tuple[Composition, Composition]]] = {}
            class_domains: dict[tuple[int, int], set[Composition]] = {}
            for k, ell, xb in intervals[b]:
                tile = _tile_members(a_cells, compacts, k, ell, n_b)
                if not tile:
                    continue
                key = (k % alpha_q, ell % (n_b - beta_1 + 1))
                classes.setdefault(key, []).extend((xb, ya) for ya in tile)
                class_domains.setdefault(key, set()).update(tile)
                class_domains[key].add(xb)
            for key in sorted(classes):
                family.extend(
                    _edge_batch_refinements(
                        host,
                        sorted(class_domains[key], key=shortlex_key),
                        classes[key],
                        f"tiles({a})<({b}) class {key}",
                    )
                )

    family.append(shortlex_refinement(host))
    return family


def _tile_members(a_cells, compacts, k, ell, n_b) -> list[Composition]:
    """Cells of the a-interval whose incomparison with 1^k b 1^ell survives
    the two margin sorts: the modular tile of the proof."""
    out = []
    bound_i = k + compacts[-1].alpha - 1
    bound_j = ell + n_b - compacts[0].beta
    for (i, j), lab in a_cells.items():
        if i > bound_i or j > bound_j:
            continue
        if any(i <= k + ce.alpha - 1 and j <= ell + n_b - ce.beta for ce in compacts):
            continue
        out.append(lab)
    return out


# ---------------------------------------------------------------------------
# finite prefixes: Age(k u) from Age(u)


def prefix_realizer(
    k: int,
    u: GeneralizedWord,
    t: TruncationSpec,
    base: Optional[RealizerBundle] = None,
) -> RealizerBundle:
    """Realizer of Age(k u) from a realizer of Age(u), by induction on k."""
    if base is None:
        base = realize_word(u, t)
    elif not base.verify().verified:
        raise OrderError("supplied base realizer fails verification")
    if k == 0:
        return base
    word = GeneralizedWord((fin(k),) + u.symbols)
    host = age_poset(word, t)
    base_set = set(base.poset.labels)
    family: list[Refinement] = []

    # everything below first part k: realizer of Age((k-1) u), by induction
    if k == 1:
        family.extend(_import_extensions(host, base, "A"))
    else:
        sub = realize_word(GeneralizedWord((fin(k - 1),) + u.symbols), t)
        family.extend(_import_extensions(host, sub, f"A+B<{k}"))

    b_labels = [lab for lab in host.labels if lab not in base_set]
    if b_labels:
        # B embeds into N x A via (first part, tail)
        family.append(sort_by(host, b_labels, lambda d: d.parts[0], "B:first-part"))
        family.extend(
            _lifted_sorts(host, b_labels, lambda d: Composition(d.parts[1:]), base, "B:tail")
        )

    a_by_first: dict[int, list[Composition]] = {}
    for lab in base.poset.labels:
        if lab.parts:
            a_by_first.setdefault(lab.parts[0], []).append(lab)
    b_k = [lab for lab in b_labels if lab.parts and lab.parts[0] == k]
    b_k_tails = sorted({Composition(lab.parts[1:]) for lab in b_k}, key=shortlex_key)

    if b_k:
        for j in range(1, k + 1):
            a_j = a_by_first.get(j, [])
            if not a_j:
                continue  # pairs inside B alone are broken by the product family
            a_j_tails = sorted({Composition(lab.parts[1:]) for lab in a_j}, key=shortlex_key)
            sub_labels = sorted(set(a_j_tails) | set(b_k_tails), key=shortlex_key)
            a_j_tailset = set(a_j_tails)
            b_k_tailset = set(b_k_tails)
            expansion = {}
            for v in sub_labels:
                chain = []
                if v in a_j_tailset:
                    chain.append(Composition((j,) + v.parts))
                if v in b_k_tailset:
                    chain.append(Composition((k,) + v.parts))
                expansion[v] = tuple(chain)
            for ref in _restricted_extensions(base, sub_labels):
                order: list[Composition] = []
                for v in ref.labels_order():
                    order.extend(expansion[v])
                family.append(
                    Refinement.from_total_order(host, order, f"A{j}|B{k}:{ref.note}")
                )
            family.extend(
                _tail_dominance_patch(host, base.poset, a_j, b_k, j, k, f"A{j}|B{k}:patch")
            )

        a_big = [lab for lab in base.poset.labels if lab.parts and lab.parts[0] > k]
        sub_labels = sorted(set(a_big) | set(b_k_tails), key=shortlex_key)
        if a_big:
            b_k_tailset = set(b_k_tails)
            a_big_set = set(a_big)
            expansion = {}
            for v in sub_labels:
                chain = []
                if v in a_big_set:
                    chain.append(v)
                if v in b_k_tailset:
                    chain.append(Composition((k,) + v.parts))
                expansion[v] = tuple(chain)
            for ref in _restricted_extensions(base, sub_labels):
                order = []
                for v in ref.labels_order():
                    order.extend(expansion[v])
                family.append(
                    Refinement.from_total_order(host, order, f"A>{k}|B{k}:{ref.note}")
                )
            family.extend(
                _tail_dominance_patch(host, base.poset, a_big, b_k, None, k, f"A>{k}|B{k}:patch")
            )

    family.append(shortlex_refinement(host))
    return RealizerBundle(word, t, host, family)


def _restricted_extensions(base: RealizerBundle, sub_labels) -> list[LinearExtension]:
    exts = []
    for ref in restrict_realizer(base.family, sub_labels):
        exts.append(extend_on_domain(base.poset, ref))
    if not base.family:
        sm = 0
        for lab in sub_labels:
            sm |= 1 << base.poset.index[lab]
        empty = Refinement(base.poset, sm, [0] * base.poset.n, "canonical", _trusted=True)
        exts.append(extend_on_domain(base.poset, empty))
    return exts


def _tail_dominance_patch(host, base_poset, a_side, b_side, j, k, note) -> list[Refinement]:
    """Break (j a1, k a2) incomparisons whose tails are strictly comparable.

    When a2 < a1 every extension of the tail realizer puts the a2 chain first,
    so the direction j a1 below k a2 needs its own refinement.
    """
    edges = []
    for pa in sorted(a_side, key=shortlex_key):
        ta = pa if j is None else Composition(pa.parts[1:])
        for qb in sorted(b_side, key=shortlex_key):
            tb = Composition(qb.parts[1:])
            if ta == tb or not subword_le(tb, ta):
                continue
            ia, ib = host.index[pa], host.index[qb]
            if not host.lt(ia, ib) and not host.lt(ib, ia):
                edges.append((pa, qb))
    domain = sorted(set(a_side) | set(b_side), key=shortlex_key)
    return _edge_batch_refinements(host, domain, edges, note)


# ---------------------------------------------------------------------------
# one infinite column: Age(P1 w P2)


def _omega_once(p1: GeneralizedWord, p2: GeneralizedWord, t: TruncationSpec) -> RealizerBundle:
    word = p1.concat(GeneralizedWord((W,))).concat(p2)
    cap = _column_cap(p1.concat(p2), t)
    bar = cap + 1
    if t.omega_cap < bar:
        raise ValueError(
            f"omega_cap {t.omega_cap} below the capping threshold {bar}; enlarge the window"
        )
    host = age_poset(word, t)
    base_word = p1.concat(GeneralizedWord((fin(bar),))).concat(p2)
    base = realize_word(base_word, t)

    def sigma(c: Composition) -> Composition:
        return _cap_at(c, _slots(c, cap), bar)

    family = _expand_family(host, base, sigma, "capped-column")
    family.append(largest_entry_refinement(host))
    family.append(shortlex_refinement(host))
    return RealizerBundle(word, t, host, family)


def cap_left_realizer(a: Composition, b: Composition, t: TruncationSpec) -> RealizerBundle:
    """Age(w a 1^w b 1^w)."""
    tail = word_of(a, rep(1), b, rep(1))
    return _omega_once(GeneralizedWord(), tail, t)


def cap_inner_realizer(a: Composition, b: Composition, t: TruncationSpec) -> RealizerBundle:
    """Age(1^w a w b 1^w)."""
    return _omega_once(word_of(rep(1), a), word_of(b, rep(1)), t)


# ---------------------------------------------------------------------------
# two infinite columns: Age(P1 w P2 w P3)


@dataclass(frozen=True)
class BuilderConfig:
    m: int
    m_bar: int
    m_bar_bar: int
    truncation: TruncationSpec

    @classmethod
    def for_words(cls, words: Sequence[GeneralizedWord], t: TruncationSpec) -> "BuilderConfig":
        cap = 0
        for w in words:
            cap = max(cap, _column_cap(w, t))
        return cls(cap, cap + 1, cap + 2, t)


def _omega_twice(
    p1: GeneralizedWord, p2: GeneralizedWord, p3: GeneralizedWord, t: TruncationSpec
) -> RealizerBundle:
    word = (
        p1.concat(GeneralizedWord((W,)))
        .concat(p2)
        .concat(GeneralizedWord((W,)))
        .concat(p3)
    )
    cfg = BuilderConfig.for_words([p1.concat(p2).concat(p3)], t)
    cap, bar = cfg.m, cfg.m_bar
    if t.omega_cap < bar:
        raise ValueError(
            f"omega_cap {t.omega_cap} below the capping threshold {bar}; enlarge the window"
        )
    host = age_poset(word, t)

    sub_left_word = p1.concat(word_of(bar)).concat(p2).concat(GeneralizedWord((W,))).concat(p3)
    sub_right_word = p1.concat(GeneralizedWord((W,))).concat(p2).concat(word_of(bar)).concat(p3)
    base_word = p1.concat(word_of(bar)).concat(p2).concat(word_of(bar)).concat(p3)
    sub_left = realize_word(sub_left_word, t)
    sub_right = realize_word(sub_right_word, t)
    base = realize_word(base_word, t)

    def sigma_all(c: Composition) -> Composition:
        return _cap_at(c, _slots(c, cap), bar)

    family: list[Refinement] = []

    # union combinator over the two one-sided sub-ages: their union is the
    # complement of the doubly-uncapped elements, and the leftovers of each
    # side are pairwise incomparable, so each side's realizer is completed by
    # stacking the other side's leftovers on top
    left_set = set(sub_left.poset.labels)
    right_set = set(sub_right.poset.labels)
    only_right = sorted(right_set - left_set, key=shortlex_key)
    only_left = sorted(left_set - right_set, key=shortlex_key)
    family.extend(_import_extensions(host, sub_left, "union-left", only_right))
    family.extend(_import_extensions(host, sub_right, "union-right", only_left))

    family.extend(_expand_family(host, base, sigma_all, "cap-both-columns"))
    family.extend(
        _slot_count_tiles(host, cap, base.poset, sigma_all, "more-columns-below-fewer")
    )

    # elements using both infinite columns embed into N x Age(p1) x Age(p2) x Age(p3) x N
    both = [lab for lab in host.labels if len(_slots(lab, cap)) == 2]
    if both:
        def coords(c: Composition) -> tuple[int, Composition, Composition, Composition, int]:
            s1, s2 = _slots(c, cap)
            return (
                c.parts[s1],
                Composition(c.parts[:s1]),
                Composition(c.parts[s1 + 1:s2]),
                Composition(c.parts[s2 + 1:]),
                c.parts[s2],
            )

        family.append(sort_by(host, both, lambda c: coords(c)[0], "product:first-column"))
        family.append(sort_by(host, both, lambda c: coords(c)[4], "product:second-column"))
        for word_i, pick, tag in (
            (p1, lambda c: coords(c)[1], "prefix"),
            (p2, lambda c: coords(c)[2], "middle"),
            (p3, lambda c: coords(c)[3], "suffix"),
        ):
            comp_poset = age_poset(word_i, t)
            if comp_poset.n > 1:
                comp_bundle = realize_word(word_i, t)
                family.extend(
                    _lifted_sorts(host, both, pick, comp_bundle, f"product:{tag}")
                )

    family.append(largest_entry_refinement(host))
    family.append(two_max_refinement(host))
    family.append(shortlex_refinement(host))
    return RealizerBundle(word, t, host, family)


def double_cap_realizer(
    a: Composition, b: Composition, c: Composition, t: TruncationSpec, side: str = "outer"
) -> RealizerBundle:
    """Age(w a 1^w b 1^w c w) for side="outer"; Age(1^w a w b w c 1^w) for "inner"."""
    if side == "outer":
        return _omega_twice(
            GeneralizedWord(), word_of(a, rep(1), b, rep(1), c), GeneralizedWord(), t
        )
    if side == "inner":
        return _omega_twice(word_of(rep(1), a), word_of(b), word_of(c, rep(1)), t)
    raise ValueError(f"unknown side {side!r}")


# ---------------------------------------------------------------------------
# generic word driver


def realize_word(word: GeneralizedWord, t: TruncationSpec) -> RealizerBundle:
    """Realizer for the truncated age of any finite-dimensional word."""
    key = (word, t)
    if key in _REALIZE_CACHE:
        return _REALIZE_CACHE[key]
    witness = has_forbidden_age(word)
    if witness is not None:
        raise ValueError(f"Age({word}) is infinite dimensional: hosts {witness.forbidden_age}")

    syms = word.symbols
    if not syms:
        host = age_poset(word, t)
        bundle = RealizerBundle(word, t, host, [])
    elif syms[0].kind == FIN:
        bundle = prefix_realizer(syms[0].n, GeneralizedWord(syms[1:]), t)
    elif syms[-1].kind == FIN:
        bundle = _reverse_bundle(word, t)
    else:
        omegas = [i for i, s in enumerate(syms) if s.kind == OMEGA]
        if not omegas:
            # banded: every member is a ones-padded core
            host = age_poset(word, t)
            bundle = RealizerBundle(word, t, host, _band_family(host))
        elif len(omegas) == 1:
            i = omegas[0]
            bundle = _omega_once(
                GeneralizedWord(syms[:i]), GeneralizedWord(syms[i + 1:]), t
            )
        elif len(omegas) == 2:
            if len(syms) == 2:
                host = age_poset(word, t)
                bundle = RealizerBundle(word, t, host, _ww_family(host))
            else:
                i, j = omegas
                bundle = _omega_twice(
                    GeneralizedWord(syms[:i]),
                    GeneralizedWord(syms[i + 1:j]),
                    GeneralizedWord(syms[j + 1:]),
                    t,
                )
        else:
            raise AssertionError("three infinite columns escaped the obstruction check")
    _REALIZE_CACHE[key] = bundle
    return bundle


def _reverse_bundle(word: GeneralizedWord, t: TruncationSpec) -> RealizerBundle:
    mirrored = realize_word(word.reverse(), t)
    host = age_poset(word, t)
    src = mirrored.poset
    to_host = [host.index[lab.reverse()] for lab in src.labels]
    family = []
    for ref in mirrored.family:
        rows = [0] * host.n
        dm = 0
        for i in ref.domain_indices:
            dm |= 1 << to_host[i]
        for i, j in ref.pairs():
            rows[to_host[i]] |= 1 << to_host[j]
        family.append(Refinement(host, dm, rows, f"mirror:{ref.note}", _trusted=True))
    return RealizerBundle(word, t, host, family)


# ---------------------------------------------------------------------------
# partitions: the grid embedding of Age(w^k lambda ell^w)


def partition_grid_embed(mu: Partition, shape: PartitionShape) -> tuple[int, ...]:
    """Order embedding into N^(k + |lambda| + ell): the first k + |lambda| rows,
    then the conjugate of the bounded tail."""
    k, lam, ell = shape.k, shape.lam, shape.ell
    rows = mu.parts
    for i, part in enumerate(rows):
        if i < k:
            continue
        if i < k + len(lam):
            if part > lam.parts[i - k]:
                raise ValueError(f"{mu} is not a member of the shape {shape}")
        elif part > ell:
            raise ValueError(f"{mu} is not a member of the shape {shape}")
    head = list(rows[: k + len(lam)])
    head += [0] * (k + len(lam) - len(head))
    tail = rows[k + len(lam):]
    conj = conjugate(Partition(tail)).parts if tail else ()
    tail_coords = list(conj) + [0] * (ell - len(conj))
    return tuple(head + tail_coords)


def partition_shape_members(shape: PartitionShape, box: int) -> list[Partition]:
    """Members of the shape's age with at most box rows and box columns."""
    out = []
    for parts in _partitions_in_box(box, box):
        mu = Partition(parts)
        if _shape_member(mu, shape):
            out.append(mu)
    return out


def _shape_member(mu: Partition, shape: PartitionShape) -> bool:
    for i, part in enumerate(mu.parts):
        if i < shape.k:
            continue
        if i < shape.k + len(shape.lam):
            if part > shape.lam.parts[i - shape.k]:
                return False
        elif part > shape.ell:
            return False
    return True


def _partitions_in_box(rows: int, width: int):
    if rows == 0:
        yield ()
        return
    for first in range(0, width + 1):
        if first == 0:
            yield ()
            continue
        for rest in _partitions_in_box(rows - 1, first):
            yield (first,) + rest


def partition_age_realizer(shape: PartitionShape, box: int):
    """Poset of boxed members plus one sort per grid coordinate."""
    members = partition_shape_members(shape, box)
    host = FinitePoset.from_le(members, partition_le)
    family = []
    for coord in range(shape.bound):
        family.append(
            sort_by(
                host,
                members,
                lambda mu, _c=coord: partition_grid_embed(mu, shape)[_c],
                f"grid-coordinate-{coord}",
            )
        )
    return host, family
