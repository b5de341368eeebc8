"""Command-line interface: batch verification, classification, and rendering.

Every run records a manifest (command, arguments, truncation, seed) in its
structured output so results can be reproduced and diffed.  Exit codes: 0 for
true/verified, 1 for false/unverified, 2 for parse or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import builders, classify, crowns, dimension
from .orders import Composition, TruncationSpec, subword_embedding, subword_le, age_member, age_truncation
from .posets import FinitePoset, realizer_from_dict, realizer_to_dict, verify_realizer
from .textio import (
    ParseError,
    parse_composition,
    parse_partition,
    parse_word,
    render_ferrers,
    render_skyline,
    render_word_skyline,
    to_json,
)


def _truncation(args) -> TruncationSpec:
    return TruncationSpec(args.B, args.R)


def _manifest(args, command: str) -> dict:
    skip = {"func", "out", "format"}
    raw = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    raw.pop("command", None)
    return {"command": command, "args": raw, "seed": getattr(args, "seed", 0)}


def _emit(args, report: dict, text: str) -> None:
    payload = text if args.format == "text" else to_json(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)


def cmd_le(args) -> int:
    try:
        u = parse_composition(args.u)
        w = parse_composition(args.w)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    emb = subword_embedding(u, w)
    result = emb is not None
    report = {
        "manifest": _manifest(args, "le"),
        "result": result,
        "embedding": list(emb) if emb else None,
    }
    text = str(result).lower()
    if result and args.indices:
        text += " " + " ".join(str(i) for i in emb)
    _emit(args, report, text)
    return 0 if result else 1


def cmd_member(args) -> int:
    try:
        c = parse_composition(args.c)
        w = parse_word(args.word)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    result = age_member(c, w)
    report = {"manifest": _manifest(args, "member"), "result": result}
    _emit(args, report, str(result).lower())
    return 0 if result else 1


def cmd_truncate(args) -> int:
    try:
        w = parse_word(args.word)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    members = age_truncation(w, _truncation(args))
    report = {
        "manifest": _manifest(args, "truncate"),
        "count": len(members),
        "members": [str(m) for m in members],
    }
    _emit(args, report, "\n".join(str(m) for m in members))
    return 0


def cmd_crown(args) -> int:
    if args.family == "abstract":
        P = crowns.abstract_crown(args.n)
        dim = dimension.exact_dimension(P)
        report = {
            "manifest": _manifest(args, "crown"),
            "family": "abstract",
            "n": args.n,
            "dimension": dim.value,
        }
        _emit(args, report, f"abstract crown n={args.n}: dimension {dim.value}")
        return 0
    gen = crowns.CROWN_GENERATORS.get(args.family)
    if gen is None:
        print(f"unknown crown family {args.family!r}", file=sys.stderr)
        return 2
    fam = gen(args.n)
    check = crowns.verify_crown(fam)
    report = {
        "manifest": _manifest(args, "crown"),
        **fam.to_dict(),
        "verified": check.verified,
        "failures": check.failures,
    }
    text = (
        f"{fam.name} crown n={args.n} (dimension {fam.claimed_dimension}): "
        + ("verified" if check.verified else "FAILED: " + "; ".join(check.failures))
    )
    _emit(args, report, text)
    return 0 if check.verified else 1


def cmd_dim(args) -> int:
    if args.age:
        try:
            w = parse_word(args.age)
        except ParseError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
        host = builders.age_poset(w, _truncation(args))
        source = f"age {args.age} truncated at B={args.B} R={args.R}"
    elif args.poset:
        with open(args.poset) as fh:
            host = FinitePoset.from_text(fh.read(), parse_composition)
        source = f"poset file {args.poset}"
    else:
        print("dim needs --age or --poset", file=sys.stderr)
        return 2
    res = dimension.exact_dimension(host, d_max=args.max, node_limit=args.nodes)
    report = {
        "manifest": _manifest(args, "dim"),
        "source": source,
        "elements": host.n,
        "status": res.status,
        "dimension": res.value,
        "lower_bound": res.lower_bound,
        "upper_bound": res.upper_bound,
        "witness": [[str(host.labels[i]) for i in ext.order] for ext in res.witness],
    }
    _emit(args, report, f"{source}: {res}")
    return 0 if res.status == "exact" else 1


def cmd_realize(args) -> int:
    t = _truncation(args)
    try:
        if args.construction == "ww":
            bundle = builders.realizer_age_ww(TruncationSpec(args.B, 0))
        elif args.construction == "band":
            bundle = builders.band_realizer(parse_composition(args.c or ""), t)
        elif args.construction == "prefix":
            bundle = builders.prefix_realizer(args.k, parse_word(args.word or ""), t)
        elif args.construction == "cap-left":
            bundle = builders.cap_left_realizer(
                parse_composition(args.a or ""), parse_composition(args.b or ""), t
            )
        elif args.construction == "cap-inner":
            bundle = builders.cap_inner_realizer(
                parse_composition(args.a or ""), parse_composition(args.b or ""), t
            )
        elif args.construction in ("double-outer", "double-inner"):
            side = "outer" if args.construction == "double-outer" else "inner"
            bundle = builders.double_cap_realizer(
                parse_composition(args.a or ""),
                parse_composition(args.b or ""),
                parse_composition(args.c or ""),
                t,
                side,
            )
        elif args.construction == "word":
            bundle = builders.realize_word(parse_word(args.word or ""), t)
        else:
            print(f"unknown construction {args.construction!r}", file=sys.stderr)
            return 2
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    check = bundle.verify()
    report = {
        "manifest": _manifest(args, "realize"),
        "word": str(bundle.word),
        "elements": bundle.poset.n,
        "family_size": bundle.size,
        "verified": check.verified,
        "unbroken_pairs": [[str(a), str(b)] for a, b in check.unbroken_pairs],
        "notes": bundle.notes(),
    }
    text = (
        f"Age({bundle.word}) truncated: {bundle.poset.n} elements, "
        f"{bundle.size} refinements, {'verified' if check.verified else 'NOT verified'}"
    )
    _emit(args, report, text)
    return 0 if check.verified else 1


def cmd_verify(args) -> int:
    with open(args.poset) as fh:
        host = FinitePoset.from_text(fh.read(), parse_composition)
    with open(args.realizer) as fh:
        refs = realizer_from_dict(host, json.load(fh))
    check = verify_realizer(host, refs)
    report = {"manifest": _manifest(args, "verify"), **check.to_dict()}
    _emit(args, report, "verified" if check.verified else "NOT verified")
    return 0 if check.verified else 1


def cmd_classify(args) -> int:
    try:
        words = [parse_word(s) for s in args.words]
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    if args.partitions:
        rep = classify.classify_partition_downset(words)
    else:
        rep = classify.classify_composition_downset(words)
    report = {"manifest": _manifest(args, "classify"), **rep.to_dict()}
    if rep.verdict == "Infinite":
        text = (
            f"Infinite (word {rep.witness_word}: "
            f"{report['witness']['forbidden_age']} at positions {report['witness']['positions']})"
        )
    elif rep.kind == "partition":
        text = f"Finite, dimension bound {rep.bound}"
    else:
        text = "Finite"
    _emit(args, report, text)
    return 0


def cmd_render(args) -> int:
    try:
        if args.kind == "composition":
            text = render_skyline(parse_composition(args.value))
        elif args.kind == "partition":
            text = render_ferrers(parse_partition(args.value))
        elif args.kind == "word":
            text = render_word_skyline(parse_word(args.value))
        else:  # poset hasse adjacency
            with open(args.value) as fh:
                host = FinitePoset.from_text(fh.read(), parse_composition)
            covers = host.covers()
            text = "\n".join(f"{host.labels[i]} < {host.labels[j]}" for i, j in covers)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    report = {"manifest": _manifest(args, "render"), "rendering": text.splitlines()}
    _emit(args, report, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agedim",
        description="dimension toolkit for downsets of partitions and compositions",
    )
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    parser.add_argument("--out", help="write output to a file instead of stdout")
    parser.add_argument("--seed", type=int, default=0, help="seed recorded in the manifest")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("le", help="generalized subword containment of two compositions")
    p.add_argument("u")
    p.add_argument("w")
    p.add_argument("--indices", action="store_true", help="print the embedding columns")
    p.set_defaults(func=cmd_le)

    p = sub.add_parser("member", help="membership of a composition in the age of a word")
    p.add_argument("c")
    p.add_argument("word")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("truncate", help="list the members of a truncated age")
    p.add_argument("word")
    p.add_argument("--B", type=int, default=4)
    p.add_argument("--R", type=int, default=4)
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("crown", help="generate and verify a crown family")
    p.add_argument("family", choices=["abstract"] + sorted(crowns.CROWN_GENERATORS))
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_crown)

    p = sub.add_parser("dim", help="exact dimension of a truncated age or poset file")
    p.add_argument("--age")
    p.add_argument("--poset")
    p.add_argument("--B", type=int, default=4)
    p.add_argument("--R", type=int, default=4)
    p.add_argument("--max", type=int, default=None)
    p.add_argument("--nodes", type=int, default=dimension.DEFAULT_NODE_LIMIT)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("realize", help="run a named construction and verify it")
    p.add_argument(
        "construction",
        choices=["ww", "band", "prefix", "cap-left", "cap-inner", "double-outer", "double-inner", "word"],
    )
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--word")
    p.add_argument("--B", type=int, default=4)
    p.add_argument("--R", type=int, default=4)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", help="replay a serialized realizer against a poset file")
    p.add_argument("poset")
    p.add_argument("realizer")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="finite/infinite dimension of a union of ages")
    p.add_argument("words", nargs="+")
    p.add_argument("--partitions", action="store_true", help="classify partition ages instead")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("render", help="ASCII diagrams")
    p.add_argument("kind", choices=["composition", "partition", "word", "poset"])
    p.add_argument("value")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
