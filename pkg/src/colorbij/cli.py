"""Command-line front end: map, count, enumerate, verify, render, oeis.

Exit status is 0 on success, 1 on invalid input and 2 when a verification
finds a counterexample.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import bijections as bij
from .counting import OEIS, count_compositions, count_dyck, count_polygons, oeis_prefix, verify_identities
from .enumeration import MARKINGS, ORACLE_FAMILIES, enumerated_identities, gen, oracle_verify
from .model import (
    GRAMMAR,
    KINDS,
    BinaryCompositionWord,
    ColorSequence,
    Composition,
    InvalidObject,
    MarkedComposition,
    MarkedDyckPeak,
    MarkedDyckSteps,
    ParseError,
    PlaneTree,
    PolygonPartition,
    guess_kind,
    parse,
    serialize,
    to_dict,
)
from .render import render

OK, INVALID, FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is kept for failed verification
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _gamma(text: str) -> ColorSequence:
    try:
        return ColorSequence.parse(text)
    except (ParseError, InvalidObject) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write output to this file instead of stdout")

    p = _Parser(prog="colorbij", description="Bijections between marked colored "
                "compositions, Dyck paths, plane trees and polygon dissections.",
                epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("map", parents=[common], help="apply a bijection (direction from the input)")
    m.add_argument("object", nargs="?", help="object text; omit to read --input")
    m.add_argument("--input", help="file with one object per line")
    m.add_argument("--bijection", choices=bij.BIJECTIONS)
    m.add_argument("--kind", choices=KINDS, help="input family when the text is ambiguous")

    c = sub.add_parser("count", parents=[common], help="exact counts c, d, p")
    c.add_argument("--n", type=_positive, required=True)
    c.add_argument("--k", type=_positive)
    c.add_argument("--gamma", type=_gamma, default=ColorSequence())
    c.add_argument("--identities", action="store_true", help="also check the identities")

    e = sub.add_parser("enumerate", parents=[common], help="list every object of a family")
    e.add_argument("family", choices=KINDS)
    e.add_argument("--n", type=_positive, required=True)
    e.add_argument("--k", type=_positive, required=True)
    e.add_argument("--gamma", type=_gamma, default=ColorSequence())
    e.add_argument("--marking", default="none")
    e.add_argument("--colored", action="store_true", help="list every coloring separately")

    v = sub.add_parser("verify", parents=[common], help="exhaustive oracle sweep")
    v.add_argument("--bijection", choices=bij.BIJECTIONS + ("all",), default="all")
    v.add_argument("--n", type=_positive, required=True)
    v.add_argument("--k", type=_positive, help="single k (default: every 1 <= k <= n)")
    v.add_argument("--up-to", action="store_true", help="sweep every n' <= n")
    v.add_argument("--gamma", type=_gamma, default=ColorSequence())
    v.add_argument("--colored", choices=("auto", "yes", "no"), default="auto")
    v.add_argument("--identities", action="store_true",
                   help="check the cardinality identities on enumerated sizes instead")
    v.add_argument("--jobs", type=_positive, default=1)

    r = sub.add_parser("render", parents=[common], help="draw an object as SVG")
    r.add_argument("object")
    r.add_argument("--kind", choices=KINDS)

    o = sub.add_parser("oeis", parents=[common], help="totals of the marked families")
    o.add_argument("tag", choices=OEIS)
    o.add_argument("--len", dest="length", type=_positive, default=10)
    return p


# -- subcommands ------------------------------------------------------------


def _read_object(text: str, kind: Optional[str]):
    return parse(kind or guess_kind(text), text)


def _default_bijection(obj) -> str:
    if isinstance(obj, (MarkedDyckPeak, MarkedComposition)):
        return "phi_dc"
    if isinstance(obj, MarkedDyckSteps):
        return "phi_dp"
    if isinstance(obj, BinaryCompositionWord):
        return "phi_bt" if obj.marked_positions else "comp_word"
    if isinstance(obj, Composition):
        return "comp_word"
    if isinstance(obj, PolygonPartition):
        return "polygon_tree"
    if isinstance(obj, PlaneTree) and obj.mark_count == 0:
        return "polygon_tree"
    raise UsageError("a marked tree fits several bijections; pass --bijection")


def cmd_map(args) -> tuple[int, str]:
    if (args.object is None) == (args.input is None):
        raise UsageError("map needs an object or --input, not both")
    if args.input:
        with open(args.input) as fh:
            texts = [ln.strip() for ln in fh if ln.strip()]
    else:
        texts = [args.object]
    outs = []
    for text in texts:
        x = _read_object(text, args.kind)
        name = args.bijection or _default_bijection(x)
        outs.append(bij.apply(name, x))
    if args.format == "json":
        body = [to_dict(y) for y in outs]
        return OK, json.dumps(body if args.input else body[0], indent=2)
    return OK, "\n".join(serialize(y) for y in outs)


def cmd_count(args) -> tuple[int, str]:
    ks = [args.k] if args.k else range(1, args.n + 1)
    if args.k and args.k > args.n:
        raise UsageError(f"need k <= n, got n={args.n}, k={args.k}")
    rows, lines, status = [], [], OK
    for k in ks:
        c = count_compositions(args.n, k, args.gamma)
        d = count_dyck(args.n, k, args.gamma)
        p = count_polygons(args.n, k, args.gamma)
        row = {"n": args.n, "k": k, "gamma": str(args.gamma), "c": str(c), "d": str(d), "p": str(p)}
        lines.append(f"n={args.n} k={k} gamma={args.gamma} c={c} d={d} p={p}")
        if args.identities:
            rep = verify_identities(args.n, k, args.gamma)
            row["identities"] = [{"identity": name, "lhs": str(a), "rhs": str(b), "passed": a == b}
                                 for name, a, b in rep.rows]
            lines.extend("  " + ln for ln in rep.lines()[1:])
            if not rep.passed:
                status = FAILED
        rows.append(row)
    if args.format == "json":
        return status, json.dumps(rows, indent=2)
    return status, "\n".join(lines)


def cmd_enumerate(args) -> tuple[int, str]:
    if args.marking not in MARKINGS[args.family]:
        raise UsageError(f"marking for {args.family} must be one of {MARKINGS[args.family]}")
    objs = gen(args.family, args.n, args.k, args.gamma, args.marking, args.colored)
    if args.format == "json":
        return OK, json.dumps([to_dict(o) for o in objs], indent=2)
    return OK, "\n".join(serialize(o) for o in objs)


def _oracle_task(task):
    name, n, k, gamma, colored = task
    return oracle_verify(name, n, k, gamma, colored)


def _identity_task(task):
    _, n, k, gamma, _ = task
    return enumerated_identities(n, k, gamma)


def cmd_verify(args) -> tuple[int, str]:
    if args.k and args.k > args.n:
        raise UsageError(f"need k <= n, got n={args.n}, k={args.k}")
    ns = range(1, args.n + 1) if args.up_to else [args.n]
    names = [None] if args.identities else (
        list(ORACLE_FAMILIES) if args.bijection == "all" else [args.bijection])
    colored = {"auto": None, "yes": True, "no": False}[args.colored]
    tasks = [(name, n, k, args.gamma, colored)
             for name in names for n in ns
             for k in ([args.k] if args.k else range(1, n + 1)) if k <= n]
    run = _identity_task if args.identities else _oracle_task
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(run, tasks))
    else:
        reports = [run(t) for t in tasks]
    status = OK if all(r.passed for r in reports) else FAILED
    if args.format == "json":
        return status, json.dumps([r.to_dict() for r in reports], indent=2)
    return status, "\n".join(r.line() for r in reports)


def cmd_render(args) -> tuple[int, str]:
    d = render(_read_object(args.object, args.kind))
    if args.format == "json":
        return OK, json.dumps({"viewbox": list(d.viewbox), "svg": d.svg}, indent=2)
    return OK, d.svg.rstrip("\n")


def cmd_oeis(args) -> tuple[int, str]:
    terms = oeis_prefix(args.tag, args.length)
    if args.format == "json":
        return OK, json.dumps({"tag": args.tag, "terms": [str(t) for t in terms]})
    return OK, " ".join(map(str, terms))


COMMANDS = {"map": cmd_map, "count": cmd_count, "enumerate": cmd_enumerate,
            "verify": cmd_verify, "render": cmd_render, "oeis": cmd_oeis}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        status, text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}\n\n{GRAMMAR}", file=sys.stderr, end="")
        return INVALID
    except (ParseError, InvalidObject, ValueError, OSError) as exc:
        print(f"error: {exc}\n\n{GRAMMAR}", file=sys.stderr, end="")
        return INVALID
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return status
