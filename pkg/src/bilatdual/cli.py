"""Command-line front end: build objects, reproduce counts, run verification suites."""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import FiniteAlgebra, GuardExceeded, build_jn, build_mk, free_algebra
from .bridge import construct_P, free_size_formula, partitioned_downset_count
from .multisorted import MultiSortedStructure, build_alter_ego, natural_dual
from .piggyback import build_carrier_space
from .ranked import functor_F
from .verify import DEFAULT_SEED, SUITES, run_suite

BUILD_KINDS = ("jn", "mk", "alter-ego", "dual", "priestley", "carrier-space")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def cmd_build(args) -> int:
    n = args.n
    if n is None:
        return _fail_usage("build requires --n")
    dot = None
    try:
        if args.kind == "jn":
            doc = build_jn(n).to_dict()
        elif args.kind == "mk":
            if args.k is None:
                return _fail_usage("build mk requires --k")
            doc = build_mk(n, args.k).to_dict()
        elif args.kind == "alter-ego":
            ego = build_alter_ego(n)
            doc = ego.to_dict()
            if args.dot:
                dot = functor_F(ego).to_dot("alter_ego")
        elif args.kind == "dual":
            algebra = _load_algebra(args) if args.infile else build_jn(n)
            dual = natural_dual(algebra, n)
            doc = dual.structure.to_dict()
            if args.dot:
                dot = functor_F(dual.structure).to_dot("dual")
        elif args.kind == "priestley":
            if args.infile:
                structure = MultiSortedStructure.from_json(_read(args.infile))
            else:
                structure = build_alter_ego(n)
            space = construct_P(structure)
            doc = space.poset.to_dict()
            if args.dot:
                dot = space.poset.to_dot("priestley")
        elif args.kind == "carrier-space":
            algebra = _load_algebra(args) if args.infile else build_jn(n)
            space = build_carrier_space(algebra, n)
            doc = space.poset.to_dict()
            if args.dot:
                dot = space.poset.to_dot("carrier_space")
        else:
            return _fail_usage(f"unknown kind {args.kind}")
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as err:
        return _fail_usage(str(err))
    text = _dump(doc)
    _emit(text, args.out)
    if dot is not None:
        if args.out:
            with open(args.out + ".dot", "w", encoding="utf-8") as fh:
                fh.write(dot)
        else:
            sys.stdout.write("\n" + dot)
    return 0


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_algebra(args) -> FiniteAlgebra:
    return FiniteAlgebra.from_json(_read(args.infile))


def cmd_free_size(args) -> int:
    n = args.n
    if n is None or n < 1:
        return _fail_usage("free-size requires --n >= 1")
    method = args.method
    fs = free_size_formula(n)
    row: dict = {"n": n, "f_formula": fs.avoiding_top, "g_formula": fs.meeting_top,
                 "total_formula": fs.total}
    notices = []
    agree = True
    if method in ("downsets", "all"):
        try:
            pc = partitioned_downset_count(n)
            row["f_counted"] = pc.avoiding_top
            row["g_counted"] = pc.meeting_top
            row["total_counted"] = pc.avoiding_top + pc.meeting_top
            agree &= row["total_counted"] == fs.total
            agree &= row["f_counted"] == fs.avoiding_top and row["g_counted"] == fs.meeting_top
        except GuardExceeded as err:
            notices.append(f"downsets skipped: {err}")
    if method in ("generate", "all"):
        if fs.total <= args.guard_limit:
            F = free_algebra(n, max_elements=args.guard_limit)
            row["brute_force_size"] = F.algebra.size
            agree &= F.algebra.size == fs.total
        else:
            notices.append(
                f"generate skipped: formula size {fs.total} exceeds guard {args.guard_limit}")
    row["agree"] = agree
    if notices:
        row["notices"] = notices
    if args.format == "structured":
        _emit(_dump(row), args.out)
    else:
        parts = [f"n={n}", f"f={row['f_formula']}", f"g={row['g_formula']}",
                 f"total={row['total_formula']}"]
        if "total_counted" in row:
            parts.append(f"counted={row['f_counted']}/{row['g_counted']}/{row['total_counted']}")
        if "brute_force_size" in row:
            parts.append(f"generated={row['brute_force_size']}")
        parts.append("agree" if agree else "DISAGREE")
        text = "  ".join(parts) + "\n"
        for notice in notices:
            text += f"note: {notice}\n"
        _emit(text, args.out)
    return 0 if agree else 1


def cmd_verify(args) -> int:
    if args.n is None or args.n < 1:
        return _fail_usage("verify requires --n >= 1")
    try:
        result = run_suite(args.suite, args.n, args.seed)
    except ValueError as err:
        return _fail_usage(str(err))
    if args.format == "structured":
        _emit(_dump(result.to_dict(timings=args.timings)), args.out)
    else:
        _emit(result.format_text(timings=args.timings), args.out)
    return 0 if result.overall == "pass" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilatdual",
        description="Finite duality engine for prioritised default bilattices")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct an object and emit its interchange form")
    p_build.add_argument("kind", choices=BUILD_KINDS)
    p_build.add_argument("--n", type=int, default=None)
    p_build.add_argument("--k", type=int, default=None)
    p_build.add_argument("--in", dest="infile", default=None,
                         help="input document for dual/priestley/carrier-space")
    p_build.add_argument("--dot", action="store_true", help="also emit a Hasse diagram")
    p_build.add_argument("--out", default=None)
    p_build.set_defaults(func=cmd_build)

    p_free = sub.add_parser("free-size", help="one-generated free algebra size, three ways")
    p_free.add_argument("--n", type=int, default=None)
    p_free.add_argument("--method", choices=("formula", "downsets", "generate", "all"),
                        default="all")
    p_free.add_argument("--guard-limit", type=int, default=2000,
                        help="largest carrier the generate method may build")
    p_free.add_argument("--format", choices=("text", "structured"), default="text")
    p_free.add_argument("--out", default=None)
    p_free.set_defaults(func=cmd_free_size)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", choices=SUITES, default="all")
    p_verify.add_argument("--n", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_verify.add_argument("--format", choices=("text", "structured"), default="text")
    p_verify.add_argument("--timings", action="store_true",
                          help="include elapsed times (breaks byte-identical output)")
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
