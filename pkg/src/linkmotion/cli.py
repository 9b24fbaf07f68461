"""Command-line front end.

Exit codes: 0 success, 1 a mathematical "no" (unequal elements, probe
exceeded its bound), 2 usage or parse errors, 3 invalid link specification.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import fpauto
from .catalog import htrivial, unlink, validate
from .errors import InvalidSpec, InvalidTree, MissingSelfConjugation, MotionGroupError, ParseError, Unsupported
from .grammar import parse_element
from .ltree import check as check_tree
from .ltree import enumerate_trees, parse_tree, tree_motion_generators
from .motion import R3, S3, MotionGroup
from .presentation import present
from .specio import load_spec

OK, FALSE, USAGE, INVALID = 0, 1, 2, 3

_SHORTHAND = re.compile(r"^(unlink):(\d+)$|^(htrivial):(\d+),(\d+)$")


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _spec(args):
    """Load ``--spec``: a JSON file or a shorthand ``unlink:N`` / ``htrivial:N,M``."""
    if args.spec is None:
        raise _Fail(USAGE, "this command needs --spec")
    m = _SHORTHAND.match(args.spec)
    sc = args.self_conjugation
    try:
        if m and not Path(args.spec).exists():
            if m.group(1):
                spec = unlink(int(m.group(2)), sc)
            else:
                spec = htrivial(int(m.group(4)), int(m.group(5)), sc)
        else:
            spec = load_spec(args.spec)
    except FileNotFoundError:
        raise _Fail(USAGE, f"no such spec file: {args.spec}") from None
    except InvalidSpec as exc:
        raise _Fail(INVALID, "invalid spec:\n" + "\n".join(f"  {p}" for p in exc.problems)) from None
    except MotionGroupError as exc:
        raise _Fail(INVALID, f"invalid spec: {exc}") from None
    return spec


def _group(args) -> MotionGroup:
    spec = _spec(args)
    problems = validate(spec)
    if problems:
        raise _Fail(INVALID, "invalid spec:\n" + "\n".join(f"  {p}" for p in problems))
    return MotionGroup(spec, check=False)


def _element(expr: str, group: MotionGroup):
    try:
        return parse_element(expr, group)
    except ParseError as exc:
        raise _Fail(USAGE, f"cannot parse {expr!r}: {exc}") from None
    except MotionGroupError as exc:
        raise _Fail(USAGE, f"cannot parse {expr!r}: {exc}") from None


def _emit(args, text: str, doc) -> None:
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- subcommands ---------------------------------------------------------------


def cmd_present(args) -> int:
    pres = present(_spec(args))
    _emit(args, pres.to_text(), pres.to_json())
    return OK


def cmd_mul(args) -> int:
    group = _group(args)
    x = group.product_of(_element(e, group) for e in args.elements)
    _emit(args, str(x), {"product": str(x)})
    return OK


def _compare(args, s3: bool) -> int:
    group = _group(args)
    x, y = _element(args.left, group), _element(args.right, group)
    try:
        same = group.equals_in_s3(x, y) if s3 else group.equals(x, y)
    except (MissingSelfConjugation, Unsupported) as exc:
        raise _Fail(USAGE, str(exc)) from None
    _emit(args, "true" if same else "false", {"equal": same, "mode": S3 if s3 else R3})
    return OK if same else FALSE


def cmd_eq(args) -> int:
    return _compare(args, s3=False)


def cmd_eq_s3(args) -> int:
    return _compare(args, s3=True)


def cmd_dahm(args) -> int:
    group = _group(args)
    aut = group.dahm(_element(args.element, group))
    P = group.product
    lines, images = [], {}
    for i, piece in enumerate(group.spec.pieces):
        for k, name in enumerate(piece.complement.generator_names):
            img = str(fpauto.apply(aut, P.generator_word(i, k))) or "1"
            lines.append(f"{name} -> {img}")
            images[name] = img
    inner = fpauto.is_inner(aut) if P.n >= 2 else None
    if inner is not None:
        lines.append(f"inner: {str(inner) or '1'}")
    doc = {"images": images, "inner": None if inner is None else (str(inner) or "1")}
    _emit(args, "\n".join(lines), doc)
    return OK


def cmd_ltrees(args) -> int:
    if args.n < 1:
        raise _Fail(USAGE, "--n must be at least 1")
    trees = enumerate_trees(args.n)
    text = "\n".join([f"count: {len(trees)}"] + [str(t) for t in trees])
    _emit(args, text, {"n": args.n, "count": len(trees), "trees": [str(t) for t in trees]})
    return OK


def cmd_tree_gens(args) -> int:
    group = _group(args)
    try:
        tree = check_tree(parse_tree(args.tree), group.spec.n)
    except InvalidTree as exc:
        raise _Fail(USAGE, f"bad tree: {exc}") from None
    gens = [str(g) for g in tree_motion_generators(tree, group)]
    _emit(args, "\n".join(gens) if gens else "(none)", {"tree": str(tree), "generators": gens})
    return OK


def cmd_probe(args) -> int:
    group = _group(args)
    if args.bound < 1:
        raise _Fail(USAGE, "--bound must be positive")
    try:
        result = group.finiteness_probe(args.mode, args.bound)
    except (MissingSelfConjugation, Unsupported) as exc:
        raise _Fail(USAGE, str(exc)) from None
    doc = {"mode": args.mode, "status": result.status, "order" if result.closed else "bound": result.order}
    _emit(args, str(result), doc)
    return OK if result.closed else FALSE


def cmd_validate(args) -> int:
    problems = validate(_spec(args))
    _emit(args, "\n".join(problems) if problems else "ok", {"valid": not problems, "problems": problems})
    return INVALID if problems else OK


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="link spec JSON file, or unlink:N / htrivial:N,M")
    common.add_argument(
        "--self-conjugation",
        choices=["trivial"],
        default=None,
        help="self-conjugation data for the unlink:/htrivial: shorthands",
    )
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="linkmotion", description="Motion groups of split links.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("present", parents=[common], help="emit a presentation")
    p.set_defaults(func=cmd_present)
    p = sub.add_parser("mul", parents=[common], help="multiply elements left to right")
    p.add_argument("elements", nargs="+")
    p.set_defaults(func=cmd_mul)
    for name, func, what in (("eq", cmd_eq, "in R^3"), ("eq-s3", cmd_eq_s3, "in S^3")):
        p = sub.add_parser(name, parents=[common], help=f"compare two elements {what}")
        p.add_argument("left")
        p.add_argument("right")
        p.set_defaults(func=func)
    p = sub.add_parser("dahm", parents=[common], help="action on the link-complement group")
    p.add_argument("element")
    p.set_defaults(func=cmd_dahm)
    p = sub.add_parser("ltrees", parents=[common], help="enumerate rooted L-trees")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_ltrees)
    p = sub.add_parser("tree-gens", parents=[common], help="generators of a tree motion group")
    p.add_argument("--tree", required=True, help="e.g. '(root:1 (2))'")
    p.set_defaults(func=cmd_tree_gens)
    p = sub.add_parser("probe", parents=[common], help="breadth-first finiteness probe")
    p.add_argument("--mode", choices=[R3, S3], default=R3)
    p.add_argument("--bound", type=int, default=10000)
    p.set_defaults(func=cmd_probe)
    p = sub.add_parser("validate", parents=[common], help="check a link spec")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Fail as exc:
        sys.stderr.write(exc.message + "\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
