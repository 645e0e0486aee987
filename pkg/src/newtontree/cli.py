"""Command-line front end.

Trees are read from a file argument or stdin, in the DSL or in the JSON
export format.  Machine output (JSON, or a tree in the chosen format) goes to
stdout and diagnostics to stderr.  Exit codes: 0 success, 1 domain error
(invalid tree where validity is required, unmet precondition, failed
verification), 2 usage error or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import classify as cl
from . import invariants as inv
from . import oracle
from . import transforms as tf
from .dot import export_dot
from .tree import DSLSyntaxError, Tree, TreeError, from_json, parse, serialize, to_json, validate

MAX_A_INDEX = 9


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def _read_tree(path: str | None) -> Tree:
    try:
        if path is None or path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        if text.lstrip().startswith("{"):
            return from_json(text)
        return parse(text)
    except DSLSyntaxError as exc:
        raise UsageError(f"{path or '<stdin>'}:{exc.line}:{exc.column}: {exc}") from exc
    except (TreeError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path or '<stdin>'}: {exc}") from exc


def _valid_tree(path: str | None) -> Tree:
    t = _read_tree(path)
    report = validate(t)
    if not report.ok:
        for v in report.violations:
            print(f"invalid tree: {v.axiom}: {v.message}", file=sys.stderr)
        raise DomainError("tree fails validation")
    return t


def _emit_json(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=False))


def _emit_tree(t: Tree, fmt: str) -> None:
    if fmt == "json":
        _emit_json(to_json(t))
    elif fmt == "dot":
        sys.stdout.write(export_dot(t))
    else:
        print(serialize(t))


# -- commands ----------------------------------------------------------------

def cmd_validate(args) -> int:
    t = _read_tree(args.tree)
    report = validate(t)
    _emit_json(report.as_dict())
    return 0 if report.ok else 1


def cmd_invariants(args) -> int:
    t = _valid_tree(args.tree)
    _emit_json(inv.report(t))
    return 0


def cmd_normalize(args) -> int:
    t = _valid_tree(args.tree)
    _emit_tree(tf.normalize(t), args.format)
    return 0


def cmd_complete(args) -> int:
    t = _valid_tree(args.tree)
    _emit_tree(tf.complete(t), args.format)
    return 0


def _parse_site(t: Tree, kind: str, site: str):
    if kind in ("contract-valency-2", "add-dead-end-1"):
        try:
            return int(site)
        except ValueError:
            raise UsageError(f"{kind} takes a vertex id, got {site!r}") from None
    try:
        p, c = (int(x) for x in site.split("-", 1))
    except ValueError:
        raise UsageError(f"{kind} takes an edge PARENT-CHILD, got {site!r}") from None
    for e in t.edges:
        if e.parent == p and e.child == c:
            return e
    raise DomainError(f"no edge {p}-{c} in the tree")


def _describe(m: tf.Move) -> dict:
    site = m.site if isinstance(m.site, int) else f"{m.site.parent}-{m.site.child}"
    return {"move": m.kind, "site": site}


def cmd_apply_move(args) -> int:
    t = _valid_tree(args.tree)
    if args.list:
        _emit_json([_describe(m) for m in tf.legal_moves(t)])
        return 0
    if not args.move or args.site is None:
        raise UsageError("apply-move needs --move and --site (or --list)")
    out = tf.apply_move(t, tf.Move(args.move, _parse_site(t, args.move, args.site)))
    _emit_tree(out, args.format)
    return 0


def cmd_classify(args) -> int:
    t = _valid_tree(args.tree)
    if not inv.is_minimally_complete(t):
        raise DomainError("classification needs a minimally complete tree "
                          f"(fails: {', '.join(inv.minimal_completeness_failures(t))})")
    out = {"shadow": str(cl.classify_shadow(t))}
    if inv.points_at_infinity(t) >= 2:
        out["max_multiplicity"] = cl.check_max_multiplicity(t).as_dict()
    _emit_json(out)
    return 0


def cmd_generate(args) -> int:
    a_list = []
    for i in range(1, MAX_A_INDEX + 1):
        value = getattr(args, f"a{i}")
        if value is None:
            break
        a_list.append(value)
    if args.a1p is None or not a_list:
        raise UsageError("generate needs --a1 and --a1p")
    params = cl.FamilyParams(args.figure, tuple(a_list), args.a1p, a=args.a, a_prime=args.ap)
    _emit_tree(params.build(), args.format)
    return 0


def cmd_verify(args) -> int:
    bounds = oracle.EnumBounds(args.max_vertices, args.max_arrows, args.max_dec)
    report = oracle.run_campaign(bounds, scope=args.scope, slow=not args.fast)
    data = report.as_dict()
    data["bounds"] = {"max_vertices": bounds.max_vertices, "max_arrows": bounds.max_arrows,
                      "max_abs_decoration": bounds.max_abs_decoration}
    data["scope"] = args.scope
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    summary = {k: data[k] for k in ("ok", "scope", "bounds", "trees_enumerated",
                                    "minimally_complete", "results", "seconds")}
    summary["counterexamples"] = data["counterexamples"][:20]
    _emit_json(summary)
    for name, text, detail in report.counterexamples[:20]:
        print(f"counterexample [{name}] {text} {detail}".rstrip(), file=sys.stderr)
    return 0 if report.ok else 1


def cmd_export(args) -> int:
    _emit_tree(_valid_tree(args.tree), args.format)
    return 0


# -- argument parsing --------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newtontree",
                                     description="Abstract Newton trees at infinity.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_tree(name, help_text, fmt=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("tree", nargs="?", help="tree file (DSL or JSON); stdin if omitted or '-'")
        if fmt:
            p.add_argument("--format", choices=["dsl", "json", "dot"], default="dsl")
        return p

    with_tree("validate", "check every axiom, print a JSON report").set_defaults(fn=cmd_validate)
    with_tree("invariants", "print every invariant as JSON").set_defaults(fn=cmd_invariants)
    with_tree("normalize", "minimally complete representative", fmt=True).set_defaults(fn=cmd_normalize)
    with_tree("complete", "insert every missing dicritical", fmt=True).set_defaults(fn=cmd_complete)

    p = with_tree("apply-move", "apply one equivalence move", fmt=True)
    p.add_argument("--move", choices=tf.MOVE_KINDS)
    p.add_argument("--site", help="vertex id, or PARENT-CHILD for an edge")
    p.add_argument("--list", action="store_true", help="list the legal moves instead")
    p.set_defaults(fn=cmd_apply_move)

    with_tree("classify", "shadow class and maximal-multiplicity report").set_defaults(fn=cmd_classify)

    p = sub.add_parser("generate", help="build a tree of one of the explicit families")
    p.add_argument("--figure", type=int, choices=[2, 3, 4], required=True)
    p.add_argument("--a", type=_positive_int, default=1)
    for i in range(1, MAX_A_INDEX + 1):
        p.add_argument(f"--a{i}", type=_positive_int, default=None)
    p.add_argument("--a1p", type=_positive_int)
    p.add_argument("--ap", type=_positive_int, default=1)
    p.add_argument("--format", choices=["dsl", "json", "dot"], default="dsl")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("verify", help="run the brute-force verification campaign")
    p.add_argument("--max-vertices", type=_positive_int, default=6)
    p.add_argument("--max-arrows", type=_positive_int, default=6)
    p.add_argument("--max-dec", type=_positive_int, default=4)
    p.add_argument("--scope", choices=["minimal", "all"], default="minimal")
    p.add_argument("--fast", action="store_true", help="skip the completion scan")
    p.add_argument("--report", metavar="PATH", help="write the full JSON report here")
    p.set_defaults(fn=cmd_verify)

    with_tree("export", "re-emit a valid tree", fmt=True).set_defaults(fn=cmd_export)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        # MoveError, InvariantError, ClassifyError and FamilyError are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
