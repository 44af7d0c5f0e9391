"""Command line entry point: ``treespace <command> ...``.

Exit codes: 0 success, 1 a named check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .approximation import approximate, construction_report
from .construction import Check, build_construction_tree
from .corpus import random_presentation, random_weights
from .dot import export_dot
from .fragmentation import TemplateMarking, derivation_sequence, frag_index
from .indices import cb_rank, interval_type, ordinal_index
from .oracles import cantor_basis_identity, run_checks
from .presentation import PresentationError, WeightAssignment, cantor_tree, format_path
from .serialize import dumps, format_rational, load_function, load_tree, parse_rational, tree_to_json

__all__ = ["main", "build_parser"]


def _epsilon(text: str) -> Fraction:
    try:
        eps = parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if eps <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return eps


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _natural(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treespace", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("indices", parents=[common], help="ordinal index, interval type, CB rank")
    s.add_argument("file")

    s = sub.add_parser("fragment", parents=[common], help="epsilon-derivation sequence and index")
    s.add_argument("file")
    s.add_argument("--epsilon", type=_epsilon, required=True)
    s.add_argument("--full-sequence", action="store_true")

    s = sub.add_parser("zippin", parents=[common], help="construction tree, quotient and approximation")
    s.add_argument("file")
    s.add_argument("--epsilon", type=_epsilon, required=True)
    s.add_argument("--function")
    s.add_argument("--dot")
    s.add_argument("--weights-in-tree", action="store_true",
                   help="weights are read from the tree file (the only supported source)")

    s = sub.add_parser("cantor", parents=[common], help="depth-truncated tree of finite subsets")
    s.add_argument("--depth", type=_natural, required=True)
    s.add_argument("--out")

    s = sub.add_parser("check", parents=[common], help="compare symbolic results with brute-force oracles")
    s.add_argument("file")
    s.add_argument("--epsilon", type=_epsilon, required=True)
    s.add_argument("--copy-bound", type=_positive_int, default=2)
    s.add_argument("--function")

    s = sub.add_parser("gen", parents=[common], help="deterministic random presentation with weights")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-depth", type=_natural, default=4)
    s.add_argument("--max-groups", type=_positive_int, default=3)
    s.add_argument("--out")
    return parser


def _checks_json(checks) -> list:
    return [c.to_json() for c in checks]


def cmd_indices(args):
    p, _ = load_tree(args.file)
    rank, count = cb_rank(p)
    results = {"o": str(ordinal_index(p)), "beta": str(interval_type(p)),
               "cb_rank": str(rank), "cb_count": count}
    return {"file": args.file}, results, []


def cmd_fragment(args):
    p, w = load_tree(args.file)
    full = TemplateMarking.full(p)
    seq = derivation_sequence(w, args.epsilon, full)
    results = {"epsilon": format_rational(args.epsilon),
               "frag_index": str(frag_index(w, args.epsilon, full))}
    if args.full_sequence:
        results["sequence"] = [F.labels() for F in seq]
    else:
        results["steps"] = len(seq) - 1
    checks = []
    return {"file": args.file, "epsilon": format_rational(args.epsilon)}, results, checks


def _node_rows(tree):
    rows = []
    for j, n in enumerate(tree.nodes):
        i = tree.parents[j]
        rows.append({"id": j, "descriptor": n.key.label(), "type": n.key.kind, "alpha": n.alpha,
                     "parent": i, "path": format_path(n.key.root),
                     "multiplicity": tree.multiplicity(j)})
    return rows


def cmd_zippin(args):
    p, w = load_tree(args.file)
    inputs = {"file": args.file, "epsilon": format_rational(args.epsilon), "function": args.function}
    if args.function:
        g = load_function(args.function, p)
        _, report = approximate(p, w, g, args.epsilon)
        tree = report.tree
    else:
        tree = build_construction_tree(p, w, args.epsilon)
        report = construction_report(tree)
    results = dict(report.to_json())
    results["nodes"] = _node_rows(tree)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(export_dot(tree))
        results["dot"] = args.dot
    return inputs, results, report.checks


def cmd_cantor(args):
    p = cantor_tree(args.depth)
    data = tree_to_json(p, WeightAssignment.uniform(p))
    if not args.out:
        return None, data, []
    with open(args.out, "w") as fh:
        fh.write(dumps(data))
    bad = cantor_basis_identity(args.depth, 3)
    checks = [Check("basis_identity", not bad, "; ".join(bad[:5]))]
    return {"depth": args.depth, "out": args.out}, {"points_at_bound_3": sum(3 ** k for k in range(args.depth + 1))}, checks


def cmd_check(args):
    p, w = load_tree(args.file)
    g = load_function(args.function, p) if args.function else None
    checks = run_checks(p, w, args.epsilon, args.copy_bound, g)
    inputs = {"file": args.file, "epsilon": format_rational(args.epsilon), "copy_bound": args.copy_bound}
    return inputs, {"checks_run": len(checks), "failed": sum(not c.passed for c in checks)}, checks


def cmd_gen(args):
    rng = random.Random(args.seed)
    p = random_presentation(rng, max_depth=args.max_depth, max_groups=args.max_groups)
    data = tree_to_json(p, random_weights(rng, p))
    if not args.out:
        return None, data, []
    with open(args.out, "w") as fh:
        fh.write(dumps(data))
    return {"seed": args.seed, "out": args.out}, {"templates": len(p.paths)}, []


COMMANDS = {"indices": cmd_indices, "fragment": cmd_fragment, "zippin": cmd_zippin,
            "cantor": cmd_cantor, "check": cmd_check, "gen": cmd_gen}


def _emit_text(envelope, out):
    out.write(f"command: {envelope['command']}\n")
    for k, v in (envelope["inputs"] or {}).items():
        out.write(f"input {k}: {v}\n")
    for k, v in envelope["results"].items():
        out.write(f"{k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}\n")
    for c in envelope["checks"]:
        out.write(f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}{': ' + c['detail'] if c['detail'] else ''}\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        inputs, results, checks = COMMANDS[args.command](args)
    except (PresentationError, ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"treespace {args.command}: {exc}\n")
        return 2
    if inputs is None:  # raw file content requested on stdout
        out.write(dumps(results))
        return 0
    envelope = {"command": args.command, "inputs": inputs, "results": results,
                "checks": _checks_json(checks)}
    if args.format == "json":
        out.write(dumps(envelope))
    else:
        _emit_text(envelope, out)
    return 1 if any(not c.passed for c in checks) else 0


if __name__ == "__main__":
    sys.exit(main())
