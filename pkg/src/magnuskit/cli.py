"""Command-line front end.

Every command prints one JSON document (or a text rendering with
``--format text``).  Output bytes depend only on the arguments.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from typing import Any, Sequence

from . import __version__

DEFAULT_MAX_ORDER = 7


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would call sys.exit itself
        raise UsageError(f"{self.prog}: {message}")


def max_order_cap() -> int:
    raw = os.environ.get("MAGNUS_MAX_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"MAGNUS_MAX_ORDER must be an integer, got {raw!r}") from None
    from .magnus import MAX_ORDER

    if not 1 <= cap <= MAX_ORDER:
        raise UsageError(f"MAGNUS_MAX_ORDER must be in [1, {MAX_ORDER}], got {cap}")
    return cap


def _order(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"order must be positive, got {n}")
    return n


def _check_cap(n: int, what: str = "--order") -> None:
    cap = max_order_cap()
    if n > cap:
        raise UsageError(f"{what} {n} exceeds the enumeration cap {cap} (set MAGNUS_MAX_ORDER)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--envelope", action="store_true", help="wrap the payload with command, version and config hash")

    p = _Parser(prog="magnuskit", description="Exact pre-Lie and classical Magnus expansions.")
    p.add_argument("--version", action="version", version=f"magnuskit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    trees = sub.add_parser("trees", help="rooted tree enumeration")
    tsub = trees.add_subparsers(dest="action", required=True, parser_class=_Parser)
    enum = tsub.add_parser("enum", parents=[common], help="list trees with N vertices")
    enum.add_argument("--order", type=_order, required=True)
    enum.add_argument("--e1", action="store_true", help="planar trees with fertilities 0, 1 or even")
    enum.add_argument("--planar", action="store_true", help="all planar trees")

    magnus = sub.add_parser("magnus", help="Magnus element tables")
    msub = magnus.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, text in (
        ("planar", "sum over e1-trees, with planar and non-planar terms"),
        ("nonplanar", "non-planar terms of the e1-tree sum"),
        ("recursion", "Bernoulli recursion in the free pre-Lie algebra"),
        ("gl-log", "Grossman-Larson logarithm of exp(o) acting on o"),
        ("lie", "free Lie algebra over a_1, a_2, ... with lambda monomials"),
    ):
        sp = msub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--order", type=_order, required=True)
    blanes = msub.add_parser("blanes", parents=[common], help="classical midpoint tables in q_1, q_2, ...")
    blanes.add_argument("--k", type=_order, required=True, help="component index")
    blanes.add_argument("--cap", type=_order, required=True, help="largest h-degree kept")

    verify = sub.add_parser("verify", help="cross-route and golden checks")
    vsub = verify.add_subparsers(dest="action", required=True, parser_class=_Parser)
    va = vsub.add_parser("all", parents=[common], help="run every check")
    va.add_argument("--max-order", type=_order, required=True)

    integ = sub.add_parser("integrate", parents=[common], help="numeric Magnus integrator")
    integ.add_argument("--order", type=int, choices=(2, 4, 6), required=True)
    integ.add_argument("--steps", type=_order, required=True)
    integ.add_argument("--problem", required=True)
    integ.add_argument("--csv", metavar="PATH", help="write the per-step table here instead of stdout")
    return p


# ---------------------------------------------------------------------------
# command bodies return (payload, text)


def _trees(args) -> tuple[Any, str]:
    from .trees import enumerate_e1, enumerate_planar, enumerate_trees

    _check_cap(args.order)
    if args.e1:
        found, kind = enumerate_e1(args.order), "e1"
    elif args.planar:
        found, kind = enumerate_planar(args.order), "planar"
    else:
        found, kind = enumerate_trees(args.order), "nonplanar"
    keys = [t.key for t in found]
    payload = {"order": args.order, "kind": kind, "count": len(keys), "trees": keys}
    return payload, "\n".join(keys)


def _combination_text(items: list[dict]) -> str:
    return "\n".join(f"{d['coeff']}\t{d['elem']}" for d in items) or "0"


def _magnus(args) -> tuple[Any, str]:
    from .magnus import TableExhaustedError, magnus_recursion, magnus_theorem4, term_counts

    if args.action == "blanes":
        from .freelie import classical_magnus_midpoint, format_table

        if args.cap > 9:
            raise UsageError(f"--cap {args.cap} exceeds 9")
        el = classical_magnus_midpoint(args.k, args.cap)
        payload = {"k": args.k, "cap": args.cap, "terms": el.to_json("q")}
        return payload, format_table(args.k, el)

    _check_cap(args.order)
    n = args.order
    if args.action == "planar":
        table = magnus_theorem4(n)
        try:
            counts = term_counts(n)
        except TableExhaustedError as exc:
            counts = exc.partial
        payload = dict(table.to_json(), counts=counts.to_json())
        text = _combination_text(payload["planar"]) + "\n--\n" + _combination_text(payload["nonplanar"])
        return payload, text
    if args.action == "nonplanar":
        items = magnus_theorem4(n).nonplanar.to_json()
        return items, _combination_text(items)
    if args.action == "recursion":
        items = magnus_recursion(n).to_json()
        return items, _combination_text(items)
    if args.action == "gl-log":
        from .gl import log_star_component

        items = log_star_component(n).to_json()
        return items, _combination_text(items)
    if args.action == "lie":
        from .freelie import magnus_lie

        el = magnus_lie(n, cap=max_order_cap())
        return el.to_json(with_lambda=True), el.to_text()
    raise UsageError(f"unknown magnus action {args.action!r}")


def _verify(args) -> tuple[Any, str, int]:
    from .verify import run_checks

    _check_cap(args.max_order, "--max-order")
    results = run_checks(args.max_order)
    failed = [r for r in results if not r.ok]
    payload = {
        "max_order": args.max_order,
        "passed": not failed,
        "checks": [r.to_json() for r in results],
    }
    lines = [f"{'PASS' if r.ok else 'FAIL'} {r.name} order={r.order}" for r in results]
    if failed:
        r = failed[0]
        detail = f": {r.detail}" if r.detail else ""
        print(f"verification failed: {r.name} at order {r.order}{detail}", file=sys.stderr)
    return payload, "\n".join(lines), 1 if failed else 0


def _integrate(args) -> tuple[Any, str]:
    import numpy as np

    from .numeric import PROBLEMS, IntegratorConfig, convergence_errors, integrate, slopes

    if args.problem not in PROBLEMS:
        raise UsageError(f"unknown problem {args.problem!r}; choose from {', '.join(sorted(PROBLEMS))}")
    problem = PROBLEMS[args.problem]
    span = problem.t_span[1] - problem.t_span[0]
    traj = integrate(IntegratorConfig(args.order, span / args.steps, problem.t_span, problem.A))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "norm", "det"])
    for t, y in zip(traj.times, traj.states):
        writer.writerow([repr(float(t)), f"{np.linalg.norm(y):.17g}", f"{np.linalg.det(y):.17g}"])
    errors = convergence_errors(problem, args.order, [args.steps, 2 * args.steps])
    error = errors[0]
    slope = slopes(errors)[0] if errors[1] > 0 and errors[0] > 0 else None
    summary = {
        "order": args.order,
        "steps": args.steps,
        "problem": args.problem,
        "error_vs_reference": error,
        "slope": slope,
    }
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(buf.getvalue())
        table = ""
    else:
        table = buf.getvalue()
    return summary, table


# ---------------------------------------------------------------------------


def _dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _config_hash(argv: Sequence[str]) -> str:
    return hashlib.sha256(_dumps(list(argv)).encode()).hexdigest()[:16]


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    """Run the command line; return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help / --version
            return int(exc.code or 0)
        code = 0
        prefix = ""
        if args.command == "trees":
            payload, text = _trees(args)
        elif args.command == "magnus":
            payload, text = _magnus(args)
        elif args.command == "verify":
            old, sys.stderr = sys.stderr, err
            try:
                payload, text, code = _verify(args)
            finally:
                sys.stderr = old
        else:
            payload, prefix = _integrate(args)
            text = ""
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (ValueError, LookupError) as exc:
        print(f"error: {exc}", file=err)
        return 2

    if args.format == "text":
        body = text if args.command != "integrate" else "\n".join(f"{k}: {v}" for k, v in payload.items())
    elif args.envelope:
        body = _dumps(
            {
                "command": argv,
                "version": __version__,
                "config_hash": _config_hash(argv),
                "format": "json",
                "payload": payload,
            }
        )
    else:
        body = _dumps(payload)
    out.write(prefix + body + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
