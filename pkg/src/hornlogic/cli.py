"""Command line front end.

Exit status: 0 success / query true, 1 query false, 2 usage or parse
error, 3 runtime error (depth limit, invalid metric input).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import metrics
from .dsl import ParseError, ProgramParseError, parse_program, parse_query
from .engine import DepthLimitExceeded, QueryError, QueryOptions, run_deep, solve
from .terms import KnowledgeBase, Predicate, Variable

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def render_value(name: str, value) -> str:
    if isinstance(value, Variable):
        return "_" if value.name == name else value.name
    return str(value)


def render_solution(rs: dict) -> list[str]:
    return [f"{name} = {render_value(name, value)}" for name, value in rs.items()]


def term_json(value) -> dict:
    if isinstance(value, Variable):
        return {"kind": "variable", "name": value.name}
    return {"kind": value.kind, "value": value.value}


def answer_json(success: bool, solutions: list) -> dict:
    return {"success": success,
            "solutions": [{k: term_json(v) for k, v in rs.items()} for rs in solutions]}


def _out(*lines):
    for line in lines:
        print(line)


def load_kb(path: str) -> KnowledgeBase:
    try:
        source = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"{path}: cannot read: {exc}", EXIT_USAGE) from None
    try:
        return parse_program(source)
    except ProgramParseError as exc:
        raise CliError("\n".join(e.render(path) for e in exc.errors), EXIT_USAGE) from None


def _options(args) -> QueryOptions:
    try:
        return QueryOptions(args.max_depth, args.max_solutions)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def print_answers(answers, as_json: bool) -> bool:
    """Print answers as they arrive (plain) or all at once (json)."""
    if as_json:
        solutions = list(answers)
        print(json.dumps(answer_json(bool(solutions), solutions), ensure_ascii=False))
        return bool(solutions)
    found = False
    for rs in answers:
        if not found:
            print("true")
            found = True
        elif rs:
            print()
        _out(*render_solution(rs))
        sys.stdout.flush()
    if not found:
        print("false")
    return found


def cmd_run(args) -> int:
    kb = load_kb(args.kb)
    try:
        goal = parse_query(args.query)
    except ParseError as exc:
        raise CliError(exc.render("<query>"), EXIT_USAGE) from None
    ok = print_answers(solve(kb, goal, _options(args)), args.json)
    return EXIT_OK if ok else EXIT_FALSE


def cmd_repl(args) -> int:
    kb = load_kb(args.kb)
    options = _options(args)
    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            print("?- ", end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            return EXIT_OK
        line = line.strip()
        if not line:
            continue
        if line in (":quit", ":q"):
            return EXIT_OK
        try:
            goal = parse_query(line)
            print_answers(solve(kb, goal, options), args.json)
        except ParseError as exc:
            print(f"error: {exc.span.line}:{exc.span.column}: {exc.message}")
        except QueryError as exc:
            print(f"error: {exc}")
        sys.stdout.flush()


def diagnose(kb: KnowledgeBase, symptoms: list[str], options: QueryOptions | None = None) -> list[str]:
    """Pairwise symptom harness around ``diagnosis/3``.

    Every listed symptom is paired with every symptom still to check; the
    diagnoses found are reported and become the next symptoms to check
    (deduplicated), until a round finds nothing.
    """
    d = Variable("D")
    found: list[str] = []
    to_check = list(symptoms)
    while to_check:
        new = []
        for s1 in symptoms:
            for s2 in to_check:
                for rs in solve(kb, Predicate.of("diagnosis", s1, s2, d), options):
                    value = rs["D"]
                    shown = value.name if isinstance(value, Variable) else str(value.value)
                    found.append(shown)
                    new.append(shown)
        to_check = list(dict.fromkeys(new))
    return found


def cmd_diagnose(args) -> int:
    kb = load_kb(args.kb)
    try:
        result = diagnose(kb, args.symptoms, _options(args))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    if args.json:
        print(json.dumps({"diagnoses": result}))
    else:
        print(",".join(result))
    return EXIT_OK if result else EXIT_FALSE


def cmd_check(args) -> int:
    kb = load_kb(args.kb)
    n = len(kb)
    sigs = [f"{name}/{arity}" for name, arity in kb.signatures()]
    if args.json:
        print(json.dumps({"clauses": n, "predicates": sigs}))
    elif sigs:
        print(f"{n} clause{'s' if n != 1 else ''}, predicates: {', '.join(sigs)}")
    else:
        print(f"{n} clauses")
    return EXIT_OK


def cmd_halstead(args) -> int:
    counts = metrics.HalsteadCounts(args.n1, args.n2, args.N1, args.N2)
    report = metrics.halstead(counts)
    if args.json:
        print(json.dumps(metrics.halstead_dict(counts, report), indent=2))
    else:
        print(metrics.halstead_table(report))
    return EXIT_OK


def cmd_mccabe(args) -> int:
    counts = metrics.CfgCounts(args.edges, args.nodes, args.components)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", metrics.CyclomaticWarning)
        v = metrics.cyclomatic(counts)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.json:
        print(json.dumps({"edges": counts.edges, "nodes": counts.nodes,
                          "components": counts.components, "v(G)": v}))
    else:
        print(f"v(G) = {v}")
    return EXIT_OK


def cmd_quality(args) -> int:
    try:
        doc = json.loads(Path(args.measurements).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CliError(f"{args.measurements}: invalid metrics input: {exc}", EXIT_RUNTIME) from None
    report = metrics.quality_report(metrics.sheet_from_json(doc))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
    else:
        print(report.render())
    return EXIT_OK


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=default(False),
                   help="machine-readable output")
    p.add_argument("--max-depth", type=int, default=default(10_000), metavar="N",
                   help="maximum resolution depth (default 10000)")
    p.add_argument("--max-solutions", type=int, default=default(None), metavar="N",
                   help="stop after N solutions")
    return p


def build_parser() -> argparse.ArgumentParser:
    flags = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(
        prog="hornlogic", parents=[_global_flags(suppress=False)],
        description="Query Horn-clause knowledge bases and compute code metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[flags], help="answer one query")
    p.add_argument("kb", help=".lkb knowledge base")
    p.add_argument("--query", "-q", required=True, help="e.g. '?- p(X).'")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("repl", parents=[flags], help="interactive queries")
    p.add_argument("kb")
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("diagnose", parents=[flags], help="symptom-list harness over diagnosis/3")
    p.add_argument("kb")
    p.add_argument("symptoms", nargs="*")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("check", parents=[flags], help="parse and summarise a knowledge base")
    p.add_argument("kb")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("metrics", help="Halstead, McCabe and quality reports")
    msub = p.add_subparsers(dest="metric", required=True)
    h = msub.add_parser("halstead", parents=[flags])
    h.add_argument("--n1", type=int, required=True, dest="n1", help="distinct operators")
    h.add_argument("--n2", type=int, required=True, dest="n2", help="distinct operands")
    h.add_argument("--N1", type=int, required=True, dest="N1", help="total operators")
    h.add_argument("--N2", type=int, required=True, dest="N2", help="total operands")
    h.set_defaults(func=cmd_halstead)
    m = msub.add_parser("mccabe", parents=[flags])
    m.add_argument("--edges", type=int, required=True)
    m.add_argument("--nodes", type=int, required=True)
    m.add_argument("--components", type=int, default=1)
    m.set_defaults(func=cmd_mccabe)
    q = msub.add_parser("quality", parents=[flags])
    q.add_argument("measurements", help="measurement JSON file")
    q.set_defaults(func=cmd_quality)
    return parser


def _dispatch(args) -> int:
    try:
        return args.func(args)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except DepthLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except metrics.MetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except QueryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.max_depth < 1:
        print("error: --max-depth must be positive", file=sys.stderr)
        return EXIT_USAGE
    return run_deep(QueryOptions(args.max_depth), _dispatch, args)


if __name__ == "__main__":
    sys.exit(main())
