"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error (and failed checks),
2 conditioning on a contradiction, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import re
import sys
import time
from fractions import Fraction
from typing import Optional

from . import semantics
from .assumptions import exactly_one, exhaustive_closed_form, marble_sequence, union_of_spaces
from .bdd import DEFAULT_NODE_CAP
from .errors import ConditionOnContradiction, GenpriorError, ResourceLimitError
from .formula import Formula, Universe, check_name, indexed_atoms, parse, render
from .harness import DEFAULT_SEED, DEFAULT_TRIALS, SUITES, GeneratorConfig, run_suite
from .prior import conditional_probability, format_decimal, format_rational, prior_probability
from .semantics import (
    DEFAULT_AUTO_ENUM_THRESHOLD, DEFAULT_MAX_ENUM_ATOMS, CountSettings, evaluate,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONTRADICTION = 2
EXIT_RESOURCE = 3

TABLE_MAX_ATOMS = 6


class UsageError(GenpriorError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Environment files
# ---------------------------------------------------------------------------

_LET_RE = re.compile(r"\s*let\s+([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)\Z", re.S)


def parse_env(text: str) -> dict[str, Formula]:
    """Parse ``let NAME = <formula> ;`` bindings.

    ``#`` starts a comment running to end of line. Later bindings may use
    earlier names.
    """
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    env: dict[str, Formula] = {}
    statements = body.split(";")
    if statements[-1].strip():
        raise UsageError("environment file: missing ';' after %r" % statements[-1].strip())
    for stmt in statements[:-1]:
        if not stmt.strip():
            continue
        m = _LET_RE.match(stmt)
        if not m:
            raise UsageError("environment file: expected 'let NAME = formula;', got %r" % stmt.strip())
        name, rhs = m.group(1), m.group(2)
        check_name(name)
        if name in env:
            raise UsageError("environment file: %s is bound twice" % name)
        env[name] = parse(rhs, env)
    return env


def load_env(path: Optional[str]) -> dict[str, Formula]:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        return parse_env(fh.read())


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


def _probability_fields(p: Fraction) -> dict:
    return {"probability": format_rational(p), "decimal": format_decimal(p)}


def _settings(args) -> CountSettings:
    return CountSettings(backend=args.backend, max_enum_atoms=args.max_enum_atoms,
                         node_cap=args.bdd_node_cap)


def _universe(args, *formulas: Formula) -> Universe:
    if getattr(args, "universe", None):
        u = Universe.parse(args.universe)
        semantics.check_covers(u, *formulas)
        return u
    return Universe.of(*formulas)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    z = parse(args.formula, args.env)
    y = parse(args.given, args.env) if args.given is not None else None
    u = _universe(args, *([z] if y is None else [z, y]))
    settings = _settings(args)
    start = time.perf_counter()
    if y is None:
        p = prior_probability(z, u, settings)
    else:
        p = conditional_probability(z, y, u, settings)
    elapsed = (time.perf_counter() - start) * 1000
    payload = {
        "query": {"z": render(z), "given": render(y) if y is not None else None,
                  "universe": u.names()},
        **_probability_fields(p),
        "backend": settings.resolve(u),
        "time_ms": round(elapsed, 3),
    }
    _emit(args, payload, format_rational(p))
    return EXIT_OK


def cmd_count(args) -> int:
    f = parse(args.formula, args.env)
    u = _universe(args, f)
    settings = _settings(args)
    n = semantics.model_count(f, u, settings)
    _emit(args, {"formula": render(f), "universe": u.names(), "count": n,
                 "backend": settings.resolve(u)}, str(n))
    return EXIT_OK


def cmd_dnf(args) -> int:
    f = parse(args.formula, args.env)
    u = _universe(args, f)
    summary = semantics.dnf_summary(f, u, _settings(args))
    terms = None if summary.terms is None else [semantics.render_term(t) for t in summary.terms]
    lines = list(terms) if terms is not None else [summary.render()]
    lines.append("terms=%d atoms=%d support=%s" % (
        summary.term_count, summary.atom_count, ",".join(a.name for a in summary.support)))
    _emit(args, {"formula": render(f), "term_count": summary.term_count,
                 "atom_count": summary.atom_count,
                 "support": [a.name for a in summary.support], "terms": terms},
          "\n".join(lines))
    return EXIT_OK


def cmd_support(args) -> int:
    f = parse(args.formula, args.env)
    u = _universe(args, f)
    sup = semantics.support(f, u, _settings(args))
    names = [a.name for a in u if a in sup]
    _emit(args, {"formula": render(f), "support": names, "size": len(names)}, " ".join(names))
    return EXIT_OK


def cmd_table(args) -> int:
    f = parse(args.formula, args.env)
    u = _universe(args, f)
    if len(u) > TABLE_MAX_ATOMS:
        raise UsageError("truth tables are limited to %d atoms, got %d" % (TABLE_MAX_ATOMS, len(u)))
    rows = []
    for values in itertools.product((False, True), repeat=len(u)):
        rows.append((values, evaluate(f, dict(zip(u, values)))))
    names = u.names()
    widths = [max(len(n), 1) for n in names]
    lines = [" ".join(n.rjust(w) for n, w in zip(names, widths)) + " | f"]
    for values, result in rows:
        lines.append(" ".join(str(int(v)).rjust(w) for v, w in zip(values, widths))
                     + " | %d" % result)
    _emit(args, {"formula": render(f), "atoms": names,
                 "rows": [{"values": [int(v) for v in values], "value": int(r)} for values, r in rows]},
          "\n".join(lines))
    return EXIT_OK


def cmd_marble(args) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    half = Fraction(1, 2)
    rows = []
    for n, p in marble_sequence(args.max_n, _settings(args)):
        gap = abs(p - half)
        rows.append({"n": n, **_probability_fields(p),
                     "gap": format_rational(gap), "gap_decimal": format_decimal(gap),
                     "closed_form": format_rational(exhaustive_closed_form(n)),
                     "matches_closed_form": p == exhaustive_closed_form(n)})
    last = rows[-1]
    payload = {"rows": rows, "last": last,
               "closed_form": "2^(n-1)/(2^n-1)", "limit_gap": last["gap_decimal"]}
    lines = ["%4s  %-24s %-21s %s" % ("n", "probability", "decimal", "gap")]
    for r in rows:
        lines.append("%4d  %-24s %-21s %s" % (r["n"], r["probability"], r["decimal"], r["gap_decimal"]))
    lines.append("closed form 2^(n-1)/(2^n-1) at n=%d: %s (%s)" % (
        last["n"], last["closed_form"], "matches" if last["matches_closed_form"] else "MISMATCH"))
    lines.append("gap to 1/2 at n=%d: %s" % (last["n"], last["gap_decimal"]))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_check(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    cfg = GeneratorConfig(seed=args.seed, max_atoms=args.max_atoms)
    reports = run_suite(cfg, args.trials, (args.suite,), _settings(args))
    passed = all(r.passed for r in reports)
    payload = {"seed": args.seed, "trials": args.trials, "passed": passed,
               "reports": [r.to_dict() for r in reports]}
    lines = ["seed %d" % args.seed]
    for r in reports:
        lines.append(r.summary())
        for fail in r.failures:
            lines.append("  inputs: %s" % json.dumps(fail.inputs))
            lines.append("  expected %s, got %s" % (fail.expected, fail.actual))
            for cmd in fail.reproduce:
                lines.append("  reproduce: %s" % cmd)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if passed else EXIT_USAGE


def cmd_bench(args) -> int:
    rows = []
    for n in range(1, args.max_n + 1):
        xs = indexed_atoms(n)
        u = Universe(xs)
        for name, f in (("exactly_one", exactly_one(xs)), ("union_of_spaces", union_of_spaces(xs))):
            row = {"n": n, "formula": name}
            for backend in ("enum", "bdd"):
                if backend == "enum" and n > args.max_enum_atoms:
                    row[backend + "_ms"] = None
                    continue
                start = time.perf_counter()
                count = semantics.model_count(f, u, _settings(args).with_backend(backend))
                row[backend + "_ms"] = round((time.perf_counter() - start) * 1000, 3)
                row["count"] = count
            rows.append(row)
    lines = ["%4s  %-16s %12s %10s %10s" % ("n", "formula", "count", "enum ms", "bdd ms")]
    for r in rows:
        lines.append("%4d  %-16s %12d %10s %10s" % (
            r["n"], r["formula"], r["count"],
            "-" if r["enum_ms"] is None else "%.3f" % r["enum_ms"], "%.3f" % r["bdd_ms"]))
    _emit(args, {"rows": rows}, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _global_options(parser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--json", action="store_true", default=default(False),
                        help="emit a single JSON object")
    parser.add_argument("--env", metavar="FILE", default=default(None),
                        help="file of 'let NAME = formula;' bindings")
    parser.add_argument("--backend", choices=("auto", "enum", "bdd"), default=default("auto"),
                        help="counting backend (auto: enumeration up to %d atoms)"
                        % DEFAULT_AUTO_ENUM_THRESHOLD)
    parser.add_argument("--max-enum-atoms", type=int, metavar="N",
                        default=default(DEFAULT_MAX_ENUM_ATOMS))
    parser.add_argument("--bdd-node-cap", type=int, metavar="N", default=default(DEFAULT_NODE_CAP))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genprior",
                     description="Exact probabilities of propositional formulas by model counting.")
    _global_options(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help_text, formula=True, universe=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if formula:
            p.add_argument("formula")
        if universe:
            p.add_argument("--universe", metavar="ATOMS",
                           help="comma-separated atoms (default: atoms of the query)")
        p.set_defaults(func=fn)
        return p

    p = command("eval", cmd_eval, "probability of a formula, optionally given a condition")
    p.add_argument("--given", metavar="FORMULA")
    command("count", cmd_count, "number of models over the universe")
    command("dnf", cmd_dnf, "canonical disjunctive normal form over the support")
    command("support", cmd_support, "atoms the formula depends on")
    command("table", cmd_table, "truth table (at most %d atoms)" % TABLE_MAX_ATOMS)
    p = command("marble", cmd_marble, "P(A1 | I_1 | ... | I_n) for n = 1..N",
                formula=False, universe=False)
    p.add_argument("--max-n", type=int, default=11)
    p = command("check", cmd_check, "run the randomized property suite",
                formula=False, universe=False)
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--max-atoms", type=int, default=8)
    p = command("bench", cmd_bench, "time both backends on assumption constructors",
                formula=False, universe=False)
    p.add_argument("--max-n", type=int, default=16)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.env = load_env(args.env)
        return args.func(args)
    except ConditionOnContradiction as exc:
        return _fail(argv, "contradiction: %s; the conditional probability is undefined" % exc,
                     EXIT_CONTRADICTION)
    except ResourceLimitError as exc:
        return _fail(argv, "resource limit: %s" % exc, EXIT_RESOURCE)
    except (GenpriorError, ValueError, OSError) as exc:
        return _fail(argv, str(exc), EXIT_USAGE)


def _fail(argv, message: str, code: int) -> int:
    print("genprior: error: %s" % message, file=sys.stderr)
    argv = sys.argv[1:] if argv is None else argv
    if "--json" in argv:
        print(json.dumps({"error": message, "exit_code": code}))
    return code


if __name__ == "__main__":
    sys.exit(main())
