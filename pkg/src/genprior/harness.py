"""Seeded randomized checks of the symmetries and rules of the engine.

Every check compares exact rationals. Failures carry rendered formulas and
the ``genprior`` command lines that reproduce each side of the discrepancy.
"""

from __future__ import annotations

import random
import shlex
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import semantics
from .assumptions import AssumptionSpec, at_least_one, at_most_one, exactly_one
from .errors import HarnessError
from .formula import (
    FALSE, TRUE, And, Atom, Formula, Iff, Implies, Not, Or, Universe, Var, atom,
    atoms_of, disj, indexed_atoms, negation_swap, relabel, render,
)
from .prior import conditional_probability, format_rational, generic_formula_probability
from .semantics import DEFAULT_SETTINGS, CountSettings

DEFAULT_SEED = 42
DEFAULT_TRIALS = 500

DEFAULT_WEIGHTS = {
    "var": 4.0,
    "true": 0.25,
    "false": 0.25,
    "not": 2.0,
    "and": 2.0,
    "or": 2.0,
    "implies": 1.0,
    "iff": 1.0,
}

_LEAVES = ("var", "true", "false")
_NODES = ("not", "and", "or", "implies", "iff")

SUITES = ("relabel", "swap", "taut", "rules", "exclusivity", "route", "backends")


@dataclass
class GeneratorConfig:
    seed: int = DEFAULT_SEED
    max_atoms: int = 8
    max_depth: int = 6
    connective_weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    def __post_init__(self):
        if self.max_atoms < 1:
            raise ValueError("max_atoms must be at least 1")
        if self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")
        unknown = set(self.connective_weights) - set(_LEAVES + _NODES)
        if unknown:
            raise ValueError("unknown node kinds: %s" % ", ".join(sorted(unknown)))
        if any(w < 0 for w in self.connective_weights.values()):
            raise ValueError("weights must be nonnegative")
        if not any(self.connective_weights.values()):
            raise ValueError("at least one weight must be positive")


class FormulaGenerator:
    """Deterministic stream of random formulas over ``A1 .. A<max_atoms>``."""

    def __init__(self, cfg: GeneratorConfig, stream: str = ""):
        self.cfg = cfg
        self.rng = random.Random("%d:%s" % (cfg.seed, stream))
        self.atoms = indexed_atoms(cfg.max_atoms)
        self.universe = Universe(self.atoms)
        w = cfg.connective_weights
        self._leaf_kinds = [k for k in _LEAVES if w.get(k, 0) > 0] or ["var"]
        self._leaf_weights = [w.get(k, 1.0) if w.get(k, 0) > 0 else 1.0 for k in self._leaf_kinds]
        self._all_kinds = [k for k in _LEAVES + _NODES if w.get(k, 0) > 0]
        self._all_weights = [w[k] for k in self._all_kinds]

    def formula(self, depth: Optional[int] = None) -> Formula:
        depth = self.cfg.max_depth if depth is None else depth
        if depth <= 0:
            kind = self.rng.choices(self._leaf_kinds, self._leaf_weights)[0]
        else:
            kind = self.rng.choices(self._all_kinds, self._all_weights)[0]
        if kind == "var":
            return Var(self.rng.choice(self.atoms))
        if kind == "true":
            return TRUE
        if kind == "false":
            return FALSE
        if kind == "not":
            return Not(self.formula(depth - 1))
        if kind in ("and", "or"):
            arity = self.rng.choice((2, 2, 3))
            children = tuple(self.formula(depth - 1) for _ in range(arity))
            return And(children) if kind == "and" else Or(children)
        lhs, rhs = self.formula(depth - 1), self.formula(depth - 1)
        return Implies(lhs, rhs) if kind == "implies" else Iff(lhs, rhs)

    def subset(self, min_size: int = 0) -> list[Atom]:
        k = self.rng.randint(min_size, len(self.atoms))
        return sorted(self.rng.sample(self.atoms, k), key=lambda a: a.id)

    def condition(self) -> Formula:
        """A conditioning formula, biased toward satisfiable ones.

        About a third are possibility, exhaustivity or exclusivity
        constraints on a random atom subset, sometimes conjoined with a
        random formula.
        """
        if self.rng.random() < 0.35:
            build = self.rng.choice((exactly_one, at_least_one, at_most_one))
            base = build(self.subset(min_size=1))
            if self.rng.random() < 0.5:
                return And((base, self.formula(2)))
            return base
        return self.formula()

    def permutation(self) -> dict[Atom, Atom]:
        shuffled = list(self.atoms)
        self.rng.shuffle(shuffled)
        return dict(zip(self.atoms, shuffled))


def random_formula(cfg: GeneratorConfig) -> Formula:
    """First formula of the stream seeded by ``cfg.seed``."""
    return FormulaGenerator(cfg).formula()


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class Failure:
    inputs: dict
    expected: str
    actual: str
    reproduce: list = field(default_factory=list)


@dataclass
class CheckReport:
    check_name: str
    trials: int
    failures: list = field(default_factory=list)
    skipped: int = 0
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = "%s %s: %d trials" % (status, self.check_name, self.trials)
        if self.skipped:
            line += ", %d skipped" % self.skipped
        if self.failures:
            line += ", %d failures" % len(self.failures)
        if self.seed is not None:
            line += " (seed %d)" % self.seed
        return line


def _eval_cmd(z: Formula, y: Optional[Formula] = None, universe: Optional[Universe] = None) -> str:
    parts = ["genprior", "eval"]
    if universe is not None:
        parts += ["--universe", ",".join(universe.names())]
    if y is not None:
        parts += ["--given", render(y)]
    parts.append(render(z))
    return " ".join(shlex.quote(p) for p in parts)


def _count_cmd(f: Formula, universe: Universe, backend: str) -> str:
    parts = ["genprior", "--backend", backend, "count", "--universe",
             ",".join(universe.names()), render(f)]
    return " ".join(shlex.quote(p) for p in parts)


def _satisfiable(f: Formula, u: Universe, settings: CountSettings) -> bool:
    return semantics.model_count(f, u, settings) > 0


def _guard_skips(report: CheckReport) -> CheckReport:
    if report.trials and report.skipped * 2 > report.trials:
        raise HarnessError(
            "%s skipped %d of %d trials; generator configuration is degenerate"
            % (report.check_name, report.skipped, report.trials))
    return report


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def _pairwise_check(name: str, cfg: GeneratorConfig, trials: int, settings: CountSettings,
                    transform: Callable[[FormulaGenerator], tuple[Callable[[Formula], Formula], dict]]
                    ) -> CheckReport:
    gen = FormulaGenerator(cfg, name)
    report = CheckReport(name, trials, seed=cfg.seed)
    for _ in range(trials):
        z, y = gen.formula(), gen.condition()
        fn, detail = transform(gen)
        u = gen.universe
        if not _satisfiable(y, u, settings):
            report.skipped += 1
            continue
        tz, ty = fn(z), fn(y)
        expected = conditional_probability(z, y, settings=settings)
        actual = conditional_probability(tz, ty, settings=settings)
        if expected != actual:
            inputs = {"z": render(z), "y": render(y), "z'": render(tz), "y'": render(ty)}
            inputs.update(detail)
            report.failures.append(Failure(
                inputs, format_rational(expected), format_rational(actual),
                [_eval_cmd(z, y), _eval_cmd(tz, ty)]))
    return _guard_skips(report)


def check_relabel_invariance(cfg: GeneratorConfig, trials: int = DEFAULT_TRIALS,
                             settings: CountSettings = DEFAULT_SETTINGS) -> CheckReport:
    def transform(gen):
        perm = gen.permutation()
        detail = {"permutation": ", ".join("%s->%s" % (a, b) for a, b in perm.items() if a != b)}
        return (lambda f: relabel(f, perm)), detail

    return _pairwise_check("relabel", cfg, trials, settings, transform)


def check_negation_swap(cfg: GeneratorConfig, trials: int = DEFAULT_TRIALS,
                        settings: CountSettings = DEFAULT_SETTINGS) -> CheckReport:
    def transform(gen):
        flip = gen.subset()
        return (lambda f: negation_swap(f, flip)), {"flip": ",".join(a.name for a in flip)}

    return _pairwise_check("swap", cfg, trials, settings, transform)


def check_tautology_stability(cfg: GeneratorConfig, trials: int = DEFAULT_TRIALS,
                              settings: CountSettings = DEFAULT_SETTINGS,
                              max_fresh: int = 5) -> CheckReport:
    """Conjoining ``C | ~C`` for fresh ``C`` onto the condition, or merely
    widening the universe with fresh atoms, leaves ``P(z|y)`` unchanged."""
    gen = FormulaGenerator(cfg, "taut")
    fresh = [atom("C%d" % i) for i in range(1, max_fresh + 1)]
    report = CheckReport("taut", trials, seed=cfg.seed)
    for _ in range(trials):
        z, y = gen.formula(), gen.condition()
        u = gen.universe
        if not _satisfiable(y, u, settings):
            report.skipped += 1
            continue
        expected = conditional_probability(z, y, u, settings)
        k = gen.rng.randint(1, max_fresh)
        added = fresh[:k]
        wide = u.extend(*added)
        taut = And((y,) + tuple(Or((Var(c), Not(Var(c)))) for c in added))
        cases = [(y, wide), (taut, wide)]
        for cond, universe in cases:
            actual = conditional_probability(z, cond, universe, settings)
            if actual != expected:
                report.failures.append(Failure(
                    {"z": render(z), "y": render(y), "condition": render(cond),
                     "universe": ",".join(universe.names())},
                    format_rational(expected), format_rational(actual),
                    [_eval_cmd(z, y, u), _eval_cmd(z, cond, universe)]))
    return _guard_skips(report)


def check_rules(cfg: GeneratorConfig, trials: int = DEFAULT_TRIALS,
                settings: CountSettings = DEFAULT_SETTINGS) -> CheckReport:
    """Product, sum and generalised sum rules on random triples ``(a, b, c)``.

    A trial is skipped when ``c`` or ``a & c`` is contradictory. The second
    ordering of the product rule is checked only when ``b & c`` has models.
    """
    gen = FormulaGenerator(cfg, "rules")
    report = CheckReport("rules", trials, seed=cfg.seed)
    u = gen.universe

    def p(z, y):
        return conditional_probability(z, y, u, settings)

    for _ in range(trials):
        a, b, c = gen.formula(), gen.formula(), gen.condition()
        if not _satisfiable(c, u, settings) or not _satisfiable(And((a, c)), u, settings):
            report.skipped += 1
            continue
        ab = And((a, b))
        checks = [
            ("product", p(ab, c), p(a, c) * p(b, And((a, c)))),
            ("sum", Fraction(1), p(a, c) + p(Not(a), c)),
            ("generalised sum", p(Or((a, b)), c), p(a, c) + p(b, c) - p(ab, c)),
        ]
        if _satisfiable(And((b, c)), u, settings):
            checks.append(("product (reversed)", p(ab, c), p(b, c) * p(a, And((b, c)))))
        for rule, lhs, rhs in checks:
            if lhs != rhs:
                report.failures.append(Failure(
                    {"rule": rule, "a": render(a), "b": render(b), "c": render(c)},
                    format_rational(lhs), format_rational(rhs),
                    [_eval_cmd(ab, c), _eval_cmd(a, c), _eval_cmd(b, c)]))
    return _guard_skips(report)


def check_exclusivity_parametrisation(max_n: int = 8,
                                      settings: CountSettings = DEFAULT_SETTINGS) -> CheckReport:
    """``P(Ai & Aj | I_n) = P(Ai | I_n) * [i == j]`` and ``P(A1 | ... | An | I_n) = 1``."""
    report = CheckReport("exclusivity", 0)
    for n in range(1, max_n + 1):
        xs = indexed_atoms(n)
        u = Universe(xs)
        space = exactly_one(xs)
        cases = []
        for i in xs:
            pi = conditional_probability(Var(i), space, u, settings)
            for j in xs:
                z = And((Var(i), Var(j)))
                cases.append((z, pi if i == j else Fraction(0)))
        cases.append((disj(Var(a) for a in xs), Fraction(1)))
        for z, expected in cases:
            report.trials += 1
            actual = conditional_probability(z, space, u, settings)
            if actual != expected:
                report.failures.append(Failure(
                    {"n": str(n), "z": render(z), "y": render(space)},
                    format_rational(expected), format_rational(actual),
                    [_eval_cmd(z, space, u)]))
    return report


def check_route_identity(cfg: GeneratorConfig, trials: int = DEFAULT_TRIALS,
                         settings: CountSettings = DEFAULT_SETTINGS) -> CheckReport:
    """Generic DNF-count formula against the plain model-count ratio."""
    gen = FormulaGenerator(cfg, "route")
    report = CheckReport("route", trials, seed=cfg.seed)
    for _ in range(trials):
        z, y = gen.formula(), gen.condition()
        if not _satisfiable(y, gen.universe, settings):
            report.skipped += 1
            continue
        expected = conditional_probability(z, y, settings=settings)
        actual = generic_formula_probability(z, y, settings=settings)
        if expected != actual:
            report.failures.append(Failure(
                {"z": render(z), "y": render(y)},
                format_rational(expected), format_rational(actual),
                [_eval_cmd(z, y)]))
    return _guard_skips(report)


def check_backend_equivalence(cfg: GeneratorConfig, trials: int = DEFAULT_TRIALS,
                              settings: CountSettings = DEFAULT_SETTINGS,
                              max_bdd_n: int = 16, max_enum_n: int = 12) -> CheckReport:
    """Enumeration and decision-diagram counts on random formulas over the
    generator's full universe, plus every assumption constructor."""
    gen = FormulaGenerator(cfg, "backends")
    report = CheckReport("backends", 0, seed=cfg.seed)

    def compare(f, u, expected=None, with_enum=True):
        report.trials += 1
        counts = {"bdd": semantics.model_count_bdd(f, u, settings.node_cap)}
        if with_enum:
            counts["enum"] = semantics.model_count_enum(f, u, settings.max_enum_atoms)
        if expected is not None:
            counts["closed_form"] = expected
        if len(set(counts.values())) > 1:
            reference = counts.get("enum", expected)
            report.failures.append(Failure(
                {"f": render(f), "universe": ",".join(u.names())},
                str(reference), ", ".join("%s=%d" % kv for kv in counts.items()),
                [_count_cmd(f, u, "enum"), _count_cmd(f, u, "bdd")]))

    for _ in range(trials):
        compare(gen.formula(), gen.universe)
    for n in range(1, max_bdd_n + 1):
        xs = indexed_atoms(n)
        for kind in ("exactly_one", "at_most_one", "at_least_one",
                     "tautology_product", "union_of_spaces"):
            spec = AssumptionSpec(kind, xs)
            compare(spec.formula(), Universe(xs), spec.expected_count(), n <= max_enum_n)
    return report


_CHECKS = {
    "relabel": check_relabel_invariance,
    "swap": check_negation_swap,
    "taut": check_tautology_stability,
    "rules": check_rules,
    "route": check_route_identity,
    "backends": check_backend_equivalence,
}


def run_suite(cfg: Optional[GeneratorConfig] = None, trials: int = DEFAULT_TRIALS,
              suites=("all",), settings: CountSettings = DEFAULT_SETTINGS,
              exclusivity_max_n: int = 8) -> list[CheckReport]:
    cfg = cfg or GeneratorConfig()
    names = SUITES if "all" in suites else tuple(suites)
    reports = []
    for name in names:
        if name == "exclusivity":
            reports.append(check_exclusivity_parametrisation(exclusivity_max_n, settings))
        elif name in _CHECKS:
            reports.append(_CHECKS[name](cfg, trials, settings))
        else:
            raise ValueError("unknown suite %r" % name)
    return reports
