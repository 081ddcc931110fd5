"""Exact probabilities under the uniform base measure.

Every atom has probability one half given only tautologies, and distinct
atoms are independent, so ``P(Z | Y)`` is the ratio of model counts of
``Z & Y`` and ``Y`` over any universe that covers both formulas.
"""

from __future__ import annotations

from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import AtomCollision, ConditionOnContradiction
from .formula import (
    TRUE, And, Atom, Formula, Universe, Var, atoms_of, conj, literal, natural_key,
    render,
)
from .semantics import (
    DEFAULT_SETTINGS, CountSettings, default_universe, dnf_summary, model_count,
    support,
)

Probability = Fraction

_DECIMAL_CONTEXT = Context(prec=17, rounding=ROUND_HALF_EVEN)


def format_rational(p: Fraction) -> str:
    """``p/q`` form, used for every serialized probability."""
    return "%d/%d" % (p.numerator, p.denominator)


def format_decimal(p: Fraction) -> str:
    """Display-only rendering to 17 significant digits."""
    d = _DECIMAL_CONTEXT.divide(Decimal(p.numerator), Decimal(p.denominator))
    return str(d)


def prior_probability(z: Formula, u: Optional[Universe] = None,
                      settings: CountSettings = DEFAULT_SETTINGS) -> Fraction:
    u = default_universe(z, u=u)
    return Fraction(model_count(z, u, settings), 1 << len(u))


def conditional_probability(z: Formula, y: Formula, u: Optional[Universe] = None,
                            settings: CountSettings = DEFAULT_SETTINGS) -> Fraction:
    u = default_universe(z, y, u=u)
    n = model_count(y, u, settings)
    if n == 0:
        raise ConditionOnContradiction("condition %s has no models" % render(y))
    return Fraction(model_count(And((z, y)), u, settings), n)


def generic_formula_probability(z: Formula, y: Formula, u: Optional[Universe] = None,
                                settings: CountSettings = DEFAULT_SETTINGS) -> Fraction:
    """``(M / N) * 2**(n - m)`` from the canonical DNFs of ``Z & Y`` and ``Y``.

    M, m are the term and atom counts of ``Z & Y`` over its own support and
    N, n those of ``Y``. Equal to :func:`conditional_probability` whenever the
    latter is defined.
    """
    u = default_universe(z, y, u=u)
    joint = dnf_summary(And((z, y)), u, settings)
    cond = dnf_summary(y, u, settings)
    if cond.term_count == 0:
        raise ConditionOnContradiction("condition %s has no models" % render(y))
    return Fraction(joint.term_count, cond.term_count) * Fraction(2) ** (
        cond.atom_count - joint.atom_count)


def simplicity_score(z: Formula, u: Optional[Universe] = None,
                     settings: CountSettings = DEFAULT_SETTINGS) -> int:
    """Size of the support of ``z``.

    With M the number of canonical DNF terms, ``P(z|) = M * 2**-score``.
    """
    return len(support(z, u, settings))


class Mixture(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    extra: Fraction


def mixture_decomposition(b: Formula, alts: Sequence[Formula], x: Formula,
                          u: Optional[Universe] = None,
                          settings: CountSettings = DEFAULT_SETTINGS) -> Mixture:
    """Compare ``P(b|x)`` with ``sum_i P(alt_i|x) P(b|alt_i & x)``.

    ``extra`` is ``lhs - rhs``: zero when ``x`` makes the alternatives
    exclusive and exhaustive, negative when they overlap and positive when
    they fail to cover ``b``. Alternatives contradictory with ``x``
    contribute nothing.
    """
    u = default_universe(b, x, *alts, u=u)
    lhs = conditional_probability(b, x, u, settings)
    rhs = Fraction(0)
    for alt in alts:
        weight = conditional_probability(alt, x, u, settings)
        if weight == 0:
            continue
        rhs += weight * conditional_probability(b, And((alt, x)), u, settings)
    return Mixture(lhs, rhs, lhs - rhs)


def literal_conjunction(pos: Sequence[Atom], neg: Sequence[Atom]) -> Formula:
    return conj([literal(a) for a in pos] + [literal(a, False) for a in neg])


def fresh_atom_conditional(a: Atom, pos: Sequence[Atom], neg: Sequence[Atom],
                           u: Optional[Universe] = None,
                           settings: CountSettings = DEFAULT_SETTINGS) -> Fraction:
    """``P(a | pos_1 ... pos_j ~neg_1 ... ~neg_k)`` for ``a`` outside both lists."""
    if a in pos or a in neg:
        raise AtomCollision("atom %s occurs in its own condition" % a)
    if len(set(pos) | set(neg)) != len(pos) + len(neg):
        raise AtomCollision("condition atoms must be distinct")
    cond = literal_conjunction(pos, neg)
    return conditional_probability(Var(a), cond, u, settings)


def given_tautologies(z: Formula, settings: CountSettings = DEFAULT_SETTINGS) -> Fraction:
    """``P(z | Q_n)`` with ``Q_n`` the tautology product over the atoms of ``z``."""
    from .assumptions import tautology_product

    names = sorted(atoms_of(z), key=natural_key)
    cond = tautology_product(names) if names else TRUE
    return conditional_probability(z, cond, settings=settings)
