"""Named assumption formulas and their closed-form consequences.

``exactly_one`` is a possibility space (exclusive and exhaustive),
``at_most_one`` exclusivity alone, ``at_least_one`` exhaustivity alone, and
``tautology_product`` the conjunction of ``A | ~A`` that stands for
assuming nothing. ``union_of_spaces`` is the disjunction of possibility
spaces of every size up to ``n`` used for the marble-bag question.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DuplicateAtoms
from .formula import (
    And, Atom, Formula, Not, Or, Universe, Var, atom as _atom, conj, disj,
    indexed_atoms,
)
from .prior import conditional_probability
from .semantics import DEFAULT_SETTINGS, CountSettings

KINDS = ("exactly_one", "at_most_one", "at_least_one", "tautology_product", "union_of_spaces")


def _atoms(atoms) -> tuple[Atom, ...]:
    out = tuple(_atom(a) if isinstance(a, str) else a for a in atoms)
    if not out:
        raise ValueError("at least one atom is required")
    if len(set(out)) != len(out):
        raise DuplicateAtoms("duplicate atoms: %s" % ", ".join(a.name for a in out))
    return out


def at_most_one(atoms: Sequence[Atom]) -> Formula:
    """Pairwise exclusion. A single atom gives the tautology ``A | ~A``."""
    xs = _atoms(atoms)
    if len(xs) == 1:
        return Or((Var(xs[0]), Not(Var(xs[0]))))
    pairs = [Or((Not(Var(a)), Not(Var(b))))
             for i, a in enumerate(xs) for b in xs[i + 1:]]
    return conj(pairs)


def at_least_one(atoms: Sequence[Atom]) -> Formula:
    return disj(Var(a) for a in _atoms(atoms))


def exactly_one(atoms: Sequence[Atom]) -> Formula:
    xs = _atoms(atoms)
    return And((at_most_one(xs), at_least_one(xs)))


def tautology_product(atoms: Sequence[Atom]) -> Formula:
    return conj(Or((Var(a), Not(Var(a)))) for a in _atoms(atoms))


def union_of_spaces(atoms: Sequence[Atom]) -> Formula:
    """``I_1 | I_2 | ... | I_n`` where ``I_j`` is ``exactly_one`` of the first ``j`` atoms.

    Each ``I_j`` says nothing about atoms beyond the ``j``-th.
    """
    xs = _atoms(atoms)
    return disj(exactly_one(xs[:j]) for j in range(1, len(xs) + 1))


_BUILDERS = {
    "exactly_one": exactly_one,
    "at_most_one": at_most_one,
    "at_least_one": at_least_one,
    "tautology_product": tautology_product,
    "union_of_spaces": union_of_spaces,
}

MACRO_BUILDERS = {
    "EXONE": exactly_one,
    "ATMOSTONE": at_most_one,
    "ATLEASTONE": at_least_one,
    "TAUT": tautology_product,
}


@dataclass(frozen=True)
class AssumptionSpec:
    kind: str
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        if self.kind not in _BUILDERS:
            raise ValueError("unknown assumption kind %r" % self.kind)
        object.__setattr__(self, "atoms", _atoms(self.atoms))

    def formula(self) -> Formula:
        return _BUILDERS[self.kind](self.atoms)

    def expected_count(self) -> int:
        """Model count over exactly ``self.atoms``."""
        n = len(self.atoms)
        return {
            "exactly_one": n,
            "at_most_one": n + 1,
            "at_least_one": (1 << n) - 1,
            "tautology_product": 1 << n,
            "union_of_spaces": (1 << n) - 1,
        }[self.kind]


def exhaustive_closed_form(m: int) -> Fraction:
    """``P(A_i | at_least_one(A_1..A_m)) = 2**(m-1) / (2**m - 1)``."""
    return Fraction(1 << (m - 1), (1 << m) - 1)


def marble_sequence(max_n: int, settings: CountSettings = DEFAULT_SETTINGS) -> list[tuple[int, Fraction]]:
    """``P(A1 | union_of_spaces(A1..An))`` for ``n = 1 .. max_n``, by counting."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    rows = []
    for n in range(1, max_n + 1):
        xs = indexed_atoms(n)
        p = conditional_probability(Var(xs[0]), union_of_spaces(xs), Universe(xs), settings)
        rows.append((n, p))
    return rows


def indifference_table(max_n: int, settings: CountSettings = DEFAULT_SETTINGS) -> list[tuple[int, Fraction, Fraction]]:
    """Rows ``(n, P(A1 | exactly_one), P(A1 | at_least_one))`` over ``A1..An``."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    rows = []
    for n in range(1, max_n + 1):
        xs = indexed_atoms(n)
        u = Universe(xs)
        a1 = Var(xs[0])
        rows.append((n,
                     conditional_probability(a1, exactly_one(xs), u, settings),
                     conditional_probability(a1, at_least_one(xs), u, settings)))
    return rows
