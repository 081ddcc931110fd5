from fractions import Fraction
from itertools import product

import pytest
from hypothesis import strategies as st

from genprior.formula import (
    FALSE, TRUE, And, Iff, Implies, Not, Or, Universe, Var, indexed_atoms,
)
from genprior.semantics import evaluate

ATOMS = indexed_atoms(5)


def brute_count(f, u):
    """Model count by evaluating ``f`` on every assignment, one at a time."""
    return sum(evaluate(f, dict(zip(u, values)))
               for values in product((False, True), repeat=len(u)))


def brute_probability(z, y, u):
    models = [dict(zip(u, values)) for values in product((False, True), repeat=len(u))]
    models = [m for m in models if evaluate(y, m)]
    return Fraction(sum(evaluate(z, m) for m in models), len(models))


def formulas(atoms=ATOMS, max_leaves=12):
    leaves = st.one_of(
        st.sampled_from([Var(a) for a in atoms]),
        st.sampled_from([TRUE, FALSE]),
    )

    def extend(children):
        nary = st.lists(children, min_size=2, max_size=3).map(tuple)
        return st.one_of(
            children.map(Not),
            nary.map(And),
            nary.map(Or),
            st.tuples(children, children).map(lambda t: Implies(*t)),
            st.tuples(children, children).map(lambda t: Iff(*t)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def permutations(atoms=ATOMS):
    return st.permutations(list(atoms)).map(lambda p: dict(zip(atoms, p)))


@pytest.fixture
def universe5():
    return Universe(ATOMS)
