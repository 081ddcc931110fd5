"""Exact probabilities of propositional formulas by model counting.

Given only tautologies every atom has probability one half and distinct
atoms are independent, so ``P(Z | Y)`` is a ratio of model counts.
"""

from .assumptions import (
    AssumptionSpec, at_least_one, at_most_one, exactly_one, indifference_table,
    marble_sequence, tautology_product, union_of_spaces,
)
from .errors import (
    AtomCollision, AtomOutsideUniverse, ConditionOnContradiction, DuplicateAtoms,
    GenpriorError, IncompleteAssignment, InvalidPermutation, NodeLimitExceeded,
    ParseError, ReservedNameError, ResourceLimitError, UniverseTooLarge,
)
from .formula import (
    FALSE, TRUE, And, Atom, Const, Formula, Iff, Implies, Not, Or, Universe, Var,
    atom, atoms, atoms_of, cofactor, indexed_atoms, negation_swap, parse, relabel,
    render,
)
from .prior import (
    conditional_probability, fresh_atom_conditional, generic_formula_probability,
    mixture_decomposition, prior_probability, simplicity_score,
)
from .semantics import (
    Assignment, CountSettings, DnfSummary, dnf_summary, equivalent, evaluate,
    model_count, model_count_bdd, model_count_enum, support,
)

__version__ = "0.1.0"
