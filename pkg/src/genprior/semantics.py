"""Exact semantics over a finite universe.

Two counting backends are provided and are meant to check each other:

* enumeration, which evaluates a formula on every assignment at once by
  packing the whole truth table into one Python integer (bit ``k`` is the
  value under assignment ``k``, where atom ``i`` is true iff bit ``i`` of
  ``k`` is set);
* reduced ordered decision diagrams (:mod:`genprior.bdd`).
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, replace
from typing import Iterator, Optional

from .bdd import BDD, DEFAULT_NODE_CAP
from .errors import AtomOutsideUniverse, IncompleteAssignment, UniverseTooLarge
from .formula import (
    And, Atom, Const, Formula, Iff, Implies, Not, Or, Universe, Var,
    atoms_of, cofactor, natural_key,
)

DEFAULT_MAX_ENUM_ATOMS = 24
DEFAULT_AUTO_ENUM_THRESHOLD = 20
DEFAULT_EXPLICIT_DNF_CAP = 16

BACKENDS = ("auto", "enum", "bdd")


@dataclass(frozen=True)
class CountSettings:
    backend: str = "auto"
    max_enum_atoms: int = DEFAULT_MAX_ENUM_ATOMS
    node_cap: int = DEFAULT_NODE_CAP
    auto_enum_threshold: int = DEFAULT_AUTO_ENUM_THRESHOLD
    explicit_dnf_cap: int = DEFAULT_EXPLICIT_DNF_CAP

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError("unknown backend %r" % self.backend)

    def resolve(self, u: Universe) -> str:
        """Concrete backend name used for universe ``u``."""
        if self.backend != "auto":
            return self.backend
        limit = min(self.auto_enum_threshold, self.max_enum_atoms)
        return "enum" if len(u) <= limit else "bdd"

    def with_backend(self, backend: str) -> "CountSettings":
        return replace(self, backend=backend)


DEFAULT_SETTINGS = CountSettings()


class Assignment(Mapping):
    """A total assignment over a universe, packed as an integer bit-vector."""

    __slots__ = ("universe", "bits")

    def __init__(self, universe: Universe, bits: int):
        self.universe = universe
        self.bits = bits

    @classmethod
    def from_mapping(cls, universe: Universe, values: Mapping[Atom, bool]) -> "Assignment":
        bits = 0
        for i, a in enumerate(universe):
            if a not in values:
                raise IncompleteAssignment("no value for atom %s" % a)
            if values[a]:
                bits |= 1 << i
        return cls(universe, bits)

    def __getitem__(self, a: Atom) -> bool:
        try:
            i = self.universe.index(a)
        except KeyError:
            raise KeyError(a) from None
        return bool(self.bits >> i & 1)

    def __iter__(self):
        return iter(self.universe)

    def __len__(self):
        return len(self.universe)

    def __repr__(self):
        return "Assignment(%s)" % ", ".join(
            "%s=%d" % (a.name, self[a]) for a in self.universe)


def all_assignments(u: Universe) -> Iterator[Assignment]:
    for bits in range(1 << len(u)):
        yield Assignment(u, bits)


def evaluate(f: Formula, a: Mapping[Atom, bool]) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        try:
            return bool(a[f.atom])
        except KeyError:
            raise IncompleteAssignment("no value for atom %s" % f.atom) from None
    if isinstance(f, Not):
        return not evaluate(f.child, a)
    if isinstance(f, And):
        return all(evaluate(c, a) for c in f.children)
    if isinstance(f, Or):
        return any(evaluate(c, a) for c in f.children)
    if isinstance(f, Implies):
        return (not evaluate(f.lhs, a)) or evaluate(f.rhs, a)
    if isinstance(f, Iff):
        return evaluate(f.lhs, a) == evaluate(f.rhs, a)
    raise TypeError("not a formula: %r" % (f,))


def check_covers(u: Universe, *formulas: Formula) -> None:
    for f in formulas:
        missing = atoms_of(f) - set(u)
        if missing:
            names = ", ".join(a.name for a in sorted(missing, key=natural_key))
            raise AtomOutsideUniverse("atoms not in universe: %s" % names)


def default_universe(*formulas: Formula, u: Optional[Universe] = None) -> Universe:
    if u is None:
        return Universe.of(*formulas)
    check_covers(u, *formulas)
    return u


# ---------------------------------------------------------------------------
# Enumeration backend
# ---------------------------------------------------------------------------


class TruthTables:
    """Bit-parallel truth tables over a fixed universe."""

    def __init__(self, u: Universe, max_atoms: int = DEFAULT_MAX_ENUM_ATOMS):
        if len(u) > max_atoms:
            raise UniverseTooLarge(
                "enumeration over %d atoms exceeds the cap of %d" % (len(u), max_atoms))
        self.universe = u
        self.size = 1 << len(u)
        self.mask = (1 << self.size) - 1
        self._columns: dict[int, int] = {}

    def column(self, i: int) -> int:
        """Table of the atom at index ``i``."""
        t = self._columns.get(i)
        if t is None:
            block = 1 << i
            period = block << 1
            unit = ((1 << block) - 1) << block
            t = self.mask // ((1 << period) - 1) * unit
            self._columns[i] = t
        return t

    def table(self, f: Formula) -> int:
        if isinstance(f, Const):
            return self.mask if f.value else 0
        if isinstance(f, Var):
            try:
                return self.column(self.universe.index(f.atom))
            except KeyError:
                raise AtomOutsideUniverse("atom %s is not in the universe" % f.atom) from None
        if isinstance(f, Not):
            return self.mask ^ self.table(f.child)
        if isinstance(f, And):
            t = self.mask
            for c in f.children:
                t &= self.table(c)
            return t
        if isinstance(f, Or):
            t = 0
            for c in f.children:
                t |= self.table(c)
            return t
        if isinstance(f, Implies):
            return (self.mask ^ self.table(f.lhs)) | self.table(f.rhs)
        if isinstance(f, Iff):
            return self.mask ^ (self.table(f.lhs) ^ self.table(f.rhs))
        raise TypeError("not a formula: %r" % (f,))

    def depends_on(self, t: int, i: int) -> bool:
        block = 1 << i
        low_half = self.mask ^ self.column(i)
        return bool(((t >> block) ^ t) & low_half)


def model_count_enum(f: Formula, u: Universe, max_atoms: int = DEFAULT_MAX_ENUM_ATOMS) -> int:
    check_covers(u, f)
    return TruthTables(u, max_atoms).table(f).bit_count()


# ---------------------------------------------------------------------------
# Decision-diagram backend
# ---------------------------------------------------------------------------


def model_count_bdd(f: Formula, u: Universe, node_cap: int = DEFAULT_NODE_CAP) -> int:
    check_covers(u, f)
    store = BDD(u, node_cap)
    return store.count(store.build(f))


def model_count(f: Formula, u: Universe, settings: CountSettings = DEFAULT_SETTINGS) -> int:
    """Count models of ``f`` over ``u`` with the backend ``settings`` selects."""
    if settings.resolve(u) == "enum":
        return model_count_enum(f, u, settings.max_enum_atoms)
    return model_count_bdd(f, u, settings.node_cap)


def equivalent(f: Formula, g: Formula, u: Optional[Universe] = None,
               settings: CountSettings = DEFAULT_SETTINGS) -> bool:
    u = default_universe(f, g, u=u)
    if settings.resolve(u) == "enum":
        tt = TruthTables(u, settings.max_enum_atoms)
        return tt.table(f) == tt.table(g)
    store = BDD(u, settings.node_cap)
    return store.build(f) == store.build(g)


def support(f: Formula, u: Optional[Universe] = None,
            settings: CountSettings = DEFAULT_SETTINGS) -> frozenset[Atom]:
    """Atoms whose two cofactors of ``f`` are inequivalent."""
    u = default_universe(f, u=u)
    # only mentioned atoms can matter; restricting keeps the tables small
    mentioned = atoms_of(f)
    local = Universe(tuple(a for a in u if a in mentioned))
    if settings.resolve(local) == "enum":
        tt = TruthTables(local, settings.max_enum_atoms)
        t = tt.table(f)
        return frozenset(a for i, a in enumerate(local) if tt.depends_on(t, i))
    store = BDD(local, settings.node_cap)
    return frozenset(local[i] for i in store.support(store.build(f)))


# ---------------------------------------------------------------------------
# Canonical disjunctive normal form
# ---------------------------------------------------------------------------

Term = tuple[tuple[Atom, bool], ...]


@dataclass(frozen=True)
class DnfSummary:
    """Canonical minterm DNF of a formula over its support.

    ``term_count`` and ``atom_count`` are the quantities written M (or N)
    and m (or n) in the generic-probability formula.
    """

    term_count: int
    atom_count: int
    support: tuple[Atom, ...]
    terms: Optional[tuple[Term, ...]] = None

    def render(self) -> str:
        if self.terms is None:
            return "<%d terms over %d atoms, not materialized>" % (self.term_count, self.atom_count)
        if not self.terms:
            return "F"
        return " | ".join(render_term(t) for t in self.terms)


def render_term(term: Term) -> str:
    if not term:
        return "T"
    return " & ".join(a.name if v else "~" + a.name for a, v in term)


def reduce_to_support(f: Formula, u: Optional[Universe] = None,
                      settings: CountSettings = DEFAULT_SETTINGS) -> tuple[Formula, Universe]:
    """``f`` with inessential atoms fixed, plus its support as a universe.

    Fixing an inessential atom to either value leaves the function unchanged,
    so the returned formula is equivalent to ``f`` and mentions only support
    atoms.
    """
    u = default_universe(f, u=u)
    sup = support(f, u, settings)
    reduced = f
    for a in sorted(atoms_of(f) - sup, key=natural_key):
        reduced = cofactor(reduced, a, False)
    return reduced, Universe(tuple(a for a in u if a in sup))


def dnf_summary(f: Formula, u: Optional[Universe] = None,
                settings: CountSettings = DEFAULT_SETTINGS) -> DnfSummary:
    reduced, sup = reduce_to_support(f, u, settings)
    count = model_count(reduced, sup, settings)
    terms = None
    if len(sup) <= settings.explicit_dnf_cap:
        terms = tuple(minterms(reduced, sup))
    return DnfSummary(count, len(sup), sup.atoms, terms)


def minterms(f: Formula, u: Universe) -> Iterator[Term]:
    """Satisfying assignments of ``f`` over ``u`` as terms, in ascending order."""
    t = TruthTables(u, len(u)).table(f)
    for k, bit in enumerate(reversed(bin(t)[2:])):
        if bit == "1":
            yield tuple((a, bool(k >> i & 1)) for i, a in enumerate(u))
