import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genprior.assumptions import at_least_one, exactly_one, union_of_spaces
from genprior.bdd import BDD
from genprior.errors import (
    AtomOutsideUniverse, IncompleteAssignment, NodeLimitExceeded, UniverseTooLarge,
)
from genprior.formula import (
    FALSE, TRUE, And, Not, Or, Universe, Var, atom, atoms, atoms_of, cofactor,
    indexed_atoms, negation_swap, parse, relabel,
)
from genprior.semantics import (
    Assignment, CountSettings, dnf_summary, equivalent, evaluate, minterms,
    model_count, model_count_bdd, model_count_enum, render_term, support,
)

from conftest import ATOMS, brute_count, formulas, permutations

ENUM = CountSettings(backend="enum")
BDD_ONLY = CountSettings(backend="bdd")


def U(text):
    return Universe.parse(text)


def test_evaluate_examples():
    a1, a2, a3 = atoms("A1", "A2", "A3")
    assert evaluate(parse("A1 & ~A2"), {a1: True, a2: False}) is True
    assert evaluate(FALSE, {}) is False
    assert evaluate(parse("EXONE(A1,A2,A3)"), {a1: True, a2: False, a3: False}) is True
    assert evaluate(parse("EXONE(A1,A2,A3)"), {a1: True, a2: True, a3: False}) is False


def test_evaluate_incomplete():
    with pytest.raises(IncompleteAssignment):
        evaluate(parse("A1 & A2"), {atom("A1"): True})


def test_assignment_mapping():
    u = U("A1,A2,A3")
    a = Assignment(u, 0b101)
    assert dict(a) == {atom("A1"): True, atom("A2"): False, atom("A3"): True}
    assert Assignment.from_mapping(u, dict(a)).bits == 0b101
    with pytest.raises(IncompleteAssignment):
        Assignment.from_mapping(u, {atom("A1"): True})


@pytest.mark.parametrize("text, universe, expected", [
    ("A1", "A1", 1),
    ("A1 | A2", "A1,A2", 3),
    ("EXONE(A1,A2,A3)", "A1,A2,A3", 3),
    ("T", "A1,A2", 4),
    ("ATLEASTONE(A1,A2,A3,A4)", "A1,A2,A3,A4", 15),
    ("A1 & ~A1", "A1", 0),
    ("F", "", 0),
    ("T", "", 1),
])
def test_counts_both_backends(text, universe, expected):
    f, u = parse(text), U(universe)
    assert brute_count(f, u) == expected
    assert model_count_enum(f, u) == expected
    assert model_count_bdd(f, u) == expected


def test_enumeration_cap():
    u = Universe(indexed_atoms(5))
    with pytest.raises(UniverseTooLarge):
        model_count_enum(Var(u[0]), u, max_atoms=4)


def test_atom_outside_universe():
    with pytest.raises(AtomOutsideUniverse):
        model_count_enum(parse("A1 & B"), U("A1"))
    with pytest.raises(AtomOutsideUniverse):
        model_count_bdd(parse("A1 & B"), U("A1"))


def test_node_cap():
    xs = indexed_atoms(10)
    with pytest.raises(NodeLimitExceeded):
        model_count_bdd(exactly_one(xs), Universe(xs), node_cap=8)


def test_large_universe_counts_on_bdd():
    xs = indexed_atoms(40)
    u = Universe(xs)
    assert model_count(exactly_one(xs), u) == 40
    assert model_count(at_least_one(xs), u) == 2**40 - 1
    assert model_count(Var(xs[0]), u) == 2**39


@settings(max_examples=200)
@given(formulas())
def test_backends_agree_with_brute_force(f):
    u = Universe(ATOMS)
    expected = brute_count(f, u)
    assert model_count_enum(f, u) == expected
    assert model_count_bdd(f, u) == expected


@given(formulas())
def test_complementation(f):
    u = Universe(ATOMS)
    for s in (ENUM, BDD_ONLY):
        assert model_count(f, u, s) + model_count(Not(f), u, s) == 2 ** len(u)


@given(formulas())
def test_fresh_atom_doubles_count(f):
    u = Universe(ATOMS)
    wide = u.extend(atom("Fresh"))
    for s in (ENUM, BDD_ONLY):
        assert model_count(f, wide, s) == 2 * model_count(f, u, s)


@given(formulas(), permutations())
def test_relabel_invariance_of_counts(f, p):
    u = Universe(ATOMS)
    assert model_count(relabel(f, p), u.relabel(p)) == model_count(f, u)


@given(formulas(), st.sets(st.sampled_from(ATOMS)))
def test_negation_swap_invariance_of_counts(f, flip):
    u = Universe(ATOMS)
    assert model_count(negation_swap(f, flip), u) == model_count(f, u)


def test_equivalent_examples():
    assert equivalent(parse("A"), parse("~~A"))
    assert equivalent(parse("A1 & A2"), parse("A2 & A1"))
    xs = atoms("A1", "A2", "A3")
    assert equivalent(union_of_spaces(xs), parse("ATLEASTONE(A1,A2,A3)"))
    assert not equivalent(parse("A1"), parse("A2"))
    for s in (ENUM, BDD_ONLY):
        assert equivalent(parse("A -> B"), parse("~A | B"), settings=s)
        assert not equivalent(parse("A -> B"), parse("B -> A"), settings=s)


def _literal_support(f, u):
    # definition: atoms whose cofactors differ, decided by brute force
    return {a for a in atoms_of(f)
            if brute_count(_xor(cofactor(f, a, True), cofactor(f, a, False)), u) > 0}


def _xor(f, g):
    return Or((And((f, Not(g))), And((Not(f), g))))


@pytest.mark.parametrize("text, expected", [
    ("A1 & (A2 | ~A2)", {"A1"}),
    ("T", set()),
    ("A1 & ATLEASTONE(A1,A2,A3)", {"A1"}),
    ("A1 <-> A2", {"A1", "A2"}),
    ("(A1 -> A2) & (A2 -> A1) & A3 | A3 & ~A3", {"A1", "A2", "A3"}),
])
def test_support_examples(text, expected):
    f = parse(text)
    for s in (ENUM, BDD_ONLY):
        assert {a.name for a in support(f, settings=s)} == expected


@settings(max_examples=150)
@given(formulas())
def test_support_matches_cofactor_definition(f):
    u = Universe(ATOMS)
    expected = _literal_support(f, u)
    assert support(f, u, ENUM) == expected
    assert support(f, u, BDD_ONLY) == expected


def test_dnf_summary_examples():
    s = dnf_summary(parse("EXONE(A1,A2,A3)"))
    assert (s.term_count, s.atom_count) == (3, 3)
    assert [render_term(t) for t in s.terms] == [
        "A1 & ~A2 & ~A3", "~A1 & A2 & ~A3", "~A1 & ~A2 & A3"]
    assert s.render() == "A1 & ~A2 & ~A3 | ~A1 & A2 & ~A3 | ~A1 & ~A2 & A3"

    t = dnf_summary(TRUE)
    assert (t.term_count, t.atom_count, t.terms) == (1, 0, ((),))
    assert render_term(t.terms[0]) == "T"

    x = dnf_summary(parse("ATLEASTONE(A1,A2,A3)"))
    assert (x.term_count, x.atom_count) == (7, 3)

    m = dnf_summary(parse("ATMOSTONE(A1,A2,A3)"))
    assert (m.term_count, m.atom_count) == (4, 3)

    f = dnf_summary(FALSE)
    assert (f.term_count, f.atom_count, f.render()) == (0, 0, "F")


def test_dnf_terms_not_materialized_beyond_cap():
    xs = indexed_atoms(6)
    s = dnf_summary(exactly_one(xs), settings=CountSettings(explicit_dnf_cap=5))
    assert s.terms is None
    assert s.term_count == 6


@given(formulas())
def test_dnf_consistency(f):
    u = Universe(ATOMS)
    s = dnf_summary(f, u)
    assert s.term_count * 2 ** (len(u) - s.atom_count) == model_count(f, u)
    assert len(s.terms) == s.term_count
    assert all(len(t) == s.atom_count for t in s.terms)
    assert 0 <= s.term_count <= 2 ** s.atom_count


def test_minterms_sorted_by_assignment_value():
    u = U("A1,A2")
    terms = list(minterms(parse("A1 | A2"), u))
    assert [render_term(t) for t in terms] == ["A1 & ~A2", "~A1 & A2", "A1 & A2"]


def test_auto_backend_selection():
    s = CountSettings()
    assert s.resolve(Universe(indexed_atoms(20))) == "enum"
    assert s.resolve(Universe(indexed_atoms(21))) == "bdd"
    with pytest.raises(ValueError):
        CountSettings(backend="sat")


class TestBDD:
    def test_canonical_handles(self):
        u = U("A,B,C")
        store = BDD(u)
        f = store.build(parse("(A -> B) & (B -> C)"))
        g = store.build(parse("~A & ~B | B & C"))
        assert store.build(parse("(A -> B) & (B -> C)")) == f
        assert f != g or equivalent(parse("(A -> B) & (B -> C)"), parse("~A & ~B | B & C"))
        assert store.build(parse("A | ~A")) == 1
        assert store.build(parse("A & ~A")) == 0

    def test_reduced(self):
        u = U("A,B")
        store = BDD(u)
        r = store.build(parse("A & B | ~A & B"))
        assert r == store.build(parse("B"))
        assert store.node_count(r) == 3

    def test_no_duplicate_nodes(self):
        u = Universe(indexed_atoms(6))
        store = BDD(u)
        store.build(union_of_spaces(u.atoms))
        store.build(exactly_one(u.atoms))
        keys = [(store.level(i), store.low(i), store.high(i)) for i in range(2, len(store))]
        assert len(keys) == len(set(keys))
        assert all(lo != hi for _, lo, hi in keys)
        # children always sit strictly below their parent
        assert all(store.level(lo) > lvl and store.level(hi) > lvl for lvl, lo, hi in keys)

    def test_count_skips_levels(self):
        u = U("A,B,C,D")
        store = BDD(u)
        assert store.count(store.build(parse("B"))) == 8
        assert store.count(store.build(parse("A & D"))) == 4
        assert store.count(store.build(TRUE)) == 16

    def test_support_levels(self):
        u = U("A,B,C")
        store = BDD(u)
        assert store.support(store.build(parse("A & (B | ~B) & C"))) == {0, 2}
