import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genprior.assumptions import exactly_one
from genprior.errors import InvalidPermutation, ParseError, ReservedNameError
from genprior.formula import (
    FALSE, TRUE, And, Iff, Implies, Not, Or, Universe, Var, atom, atoms, atoms_of,
    cofactor, compose, negation_swap, parse, relabel, render,
)
from genprior.semantics import equivalent

from conftest import ATOMS, formulas, permutations

A, B, C = (Var(a) for a in atoms("A", "B", "C"))
A1, A2, A3 = (Var(a) for a in atoms("A1", "A2", "A3"))


def test_interning_is_idempotent():
    assert atom("A1") is atom("A1")
    assert atom("A1").id == atom("A1").id
    assert atom("A1") != atom("A2")


@pytest.mark.parametrize("name", ["T", "F", "EXONE", "TAUT", "ATMOSTONE", "ATLEASTONE"])
def test_reserved_words_rejected_as_atoms(name):
    with pytest.raises(ReservedNameError):
        atom(name)
    with pytest.raises(NameError):
        parse("EXONE(A, %s)" % name)


def test_invalid_atom_name():
    with pytest.raises(ValueError):
        atom("1A")


@pytest.mark.parametrize("text, expected", [
    ("A1 & ~A2", And((A1, Not(A2)))),
    ("A -> B", Implies(A, B)),
    ("A + B", Or((A, B))),
    ("A | B", Or((A, B))),
    ("!A", Not(A)),
    ("~~A", Not(Not(A))),
    ("A & B & C", And((A, B, C))),
    ("(A & B) & C", And((And((A, B)), C))),
    ("A -> B -> C", Implies(A, Implies(B, C))),
    ("A <-> B <-> C", Iff(Iff(A, B), C)),
    ("A | B & C", Or((A, And((B, C))))),
    ("A & B -> C | A", Implies(And((A, B)), Or((C, A)))),
    ("T", TRUE),
    (" ( F ) ", FALSE),
])
def test_parse(text, expected):
    assert parse(text) == expected


def test_parse_macro_matches_displayed_exone():
    displayed = parse("A1 & ~A2 & ~A3 + ~A1 & A2 & ~A3 + ~A1 & ~A2 & A3")
    assert equivalent(parse("EXONE(A1,A2,A3)"), displayed)
    assert parse("EXONE(A1, A2, A3)") == exactly_one(atoms("A1", "A2", "A3"))


@pytest.mark.parametrize("text, pos", [("A &", 3), ("(A | B", 6), ("A B", 2), ("A $ B", 2),
                                       ("EXONE(A,)", 8), ("", 0)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos
    assert info.value.expected


def test_parse_uses_environment():
    env = {"X": parse("A | B")}
    assert parse("X & C", env) == And((Or((A, B)), C))


@pytest.mark.parametrize("f, text", [
    (And((A, Not(B))), "A & ~B"),
    (Or((A, B)), "A | B"),
    (Implies(And((A, B)), C), "A & B -> C"),
    (Not(And((A, B))), "~(A & B)"),
    (Implies(Implies(A, B), C), "(A -> B) -> C"),
    (Iff(A, Iff(B, C)), "A <-> (B <-> C)"),
    (Or((Or((A, B)), C)), "(A | B) | C"),
])
def test_render(f, text):
    assert render(f) == text


@settings(max_examples=300)
@given(formulas())
def test_render_round_trip(f):
    assert parse(render(f)) == f


def test_relabel_examples():
    swap = {atom("A1"): atom("A2"), atom("A2"): atom("A1")}
    assert relabel(parse("A1 & ~A2"), swap) == parse("A2 & ~A1")
    f = parse("A1 -> A2 | A3")
    assert relabel(f, {}) == f
    assert relabel(f, {a: a for a in ATOMS}) == f


def test_relabel_preserves_exone_semantics():
    xs = atoms("A1", "A2", "A3")
    f = exactly_one(xs)
    for perm in ({xs[0]: xs[1], xs[1]: xs[2], xs[2]: xs[0]}, {xs[0]: xs[2], xs[2]: xs[0]}):
        g = relabel(f, perm)
        assert g != f
        assert equivalent(g, f)


def test_relabel_rejects_non_bijection():
    with pytest.raises(InvalidPermutation):
        relabel(A1, {atom("A1"): atom("A2")})
    with pytest.raises(InvalidPermutation):
        relabel(A1, {atom("A1"): atom("A3"), atom("A2"): atom("A3"), atom("A3"): atom("A1")})


@given(formulas(), permutations(), permutations())
def test_relabel_composes(f, p, q):
    assert relabel(relabel(f, p), q) == relabel(f, compose(q, p))


@given(formulas(), permutations())
def test_relabel_maps_atoms(f, p):
    assert atoms_of(relabel(f, p)) == {p[a] for a in atoms_of(f)}


def test_negation_swap_examples():
    assert negation_swap(parse("A1 & ~A2"), [atom("A1")]) == parse("~A1 & ~A2")
    f = parse("A1 & ~A2")
    assert negation_swap(f, []) == f


@given(formulas(), permutations())
def test_negation_swap_is_semantic_involution(f, p):
    flip = [a for a in ATOMS if p[a].id % 2]
    twice = negation_swap(negation_swap(f, flip), flip)
    assert equivalent(twice, f, Universe(ATOMS))


def test_double_negation_equivalence():
    assert equivalent(A, Not(Not(A)))
    assert equivalent(parse("A1 & A2"), parse("A2 & A1"))


def test_atoms_of():
    assert atoms_of(parse("A1 & ~A2")) == {atom("A1"), atom("A2")}
    assert atoms_of(TRUE) == frozenset()
    assert atoms_of(parse("A1 | (A1 & A2)")) == {atom("A1"), atom("A2")}


def test_cofactor_examples():
    a1 = atom("A1")
    assert cofactor(parse("A1 & A2"), a1, True) == A2
    assert cofactor(parse("A1 & A2"), a1, False) == FALSE
    assert cofactor(parse("A1 | A2"), atom("A2"), False) == A1
    assert cofactor(parse("A1 -> A2"), a1, False) == TRUE
    assert cofactor(parse("A2 -> A1"), a1, False) == Not(A2)
    assert cofactor(parse("A1 <-> A2"), a1, False) == Not(A2)
    assert cofactor(parse("~A2 & A3"), a1, True) == parse("~A2 & A3")


@given(formulas(), st.booleans())
def test_cofactor_agrees_with_fixing_the_value(f, value):
    a = ATOMS[0]
    g = cofactor(f, a, value)
    assert a not in atoms_of(g)
    lit = Var(a) if value else Not(Var(a))
    assert equivalent(And((g, lit)), And((f, lit)), Universe(ATOMS))


def test_formula_operators():
    assert (A & B) == And((A, B))
    assert (A | B) == Or((A, B))
    assert ~A == Not(A)
    assert str(A & ~B) == "A & ~B"


def test_nary_nodes_need_two_children():
    with pytest.raises(ValueError):
        And((A,))
    with pytest.raises(ValueError):
        Or(())


def test_universe_basics():
    u = Universe.parse("A1, A2 A3")
    assert u.names() == ["A1", "A2", "A3"]
    assert Universe.of(parse("A10 & A2 | A1")).names() == ["A1", "A2", "A10"]
    assert u.extend(atom("A2"), atom("B")).names() == ["A1", "A2", "A3", "B"]
    with pytest.raises(ValueError):
        Universe((atom("A1"), atom("A1")))
