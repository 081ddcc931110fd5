"""Atoms, universes and the propositional formula AST.

Concrete syntax (whitespace-insensitive, loosest binding first)::

    formula := iff
    iff     := imp ("<->" imp)*            left-associative
    imp     := or ("->" imp)?              right-associative
    or      := and (("|" | "+") and)*
    and     := not ("&" not)*
    not     := ("~" | "!") not | primary
    primary := "T" | "F" | IDENT | macro | "(" formula ")"
    macro   := ("EXONE" | "ATMOSTONE" | "ATLEASTONE" | "TAUT") "(" IDENT ("," IDENT)* ")"

``+`` is accepted as disjunction on input; :func:`render` always writes ``|``.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import InvalidPermutation, ParseError, ReservedNameError

MACROS = ("EXONE", "ATMOSTONE", "ATLEASTONE", "TAUT")
RESERVED = frozenset(("T", "F") + MACROS)

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# ---------------------------------------------------------------------------
# Atoms and universes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """An interned proposition symbol. Equality and hashing use ``id`` only."""

    name: str = field(compare=False)
    id: int

    def __repr__(self):
        return "Atom(%s)" % self.name

    def __str__(self):
        return self.name


class _Interner:
    def __init__(self):
        self._lock = threading.Lock()
        self._by_name: dict[str, Atom] = {}

    def intern(self, name: str) -> Atom:
        atom = self._by_name.get(name)
        if atom is not None:
            return atom
        check_name(name)
        with self._lock:
            atom = self._by_name.get(name)
            if atom is None:
                atom = Atom(name, len(self._by_name))
                self._by_name[name] = atom
            return atom


_interner = _Interner()


def check_name(name: str) -> None:
    if not isinstance(name, str) or not _IDENT_RE.match(name):
        raise ValueError("invalid atom name %r" % (name,))
    if name in RESERVED:
        raise ReservedNameError("%r is a reserved word and cannot name an atom" % name)


def atom(name: str) -> Atom:
    """Return the unique atom called ``name``, creating it on first use."""
    return _interner.intern(name)


def atoms(*names: str) -> tuple[Atom, ...]:
    if len(names) == 1 and not _IDENT_RE.match(names[0]):
        names = tuple(n.strip() for n in names[0].replace(",", " ").split())
    return tuple(atom(n) for n in names)


def indexed_atoms(n: int, prefix: str = "A") -> tuple[Atom, ...]:
    """``A1 .. An``."""
    return tuple(atom("%s%d" % (prefix, i)) for i in range(1, n + 1))


def natural_key(a: Atom):
    parts = re.split(r"(\d+)", a.name)
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts if p)


@dataclass(frozen=True)
class Universe:
    """An ordered finite set of distinct atoms.

    Position in ``atoms`` is the bit index used by assignments and the
    variable level used by decision diagrams.
    """

    atoms: tuple[Atom, ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("universe contains duplicate atoms")

    @classmethod
    def of(cls, *formulas: "Formula") -> "Universe":
        """Union of the atoms of ``formulas`` in natural name order."""
        found: set[Atom] = set()
        for f in formulas:
            found |= atoms_of(f)
        return cls(tuple(sorted(found, key=natural_key)))

    @classmethod
    def parse(cls, text: str) -> "Universe":
        names = [n for n in re.split(r"[\s,]+", text.strip()) if n]
        return cls(tuple(atom(n) for n in names))

    def __len__(self):
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __contains__(self, a):
        return a in self._index

    def __getitem__(self, i):
        return self.atoms[i]

    @property
    def _index(self) -> dict[Atom, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {a: i for i, a in enumerate(self.atoms)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, a: Atom) -> int:
        return self._index[a]

    def extend(self, *extra: Atom) -> "Universe":
        return Universe(self.atoms + tuple(a for a in extra if a not in self))

    def relabel(self, perm: Mapping[Atom, Atom]) -> "Universe":
        return Universe(tuple(perm.get(a, a) for a in self.atoms))

    def names(self) -> list[str]:
        return [a.name for a in self.atoms]


# ---------------------------------------------------------------------------
# Formula AST
# ---------------------------------------------------------------------------


class Formula:
    """Base class of AST nodes. Nodes are immutable and compare structurally."""

    __slots__ = ()

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self):
        return "T" if self.value else "F"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, repr=False)
class Var(Formula):
    atom: Atom

    def __repr__(self):
        return "Var(%s)" % self.atom.name


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


def conj(parts: Iterable[Formula]) -> Formula:
    """Conjunction of any number of formulas; ``T`` when empty."""
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    """Disjunction of any number of formulas; ``F`` when empty."""
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def literal(a: Atom, positive: bool = True) -> Formula:
    return Var(a) if positive else Not(Var(a))


# ---------------------------------------------------------------------------
# Structural operations
# ---------------------------------------------------------------------------


def atoms_of(f: Formula) -> frozenset[Atom]:
    out: set[Atom] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.atom)
        elif isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend(node.children)
        elif isinstance(node, (Implies, Iff)):
            stack.append(node.lhs)
            stack.append(node.rhs)
    return frozenset(out)


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` replacing every ``Var`` node by ``fn(atom)``."""
    if isinstance(f, Var):
        return fn(f.atom)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(map_atoms(f.child, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(c, fn) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(c, fn) for c in f.children))
    if isinstance(f, Implies):
        return Implies(map_atoms(f.lhs, fn), map_atoms(f.rhs, fn))
    if isinstance(f, Iff):
        return Iff(map_atoms(f.lhs, fn), map_atoms(f.rhs, fn))
    raise TypeError("not a formula: %r" % (f,))


def check_permutation(perm: Mapping[Atom, Atom]) -> None:
    values = list(perm.values())
    if len(set(values)) != len(values) or set(values) != set(perm):
        raise InvalidPermutation("mapping is not a bijection on its atoms: %s" % (
            ", ".join("%s->%s" % (k, v) for k, v in perm.items())))


def relabel(f: Formula, perm: Mapping[Atom, Atom]) -> Formula:
    """Rename atoms by ``perm``; atoms outside its domain are left alone.

    ``perm`` must permute its own key set, which makes the extension by the
    identity a bijection on every universe.
    """
    check_permutation(perm)
    return map_atoms(f, lambda a: Var(perm.get(a, a)))


def compose(q: Mapping[Atom, Atom], p: Mapping[Atom, Atom]) -> dict[Atom, Atom]:
    """The permutation ``q . p`` (apply ``p`` first)."""
    keys = set(p) | set(q)
    return {a: q.get(p.get(a, a), p.get(a, a)) for a in keys}


def negation_swap(f: Formula, flip: Iterable[Atom]) -> Formula:
    flip = frozenset(flip)
    if not flip:
        return f
    return map_atoms(f, lambda a: Not(Var(a)) if a in flip else Var(a))


def simplify_constants(f: Formula) -> Formula:
    """Fold ``T``/``F`` nodes away; leaves constant-free formulas untouched."""
    if isinstance(f, (Const, Var)):
        return f
    if isinstance(f, Not):
        c = simplify_constants(f.child)
        if isinstance(c, Const):
            return FALSE if c.value else TRUE
        return f if c is f.child else Not(c)
    if isinstance(f, (And, Or)):
        absorbing = isinstance(f, Or)  # value that decides the node
        kept = []
        for child in f.children:
            c = simplify_constants(child)
            if isinstance(c, Const):
                if c.value == absorbing:
                    return c
                continue
            kept.append(c)
        if not kept:
            return Const(not absorbing)
        if len(kept) == 1:
            return kept[0]
        return type(f)(tuple(kept))
    if isinstance(f, Implies):
        lhs, rhs = simplify_constants(f.lhs), simplify_constants(f.rhs)
        if isinstance(lhs, Const):
            return rhs if lhs.value else TRUE
        if isinstance(rhs, Const):
            return TRUE if rhs.value else Not(lhs)
        return Implies(lhs, rhs)
    if isinstance(f, Iff):
        lhs, rhs = simplify_constants(f.lhs), simplify_constants(f.rhs)
        if isinstance(lhs, Const) and isinstance(rhs, Const):
            return Const(lhs.value == rhs.value)
        if isinstance(lhs, Const):
            lhs, rhs = rhs, lhs
        if isinstance(rhs, Const):
            return lhs if rhs.value else Not(lhs)
        return Iff(lhs, rhs)
    raise TypeError("not a formula: %r" % (f,))


def cofactor(f: Formula, a: Atom, value: bool) -> Formula:
    const = TRUE if value else FALSE
    return simplify_constants(map_atoms(f, lambda b: const if b == a else Var(b)))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_IFF, _IMP, _OR, _AND, _NOT, _ATOM = range(6)


def _level(f: Formula) -> int:
    if isinstance(f, Iff):
        return _IFF
    if isinstance(f, Implies):
        return _IMP
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    if isinstance(f, Not):
        return _NOT
    return _ATOM


def render(f: Formula) -> str:
    """Precedence-minimal text that :func:`parse` maps back to ``f`` exactly.

    Nested ``And``/``Or`` of the same kind keep their parentheses so the
    n-ary shape survives the round trip.
    """
    return _render(f, _IFF)


def _render(f: Formula, min_level: int) -> str:
    if isinstance(f, Const):
        text = "T" if f.value else "F"
    elif isinstance(f, Var):
        text = f.atom.name
    elif isinstance(f, Not):
        text = "~" + _render(f.child, _NOT)
    elif isinstance(f, And):
        text = " & ".join(_render(c, _NOT) for c in f.children)
    elif isinstance(f, Or):
        text = " | ".join(_render(c, _AND) for c in f.children)
    elif isinstance(f, Implies):
        text = _render(f.lhs, _OR) + " -> " + _render(f.rhs, _IMP)
    elif isinstance(f, Iff):
        text = _render(f.lhs, _IFF) + " <-> " + _render(f.rhs, _IMP)
    else:
        raise TypeError("not a formula: %r" % (f,))
    if _level(f) < min_level:
        return "(" + text + ")"
    return text


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(<->|->|[~!&|+(),])|([A-Za-z_][A-Za-z0-9_]*))")


_ALL_TOKENS = frozenset(["<->", "->", "~", "!", "&", "|", "+", "(", ")", ",", "IDENT"])


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], pos, _ALL_TOKENS)
        start = m.start(1) if m.group(1) else m.start(2)
        if m.group(1):
            tokens.append(("op", m.group(1), start))
        else:
            tokens.append(("ident", m.group(2), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


_PRIMARY_START = frozenset(["T", "F", "IDENT", "(", "~", "!"] + list(MACROS))


class _Parser:
    def __init__(self, text: str, env: Mapping[str, Formula] | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.env = env or {}

    @property
    def tok(self):
        return self.tokens[self.i]

    def at(self, *ops):
        kind, value, _ = self.tok
        return kind == "op" and value in ops

    def expect(self, op):
        kind, value, pos = self.tok
        if kind != "op" or value != op:
            raise ParseError("unexpected %s" % self._describe(), pos, {op})
        self.i += 1

    def _describe(self):
        kind, value, _ = self.tok
        return "end of input" if kind == "end" else "token %r" % value

    def parse(self) -> Formula:
        f = self.iff()
        if self.tok[0] != "end":
            raise ParseError("unexpected %s" % self._describe(), self.tok[2],
                             {"<->", "->", "|", "+", "&"})
        return f

    def iff(self):
        f = self.imp()
        while self.at("<->"):
            self.i += 1
            f = Iff(f, self.imp())
        return f

    def imp(self):
        f = self.or_()
        if self.at("->"):
            self.i += 1
            return Implies(f, self.imp())
        return f

    def or_(self):
        parts = [self.and_()]
        while self.at("|", "+"):
            self.i += 1
            parts.append(self.and_())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_(self):
        parts = [self.not_()]
        while self.at("&"):
            self.i += 1
            parts.append(self.not_())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def not_(self):
        if self.at("~", "!"):
            self.i += 1
            return Not(self.not_())
        return self.primary()

    def primary(self):
        kind, value, pos = self.tok
        if kind == "op" and value == "(":
            self.i += 1
            f = self.iff()
            self.expect(")")
            return f
        if kind != "ident":
            raise ParseError("unexpected %s" % self._describe(), pos, _PRIMARY_START)
        self.i += 1
        if value == "T":
            return TRUE
        if value == "F":
            return FALSE
        if value in MACROS:
            return self.macro(value)
        if value in self.env:
            return self.env[value]
        return Var(atom(value))

    def macro(self, name):
        self.expect("(")
        args = [self.ident()]
        while self.at(","):
            self.i += 1
            args.append(self.ident())
        self.expect(")")
        from . import assumptions

        return assumptions.MACRO_BUILDERS[name](args)

    def ident(self):
        kind, value, pos = self.tok
        if kind != "ident":
            raise ParseError("unexpected %s" % self._describe(), pos, {"IDENT"})
        if value in RESERVED:
            raise ReservedNameError("reserved word %r used as an atom at position %d" % (value, pos))
        self.i += 1
        return atom(value)


def parse(text: str, env: Mapping[str, Formula] | None = None) -> Formula:
    """Parse ``text`` into a formula.

    Identifiers found in ``env`` are replaced by the bound formula; all
    others become atoms.
    """
    return _Parser(text, env).parse()
