"""Reduced ordered binary decision diagrams with a hash-consed node store.

Nodes are integers indexing parallel arrays. ``0`` and ``1`` are the
terminals; every other node tests the variable at its ``level`` and has a
``low`` (variable false) and ``high`` (variable true) successor. Levels
follow the order of the universe the store was built for, with no
reordering, so two handles in the same store are equal iff their functions
are equal.
"""

from __future__ import annotations

from .errors import AtomOutsideUniverse, NodeLimitExceeded
from .formula import And, Const, Formula, Iff, Implies, Not, Or, Universe, Var

DEFAULT_NODE_CAP = 10**7

FALSE_NODE = 0
TRUE_NODE = 1

_AND, _OR, _XOR = "and", "or", "xor"


class BDD:
    def __init__(self, universe: Universe, node_cap: int = DEFAULT_NODE_CAP):
        self.universe = universe
        self.nvars = len(universe)
        self.node_cap = node_cap
        # terminals sit below every variable
        self._level = [self.nvars, self.nvars]
        self._low = [0, 1]
        self._high = [0, 1]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._apply_memo: dict[tuple[str, int, int], int] = {}
        self._not_memo: dict[int, int] = {}
        self._count_memo: dict[int, int] = {0: 0, 1: 1}

    def __len__(self):
        """Number of nodes in the store, terminals included."""
        return len(self._level)

    def level(self, u: int) -> int:
        return self._level[u]

    def low(self, u: int) -> int:
        return self._low[u]

    def high(self, u: int) -> int:
        return self._high[u]

    def mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        u = self._unique.get(key)
        if u is None:
            if len(self._level) >= self.node_cap:
                raise NodeLimitExceeded("decision diagram exceeded %d nodes" % self.node_cap)
            u = len(self._level)
            self._level.append(level)
            self._low.append(low)
            self._high.append(high)
            self._unique[key] = u
        return u

    def var(self, atom) -> int:
        try:
            level = self.universe.index(atom)
        except KeyError:
            raise AtomOutsideUniverse("atom %s is not in the universe" % atom) from None
        return self.mk(level, FALSE_NODE, TRUE_NODE)

    def neg(self, u: int) -> int:
        if u <= 1:
            return 1 - u
        r = self._not_memo.get(u)
        if r is None:
            r = self.mk(self._level[u], self.neg(self._low[u]), self.neg(self._high[u]))
            self._not_memo[u] = r
            self._not_memo[r] = u
        return r

    def apply(self, op: str, u: int, v: int) -> int:
        if u > v:  # all three ops are commutative
            u, v = v, u
        if u <= 1:
            if op == _AND:
                return v if u == 1 else 0
            if op == _OR:
                return 1 if u == 1 else v
            return self.neg(v) if u == 1 else v
        if u == v:
            return {_AND: u, _OR: u, _XOR: 0}[op]
        key = (op, u, v)
        r = self._apply_memo.get(key)
        if r is not None:
            return r
        lu, lv = self._level[u], self._level[v]
        level = min(lu, lv)
        u0, u1 = (self._low[u], self._high[u]) if lu == level else (u, u)
        v0, v1 = (self._low[v], self._high[v]) if lv == level else (v, v)
        r = self.mk(level, self.apply(op, u0, v0), self.apply(op, u1, v1))
        self._apply_memo[key] = r
        return r

    def conj(self, u: int, v: int) -> int:
        return self.apply(_AND, u, v)

    def disj(self, u: int, v: int) -> int:
        return self.apply(_OR, u, v)

    def build(self, f: Formula) -> int:
        """Compile ``f`` into a node of this store."""
        if isinstance(f, Const):
            return TRUE_NODE if f.value else FALSE_NODE
        if isinstance(f, Var):
            return self.var(f.atom)
        if isinstance(f, Not):
            return self.neg(self.build(f.child))
        if isinstance(f, And):
            r = TRUE_NODE
            for c in f.children:
                r = self.apply(_AND, r, self.build(c))
            return r
        if isinstance(f, Or):
            r = FALSE_NODE
            for c in f.children:
                r = self.apply(_OR, r, self.build(c))
            return r
        if isinstance(f, Implies):
            return self.apply(_OR, self.neg(self.build(f.lhs)), self.build(f.rhs))
        if isinstance(f, Iff):
            return self.neg(self.apply(_XOR, self.build(f.lhs), self.build(f.rhs)))
        raise TypeError("not a formula: %r" % (f,))

    def _count_below(self, u: int) -> int:
        # models over the variables at levels >= level(u)
        c = self._count_memo.get(u)
        if c is None:
            lvl = self._level[u]
            lo, hi = self._low[u], self._high[u]
            c = (self._count_below(lo) << (self._level[lo] - lvl - 1)) + (
                self._count_below(hi) << (self._level[hi] - lvl - 1))
            self._count_memo[u] = c
        return c

    def count(self, u: int) -> int:
        """Number of satisfying assignments over the whole universe."""
        return self._count_below(u) << self._level[u]

    def support(self, u: int) -> set[int]:
        """Levels of the variables the function at ``u`` depends on."""
        seen = set()
        levels = set()
        stack = [u]
        while stack:
            n = stack.pop()
            if n <= 1 or n in seen:
                continue
            seen.add(n)
            levels.add(self._level[n])
            stack.append(self._low[n])
            stack.append(self._high[n])
        return levels

    def node_count(self, u: int) -> int:
        """Nodes reachable from ``u``, terminals included."""
        seen = set()
        stack = [u]
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            if n > 1:
                stack.append(self._low[n])
                stack.append(self._high[n])
        return len(seen)
