"""Observations and derivatives of KAT expressions.

``epsilon``, ``delta`` and ``pderiv`` work for one atom at a time and follow
the textbook rules directly. ``Derivatives`` computes the same information for
all atoms at once, as atom bitmasks; the equivalence checker uses that form.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from katcheck.semantics import atom_satisfies, sat_mask
from katcheck.syntax import (
    ONE,
    ZERO,
    Dot,
    KatExpr,
    Letter,
    One,
    Plus,
    Signature,
    Star,
    Test,
    Zero,
    canonical_key,
    mk_dot,
    mk_plus,
)


class ExprSet:
    """Finite set of expressions in canonical (sorted, duplicate-free) order.

    Denotes the sum of its elements.
    """

    __slots__ = ("elems", "_hash")

    def __init__(self, elems: Iterable[KatExpr] = ()):
        self.elems = tuple(sorted(set(elems), key=canonical_key))
        self._hash = hash(self.elems)

    def __iter__(self) -> Iterator[KatExpr]:
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __contains__(self, x):
        return x in self.elems

    def __eq__(self, other):
        return isinstance(other, ExprSet) and self._hash == other._hash and self.elems == other.elems

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ExprSet({list(self.elems)!r})"

    def sum(self) -> KatExpr:
        out: KatExpr = ZERO
        for x in reversed(self.elems):
            out = mk_plus(x, out)
        return out


EMPTY = ExprSet()


def epsilon(alpha: int, x: KatExpr) -> bool:
    if isinstance(x, Plus):
        return epsilon(alpha, x.left) or epsilon(alpha, x.right)
    if isinstance(x, Dot):
        return epsilon(alpha, x.left) and epsilon(alpha, x.right)
    if isinstance(x, (Star, One)):
        return True
    if isinstance(x, (Letter, Zero)):
        return False
    if isinstance(x, Test):
        return atom_satisfies(alpha, x.test)
    raise TypeError(f"not a KAT expression: {x!r}")


def delta(alpha: int, p: int, x: KatExpr) -> KatExpr:
    """Brzozowski-style derivative: a single residual expression."""
    if isinstance(x, Plus):
        return mk_plus(delta(alpha, p, x.left), delta(alpha, p, x.right))
    if isinstance(x, Dot):
        head = mk_dot(delta(alpha, p, x.left), x.right)
        if epsilon(alpha, x.left):
            return mk_plus(head, delta(alpha, p, x.right))
        return head
    if isinstance(x, Star):
        return mk_dot(delta(alpha, p, x.arg), x)
    if isinstance(x, Letter):
        return ONE if x.index == p else ZERO
    if isinstance(x, (Test, One, Zero)):
        return ZERO
    raise TypeError(f"not a KAT expression: {x!r}")


def _pderiv(alpha: int, p: int, x: KatExpr) -> set[KatExpr]:
    if isinstance(x, Plus):
        return _pderiv(alpha, p, x.left) | _pderiv(alpha, p, x.right)
    if isinstance(x, Dot):
        out = {mk_dot(e, x.right) for e in _pderiv(alpha, p, x.left)}
        if epsilon(alpha, x.left):
            out |= _pderiv(alpha, p, x.right)
        return out
    if isinstance(x, Star):
        return {mk_dot(e, x) for e in _pderiv(alpha, p, x.arg)}
    if isinstance(x, Letter):
        return {ONE} if x.index == p else set()
    if isinstance(x, (Test, One, Zero)):
        return set()
    raise TypeError(f"not a KAT expression: {x!r}")


def pderiv(alpha: int, p: int, x: KatExpr) -> ExprSet:
    return ExprSet(_pderiv(alpha, p, x))


def pderiv_set(alpha: int, p: int, xs: ExprSet) -> ExprSet:
    out: set[KatExpr] = set()
    for x in xs:
        out |= _pderiv(alpha, p, x)
    return ExprSet(out)


def epsilon_set(alpha: int, xs: ExprSet) -> bool:
    return any(epsilon(alpha, x) for x in xs)


class Derivatives:
    """Memoised all-atoms derivatives over a fixed signature.

    ``eps(x)`` is the bitmask of atoms accepted by ``x``; ``pderiv(p, x)``
    maps each residual expression to the bitmask of atoms for which it
    belongs to the partial derivative. A fresh instance is meant to live for
    one decision run.
    """

    def __init__(self, sig: Signature):
        self.sig = sig
        self.full = (1 << sig.n_atoms) - 1
        self._eps: dict[KatExpr, int] = {}
        self._pd: dict[tuple[int, KatExpr], dict[KatExpr, int]] = {}
        self._tests: dict = {}

    def eps(self, x: KatExpr) -> int:
        cached = self._eps.get(x)
        if cached is not None:
            return cached
        if isinstance(x, Plus):
            r = self.eps(x.left) | self.eps(x.right)
        elif isinstance(x, Dot):
            r = self.eps(x.left)
            if r:
                r &= self.eps(x.right)
        elif isinstance(x, (Star, One)):
            r = self.full
        elif isinstance(x, (Letter, Zero)):
            r = 0
        elif isinstance(x, Test):
            r = self._tests.get(x.test)
            if r is None:
                r = self._tests[x.test] = sat_mask(x.test, self.sig.n_tests)
        else:
            raise TypeError(f"not a KAT expression: {x!r}")
        self._eps[x] = r
        return r

    def pderiv(self, p: int, x: KatExpr) -> dict[KatExpr, int]:
        key = (p, x)
        cached = self._pd.get(key)
        if cached is not None:
            return cached
        out: dict[KatExpr, int] = {}
        if isinstance(x, Plus):
            out = dict(self.pderiv(p, x.left))
            for e, m in self.pderiv(p, x.right).items():
                out[e] = out.get(e, 0) | m
        elif isinstance(x, Dot):
            for e, m in self.pderiv(p, x.left).items():
                d = mk_dot(e, x.right)
                out[d] = out.get(d, 0) | m
            guard = self.eps(x.left)
            if guard:
                for e, m in self.pderiv(p, x.right).items():
                    if m & guard:
                        out[e] = out.get(e, 0) | (m & guard)
        elif isinstance(x, Star):
            for e, m in self.pderiv(p, x.arg).items():
                d = mk_dot(e, x)
                out[d] = out.get(d, 0) | m
        elif isinstance(x, Letter):
            if x.index == p:
                out = {ONE: self.full}
        elif not isinstance(x, (Test, One, Zero)):
            raise TypeError(f"not a KAT expression: {x!r}")
        self._pd[key] = out
        return out

    def eps_set(self, xs: Iterable[KatExpr]) -> int:
        r = 0
        for x in xs:
            r |= self.eps(x)
        return r

    def pderiv_set(self, p: int, xs: Iterable[KatExpr]) -> dict[KatExpr, int]:
        out: dict[KatExpr, int] = {}
        for x in xs:
            for e, m in self.pderiv(p, x).items():
                out[e] = out.get(e, 0) | m
        return out
