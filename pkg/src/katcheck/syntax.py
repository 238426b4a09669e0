"""Signatures and two-sorted abstract syntax for Boolean and KAT expressions.

Nodes are immutable and carry a precomputed hash, so large expressions can be
used as dictionary keys without re-walking the tree. Kleene terms are meant to
be built through the smart constructors (``mk_dot``, ``mk_plus``, ``mk_star``)
which keep products and sums right-nested and strip units and annihilators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable

DEFAULT_ATOM_LIMIT = 12


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Declared primitive tests and letters (actions).

    ``atom_limit`` caps the number of primitive tests, since several
    procedures iterate over all ``2**n`` atoms.
    """

    tests: tuple[str, ...] = ()
    actions: tuple[str, ...] = ()
    atom_limit: int = DEFAULT_ATOM_LIMIT

    def __post_init__(self):
        object.__setattr__(self, "tests", tuple(self.tests))
        object.__setattr__(self, "actions", tuple(self.actions))
        names = self.tests + self.actions
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise SignatureError(f"duplicate identifiers in signature: {', '.join(dup)}")
        if len(self.tests) > self.atom_limit:
            raise SignatureError(
                f"{len(self.tests)} primitive tests exceed the atom limit ({self.atom_limit})"
            )

    @property
    def n_tests(self) -> int:
        return len(self.tests)

    @property
    def n_letters(self) -> int:
        return len(self.actions)

    @property
    def n_atoms(self) -> int:
        return 1 << len(self.tests)

    def test_index(self, name: str) -> int:
        return self.tests.index(name)

    def action_index(self, name: str) -> int:
        return self.actions.index(name)


class _Node:
    """Shared machinery: positional fields, cached hash, structural equality."""

    __slots__ = ("_hash",)
    _fields: tuple[str, ...] = ()
    _rank = 0

    def __init__(self, *args):
        if len(args) != len(self._fields):
            raise TypeError(f"{type(self).__name__} takes {len(self._fields)} arguments")
        for name, value in zip(self._fields, args):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "_hash", hash((self._rank,) + args))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), self.args)

    @property
    def args(self) -> tuple:
        return tuple(getattr(self, f) for f in self._fields)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self.args == other.args

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return canonical_compare(self, other) < 0

    def __repr__(self):
        inner = ", ".join(repr(a) for a in self.args)
        return f"{type(self).__name__}({inner})"


# Boolean expressions -------------------------------------------------------


class BoolExpr(_Node):
    __slots__ = ()

    def __and__(self, other: BoolExpr) -> BoolExpr:
        return And(self, other)

    def __or__(self, other: BoolExpr) -> BoolExpr:
        return Or(self, other)

    def __invert__(self) -> BoolExpr:
        return Not(self)


class PrimTest(BoolExpr):
    __slots__ = ("index",)
    _fields = ("index",)
    _rank = 0


class And(BoolExpr):
    __slots__ = ("left", "right")
    _fields = ("left", "right")
    _rank = 1


class Or(BoolExpr):
    __slots__ = ("left", "right")
    _fields = ("left", "right")
    _rank = 2


class Not(BoolExpr):
    __slots__ = ("arg",)
    _fields = ("arg",)
    _rank = 3


class Top(BoolExpr):
    __slots__ = ()
    _rank = 4


class Bot(BoolExpr):
    __slots__ = ()
    _rank = 5


TOP = Top()
BOT = Bot()


# KAT expressions -----------------------------------------------------------


class KatExpr(_Node):
    __slots__ = ()


class Letter(KatExpr):
    __slots__ = ("index",)
    _fields = ("index",)
    _rank = 10


class Test(KatExpr):
    __slots__ = ("test",)
    __test__ = False  # keep pytest from collecting it
    _fields = ("test",)
    _rank = 11


class Dot(KatExpr):
    __slots__ = ("left", "right")
    _fields = ("left", "right")
    _rank = 12


class Plus(KatExpr):
    __slots__ = ("left", "right")
    _fields = ("left", "right")
    _rank = 13


class Star(KatExpr):
    __slots__ = ("arg",)
    _fields = ("arg",)
    _rank = 14


class One(KatExpr):
    __slots__ = ()
    _rank = 15


class Zero(KatExpr):
    __slots__ = ()
    _rank = 16


ONE = One()
ZERO = Zero()


def mk_dot(x: KatExpr, y: KatExpr) -> KatExpr:
    if isinstance(x, Zero) or isinstance(y, Zero):
        return ZERO
    if isinstance(x, One):
        return y
    if isinstance(y, One):
        return x
    if isinstance(x, Dot):
        return mk_dot(x.left, mk_dot(x.right, y))
    return Dot(x, y)


def mk_plus(x: KatExpr, y: KatExpr) -> KatExpr:
    if isinstance(x, Zero):
        return y
    if isinstance(y, Zero):
        return x
    if isinstance(x, Plus):
        return mk_plus(x.left, mk_plus(x.right, y))
    return Plus(x, y)


def mk_star(x: KatExpr) -> KatExpr:
    if isinstance(x, (Zero, One)):
        return ONE
    return Star(x)


def mk_test(a: BoolExpr) -> KatExpr:
    return Test(a)


def dot_all(xs: Iterable[KatExpr]) -> KatExpr:
    result: KatExpr = ONE
    for x in reversed(list(xs)):
        result = mk_dot(x, result)
    return result


def plus_all(xs: Iterable[KatExpr]) -> KatExpr:
    result: KatExpr = ZERO
    for x in reversed(list(xs)):
        result = mk_plus(x, result)
    return result


def factors(x: KatExpr) -> list[KatExpr]:
    """Flatten a right-nested product into its factor list (``1`` gives [])."""
    if isinstance(x, One):
        return []
    out = []
    while isinstance(x, Dot):
        out.append(x.left)
        x = x.right
    out.append(x)
    return out


def normalize(x: KatExpr) -> KatExpr:
    """Rebuild an arbitrary term through the smart constructors."""
    if isinstance(x, Dot):
        return mk_dot(normalize(x.left), normalize(x.right))
    if isinstance(x, Plus):
        return mk_plus(normalize(x.left), normalize(x.right))
    if isinstance(x, Star):
        return mk_star(normalize(x.arg))
    return x


def is_normal(x: KatExpr) -> bool:
    if isinstance(x, Dot):
        if isinstance(x.left, (One, Zero, Dot)) or isinstance(x.right, (One, Zero)):
            return False
        return is_normal(x.left) and is_normal(x.right)
    if isinstance(x, Plus):
        if isinstance(x.left, (Zero, Plus)) or isinstance(x.right, Zero):
            return False
        return is_normal(x.left) and is_normal(x.right)
    if isinstance(x, Star):
        return not isinstance(x.arg, (Zero, One)) and is_normal(x.arg)
    return True


def canonical_compare(x: _Node, y: _Node) -> int:
    """Total structural order: constructor rank first, then fields left to right."""
    if x is y:
        return 0
    if x._rank != y._rank:
        return -1 if x._rank < y._rank else 1
    for a, b in zip(x.args, y.args):
        if a is b:
            continue
        if isinstance(a, int):
            if a != b:
                return -1 if a < b else 1
            continue
        c = canonical_compare(a, b)
        if c:
            return c
    return 0


canonical_key = cmp_to_key(canonical_compare)


def size(x: _Node) -> int:
    return 1 + sum(size(a) for a in x.args if isinstance(a, _Node))


def letters_of(x: KatExpr) -> set[int]:
    if isinstance(x, Letter):
        return {x.index}
    out: set[int] = set()
    for a in x.args:
        if isinstance(a, KatExpr):
            out |= letters_of(a)
    return out


def check_expr(x: _Node, sig: Signature) -> None:
    """Raise SignatureError if an index falls outside the signature."""
    if isinstance(x, PrimTest) and not 0 <= x.index < sig.n_tests:
        raise SignatureError(f"test index {x.index} out of range")
    if isinstance(x, Letter) and not 0 <= x.index < sig.n_letters:
        raise SignatureError(f"letter index {x.index} out of range")
    for a in x.args:
        if isinstance(a, _Node):
            check_expr(a, sig)


@dataclass(frozen=True)
class Equation:
    lhs: KatExpr
    rhs: KatExpr
    relation: str = "=="

    def __post_init__(self):
        if self.relation not in ("==", "<="):
            raise ValueError(f"unknown relation {self.relation!r}")

    def as_equality(self) -> Equation:
        """``x <= y`` becomes ``x + y == y``; equalities are returned unchanged."""
        if self.relation == "==":
            return self
        return Equation(mk_plus(self.lhs, self.rhs), self.rhs, "==")
