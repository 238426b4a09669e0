"""Eliminating hypotheses of the five reducible shapes.

Supported shapes, matched syntactically on smart-constructor normal form:

    (i)   x == 0                                       HoareZero
    (ii)  [a]x == x[b], [a]x <= x[b], x[b] <= [a]x     GuardCommute
    (iii) x <= [a]x, x <= x[a]  (also x == x[a] etc.)  GuardAbsorb
    (iv)  [a] == [b], [a] <= [b]                       BoolRel
    (v)   [a]p == [a], p[a] == [a]  for a letter p     LetterAbsorb

Shapes (i)-(iv) become terms known to be zero, are summed, and are folded
into the goal as ``x + uzu == y + uzu`` with ``u`` the universal expression.
Shape (v) is used to substitute ``[!a]p + [a]`` (or ``p[!a] + [a]``) for
``p``. Anything else is reported back as unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from katcheck.equiv import DEFAULT_MAX_STATES, Verdict, equivalent
from katcheck.syntax import (
    TOP,
    ZERO,
    BoolExpr,
    Dot,
    Equation,
    KatExpr,
    Letter,
    Not,
    One,
    Plus,
    Signature,
    Star,
    Test,
    Zero,
    dot_all,
    factors,
    mk_dot,
    mk_plus,
    mk_star,
    plus_all,
)


@dataclass(frozen=True)
class HoareZero:
    z: KatExpr


@dataclass(frozen=True)
class GuardCommute:
    a: BoolExpr
    x: KatExpr
    b: BoolExpr
    variant: str  # "eq" | "le" | "ge"


@dataclass(frozen=True)
class GuardAbsorb:
    x: KatExpr
    a: BoolExpr
    side: str  # "left": x <= [a]x, "right": x <= x[a]


@dataclass(frozen=True)
class BoolRel:
    a: BoolExpr
    b: BoolExpr
    variant: str  # "eq" | "le"


@dataclass(frozen=True)
class LetterAbsorb:
    a: BoolExpr
    p: int
    side: str  # "left": [a]p == [a], "right": p[a] == [a]


@dataclass(frozen=True)
class Unsupported:
    original: Equation


Hypothesis = Union[HoareZero, GuardCommute, GuardAbsorb, BoolRel, LetterAbsorb, Unsupported]


def _as_test(x: KatExpr):
    if isinstance(x, Test):
        return x.test
    if isinstance(x, One):
        return TOP
    return None


def _guard_split(x: KatExpr):
    """Split ``[a]x`` into (a, x) and ``x[a]`` into (x, a) when possible."""
    fs = factors(x)
    head = (fs[0].test, dot_all(fs[1:])) if fs and isinstance(fs[0], Test) else None
    tail = (dot_all(fs[:-1]), fs[-1].test) if fs and isinstance(fs[-1], Test) else None
    return head, tail


def _match_letter_absorb(lhs: KatExpr, rhs: KatExpr):
    if not isinstance(rhs, Test) or not isinstance(lhs, Dot):
        return None
    if lhs.left == rhs and isinstance(lhs.right, Letter):
        return LetterAbsorb(rhs.test, lhs.right.index, "left")
    if lhs.right == rhs and isinstance(lhs.left, Letter):
        return LetterAbsorb(rhs.test, lhs.left.index, "right")
    return None


def _match_commute(lhs: KatExpr, rhs: KatExpr):
    """(a, x, b) when lhs is ``[a]x`` and rhs is ``x[b]``."""
    lhead, _ = _guard_split(lhs)
    _, rtail = _guard_split(rhs)
    if lhead and rtail and lhead[1] == rtail[0]:
        return lhead[0], lhead[1], rtail[1]
    return None


def _match_absorb(small: KatExpr, big: KatExpr):
    """GuardAbsorb when ``big`` is ``[a]small`` or ``small[a]``."""
    head, tail = _guard_split(big)
    if head and head[1] == small:
        return GuardAbsorb(small, head[0], "left")
    if tail and tail[0] == small:
        return GuardAbsorb(small, tail[1], "right")
    return None


def classify(e: Equation) -> Hypothesis:
    lhs, rhs, rel = e.lhs, e.rhs, e.relation
    if rel == "==":
        if isinstance(rhs, Zero):
            return HoareZero(lhs)
        if isinstance(lhs, Zero):
            return HoareZero(rhs)
        for l, r in ((lhs, rhs), (rhs, lhs)):
            m = _match_letter_absorb(l, r)
            if m:
                return m
        ta, tb = _as_test(lhs), _as_test(rhs)
        if ta is not None and tb is not None:
            return BoolRel(ta, tb, "eq")
        m = _match_commute(lhs, rhs) or _match_commute(rhs, lhs)
        if m:
            return GuardCommute(*m, "eq")
        # x == [a]x and x == x[a] are equivalent to their <= halves
        m = _match_absorb(lhs, rhs) or _match_absorb(rhs, lhs)
        if m:
            return m
        return Unsupported(e)
    if isinstance(rhs, Zero):
        return HoareZero(lhs)
    ta, tb = _as_test(lhs), _as_test(rhs)
    if ta is not None and tb is not None:
        return BoolRel(ta, tb, "le")
    m = _match_commute(lhs, rhs)
    if m:
        return GuardCommute(*m, "le")
    m = _match_commute(rhs, lhs)
    if m:
        return GuardCommute(*m, "ge")
    m = _match_absorb(lhs, rhs)
    if m:
        return m
    return Unsupported(e)


def render(h: Hypothesis) -> Equation:
    """The equation a hypothesis stands for (inverse of ``classify``)."""
    if isinstance(h, HoareZero):
        return Equation(h.z, ZERO)
    if isinstance(h, GuardCommute):
        ax = mk_dot(Test(h.a), h.x)
        xb = mk_dot(h.x, Test(h.b))
        if h.variant == "ge":
            return Equation(xb, ax, "<=")
        return Equation(ax, xb, "==" if h.variant == "eq" else "<=")
    if isinstance(h, GuardAbsorb):
        big = mk_dot(Test(h.a), h.x) if h.side == "left" else mk_dot(h.x, Test(h.a))
        return Equation(h.x, big, "<=")
    if isinstance(h, BoolRel):
        return Equation(Test(h.a), Test(h.b), "==" if h.variant == "eq" else "<=")
    if isinstance(h, LetterAbsorb):
        p, a = Letter(h.p), Test(h.a)
        lhs = mk_dot(a, p) if h.side == "left" else mk_dot(p, a)
        return Equation(lhs, a)
    return h.original


def to_hoare(h: Hypothesis) -> list[KatExpr]:
    """Terms whose vanishing is equivalent to the hypothesis."""
    if isinstance(h, HoareZero):
        return [h.z]
    if isinstance(h, GuardCommute):
        le = dot_all([Test(h.a), h.x, Test(Not(h.b))])
        ge = dot_all([Test(Not(h.a)), h.x, Test(h.b)])
        return {"le": [le], "ge": [ge], "eq": [le, ge]}[h.variant]
    if isinstance(h, GuardAbsorb):
        if h.side == "left":
            return [mk_dot(Test(Not(h.a)), h.x)]
        return [mk_dot(h.x, Test(Not(h.a)))]
    if isinstance(h, BoolRel):
        le = mk_dot(Test(h.a), Test(Not(h.b)))
        if h.variant == "le":
            return [le]
        return [le, mk_dot(Test(Not(h.a)), Test(h.b))]
    raise ValueError(f"{type(h).__name__} hypotheses have no Hoare form")


def aggregate(zs: Sequence[KatExpr]) -> KatExpr:
    return plus_all(zs)


def universal(sig: Signature) -> KatExpr:
    return mk_star(plus_all(Letter(i) for i in range(sig.n_letters)))


def eliminate_hoare(goal: Equation, z: KatExpr, sig: Signature) -> Equation:
    goal = goal.as_equality()
    u = universal(sig)
    uzu = dot_all([u, z, u])
    return Equation(mk_plus(goal.lhs, uzu), mk_plus(goal.rhs, uzu))


def substitute_letter(e: KatExpr, h: LetterAbsorb) -> KatExpr:
    p = Letter(h.p)
    guard, neg = Test(h.a), Test(Not(h.a))
    if h.side == "left":
        replacement = mk_plus(mk_dot(neg, p), guard)
    else:
        replacement = mk_plus(mk_dot(p, neg), guard)

    def walk(x: KatExpr) -> KatExpr:
        if isinstance(x, Letter):
            return replacement if x.index == h.p else x
        if isinstance(x, Dot):
            return mk_dot(walk(x.left), walk(x.right))
        if isinstance(x, Plus):
            return mk_plus(walk(x.left), walk(x.right))
        if isinstance(x, Star):
            return mk_star(walk(x.arg))
        return x

    return walk(e)


def _substitute_hyp(h: Hypothesis, s: LetterAbsorb) -> Hypothesis:
    if isinstance(h, HoareZero):
        return HoareZero(substitute_letter(h.z, s))
    if isinstance(h, GuardCommute):
        return GuardCommute(h.a, substitute_letter(h.x, s), h.b, h.variant)
    if isinstance(h, GuardAbsorb):
        return GuardAbsorb(substitute_letter(h.x, s), h.a, h.side)
    return h


@dataclass(frozen=True)
class Prepared:
    """A goal with its supported hypotheses folded in."""

    checked: Equation
    unsupported: list[Unsupported]
    eliminated: bool


def prepare(goal: Equation, hyps: Sequence[Equation], sig: Signature) -> Prepared:
    """Substitute shape-(v) facts, then fold shapes (i)-(iv) in as ``uzu``."""
    classified = [classify(h) for h in hyps]
    unsupported = [h for h in classified if isinstance(h, Unsupported)]
    subst = [h for h in classified if isinstance(h, LetterAbsorb)]
    hoare = [h for h in classified if not isinstance(h, (Unsupported, LetterAbsorb))]

    goal = goal.as_equality()
    lhs, rhs = goal.lhs, goal.rhs
    for s in subst:
        lhs, rhs = substitute_letter(lhs, s), substitute_letter(rhs, s)
        hoare = [_substitute_hyp(h, s) for h in hoare]
    checked = Equation(lhs, rhs)
    if hoare:
        z = aggregate([t for h in hoare for t in to_hoare(h)])
        checked = eliminate_hoare(checked, z, sig)
    return Prepared(checked, unsupported, bool(subst or hoare))


@dataclass(frozen=True)
class HkatResult:
    verdict: Verdict
    unsupported: list[Unsupported] = field(default_factory=list)
    checked: Equation | None = None
    eliminated: bool = False

    def __bool__(self):
        return self.verdict.equal


def hkat_check(
    goal: Equation,
    hyps: Sequence[Equation],
    sig: Signature,
    max_states: int = DEFAULT_MAX_STATES,
) -> HkatResult:
    """Decide ``goal`` under ``hyps``.

    A negative verdict means "not provable from the supported hypotheses";
    its witness refers to ``result.checked``, the transformed goal.
    """
    prep = prepare(goal, hyps, sig)
    verdict = equivalent(prep.checked.lhs, prep.checked.rhs, sig, max_states)
    return HkatResult(verdict, prep.unsupported, prep.checked, prep.eliminated)
