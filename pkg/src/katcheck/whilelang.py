"""While programs over uninterpreted actions, their KAT embedding, and
Hoare triples for partial correctness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from katcheck.equiv import DEFAULT_MAX_STATES
from katcheck.hyp import HkatResult, hkat_check
from katcheck.syntax import (
    ONE,
    ZERO,
    BoolExpr,
    Equation,
    KatExpr,
    Letter,
    Not,
    Signature,
    Test,
    dot_all,
    mk_dot,
    mk_plus,
    mk_star,
)


@dataclass(frozen=True)
class Skp:
    pass


@dataclass(frozen=True)
class Act:
    index: int


@dataclass(frozen=True)
class Seq:
    first: "Prog"
    second: "Prog"


@dataclass(frozen=True)
class Ite:
    cond: BoolExpr
    then: "Prog"
    orelse: "Prog"


@dataclass(frozen=True)
class Whl:
    cond: BoolExpr
    body: "Prog"


Prog = Union[Skp, Act, Seq, Ite, Whl]


@dataclass(frozen=True)
class HoareTriple:
    pre: BoolExpr
    prog: Prog
    post: BoolExpr


def embed(p: Prog) -> KatExpr:
    if isinstance(p, Skp):
        return ONE
    if isinstance(p, Act):
        return Letter(p.index)
    if isinstance(p, Seq):
        return mk_dot(embed(p.first), embed(p.second))
    if isinstance(p, Ite):
        return mk_plus(
            mk_dot(Test(p.cond), embed(p.then)), mk_dot(Test(Not(p.cond)), embed(p.orelse))
        )
    if isinstance(p, Whl):
        return mk_dot(mk_star(mk_dot(Test(p.cond), embed(p.body))), Test(Not(p.cond)))
    raise TypeError(f"not a program: {p!r}")


def prog_equiv(
    p: Prog,
    q: Prog,
    sig: Signature,
    hyps: Sequence[Equation] = (),
    max_states: int = DEFAULT_MAX_STATES,
) -> HkatResult:
    return hkat_check(Equation(embed(p), embed(q)), hyps, sig, max_states)


def hoare_encode(t: HoareTriple) -> Equation:
    """``{A} p {B}`` holds iff no run of ``p`` goes from ``A`` to ``not B``."""
    return Equation(dot_all([Test(t.pre), embed(t.prog), Test(Not(t.post))]), ZERO)


def hoare_check(
    premises: Sequence[HoareTriple],
    extra_hyps: Sequence[Equation],
    goal: HoareTriple,
    sig: Signature,
    max_states: int = DEFAULT_MAX_STATES,
) -> HkatResult:
    hyps = [hoare_encode(t) for t in premises] + list(extra_hyps)
    return hkat_check(hoare_encode(goal), hyps, sig, max_states)
