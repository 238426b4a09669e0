"""Generators and a naive reference language model shared by the tests."""

from __future__ import annotations

import random
from itertools import product

from hypothesis import strategies as st

from katcheck.semantics import (
    GuardedString,
    RelInterp,
    atom_satisfies,
    gs_fuse,
    rel_eval,
)
from katcheck.syntax import (
    BOT,
    TOP,
    And,
    Dot,
    Equation,
    KatExpr,
    Letter,
    Not,
    One,
    Or,
    Plus,
    PrimTest,
    Signature,
    Star,
    Test,
    Zero,
    mk_dot,
    mk_plus,
    mk_star,
)
from katcheck.whilelang import Act, Ite, Seq, Skp, Whl

SIG2 = Signature(("a", "b"), ("p", "q"))


# naive model: explicit sets of GuardedString, fusion pair by pair


def naive_language(x: KatExpr, n_tests: int, n_letters: int, k: int) -> frozenset:
    atoms = range(1 << n_tests)
    if isinstance(x, Letter):
        if k < 1:
            return frozenset()
        return frozenset(GuardedString(((a, x.index),), b) for a in atoms for b in atoms)
    if isinstance(x, Test):
        return frozenset(GuardedString.atom(a) for a in atoms if atom_satisfies(a, x.test))
    if isinstance(x, One):
        return frozenset(GuardedString.atom(a) for a in atoms)
    if isinstance(x, Zero):
        return frozenset()
    if isinstance(x, Plus):
        return naive_language(x.left, n_tests, n_letters, k) | naive_language(
            x.right, n_tests, n_letters, k
        )
    if isinstance(x, Dot):
        return _naive_product(
            naive_language(x.left, n_tests, n_letters, k),
            naive_language(x.right, n_tests, n_letters, k),
            k,
        )
    if isinstance(x, Star):
        inner = naive_language(x.arg, n_tests, n_letters, k)
        closure = frozenset(GuardedString.atom(a) for a in atoms)
        while True:
            nxt = closure | _naive_product(inner, closure, k)
            if nxt == closure:
                return closure
            closure = nxt
    raise TypeError(x)


def _naive_product(xs, ys, k):
    out = set()
    for u in xs:
        for v in ys:
            w = gs_fuse(u, v)
            if w is not None and len(w) <= k:
                out.add(w)
    return frozenset(out)


def all_strings(n_tests: int, n_letters: int, k: int):
    atoms = range(1 << n_tests)
    for m in range(k + 1):
        for ats in product(atoms, repeat=m + 1):
            for ls in product(range(n_letters), repeat=m):
                yield GuardedString.from_parts(ats, ls)


# random generation with an explicit RNG (acceptance criteria use fixed seeds)


def random_bool(rng: random.Random, n_tests: int, depth: int = 2):
    r = rng.random()
    if depth == 0 or r < 0.45:
        if n_tests == 0 or rng.random() < 0.1:
            return rng.choice([TOP, BOT])
        return PrimTest(rng.randrange(n_tests))
    if r < 0.65:
        return Not(random_bool(rng, n_tests, depth - 1))
    op = And if rng.random() < 0.5 else Or
    return op(random_bool(rng, n_tests, depth - 1), random_bool(rng, n_tests, depth - 1))


def random_expr(rng: random.Random, size: int, n_tests: int = 2, n_letters: int = 2) -> KatExpr:
    """A normalised expression built from at most ``size`` constructor nodes."""
    if size <= 1:
        r = rng.random()
        if r < 0.55 and n_letters:
            return Letter(rng.randrange(n_letters))
        if r < 0.9:
            return Test(random_bool(rng, n_tests, 1))
        return rng.choice([One(), Zero()])
    r = rng.random()
    if r < 0.2:
        return mk_star(random_expr(rng, size - 1, n_tests, n_letters))
    left = rng.randint(1, size - 2) if size > 2 else 1
    a = random_expr(rng, left, n_tests, n_letters)
    b = random_expr(rng, max(1, size - 1 - left), n_tests, n_letters)
    return mk_dot(a, b) if r < 0.6 else mk_plus(a, b)


def mutate(rng: random.Random, x: KatExpr, n_tests: int = 2, n_letters: int = 2) -> KatExpr:
    """Rewrite ``x`` by a valid law, or perturb it slightly."""
    choice = rng.randrange(8)
    if choice == 0:
        return mk_plus(x, x)
    if choice == 1:
        return mk_dot(mk_star(x), mk_star(x)) if not isinstance(x, Star) else mk_dot(x, x)
    if choice == 2:
        return mk_plus(x, Zero())
    if choice == 3:
        return mk_dot(Test(Or(PrimTest(0), Not(PrimTest(0)))), x)
    if choice == 4:
        return mk_star(x)
    if choice == 5:
        return mk_plus(x, random_expr(rng, 1, n_tests, n_letters))
    if choice == 6:
        return mk_dot(x, Test(PrimTest(rng.randrange(n_tests))))
    return mk_plus(mk_dot(Test(PrimTest(0)), x), mk_dot(Test(Not(PrimTest(0))), x))


def random_string(rng: random.Random, n_tests: int, n_letters: int, max_letters: int):
    m = rng.randint(0, max_letters)
    atoms = [rng.randrange(1 << n_tests) for _ in range(m + 1)]
    letters = [rng.randrange(n_letters) for _ in range(m)]
    return GuardedString.from_parts(atoms, letters)


def random_prog(rng: random.Random, depth: int):
    r = rng.random()
    if depth == 0 or r < 0.3:
        return Skp() if rng.random() < 0.15 else Act(rng.randrange(3))
    cond = random_bool(rng, 3, 1)
    if r < 0.55:
        return Seq(random_prog(rng, depth - 1), random_prog(rng, depth - 1))
    if r < 0.8:
        return Ite(cond, random_prog(rng, depth - 1), random_prog(rng, depth - 1))
    return Whl(cond, random_prog(rng, depth - 1))


# hypothesis strategies


def bool_exprs(n_tests: int = 2):
    leaves = st.one_of(
        st.integers(0, n_tests - 1).map(PrimTest), st.sampled_from([TOP, BOT])
    )
    return st.recursive(
        leaves,
        lambda c: st.one_of(
            c.map(Not), st.tuples(c, c).map(lambda t: And(*t)), st.tuples(c, c).map(lambda t: Or(*t))
        ),
        max_leaves=4,
    )


def kat_exprs(n_tests: int = 2, n_letters: int = 2, max_leaves: int = 5, normal: bool = True):
    leaves = st.one_of(
        st.integers(0, n_letters - 1).map(Letter),
        bool_exprs(n_tests).map(Test),
        st.sampled_from([One(), Zero()]),
    )
    if normal:
        dot, plus, star = mk_dot, mk_plus, mk_star
    else:
        dot, plus, star = Dot, Plus, Star

    return st.recursive(
        leaves,
        lambda c: st.one_of(
            c.map(star),
            st.tuples(c, c).map(lambda t: dot(*t)),
            st.tuples(c, c).map(lambda t: plus(*t)),
        ),
        max_leaves=max_leaves,
    )


def guarded_strings(n_tests: int = 2, n_letters: int = 2, max_letters: int = 3):
    atom = st.integers(0, (1 << n_tests) - 1)
    return st.integers(0, max_letters).flatmap(
        lambda m: st.tuples(
            st.lists(atom, min_size=m + 1, max_size=m + 1),
            st.lists(st.integers(0, n_letters - 1), min_size=m, max_size=m),
        ).map(lambda t: GuardedString.from_parts(*t))
    )


# relational checks


def holds(eq: Equation, interp: RelInterp) -> bool:
    lhs, rhs = rel_eval(eq.lhs, interp), rel_eval(eq.rhs, interp)
    return lhs <= rhs if eq.relation == "<=" else lhs == rhs


def force_letter_absorb(interp: RelInterp, a, p: int, side: str) -> RelInterp:
    """Rewire letter ``p`` so that ``[a]p == [a]`` (or ``p[a] == [a]``) holds."""
    good = {s for s, _ in rel_eval(Test(a), interp)}
    rel = set(interp.letter_rels[p])
    if side == "left":
        rel = {(i, j) for i, j in rel if i not in good} | {(s, s) for s in good}
    else:
        rel = {(i, j) for i, j in rel if j not in good} | {(s, s) for s in good}
    rels = list(interp.letter_rels)
    rels[p] = frozenset(rel)
    return RelInterp(interp.state_count, tuple(rels), interp.test_sets)
