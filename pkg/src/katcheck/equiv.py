"""Deciding equivalence and inclusion of KAT expressions by bisimulation.

The checker explores pairs of derivative sets breadth-first, starting from
``({x}, {y})``. Every reached pair must agree on which atoms they accept; the
first pair that disagrees yields a counterexample, and breadth-first order
makes it one with the fewest letters.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from katcheck.deriv import Derivatives, ExprSet
from katcheck.semantics import GuardedString
from katcheck.syntax import KatExpr, Signature, mk_plus

DEFAULT_MAX_STATES = 100_000


class StateLimitExceeded(RuntimeError):
    """The bisimulation grew past the configured number of pairs."""

    def __init__(self, limit: int):
        super().__init__(f"more than {limit} derivative pairs explored")
        self.limit = limit


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check. ``side`` names the operand that accepts ``witness``."""

    equal: bool
    witness: Optional[GuardedString] = None
    side: Optional[str] = None
    states: int = 0

    def __bool__(self):
        return self.equal

    @classmethod
    def not_equal(cls, witness: GuardedString, side: str, states: int = 0) -> Verdict:
        if side not in ("left", "right"):
            raise ValueError(side)
        return cls(False, witness, side, states)


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def equivalent(
    x: KatExpr, y: KatExpr, sig: Signature, max_states: int = DEFAULT_MAX_STATES
) -> Verdict:
    d = Derivatives(sig)
    n_atoms = sig.n_atoms
    letters = range(sig.n_letters)
    sets: dict[frozenset, ExprSet] = {}

    def canon(elems: frozenset) -> ExprSet:
        s = sets.get(elems)
        if s is None:
            s = sets[elems] = ExprSet(elems)
        return s

    start = (canon(frozenset([x])), canon(frozenset([y])))
    # pair -> (parent pair, atom, letter) for witness reconstruction
    parent: dict[tuple[ExprSet, ExprSet], Optional[tuple]] = {start: None}
    queue = deque([start])

    while queue:
        pair = queue.popleft()
        left, right = pair
        e_left = d.eps_set(left)
        mismatch = e_left ^ d.eps_set(right)
        if mismatch:
            alpha = _lowest_bit(mismatch)
            body = []
            node = pair
            while parent[node] is not None:
                node, atom, p = parent[node]
                body.append((atom, p))
            body.reverse()
            side = "left" if e_left >> alpha & 1 else "right"
            return Verdict.not_equal(GuardedString(tuple(body), alpha), side, len(parent))
        if not left.elems and not right.elems:
            continue
        for p in letters:
            dl = d.pderiv_set(p, left)
            dr = d.pderiv_set(p, right)
            if not dl and not dr:
                continue
            seen_here: set = set()
            for alpha in range(n_atoms):
                kl = frozenset(e for e, m in dl.items() if m >> alpha & 1)
                kr = frozenset(e for e, m in dr.items() if m >> alpha & 1)
                if (kl, kr) in seen_here:
                    continue
                seen_here.add((kl, kr))
                nxt = (canon(kl), canon(kr))
                if nxt in parent:
                    continue
                parent[nxt] = (pair, alpha, p)
                if len(parent) > max_states:
                    raise StateLimitExceeded(max_states)
                queue.append(nxt)
    return Verdict(True, states=len(parent))


def included(
    x: KatExpr, y: KatExpr, sig: Signature, max_states: int = DEFAULT_MAX_STATES
) -> Verdict:
    """``x <= y`` decided as ``x + y == y``; a witness lies in x but not y."""
    return equivalent(mk_plus(x, y), y, sig, max_states)
