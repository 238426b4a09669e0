"""Ground-truth semantics: atoms, guarded strings, bounded guarded-string
languages computed by brute force, and finite relational models.

Nothing in this module looks at derivatives; it is the oracle the decision
procedure is tested against.

Atoms are plain ints in ``[0, 2**n)``; bit ``i`` is the truth value of the
``i``-th declared test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from katcheck.kernels import fuse_or
from katcheck.syntax import (
    And,
    BoolExpr,
    Bot,
    Dot,
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
    Top,
    Zero,
)

# dense oracle layers beyond this many cells are refused
DEFAULT_MAX_CELLS = 1 << 26


class OracleTooLarge(ValueError):
    """The bounded universe of guarded strings is too big to enumerate."""


def atom_satisfies(atom: int, a: BoolExpr) -> bool:
    if isinstance(a, PrimTest):
        return bool(atom >> a.index & 1)
    if isinstance(a, And):
        return atom_satisfies(atom, a.left) and atom_satisfies(atom, a.right)
    if isinstance(a, Or):
        return atom_satisfies(atom, a.left) or atom_satisfies(atom, a.right)
    if isinstance(a, Not):
        return not atom_satisfies(atom, a.arg)
    if isinstance(a, Top):
        return True
    if isinstance(a, Bot):
        return False
    raise TypeError(f"not a Boolean expression: {a!r}")


def sat_mask(a: BoolExpr, n_tests: int) -> int:
    """Bitmask over all ``2**n_tests`` atoms of those satisfying ``a``."""
    n_atoms = 1 << n_tests
    full = (1 << n_atoms) - 1
    if isinstance(a, PrimTest):
        mask = 0
        for atom in range(n_atoms):
            if atom >> a.index & 1:
                mask |= 1 << atom
        return mask
    if isinstance(a, And):
        return sat_mask(a.left, n_tests) & sat_mask(a.right, n_tests)
    if isinstance(a, Or):
        return sat_mask(a.left, n_tests) | sat_mask(a.right, n_tests)
    if isinstance(a, Not):
        return full & ~sat_mask(a.arg, n_tests)
    if isinstance(a, Top):
        return full
    if isinstance(a, Bot):
        return 0
    raise TypeError(f"not a Boolean expression: {a!r}")


# Guarded strings -----------------------------------------------------------


@dataclass(frozen=True)
class GuardedString:
    """``alpha_0 p_1 alpha_1 ... p_m alpha_m`` stored as ``body`` pairs plus ``last``."""

    body: tuple[tuple[int, int], ...]
    last: int

    def __post_init__(self):
        object.__setattr__(self, "body", tuple((int(a), int(p)) for a, p in self.body))

    @classmethod
    def atom(cls, alpha: int) -> GuardedString:
        return cls((), alpha)

    @classmethod
    def from_parts(cls, atoms: Sequence[int], letters: Sequence[int]) -> GuardedString:
        if len(atoms) != len(letters) + 1:
            raise ValueError("need exactly one more atom than letters")
        return cls(tuple(zip(atoms, letters)), atoms[-1])

    @property
    def first(self) -> int:
        return self.body[0][0] if self.body else self.last

    @property
    def atoms(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.body) + (self.last,)

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(p for _, p in self.body)

    def __len__(self):
        return len(self.body)


def gs_fuse(u: GuardedString, v: GuardedString) -> Optional[GuardedString]:
    """Fusion product; None when the boundary atoms differ."""
    if u.last != v.first:
        return None
    return GuardedString(u.body + v.body, v.last)


def layer_size(n_atoms: int, n_letters: int, m: int) -> int:
    return n_atoms * (n_letters * n_atoms) ** m


def encode(u: GuardedString, n_atoms: int, n_letters: int) -> int:
    """Position of ``u`` inside its length layer."""
    idx = u.first
    atoms = u.atoms
    for t, p in enumerate(u.letters):
        idx = (idx * n_letters + p) * n_atoms + atoms[t + 1]
    return idx


def decode(idx: int, m: int, n_atoms: int, n_letters: int) -> GuardedString:
    atoms = []
    letters = []
    for _ in range(m):
        idx, atom = divmod(idx, n_atoms)
        idx, p = divmod(idx, n_letters)
        atoms.append(atom)
        letters.append(p)
    atoms.append(idx)
    atoms.reverse()
    letters.reverse()
    return GuardedString.from_parts(atoms, letters)


class BoundedLanguage:
    """The guarded strings of a language with at most ``bound`` letters.

    Stored densely: one ``uint8`` array per letter count (see ``_kernels_py``
    for the layout). Supports membership, iteration, equality and inclusion.
    """

    def __init__(self, n_atoms: int, n_letters: int, layers: Sequence[np.ndarray]):
        self.n_atoms = n_atoms
        self.n_letters = n_letters
        self.layers = tuple(layers)
        for layer in self.layers:
            layer.flags.writeable = False

    @property
    def bound(self) -> int:
        return len(self.layers) - 1

    def __contains__(self, u: GuardedString) -> bool:
        m = len(u)
        if m > self.bound:
            return False
        return bool(self.layers[m][encode(u, self.n_atoms, self.n_letters)])

    def __iter__(self) -> Iterator[GuardedString]:
        for m, layer in enumerate(self.layers):
            for idx in np.flatnonzero(layer):
                yield decode(int(idx), m, self.n_atoms, self.n_letters)

    def __len__(self):
        return sum(int(np.count_nonzero(layer)) for layer in self.layers)

    @property
    def strings(self) -> frozenset[GuardedString]:
        return frozenset(self)

    def _compatible(self, other: BoundedLanguage) -> bool:
        return (self.n_atoms, self.n_letters, self.bound) == (
            other.n_atoms,
            other.n_letters,
            other.bound,
        )

    def __eq__(self, other):
        if not isinstance(other, BoundedLanguage):
            return NotImplemented
        return self._compatible(other) and all(
            np.array_equal(a, b) for a, b in zip(self.layers, other.layers)
        )

    __hash__ = None

    def __le__(self, other: BoundedLanguage) -> bool:
        if not self._compatible(other):
            raise ValueError("languages over different universes")
        return all(not np.any(a & ~b) for a, b in zip(self.layers, other.layers))

    def truncate(self, k: int) -> BoundedLanguage:
        return BoundedLanguage(self.n_atoms, self.n_letters, self.layers[: k + 1])

    def shortest_difference(self, other: BoundedLanguage) -> Optional[GuardedString]:
        """A string with fewest letters in exactly one of the two languages."""
        if not self._compatible(other):
            raise ValueError("languages over different universes")
        for m, (a, b) in enumerate(zip(self.layers, other.layers)):
            diff = np.flatnonzero(a != b)
            if diff.size:
                return decode(int(diff[0]), m, self.n_atoms, self.n_letters)
        return None

    def __repr__(self):
        return f"BoundedLanguage(bound={self.bound}, size={len(self)})"


class _Oracle:
    def __init__(self, sig: Signature, k: int):
        self.sig = sig
        self.k = k
        self.A = sig.n_atoms
        self.L = sig.n_letters
        self.sizes = [layer_size(self.A, self.L, m) for m in range(k + 1)]

    def empty(self) -> list[np.ndarray]:
        return [np.zeros(s, dtype=np.uint8) for s in self.sizes]

    def unit(self) -> list[np.ndarray]:
        layers = self.empty()
        layers[0][:] = 1
        return layers

    def product(self, xs, ys) -> list[np.ndarray]:
        out = self.empty()
        for i, left in enumerate(xs):
            if not left.any():
                continue
            for j in range(self.k - i + 1):
                if ys[j].any():
                    fuse_or(out[i + j], left, ys[j], self.A)
        return out

    def star(self, xs) -> list[np.ndarray]:
        # closure under fusion, seeded with the unit; a new round can only
        # add strings when something was added in the previous one
        closure = self.unit()
        frontier = self.unit()
        while True:
            fused = self.product(xs, frontier)
            added = [f & ~c for f, c in zip(fused, closure)]
            if not any(a.any() for a in added):
                return closure
            closure = [c | a for c, a in zip(closure, added)]
            frontier = added

    def eval(self, x: KatExpr) -> list[np.ndarray]:
        if isinstance(x, Letter):
            layers = self.empty()
            if self.k >= 1:
                layers[1].reshape(self.A, self.L, self.A)[:, x.index, :] = 1
            return layers
        if isinstance(x, Test):
            layers = self.empty()
            mask = sat_mask(x.test, self.sig.n_tests)
            layers[0][:] = [(mask >> atom) & 1 for atom in range(self.A)]
            return layers
        if isinstance(x, One):
            return self.unit()
        if isinstance(x, Zero):
            return self.empty()
        if isinstance(x, Plus):
            return [a | b for a, b in zip(self.eval(x.left), self.eval(x.right))]
        if isinstance(x, Dot):
            return self.product(self.eval(x.left), self.eval(x.right))
        if isinstance(x, Star):
            return self.star(self.eval(x.arg))
        raise TypeError(f"not a KAT expression: {x!r}")


def bounded_language(
    x: KatExpr, sig: Signature, k: int, max_cells: int = DEFAULT_MAX_CELLS
) -> BoundedLanguage:
    """All guarded strings of ``x`` with at most ``k`` letters, by brute force."""
    if k < 0:
        raise ValueError("bound must be non-negative")
    cells = sum(layer_size(sig.n_atoms, sig.n_letters, m) for m in range(k + 1))
    if cells > max_cells:
        raise OracleTooLarge(
            f"oracle universe of {cells} strings exceeds max_cells={max_cells}; lower the bound"
        )
    oracle = _Oracle(sig, k)
    return BoundedLanguage(oracle.A, oracle.L, oracle.eval(x))


# Relational model ----------------------------------------------------------


@dataclass(frozen=True)
class RelInterp:
    state_count: int
    letter_rels: tuple[frozenset[tuple[int, int]], ...]
    test_sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        m = self.state_count
        for rel in self.letter_rels:
            for i, j in rel:
                if not (0 <= i < m and 0 <= j < m):
                    raise ValueError(f"pair {(i, j)} outside [0, {m})")
        for ts in self.test_sets:
            if any(not 0 <= s < m for s in ts):
                raise ValueError(f"test set {set(ts)} outside [0, {m})")


def random_interp(
    sig: Signature, rng: random.Random, max_states: int = 4, density: float = 0.35
) -> RelInterp:
    m = rng.randint(1, max_states)
    rels = tuple(
        frozenset((i, j) for i in range(m) for j in range(m) if rng.random() < density)
        for _ in sig.actions
    )
    tests = tuple(frozenset(s for s in range(m) if rng.random() < 0.5) for _ in sig.tests)
    return RelInterp(m, rels, tests)


def path_interp(u: GuardedString, n_letters: int) -> RelInterp:
    """The linear model whose states are the positions of ``u``."""
    atoms = u.atoms
    m = len(atoms)
    n_tests = max(atoms).bit_length() if atoms else 0
    rels = [set() for _ in range(n_letters)]
    for t, p in enumerate(u.letters):
        rels[p].add((t, t + 1))
    tests = tuple(
        frozenset(t for t, a in enumerate(atoms) if a >> i & 1) for i in range(n_tests)
    )
    return RelInterp(m, tuple(frozenset(r) for r in rels), tests)


def _test_rows(a: BoolExpr, interp: RelInterp) -> int:
    """Bitmask over states satisfying ``a``."""
    full = (1 << interp.state_count) - 1
    if isinstance(a, PrimTest):
        ts = interp.test_sets[a.index] if a.index < len(interp.test_sets) else ()
        return sum(1 << s for s in ts)
    if isinstance(a, And):
        return _test_rows(a.left, interp) & _test_rows(a.right, interp)
    if isinstance(a, Or):
        return _test_rows(a.left, interp) | _test_rows(a.right, interp)
    if isinstance(a, Not):
        return full & ~_test_rows(a.arg, interp)
    if isinstance(a, Top):
        return full
    if isinstance(a, Bot):
        return 0
    raise TypeError(f"not a Boolean expression: {a!r}")


def _compose(r: tuple[int, ...], s: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for row in r:
        acc = 0
        j = 0
        while row:
            if row & 1:
                acc |= s[j]
            row >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def _rel_rows(x: KatExpr, interp: RelInterp) -> tuple[int, ...]:
    m = interp.state_count
    if isinstance(x, Letter):
        rows = [0] * m
        for i, j in interp.letter_rels[x.index]:
            rows[i] |= 1 << j
        return tuple(rows)
    if isinstance(x, Test):
        sat = _test_rows(x.test, interp)
        return tuple((sat & (1 << i)) for i in range(m))
    if isinstance(x, One):
        return tuple(1 << i for i in range(m))
    if isinstance(x, Zero):
        return (0,) * m
    if isinstance(x, Plus):
        return tuple(a | b for a, b in zip(_rel_rows(x.left, interp), _rel_rows(x.right, interp)))
    if isinstance(x, Dot):
        return _compose(_rel_rows(x.left, interp), _rel_rows(x.right, interp))
    if isinstance(x, Star):
        step = _rel_rows(x.arg, interp)
        closure = tuple(1 << i for i in range(m))
        while True:
            nxt = tuple(a | b for a, b in zip(closure, _compose(closure, step)))
            if nxt == closure:
                return closure
            closure = nxt
    raise TypeError(f"not a KAT expression: {x!r}")


def rel_eval(x: KatExpr, interp: RelInterp) -> frozenset[tuple[int, int]]:
    rows = _rel_rows(x, interp)
    return frozenset(
        (i, j) for i, row in enumerate(rows) for j in range(interp.state_count) if row >> j & 1
    )


def gs_member(u: GuardedString, x: KatExpr) -> bool:
    """Whether ``u`` belongs to the guarded-string language of ``x``.

    Evaluates ``x`` in the relational model whose states are the positions
    of ``u``; the segment from the first to the last position is related
    exactly when ``u`` is in the language. Polynomial in ``len(u)``, so it
    also works for signatures too large for ``bounded_language``.
    """
    n_letters = max(letters_upper_bound(x), max(u.letters, default=-1) + 1)
    rows = _rel_rows(x, path_interp(u, n_letters))
    return bool(rows[0] >> len(u) & 1)


def letters_upper_bound(x: KatExpr) -> int:
    if isinstance(x, Letter):
        return x.index + 1
    return max((letters_upper_bound(a) for a in x.args if isinstance(a, KatExpr)), default=0)
