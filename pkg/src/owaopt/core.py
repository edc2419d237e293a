"""Ordered weighted average objectives over binary design vectors.

The operator evaluates a feasible point x by sorting the outcome vector
y = Cx non-increasingly and weighting the sorted values by rank:

    value(x) = sum_j omega[j] * (j-th largest entry of Cx)

Weights attach to ranks, not to objectives, which makes the objective
piecewise linear and, for non-monotone weights, non-convex.  This module
holds the exact-arithmetic evaluation path, the ordered-median and
vector-assignment reductions to a plain cost matrix, and the two binary
encodings of sorting permutations used by the model builders: position
matrices z (z[i][j] = 1 iff objective i sits at sorted position j) and
relative-position matrices s (s[i][j] = 1 iff objective i is placed
before position j).

All indices are 0-based.  All values are `fractions.Fraction`; float
inputs are read through their decimal literal (``0.4`` means 2/5).
"""

from __future__ import annotations

import numbers
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations as _all_permutations
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "CostMatrix",
    "WeightVector",
    "OutcomeVector",
    "Permutation",
    "PositionMatrixZ",
    "RelativePositionMatrixS",
    "to_rational",
    "compute_outcomes",
    "sort_outcomes",
    "evaluate_owa",
    "om_as_owa",
    "vaom_as_owa",
    "hurwicz_weights",
    "z_of_permutation",
    "s_of_permutation",
    "permutation_of_z",
    "permutation_of_s",
    "s_from_z",
    "z_from_s",
    "all_permutations",
]


def to_rational(value) -> Fraction:
    """Coerce a number to an exact Fraction.

    Floats are converted via their repr so that decimal-looking inputs
    stay exact (0.4 -> 2/5), which is what config files and CLI flags
    mean in practice.  Strings accept both "2/5" and "0.4".
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a valid rational")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def _rational_tuple(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_rational(v) for v in values)


@dataclass(frozen=True)
class CostMatrix:
    """p x n matrix of non-negative rational costs; row i is objective i."""

    p: int
    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.p < 1 or self.n < 1:
            raise ValueError("cost matrix needs at least one row and column")
        if len(self.entries) != self.p or any(len(r) != self.n for r in self.entries):
            raise ValueError("entries do not match declared shape")
        for row in self.entries:
            for v in row:
                if v < 0:
                    raise ValueError("cost entries must be non-negative")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "CostMatrix":
        entries = tuple(_rational_tuple(r) for r in rows)
        if not entries:
            raise ValueError("empty cost matrix")
        return cls(p=len(entries), n=len(entries[0]), entries=entries)

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for row in self.entries for v in row)


@dataclass(frozen=True)
class WeightVector:
    """Rank weights omega; omega[0] multiplies the largest outcome."""

    omega: tuple[Fraction, ...]
    signed_allowed: bool = False

    def __post_init__(self):
        if not self.omega:
            raise ValueError("empty weight vector")
        if not self.signed_allowed and any(w < 0 for w in self.omega):
            raise ValueError("negative weights require signed_allowed=True")

    @classmethod
    def of(cls, values: Sequence, signed_allowed: bool = False) -> "WeightVector":
        return cls(omega=_rational_tuple(values), signed_allowed=signed_allowed)

    @property
    def p(self) -> int:
        return len(self.omega)

    def is_signed(self) -> bool:
        return any(w < 0 for w in self.omega)

    def is_integral(self) -> bool:
        return all(w.denominator == 1 for w in self.omega)


@dataclass(frozen=True)
class OutcomeVector:
    """Outcome values y = Cx for some design vector x."""

    values: tuple[Fraction, ...]

    @property
    def p(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Permutation:
    """A permutation of objectives onto sorted positions.

    pi[i] is the position objective i occupies; sigma[j] is the objective
    sitting at position j.  The two arrays are mutually inverse.
    """

    pi: tuple[int, ...]
    sigma: tuple[int, ...]

    def __post_init__(self):
        p = len(self.pi)
        if sorted(self.pi) != list(range(p)) or len(self.sigma) != p:
            raise ValueError("pi is not a permutation of 0..p-1")
        for i, j in enumerate(self.pi):
            if self.sigma[j] != i:
                raise ValueError("pi and sigma are not mutually inverse")

    @classmethod
    def from_pi(cls, pi: Sequence[int]) -> "Permutation":
        pi = tuple(pi)
        sigma = [0] * len(pi)
        for i, j in enumerate(pi):
            sigma[j] = i
        return cls(pi=pi, sigma=tuple(sigma))

    @classmethod
    def from_sigma(cls, sigma: Sequence[int]) -> "Permutation":
        sigma = tuple(sigma)
        pi = [0] * len(sigma)
        for j, i in enumerate(sigma):
            pi[i] = j
        return cls(pi=tuple(pi), sigma=sigma)

    @property
    def p(self) -> int:
        return len(self.pi)


@dataclass(frozen=True)
class PositionMatrixZ:
    """Binary assignment matrix: z[i][j] = 1 iff objective i is at position j."""

    z: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = len(self.z)
        if any(len(r) != p for r in self.z):
            raise ValueError("z must be square")
        if any(v not in (0, 1) for r in self.z for v in r):
            raise ValueError("z must be binary")
        for j in range(p):
            if sum(self.z[i][j] for i in range(p)) != 1:
                raise ValueError(f"column {j} of z must sum to 1")
        for i in range(p):
            if sum(self.z[i]) != 1:
                raise ValueError(f"row {i} of z must sum to 1")

    @property
    def p(self) -> int:
        return len(self.z)


@dataclass(frozen=True)
class RelativePositionMatrixS:
    """Binary matrix: s[i][j] = 1 iff objective i is placed before position j."""

    s: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = len(self.s)
        if any(len(r) != p for r in self.s):
            raise ValueError("s must be square")
        if any(v not in (0, 1) for r in self.s for v in r):
            raise ValueError("s must be binary")
        for j in range(p):
            if sum(self.s[i][j] for i in range(p)) != j:
                raise ValueError(f"column {j} of s must sum to {j}")
        for i in range(p):
            if self.s[i][0] != 0:
                raise ValueError("no objective is placed before position 0")
            for j in range(p - 1):
                if self.s[i][j + 1] < self.s[i][j]:
                    raise ValueError("rows of s must be non-decreasing")

    @property
    def p(self) -> int:
        return len(self.s)


def compute_outcomes(C: CostMatrix, x: Sequence) -> OutcomeVector:
    """y = Cx with exact arithmetic."""
    xs = _rational_tuple(x)
    if len(xs) != C.n:
        raise ValueError(f"x has length {len(xs)}, expected {C.n}")
    values = tuple(sum((c * v for c, v in zip(row, xs)), Fraction(0)) for row in C.entries)
    return OutcomeVector(values=values)


def sort_outcomes(y: OutcomeVector | Sequence) -> tuple[OutcomeVector, Permutation]:
    """Sort outcomes non-increasingly.

    Returns the sorted vector and the canonical positions permutation:
    sigma[j] is the objective at position j, ties broken by putting the
    smaller objective index first.
    """
    values = y.values if isinstance(y, OutcomeVector) else _rational_tuple(y)
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    perm = Permutation.from_sigma(order)
    return OutcomeVector(values=tuple(values[i] for i in order)), perm


def evaluate_owa(x: Sequence, C: CostMatrix, omega: WeightVector) -> Fraction:
    """Ordered weighted average of the outcomes of x.

    The value does not depend on how ties are broken in the sort: tied
    outcomes contribute the same value at either position.
    """
    if omega.p != C.p:
        raise ValueError(f"{omega.p} weights for {C.p} objectives")
    sorted_y, _ = sort_outcomes(compute_outcomes(C, x))
    return sum((w * v for w, v in zip(omega.omega, sorted_y.values)), Fraction(0))


def om_as_owa(d: Sequence) -> CostMatrix:
    """Ordered median reduction: weight the sorted componentwise costs d_i x_i.

    Returns Diag(d); the OWA of the result equals the ordered median
    operator for the same d and weights.
    """
    ds = _rational_tuple(d)
    n = len(ds)
    rows = [[ds[i] if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    return CostMatrix.from_rows(rows)


def vaom_as_owa(d: Sequence[Sequence], gamma: Sequence[Sequence], a: Sequence) -> CostMatrix:
    """Vector-assignment reduction to a block cost matrix.

    Customer i served from facility k at closeness level l incurs
    a[i] * gamma[i][l] * d[i][k].  Design vectors are laid out in p
    blocks of p*q entries (facility-major, level-minor); row i of the
    returned p x (p*p*q) matrix is zero outside customer i's block.
    """
    dm = [_rational_tuple(row) for row in d]
    gm = [_rational_tuple(row) for row in gamma]
    am = _rational_tuple(a)
    p = len(dm)
    if any(len(row) != p for row in dm):
        raise ValueError("distance matrix must be p x p")
    if len(gm) != p or len(am) != p:
        raise ValueError("gamma and demand must have one row/entry per customer")
    q = len(gm[0])
    if any(len(row) != q for row in gm):
        raise ValueError("gamma rows must all have q entries")
    if q > p:
        raise ValueError("cannot open more facilities than candidate sites")
    for i, row in enumerate(gm):
        if sum(row, Fraction(0)) != 1:
            warnings.warn(f"gamma row {i} does not sum to 1", stacklevel=2)
    block = p * q
    rows = []
    for i in range(p):
        row = [Fraction(0)] * (p * block)
        for k in range(p):
            for l in range(q):
                row[i * block + k * q + l] = am[i] * gm[i][l] * dm[i][k]
        rows.append(row)
    return CostMatrix.from_rows(rows)


def hurwicz_weights(alpha, p: int) -> WeightVector:
    """Weights (alpha, 0, ..., 0, 1-alpha): alpha*max + (1-alpha)*min."""
    a = to_rational(alpha)
    if not 0 <= a <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if p < 2:
        raise ValueError("need at least two objectives to mix max and min")
    omega = [a] + [Fraction(0)] * (p - 2) + [1 - a]
    return WeightVector.of(omega)


def z_of_permutation(perm: Permutation) -> PositionMatrixZ:
    p = perm.p
    z = [[0] * p for _ in range(p)]
    for i in range(p):
        z[i][perm.pi[i]] = 1
    return PositionMatrixZ(z=tuple(tuple(r) for r in z))


def s_of_permutation(perm: Permutation) -> RelativePositionMatrixS:
    p = perm.p
    s = [[1 if perm.pi[i] < j else 0 for j in range(p)] for i in range(p)]
    return RelativePositionMatrixS(s=tuple(tuple(r) for r in s))


def permutation_of_z(z: PositionMatrixZ) -> Permutation:
    pi = tuple(row.index(1) for row in z.z)
    return Permutation.from_pi(pi)


def permutation_of_s(s: RelativePositionMatrixS) -> Permutation:
    # Objective i sits at the last position it is not yet placed before.
    p = s.p
    pi = tuple(sum(1 - s.s[i][j] for j in range(p)) - 1 for i in range(p))
    return Permutation.from_pi(pi)


def s_from_z(z: PositionMatrixZ) -> RelativePositionMatrixS:
    """s[i][j] = 1 - sum_{k >= j} z[i][k]."""
    p = z.p
    s = [[1 - sum(z.z[i][j:]) for j in range(p)] for i in range(p)]
    return RelativePositionMatrixS(s=tuple(tuple(r) for r in s))


def z_from_s(s: RelativePositionMatrixS) -> PositionMatrixZ:
    """z[i][j] = s[i][j+1] - s[i][j], with the last column closed by 1 - s[i][p-1]."""
    p = s.p
    z = [
        [(s.s[i][j + 1] - s.s[i][j]) if j < p - 1 else (1 - s.s[i][p - 1]) for j in range(p)]
        for i in range(p)
    ]
    return PositionMatrixZ(z=tuple(tuple(r) for r in z))


def all_permutations(p: int) -> Iterable[Permutation]:
    """Every permutation on p objectives, lexicographic by pi."""
    for pi in _all_permutations(range(p)):
        yield Permutation.from_pi(pi)
