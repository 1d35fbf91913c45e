"""Tensor, symmetric and wedge powers of euclidean lattices.

The symmetric power carries the quotient norm of the tensor power, which
on monomials is the permanent inner product <x_1...x_n, y_1...y_n> =
per(<x_i, y_j>)/n!.  The wedge power Gram is the matrix of r x r minors
(Cauchy-Binet); on pure wedges this agrees with the infimum norm, which is
all that degree computations evaluate.

Basis orderings are fixed for reproducibility: exponent vectors in
reverse-lexicographic order, subsets in colexicographic order.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial

from . import linalg
from .lattices import EuclideanLattice, LatticeError, ResourceError

__all__ = [
    "tensor",
    "sym_power",
    "wedge_power",
    "monomial_basis",
    "subset_basis",
    "DEFAULT_SYM_CAP",
]

DEFAULT_SYM_CAP = 256


def tensor(a: EuclideanLattice, b: EuclideanLattice) -> EuclideanLattice:
    """Kronecker-product Gram; basis e_i (x) f_j in i-major order."""
    da, db = a.dim, b.dim
    rows = []
    for i in range(da):
        for k in range(db):
            row = []
            for j in range(da):
                for l in range(db):
                    row.append(a.gram[i][j] * b.gram[k][l])
            rows.append(tuple(row))
    return EuclideanLattice(tuple(rows))


def monomial_basis(d: int, n: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree n in revlex order."""
    exps = [
        k
        for k in itertools.product(range(n + 1), repeat=d)
        if sum(k) == n
    ]
    return sorted(exps, key=lambda k: k[::-1])


def subset_basis(d: int, r: int) -> list[tuple[int, ...]]:
    """r-subsets of {0..d-1} in colex order."""
    return sorted(itertools.combinations(range(d), r), key=lambda s: s[::-1])


def _permanent(m: list[list[Fraction]]) -> Fraction:
    """Ryser's formula, exact rationals."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for mask in range(1, 1 << n):
        bits = [j for j in range(n) if mask >> j & 1]
        prod = Fraction(1)
        for row in m:
            s = sum(row[j] for j in bits)
            if s == 0:
                prod = Fraction(0)
                break
            prod *= s
        total += (-1) ** (n - len(bits)) * prod
    return total


def _multiset(exponents: tuple[int, ...]) -> list[int]:
    out = []
    for idx, mult in enumerate(exponents):
        out.extend([idx] * mult)
    return out


def sym_power(
    lat: EuclideanLattice, n: int, cap: int = DEFAULT_SYM_CAP
) -> EuclideanLattice:
    if n < 1:
        raise LatticeError("symmetric power requires n >= 1")
    d = lat.dim
    dim_out = comb(n + d - 1, d - 1)
    if dim_out > cap:
        raise ResourceError(
            f"sym power dimension {dim_out} exceeds cap {cap}"
        )
    basis = monomial_basis(d, n)
    inv_fact = Fraction(1, factorial(n))
    if lat.is_diagonal:
        # per of a diagonal selection: prod q_i^{k_i} * prod k_i!
        rows = []
        for idx, k in enumerate(basis):
            entry = inv_fact
            for i, e in enumerate(k):
                entry *= lat.gram[i][i] ** e * factorial(e)
            row = [Fraction(0)] * dim_out
            row[idx] = entry
            rows.append(tuple(row))
        return EuclideanLattice(tuple(rows))
    sets = [_multiset(k) for k in basis]
    rows = []
    for a in sets:
        row = []
        for b in sets:
            m = [[lat.gram[i][j] for j in b] for i in a]
            row.append(_permanent(m) * inv_fact)
        rows.append(tuple(row))
    return EuclideanLattice(tuple(rows))


def wedge_power(
    lat: EuclideanLattice, r: int, cap: int = DEFAULT_SYM_CAP
) -> EuclideanLattice:
    d = lat.dim
    if not 1 <= r <= d:
        raise LatticeError(f"wedge power rank {r} out of range 1..{d}")
    if comb(d, r) > cap:
        raise ResourceError(f"wedge power dimension {comb(d, r)} exceeds cap {cap}")
    subsets = subset_basis(d, r)
    gram = lat.gram_rows()
    rows = []
    for s in subsets:
        row = []
        for t in subsets:
            row.append(linalg.det([[gram[i][j] for j in t] for i in s]))
        rows.append(tuple(row))
    return EuclideanLattice(tuple(rows))
