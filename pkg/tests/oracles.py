"""Independent brute-force oracles used by the test suite.

Everything here is deliberately naive: box enumeration for minima,
subset enumeration with a gcd-of-minors saturation formula for minimal
sublattice determinants, direct integration for volumes.  None of it
shares code paths with the library beyond basic Fraction arithmetic.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction


def mat_inverse(m):
    n = len(m)
    aug = [
        [Fraction(m[i][j]) for j in range(n)]
        + [Fraction(int(i == j)) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_det(m):
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def norm_sq(gram, v):
    d = len(gram)
    return sum(
        Fraction(v[i]) * gram[i][j] * Fraction(v[j])
        for i in range(d)
        for j in range(d)
    )


def _box_radii(gram, bound):
    """|x_i| <= sqrt(inv_gram[i][i] * bound) whenever norm_sq(x) <= bound."""
    inv = mat_inverse(gram)
    radii = []
    for i in range(len(gram)):
        limit = inv[i][i] * Fraction(bound)
        radii.append(math.isqrt(limit.numerator // limit.denominator) + 1)
    return radii


def vectors_up_to(gram, bound):
    """All nonzero integer vectors with norm_sq <= bound, one per +/- pair."""
    d = len(gram)
    radii = _box_radii(gram, bound)
    out = []
    for v in itertools.product(*(range(-r, r + 1) for r in radii)):
        if all(x == 0 for x in v):
            continue
        first = next(x for x in v if x != 0)
        if first < 0:
            continue
        if norm_sq(gram, v) <= bound:
            out.append(v)
    return out


def brute_minima(gram):
    """Sorted successive-minima norm-squares by greedy box enumeration."""
    d = len(gram)
    bound = max(gram[i][i] for i in range(d))
    vecs = sorted(vectors_up_to(gram, bound), key=lambda v: norm_sq(gram, v))
    chosen = []
    norms = []
    for v in vecs:
        rows = chosen + [list(v)]
        if rank_of(rows) == len(rows):
            chosen.append(list(v))
            norms.append(norm_sq(gram, v))
            if len(chosen) == d:
                break
    assert len(chosen) == d
    return norms


def rank_of(rows):
    a = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def _min_vector_norm(gram):
    """Shortest nonzero norm_sq by box enumeration; the shortest vector is
    primitive, so this is also the least rank-1 saturated determinant."""
    bound = max(gram[i][i] for i in range(len(gram)))
    return min(norm_sq(gram, v) for v in vectors_up_to(gram, bound))


def brute_min_dets(gram):
    """Minimal saturated-sublattice determinant for each rank 1..d, d <= 3.

    Rank 1 is the shortest-vector norm.  Rank d-1 uses the orthogonal
    correspondence with primitive dual vectors: a saturated corank-1
    sublattice is the integral kernel of a primitive dual vector w, and
    its determinant is det(gram) * |w|^2_dual.
    """
    d = len(gram)
    best = {d: mat_det(gram)}
    if d >= 2:
        best[1] = _min_vector_norm(gram)
    if d == 3:
        best[2] = best[3] * _min_vector_norm(mat_inverse(gram))
    return best


def corpus(size=100, seed=20240911):
    """Fixed list of small positive-definite Gram matrices, d <= 3."""
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        d = rng.choice([1, 2, 3])
        a = [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)]
        gram = [
            [
                Fraction(
                    sum(a[i][k] * a[j][k] for k in range(d)) + (1 if i == j else 0)
                )
                for j in range(d)
            ]
            for i in range(d)
        ]
        out.append(gram)
    return out


def random_pd_gram(rng, d, spread=2):
    a = [[rng.randint(-spread, spread) for _ in range(d)] for _ in range(d)]
    return [
        [
            Fraction(
                sum(a[i][k] * a[j][k] for k in range(d)) + (1 if i == j else 0)
            )
            for j in range(d)
        ]
        for i in range(d)
    ]


def uniform_simplex_point(rng, vertices):
    """Uniform sample from a 2-simplex given as three float pairs."""
    r1, r2 = rng.random(), rng.random()
    s = math.sqrt(r1)
    a, b, c = vertices
    return tuple(
        (1 - s) * a[k] + s * (1 - r2) * b[k] + s * r2 * c[k] for k in range(2)
    )
