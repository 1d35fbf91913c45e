"""Exact rational linear algebra used by the lattice engines.

Everything here is plain Fraction arithmetic: determinants, inverses,
integer Hermite elimination (kernels and saturations of integer spans),
LLL reduction driven purely by the Gram matrix, and Fincke-Pohst
enumeration of short vectors with exact bound tests.  Floating point never
enters any code path that affects a result.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

__all__ = [
    "EnumerationBudgetExceeded",
    "det",
    "inverse",
    "rank",
    "leading_principal_minors",
    "mat_mul",
    "mat_vec",
    "transpose",
    "identity",
    "gram_of_rows",
    "integer_kernel",
    "saturation",
    "lll_reduce_gram",
    "short_vectors",
]

Matrix = list[list[Fraction]]


class EnumerationBudgetExceeded(RuntimeError):
    """Raised when short-vector enumeration exceeds its node budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def _frac_rows(m) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def identity(d: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Matrix, v) -> list[Fraction]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def gram_of_rows(rows: Matrix, gram: Matrix) -> Matrix:
    """B G B^T for a list of row vectors B."""
    gb = [mat_vec(gram, row) for row in rows]
    return [[sum(x * y for x, y in zip(r, c)) for c in gb] for r in rows]


def det(m) -> Fraction:
    """Determinant by fraction-free-style Gaussian elimination."""
    a = _frac_rows(m)
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        result *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return sign * result


def rank(m) -> int:
    a = _frac_rows(m)
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    rnk = 0
    for col in range(cols):
        pivot = next((r for r in range(rnk, rows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rnk], a[pivot] = a[pivot], a[rnk]
        inv = 1 / a[rnk][col]
        for r in range(rows):
            if r != rnk and a[r][col]:
                factor = a[r][col] * inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[rnk])]
        rnk += 1
        if rnk == rows:
            break
    return rnk


def inverse(m) -> Matrix:
    a = _frac_rows(m)
    n = len(a)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def leading_principal_minors(m) -> list[Fraction]:
    a = _frac_rows(m)
    return [det([row[: k + 1] for row in a[: k + 1]]) for k in range(len(a))]


# ---------------------------------------------------------------------------
# Integer elimination: kernels and saturations.
# ---------------------------------------------------------------------------


def _to_integer_rows(rows) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        mult = 1
        for x in fr:
            mult = mult * x.denominator // gcd(mult, x.denominator)
        out.append([int(x * mult) for x in fr])
    return out


def integer_kernel(m) -> list[list[int]]:
    """Basis of the lattice {x in Z^d : M x = 0} for a matrix with d columns."""
    rows = _to_integer_rows(m)
    if not rows:
        raise ValueError("empty matrix")
    r, d = len(rows), len(rows[0])
    # work rows: (M e_i | e_i); integer row ops keep the pattern (M x | x)
    work = [
        [rows[j][i] for j in range(r)] + [int(i == k) for k in range(d)]
        for i in range(d)
    ]
    pivot_row = 0
    for col in range(r):
        while True:
            nonzero = [i for i in range(pivot_row, d) if work[i][col] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(work[i][col]))
            work[pivot_row], work[best] = work[best], work[pivot_row]
            p = work[pivot_row][col]
            done = True
            for i in range(pivot_row + 1, d):
                q = work[i][col] // p
                if q:
                    work[i] = [a - q * b for a, b in zip(work[i], work[pivot_row])]
                if work[i][col] != 0:
                    done = False
            if done:
                pivot_row += 1
                break
    return [row[r:] for row in work[pivot_row:]]


def saturation(vectors) -> list[list[int]]:
    """Basis of the saturation of the integer span of the given row vectors.

    The saturation is the set of integer points in the rational row space:
    the double integer-kernel of the input.
    """
    vectors = _to_integer_rows(vectors)
    kernel = integer_kernel(vectors)
    if not kernel:
        return [list(row) for row in _to_integer_rows(identity(len(vectors[0])))]
    return integer_kernel(kernel)


# ---------------------------------------------------------------------------
# LLL on a Gram matrix.
# ---------------------------------------------------------------------------


def _gso_from_gram(g: Matrix):
    d = len(g)
    mu = [[Fraction(0)] * d for _ in range(d)]
    norms = [Fraction(0)] * d
    for i in range(d):
        for j in range(i):
            num = g[i][j] - sum(mu[j][k] * mu[i][k] * norms[k] for k in range(j))
            mu[i][j] = num / norms[j]
        norms[i] = g[i][i] - sum(mu[i][k] ** 2 * norms[k] for k in range(i))
    return mu, norms


def _apply_row_op(g: Matrix, u: list[list[int]], target: int, source: int, factor: int):
    d = len(g)
    u[target] = [a - factor * b for a, b in zip(u[target], u[source])]
    for j in range(d):
        g[target][j] -= factor * g[source][j]
    for i in range(d):
        g[i][target] -= factor * g[i][source]


def _swap_rows(g: Matrix, u: list[list[int]], i: int, j: int):
    u[i], u[j] = u[j], u[i]
    g[i], g[j] = g[j], g[i]
    for row in g:
        row[i], row[j] = row[j], row[i]


def lll_reduce_gram(gram, delta: Fraction = Fraction(99, 100)):
    """Exact LLL on a positive-definite rational Gram matrix.

    Returns (U, G') with G' = U G U^T LLL-reduced and U unimodular.  Used
    purely as preprocessing: callers rely only on U being unimodular.
    """
    g = _frac_rows(gram)
    d = len(g)
    u = [[int(i == j) for j in range(d)] for i in range(d)]
    if d <= 1:
        return u, g
    k = 1
    while k < d:
        mu, norms = _gso_from_gram(g)
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                _apply_row_op(g, u, k, j, r)
                mu, norms = _gso_from_gram(g)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            _swap_rows(g, u, k, k - 1)
            k = max(k - 1, 1)
    return u, g


# ---------------------------------------------------------------------------
# Fincke-Pohst enumeration.
# ---------------------------------------------------------------------------


def _quadratic_decomposition(g: Matrix):
    """q with Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2."""
    d = len(g)
    q = [[Fraction(x) for x in row] for row in g]
    for i in range(d):
        if q[i][i] <= 0:
            raise ValueError("gram matrix not positive definite")
        for j in range(i + 1, d):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, d):
            for l in range(k, d):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _floor_sqrt(x: Fraction) -> int:
    # floor of sqrt(num/den), exact
    if x < 0:
        return -1
    return isqrt(x.numerator * x.denominator) // x.denominator


def _int_range(center: Fraction, radius_sq: Fraction):
    """Integers x with (x + center)^2 <= radius_sq (exact endpoints)."""
    if radius_sq < 0:
        return range(0, 0)
    s = _floor_sqrt(radius_sq)
    lo = -center - s - 2
    hi = -center + s + 2
    lo_i = int(lo.__ceil__()) if isinstance(lo, Fraction) else lo
    hi_i = int(hi.__floor__()) if isinstance(hi, Fraction) else hi
    while lo_i <= hi_i and (lo_i + center) ** 2 > radius_sq:
        lo_i += 1
    while hi_i >= lo_i and (hi_i + center) ** 2 > radius_sq:
        hi_i -= 1
    return range(lo_i, hi_i + 1)


def short_vectors(gram, bound, budget: int | None = None):
    """All nonzero x (up to sign) with x G x^T <= bound, with exact norms.

    LLL preprocessing keeps the search tree small; the enumeration itself
    works with exact rationals only.  Results are returned in the original
    coordinates as (vector, norm) pairs sorted by norm then lexicographically.
    Raises EnumerationBudgetExceeded when the node budget is hit.
    """
    bound = Fraction(bound)
    if bound < 0:
        return []
    u, g = lll_reduce_gram(gram)
    d = len(g)
    q = _quadratic_decomposition(g)
    found = []
    nodes = 0

    def recurse(i: int, remaining: Fraction, partial: list[int]):
        nonlocal nodes
        if i < 0:
            vec = [0] * d
            for coeff, row in zip(partial, u):
                for j in range(d):
                    vec[j] += coeff * row[j]
            if any(vec):
                norm = bound - remaining
                # canonical sign: first nonzero coordinate positive
                lead = next(x for x in vec if x)
                if lead < 0:
                    vec = [-x for x in vec]
                found.append((tuple(vec), norm))
            return
        center = sum(q[i][j] * partial_at(j) for j in range(i + 1, d))
        for x in _int_range(center, remaining / q[i][i]):
            nodes += 1
            if budget is not None and nodes > budget:
                raise EnumerationBudgetExceeded(
                    f"enumeration exceeded {budget} nodes",
                    partial=sorted(set(found), key=lambda t: (t[1], t[0])),
                )
            partial[i] = x
            recurse(i - 1, remaining - q[i][i] * (x + center) ** 2, partial)
        partial[i] = 0

    state = [0] * d

    def partial_at(j: int) -> int:
        return state[j]

    recurse(d - 1, bound, state)
    uniq = sorted(set(found), key=lambda t: (t[1], t[0]))
    return uniq
