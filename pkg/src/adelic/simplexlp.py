"""Exact rational simplex solver with Bland's rule.

Solves max c.x subject to A x <= b with x free, entirely in Fractions.
Free variables are split as differences of nonnegative ones and a two-phase
tableau handles negative right-hand sides.  Bland's anti-cycling rule makes
termination unconditional; with exact arithmetic the optimum is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["LPResult", "solve_lp", "LPError"]


class LPError(RuntimeError):
    pass


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None
    value: Fraction | None
    dual: tuple[Fraction, ...] | None  # one multiplier per constraint


def _pivot(tab, basis, row, col):
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    for r in range(len(tab)):
        if r != row and tab[r][col]:
            f = tab[r][col]
            tab[r] = [a - f * b for a, b in zip(tab[r], tab[row])]
    basis[row] = col


def _run_simplex(tab, basis, ncols):
    """Maximize; objective row is tab[-1] with reduced costs negated
    (standard tableau: last row = -c + c_B B^-1 A)."""
    m = len(tab) - 1
    while True:
        obj = tab[-1]
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best_row = None
        best_ratio = None
        for r in range(m):
            if tab[r][enter] > 0:
                ratio = tab[r][-1] / tab[r][enter]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[best_row])
                ):
                    best_ratio, best_row = ratio, r
        if best_row is None:
            return "unbounded"
        _pivot(tab, basis, best_row, enter)


def solve_lp(a, b, c) -> LPResult:
    """max c.x s.t. a x <= b, x free."""
    a = [[Fraction(v) for v in row] for row in a]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    m, n = len(a), len(c)
    if any(len(row) != n for row in a):
        raise LPError("inconsistent LP dimensions")
    # variables: x+ (n), x- (n), slack (m), artificial (m as needed)
    nx = 2 * n
    ncols = nx + m
    rows = []
    for i in range(m):
        row = [a[i][j] for j in range(n)] + [-a[i][j] for j in range(n)]
        row += [Fraction(int(k == i)) for k in range(m)]
        row.append(b[i])
        if b[i] < 0:
            row = [-v for v in row]
        rows.append(row)
    # phase 1: artificial for every row (slack may have entered with -1)
    art_cols = []
    for i in range(m):
        col = ncols + len(art_cols)
        art_cols.append(col)
        for r in range(m):
            rows[r].insert(-1, Fraction(int(r == i)))
    total_cols = ncols + m
    basis = list(art_cols)
    obj1 = [Fraction(0)] * (total_cols + 1)
    for col in art_cols:
        obj1[col] = Fraction(1)
    tab = [row[:] for row in rows] + [obj1]
    # price out artificial basis
    for r, col in enumerate(basis):
        if tab[-1][col]:
            f = tab[-1][col]
            tab[-1] = [x - f * y for x, y in zip(tab[-1], tab[r])]
    status = _run_simplex(tab, basis, total_cols)
    assert status == "optimal"
    if tab[-1][-1] != 0:
        return LPResult("infeasible", None, None, None)
    # drive artificials out of the basis where possible
    for r in range(m):
        if basis[r] in art_cols:
            col = next(
                (j for j in range(ncols) if tab[r][j] != 0), None
            )
            if col is not None:
                _pivot(tab, basis, r, col)
    # phase 2
    obj2 = [Fraction(0)] * (total_cols + 1)
    for j in range(n):
        obj2[j] = -c[j]
        obj2[n + j] = c[j]
    tab[-1] = obj2
    for r, col in enumerate(basis):
        if tab[-1][col]:
            f = tab[-1][col]
            tab[-1] = [x - f * y for x, y in zip(tab[-1], tab[r])]
    # forbid artificials from re-entering
    for col in art_cols:
        if tab[-1][col] < 0:
            tab[-1][col] = Fraction(0)
    status = _run_simplex(tab, basis, ncols)
    if status == "unbounded":
        return LPResult("unbounded", None, None, None)
    xplus = [Fraction(0)] * n
    xminus = [Fraction(0)] * n
    for r, col in enumerate(basis):
        if col < n:
            xplus[col] = tab[r][-1]
        elif col < 2 * n:
            xminus[col - n] = tab[r][-1]
    x = tuple(p - q for p, q in zip(xplus, xminus))
    value = sum(ci * xi for ci, xi in zip(c, x))
    # dual multipliers: reduced cost of slack columns (sign-adjusted rows
    # complicate direct reading; recompute from complementary slackness by
    # solving on the active set would be overkill -- the reduced costs of
    # the slack columns in the final tableau are the duals of the original
    # rows up to the row sign flips applied for phase 1)
    dual = []
    for i in range(m):
        y = tab[-1][nx + i]
        if b[i] < 0:
            y = -y
        dual.append(y)
    return LPResult("optimal", x, value, tuple(dual))
