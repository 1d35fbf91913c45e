"""Euclidean lattices over Q: degrees, successive minima, slopes, HN polygons.

A lattice is the standard Z^d with a rational positive-definite Gram
matrix.  All invariants are exact: norms are rationals, degrees and minima
are LogValues, and the Harder-Narasimhan polygon is assembled with exact
slope comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import linalg
from .exactlog import GREATER, LESS, LogValue, compare_values, log_of_rational

__all__ = [
    "EuclideanLattice",
    "MinimaProfile",
    "HNPolygon",
    "MaxSlopeResult",
    "LatticeError",
    "ResourceError",
    "degree",
    "slope",
    "dual",
    "direct_sum",
    "height_of_vector",
    "successive_minima",
    "max_slope",
    "min_slope",
    "hn_polygon",
    "DEFAULT_DIM_CAP",
]

DEFAULT_DIM_CAP = 8
DEFAULT_NODE_BUDGET = 2_000_000
# largest wedge dimension for which we attempt an SVP-based lower bound
WEDGE_SVP_CAP = 12


class LatticeError(ValueError):
    pass


class ResourceError(RuntimeError):
    """Enumeration budget exceeded; carries the best bounds found so far."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class EuclideanLattice:
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(Fraction(x) for x in row) for row in self.gram)
        d = len(g)
        if d == 0 or any(len(row) != d for row in g):
            raise LatticeError("gram matrix must be square and nonempty")
        for i in range(d):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError("gram matrix must be symmetric")
        for minor in linalg.leading_principal_minors(g):
            if minor <= 0:
                raise LatticeError("gram matrix must be positive definite")
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def is_diagonal(self) -> bool:
        return all(
            self.gram[i][j] == 0
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        )

    def gram_rows(self) -> list[list[Fraction]]:
        return [list(row) for row in self.gram]

    def norm_sq(self, v) -> Fraction:
        gv = linalg.mat_vec(self.gram_rows(), [Fraction(x) for x in v])
        return sum(Fraction(x) * y for x, y in zip(v, gv))

    def to_json(self) -> dict:
        return {
            "type": "euclidean",
            "dim": self.dim,
            "gram": [[str(x) for x in row] for row in self.gram],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EuclideanLattice":
        if obj.get("type") != "euclidean":
            raise LatticeError(f"not a euclidean lattice object: {obj.get('type')}")
        gram = tuple(tuple(Fraction(x) for x in row) for row in obj["gram"])
        lat = cls(gram)
        if "dim" in obj and int(obj["dim"]) != lat.dim:
            raise LatticeError("declared dim does not match gram size")
        return lat

    @classmethod
    def diagonal(cls, entries) -> "EuclideanLattice":
        entries = [Fraction(q) for q in entries]
        d = len(entries)
        return cls(
            tuple(
                tuple(entries[i] if i == j else Fraction(0) for j in range(d))
                for i in range(d)
            )
        )

    @classmethod
    def standard(cls, d: int) -> "EuclideanLattice":
        return cls.diagonal([1] * d)


@dataclass(frozen=True)
class MinimaProfile:
    values: tuple[LogValue, ...]
    witnesses: tuple[tuple[int, ...], ...]
    norms: tuple[Fraction, ...]


@dataclass(frozen=True)
class MaxSlopeResult:
    value: LogValue
    certified: bool
    witness: tuple[tuple[int, ...], ...]
    witness_rank: int


@dataclass(frozen=True)
class HNPolygon:
    """Upper hull of (rank, degree) over saturated sublattices."""

    vertices: tuple[tuple[int, LogValue], ...]
    slopes: tuple[LogValue, ...]  # mu-hat_1 >= ... >= mu-hat_d
    certified: bool
    witnesses: dict = field(compare=False, default_factory=dict)


def degree(lat: EuclideanLattice) -> LogValue:
    return log_of_rational(linalg.det(lat.gram_rows())).scale(Fraction(-1, 2))


def slope(lat: EuclideanLattice) -> LogValue:
    return degree(lat).scale(Fraction(1, lat.dim))


def dual(lat: EuclideanLattice) -> EuclideanLattice:
    inv = linalg.inverse(lat.gram_rows())
    return EuclideanLattice(tuple(tuple(row) for row in inv))


def direct_sum(a: EuclideanLattice, b: EuclideanLattice) -> EuclideanLattice:
    da, db = a.dim, b.dim
    zero = Fraction(0)
    rows = []
    for i in range(da):
        rows.append(tuple(a.gram[i]) + (zero,) * db)
    for i in range(db):
        rows.append((zero,) * da + tuple(b.gram[i]))
    return EuclideanLattice(tuple(rows))


def height_of_vector(lat: EuclideanLattice, s) -> LogValue:
    """Height of a nonzero rational vector: archimedean norm of its
    primitive integer rescaling (product-formula invariant)."""
    s = [Fraction(x) for x in s]
    if all(x == 0 for x in s):
        raise LatticeError("height of the zero vector")
    mult = 1
    for x in s:
        mult = mult * x.denominator // _gcd(mult, x.denominator)
    ints = [int(x * mult) for x in s]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    prim = [x // g for x in ints]
    return log_of_rational(lat.norm_sq(prim)).scale(Fraction(1, 2))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# Successive minima.
# ---------------------------------------------------------------------------


def successive_minima(
    lat: EuclideanLattice,
    cap: int = DEFAULT_DIM_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> MinimaProfile:
    d = lat.dim
    if d > cap:
        raise ResourceError(f"dimension {d} exceeds enumeration cap {cap}")
    _, reduced = linalg.lll_reduce_gram(lat.gram_rows())
    bound = max(reduced[i][i] for i in range(d))
    try:
        pool = linalg.short_vectors(lat.gram_rows(), bound, budget=budget)
    except linalg.EnumerationBudgetExceeded as exc:
        raise ResourceError(str(exc), best=exc.partial) from exc
    chosen: list[tuple[int, ...]] = []
    norms: list[Fraction] = []
    rows: list[list[Fraction]] = []
    for vec, norm in pool:
        candidate = rows + [[Fraction(x) for x in vec]]
        if linalg.rank(candidate) == len(candidate):
            chosen.append(vec)
            norms.append(norm)
            rows = candidate
            if len(chosen) == d:
                break
    assert len(chosen) == d, "reduced-basis bound must yield d independent vectors"
    values = tuple(log_of_rational(n).scale(Fraction(1, 2)) for n in norms)
    return MinimaProfile(values=values, witnesses=tuple(chosen), norms=tuple(norms))


# ---------------------------------------------------------------------------
# Minimal determinants of saturated sublattices, rank by rank.
# ---------------------------------------------------------------------------


def _colex_subsets(d: int, r: int) -> list[tuple[int, ...]]:
    return sorted(itertools.combinations(range(d), r), key=lambda s: s[::-1])


def _wedge_gram(gram: list[list[Fraction]], r: int) -> list[list[Fraction]]:
    subsets = _colex_subsets(len(gram), r)
    out = []
    for s in subsets:
        row = []
        for t in subsets:
            row.append(linalg.det([[gram[i][j] for j in t] for i in s]))
        out.append(row)
    return out


def _hodge_covector(wedge_vec, d: int) -> list[int]:
    """Covector y with ker(y) the saturated rank d-1 sublattice of a
    decomposable (d-1)-wedge vector."""
    subsets = _colex_subsets(d, d - 1)
    y = [0] * d
    for coeff, s in zip(wedge_vec, subsets):
        (missing,) = set(range(d)) - set(s)
        # sign of the permutation sorting (s..., missing) to (0..d-1)
        sign = (-1) ** (d - 1 - missing)
        y[missing] = sign * coeff
    return y


def _shortest(gram, budget) -> tuple[Fraction, tuple[int, ...]]:
    _, reduced = linalg.lll_reduce_gram(gram)
    bound = min(reduced[i][i] for i in range(len(gram)))
    pool = linalg.short_vectors(gram, bound, budget=budget)
    vec, norm = pool[0]
    return norm, vec


def _minkowski_pool_factor(r: int) -> Fraction:
    # valid bound on prod ||b_i||^2 / det(F) for a well-reduced basis of a
    # rank-r lattice: r^r covers r <= 3 (minima bases exist); the extra
    # product covers the general basis-from-minima construction
    f = Fraction(r) ** r
    for i in range(1, r + 1):
        f *= max(Fraction(1), Fraction(i, 4))
    return f


def _min_det_by_rank(
    lat: EuclideanLattice, budget: int
) -> tuple[list[Fraction], list[list[list[int]]], list[bool]]:
    """For each rank r=1..d: minimal determinant of a saturated rank-r
    sublattice, a witness basis, and a certification flag."""
    d = lat.dim
    gram = lat.gram_rows()
    dets: list[Fraction] = [None] * (d + 1)
    wits: list[list[list[int]]] = [None] * (d + 1)
    cert: list[bool] = [False] * (d + 1)

    if lat.is_diagonal:
        diag = sorted(
            range(d), key=lambda i: (lat.gram[i][i], i)
        )  # ascending entries
        for r in range(1, d + 1):
            picked = diag[:r]
            dets[r] = _prod(lat.gram[i][i] for i in picked)
            wits[r] = [[int(i == k) for i in range(d)] for k in picked]
            cert[r] = True  # Cauchy-Binet: any rank-r det >= r smallest entries
        return dets[1:], wits[1:], cert[1:]

    dets[d] = linalg.det(gram)
    wits[d] = [[int(i == j) for j in range(d)] for i in range(d)]
    cert[d] = True

    lam1_sq, sv = _shortest(gram, budget)
    dets[1] = lam1_sq
    wits[1] = [list(sv)]
    cert[1] = True

    if d >= 2 and dets[d - 1] is None:
        wgram = _wedge_gram(gram, d - 1)
        wnorm, wvec = _shortest(wgram, budget)
        y = _hodge_covector(wvec, d)
        basis = linalg.integer_kernel([y])
        sub = linalg.gram_of_rows([[Fraction(x) for x in b] for b in basis], gram)
        assert linalg.det(sub) == wnorm
        dets[d - 1] = wnorm
        wits[d - 1] = basis
        cert[d - 1] = True

    for r in range(2, d - 1):
        best_det, best_wit = _achieved_min_det(lat, r, budget)
        lower = None
        if comb(d, r) <= WEDGE_SVP_CAP:
            wgram = _wedge_gram(gram, r)
            lower, _ = _shortest(wgram, budget)
        certified = lower is not None and lower == best_det
        if not certified:
            certified, best_det, best_wit = _certify_by_ball(
                lat, r, best_det, best_wit, lam1_sq, budget
            )
        dets[r] = best_det
        wits[r] = best_wit
        cert[r] = certified
    return dets[1:], wits[1:], cert[1:]


def _prod(it):
    out = Fraction(1)
    for x in it:
        out *= x
    return out


def _achieved_min_det(lat: EuclideanLattice, r: int, budget: int):
    """Determinant achieved by the saturation of the first r LLL rows."""
    u, _ = linalg.lll_reduce_gram(lat.gram_rows())
    basis = linalg.saturation([u[i] for i in range(r)])
    sub = linalg.gram_of_rows([[Fraction(x) for x in b] for b in basis], lat.gram_rows())
    return linalg.det(sub), basis


MAX_POOL = 64
MAX_SUBSETS = 200_000


def _certify_by_ball(lat, r, best_det, best_wit, lam1_sq, budget):
    """Enumerate generators inside the certification ball.

    A minimizing saturated rank-r sublattice has a basis whose vectors all
    have squared norm <= factor * best_det / lam1^(2(r-1)); if the ball and
    the subset search both fit the budget, the minimum found is exact.
    """
    ball = _minkowski_pool_factor(r) * best_det / lam1_sq ** (r - 1)
    try:
        pool = linalg.short_vectors(lat.gram_rows(), ball, budget=budget)
    except linalg.EnumerationBudgetExceeded:
        return False, best_det, best_wit
    if len(pool) > MAX_POOL or comb(len(pool), r) > MAX_SUBSETS:
        return False, best_det, best_wit
    gram = lat.gram_rows()
    for subset in itertools.combinations(pool, r):
        rows = [[Fraction(x) for x in vec] for vec, _ in subset]
        if linalg.rank(rows) != r:
            continue
        basis = linalg.saturation(rows)
        sub = linalg.gram_of_rows([[Fraction(x) for x in b] for b in basis], gram)
        dval = linalg.det(sub)
        if dval < best_det:
            best_det, best_wit = dval, basis
    return True, best_det, best_wit


# ---------------------------------------------------------------------------
# HN polygon and slopes.
# ---------------------------------------------------------------------------


def _deg_of_det(det_val: Fraction) -> LogValue:
    return log_of_rational(det_val).scale(Fraction(-1, 2))


def hn_polygon(
    lat: EuclideanLattice,
    cap: int = DEFAULT_DIM_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> HNPolygon:
    d = lat.dim
    if d > cap:
        raise ResourceError(f"dimension {d} exceeds cap {cap}")
    dets, wits, cert = _min_det_by_rank(lat, budget)
    points: list[tuple[int, LogValue]] = [(0, LogValue())]
    points += [(r, _deg_of_det(dets[r - 1])) for r in range(1, d + 1)]

    # upper concave hull, scanning left to right
    hull: list[tuple[int, LogValue]] = []
    for pt in points:
        while len(hull) >= 2 and not _turns_down(hull[-2], hull[-1], pt):
            hull.pop()
        hull.append(pt)
    # drop interior points below the hull: rebuild keeping only hull chain
    slopes: list[LogValue] = []
    for i in range(1, d + 1):
        seg = _segment_containing(hull, i)
        (r0, p0), (r1, p1) = seg
        slopes.append((p1 - p0).scale(Fraction(1, r1 - r0)))
    witnesses = {r: tuple(tuple(v) for v in wits[r - 1]) for r in range(1, d + 1)}
    return HNPolygon(
        vertices=tuple(hull),
        slopes=tuple(slopes),
        certified=all(cert),
        witnesses=witnesses,
    )


def _turns_down(a, b, c) -> bool:
    """True if b is strictly above the segment a-c (valid hull corner)."""
    (xa, ya), (xb, yb), (xc, yc) = a, b, c
    # compare (yb - ya) * (xc - xa) with (yc - ya) * (xb - xa)
    lhs = (yb - ya).scale(xc - xa)
    rhs = (yc - ya).scale(xb - xa)
    return compare_values(lhs, rhs) == GREATER


def _segment_containing(hull, i: int):
    for (r0, p0), (r1, p1) in zip(hull, hull[1:]):
        if r0 < i <= r1:
            return (r0, p0), (r1, p1)
    raise AssertionError("hull does not cover rank range")


def max_slope(
    lat: EuclideanLattice,
    cap: int = DEFAULT_DIM_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> MaxSlopeResult:
    poly = hn_polygon(lat, cap=cap, budget=budget)
    # mu-hat_max is the first slope; its witness is the smallest hull
    # vertex rank past 0
    first_rank = poly.vertices[1][0]
    return MaxSlopeResult(
        value=poly.slopes[0],
        certified=poly.certified,
        witness=poly.witnesses[first_rank],
        witness_rank=first_rank,
    )


def min_slope(
    lat: EuclideanLattice,
    cap: int = DEFAULT_DIM_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> MaxSlopeResult:
    res = max_slope(dual(lat), cap=cap, budget=budget)
    return MaxSlopeResult(
        value=-res.value,
        certified=res.certified,
        witness=res.witness,
        witness_rank=res.witness_rank,
    )


def slopes_sum_check(poly: HNPolygon, lat: EuclideanLattice) -> bool:
    total = LogValue()
    for s in poly.slopes:
        total = total + s
    return total == degree(lat)
