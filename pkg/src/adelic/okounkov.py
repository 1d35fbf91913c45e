"""Okounkov bodies, roof functions, volume integrals and the Zhang check.

The convex-geometric half of the library: monomial graded series yield
rational polytopes (truncated Okounkov bodies), concave piecewise-affine
roof functions live on them, and exact triangulation turns roof integrals
into chi-volumes.  The Zhang inequality compares the roof maximum with the
normalized chi-volume and detects the equality case, which holds exactly
when the roof is constant.

Roof coefficients may be rational or live in the rational span of logs of
primes (ExactScalar); multi-piece roofs additionally require rational
coefficients so that the affine-cell arrangement stays rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exactlog import ExactScalar, log_of_rational
from .geometry import (
    GeometryError,
    _is_vertex,
    affine_dim,
    clip_simplex,
    convex_hull,
    simplex_volume,
    triangulate,
)

__all__ = [
    "OkounkovError",
    "RationalPolytope",
    "MonomialSeries",
    "AffinePiece",
    "RoofFunction",
    "RoofMaxResult",
    "RoofIntegral",
    "ZhangReport",
    "okounkov_body",
    "roof_max",
    "roof_integral",
    "zhang_check",
    "roof_from_diagonal_lattice",
]

Point = tuple[Fraction, ...]


class OkounkovError(ValueError):
    pass


def _pt(p) -> Point:
    return tuple(Fraction(x) for x in p)


@dataclass(frozen=True)
class RationalPolytope:
    """Bounded rational polytope with validated V- and H-representations.

    ``degenerate`` marks point sets that are not full-dimensional in their
    ambient space; those carry vertices but no facets and have volume 0.
    The ambient dimension 0 point polytope is the (valid, non-degenerate)
    domain of constant roofs in the one-variable case.
    """

    dim: int
    vertices: tuple[Point, ...]
    facets: tuple[tuple[tuple[int, ...], Fraction], ...]
    degenerate: bool = False

    @classmethod
    def from_vertices(cls, points) -> "RationalPolytope":
        pts = sorted(set(_pt(p) for p in points))
        if not pts:
            raise OkounkovError("empty vertex set")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise OkounkovError("mixed point dimensions")
        if d == 0:
            return cls(dim=0, vertices=(tuple(),), facets=tuple())
        if affine_dim(pts) < d:
            verts = tuple(
                p
                for i, p in enumerate(pts)
                if _is_vertex(p, pts[:i] + pts[i + 1 :])
            )
            return cls(dim=d, vertices=verts, facets=tuple(), degenerate=True)
        verts, facets = convex_hull(pts)
        return cls(dim=d, vertices=tuple(verts), facets=tuple(facets))

    @classmethod
    def standard_simplex(cls, d: int) -> "RationalPolytope":
        if d < 0:
            raise OkounkovError("negative dimension")
        if d == 0:
            return cls.from_vertices([tuple()])
        zero = tuple(Fraction(0) for _ in range(d))
        units = [
            tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)
        ]
        return cls.from_vertices([zero] + units)

    def volume(self) -> Fraction:
        if self.degenerate:
            return Fraction(0)
        if self.dim == 0:
            return Fraction(1)
        return sum(
            (simplex_volume(s) for s in self.triangulation()), Fraction(0)
        )

    def triangulation(self) -> list[tuple[Point, ...]]:
        if self.degenerate:
            raise OkounkovError("degenerate polytope has no triangulation")
        if self.dim == 0:
            return [(tuple(),)]
        return triangulate(self.vertices, self.facets)

    def contains(self, point) -> bool:
        p = _pt(point)
        if len(p) != self.dim:
            return False
        if p in self.vertices:
            return True
        return not _is_vertex(p, list(self.vertices))

    def to_json(self) -> dict:
        return {"vertices": [[str(x) for x in p] for p in self.vertices]}

    @classmethod
    def from_json(cls, obj: dict) -> "RationalPolytope":
        if "vertices" not in obj:
            raise OkounkovError("polytope JSON needs a 'vertices' field")
        return cls.from_vertices(
            [tuple(Fraction(x) for x in p) for p in obj["vertices"]]
        )


@dataclass(frozen=True)
class MonomialSeries:
    """Graded series of monomials: level n holds exponent vectors of V_n."""

    levels: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]

    @classmethod
    def of(cls, levels: dict) -> "MonomialSeries":
        norm = []
        dim = None
        for n, exps in sorted(levels.items()):
            n = int(n)
            if n < 1:
                raise OkounkovError("levels are indexed by n >= 1")
            vecs = []
            for e in exps:
                v = tuple(int(x) for x in e)
                if any(x < 0 for x in v):
                    raise OkounkovError("negative exponent")
                if dim is None:
                    dim = len(v)
                elif len(v) != dim:
                    raise OkounkovError("mixed exponent dimensions")
                vecs.append(v)
            if vecs:
                norm.append((n, tuple(sorted(set(vecs)))))
        if not norm:
            raise OkounkovError("series has no nonempty level")
        return cls(levels=tuple(norm))

    @property
    def dim(self) -> int:
        return len(self.levels[0][1][0])

    def to_json(self) -> dict:
        return {
            "levels": {
                str(n): [list(e) for e in exps] for n, exps in self.levels
            }
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MonomialSeries":
        if "levels" not in obj:
            raise OkounkovError("series JSON needs a 'levels' field")
        return cls.of(obj["levels"])


def okounkov_body(series: MonomialSeries) -> RationalPolytope:
    """Hull of the normalized exponents nu/n over all supplied levels.

    This is the truncation-depth inner approximation of the Okounkov body;
    it grows monotonically with the set of levels supplied.
    """
    points = set()
    for n, exps in series.levels:
        for e in exps:
            points.add(tuple(Fraction(x, n) for x in e))
    return RationalPolytope.from_vertices(points)


def _scalar(v) -> ExactScalar:
    return ExactScalar.of(v)


@dataclass(frozen=True)
class AffinePiece:
    gradient: tuple[ExactScalar, ...]
    offset: ExactScalar

    def value_at(self, point: Point) -> ExactScalar:
        acc = self.offset
        for g, x in zip(self.gradient, point):
            acc = acc + g.scale(x)
        return acc

    @property
    def is_rational(self) -> bool:
        return self.offset.log.is_zero() and all(
            g.log.is_zero() for g in self.gradient
        )

    def rational_data(self) -> tuple[list[Fraction], Fraction]:
        return [g.rat for g in self.gradient], self.offset.rat

    def to_json(self) -> dict:
        def enc(s: ExactScalar):
            return str(s.rat) if s.log.is_zero() else s.to_json()

        return {
            "gradient": [enc(g) for g in self.gradient],
            "offset": enc(self.offset),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AffinePiece":
        def dec(v) -> ExactScalar:
            if isinstance(v, dict):
                return ExactScalar.from_json(v)
            return ExactScalar(Fraction(v))

        return cls(
            gradient=tuple(dec(g) for g in obj["gradient"]),
            offset=dec(obj["offset"]),
        )


@dataclass(frozen=True)
class RoofFunction:
    """Concave piecewise-affine function: min over affine pieces."""

    domain: RationalPolytope
    pieces: tuple[AffinePiece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise OkounkovError("roof needs at least one piece")
        d = self.domain.dim
        if any(len(p.gradient) != d for p in self.pieces):
            raise OkounkovError("piece gradient dimension mismatch")

    @classmethod
    def build(cls, domain: RationalPolytope, pieces) -> "RoofFunction":
        norm = []
        for p in pieces:
            if isinstance(p, AffinePiece):
                norm.append(p)
            else:
                grad, off = p
                norm.append(
                    AffinePiece(
                        gradient=tuple(_scalar(g) for g in grad),
                        offset=_scalar(off),
                    )
                )
        return cls(domain=domain, pieces=tuple(norm))

    @classmethod
    def constant(cls, domain: RationalPolytope, value) -> "RoofFunction":
        zero = tuple(ExactScalar(0) for _ in range(domain.dim))
        return cls(domain, (AffinePiece(zero, _scalar(value)),))

    @property
    def is_rational(self) -> bool:
        return all(p.is_rational for p in self.pieces)

    def value_at(self, point) -> ExactScalar:
        p = _pt(point)
        return min(piece.value_at(p) for piece in self.pieces)

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "pieces": [p.to_json() for p in self.pieces],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RoofFunction":
        if "pieces" not in obj or "domain" not in obj:
            raise OkounkovError("roof JSON needs 'domain' and 'pieces'")
        return cls(
            domain=RationalPolytope.from_json(obj["domain"]),
            pieces=tuple(AffinePiece.from_json(p) for p in obj["pieces"]),
        )


@dataclass(frozen=True)
class RoofMaxResult:
    value: ExactScalar
    argmax: Point
    dual: tuple[Fraction, ...] | None  # LP multipliers when the LP path ran


def _essential_pieces(pieces: tuple[AffinePiece, ...]) -> list[AffinePiece]:
    """Drop duplicate pieces and parallel pieces that never attain the min."""
    kept: list[AffinePiece] = []
    for p in pieces:
        dominated = False
        out = []
        for q in kept:
            if all((g - h).is_zero() for g, h in zip(p.gradient, q.gradient)):
                if p.offset >= q.offset:
                    dominated = True
                    out.append(q)
                # else drop q: p has the same gradient and a smaller offset
            else:
                out.append(q)
        kept = out
        if not dominated:
            kept.append(p)
    return kept


def roof_max(roof: RoofFunction) -> RoofMaxResult:
    """Exact maximum of the roof over its domain, with an argmax point."""
    dom = roof.domain
    if dom.degenerate:
        raise OkounkovError("roof domain is degenerate")
    pieces = _essential_pieces(roof.pieces)
    if dom.dim == 0:
        value = min(p.offset for p in pieces)
        return RoofMaxResult(value=value, argmax=tuple(), dual=None)
    if len(pieces) == 1:
        # affine: the maximum sits at a vertex
        piece = pieces[0]
        best_v = dom.vertices[0]
        best = piece.value_at(best_v)
        for v in dom.vertices[1:]:
            val = piece.value_at(v)
            if val > best:
                best, best_v = val, v
        return RoofMaxResult(value=best, argmax=best_v, dual=None)
    if not roof.is_rational:
        raise OkounkovError(
            "multi-piece roofs with non-rational coefficients are unsupported"
        )
    # epigraph LP over (x, t): max t s.t. t <= g.x + o per piece, x in domain
    from .simplexlp import solve_lp

    d = dom.dim
    a, b = [], []
    for p in pieces:
        grad, off = p.rational_data()
        a.append([-g for g in grad] + [Fraction(1)])
        b.append(off)
    for normal, offset in dom.facets:
        a.append([Fraction(n) for n in normal] + [Fraction(0)])
        b.append(offset)
    c = [Fraction(0)] * d + [Fraction(1)]
    res = solve_lp(a, b, c)
    if res.status != "optimal":
        raise OkounkovError(f"roof LP unexpectedly {res.status}")
    argmax = tuple(res.x[:d])
    return RoofMaxResult(
        value=ExactScalar(res.value), argmax=argmax, dual=res.dual
    )


def _affine_cells(roof: RoofFunction):
    """Split the domain into simplices on which a single piece is active.

    Yields (simplex, active_piece) pairs; requires rational coefficients
    whenever more than one essential piece survives.
    """
    dom = roof.domain
    pieces = _essential_pieces(roof.pieces)
    cells = [tuple(s) for s in dom.triangulation()]
    if len(pieces) == 1:
        for cell in cells:
            yield cell, pieces[0]
        return
    if not roof.is_rational:
        raise OkounkovError(
            "multi-piece roofs with non-rational coefficients are unsupported"
        )
    if dom.dim > 3:
        raise OkounkovError(
            "multi-piece roofs are supported in dimension <= 3 only"
        )
    for i, j in itertools.combinations(range(len(pieces)), 2):
        gi, oi = pieces[i].rational_data()
        gj, oj = pieces[j].rational_data()
        normal = [a - c for a, c in zip(gi, gj)]
        if all(n == 0 for n in normal):
            continue
        offset = oj - oi
        split = []
        for cell in cells:
            split.extend(clip_simplex(cell, normal, offset, keep_upper=True))
            split.extend(clip_simplex(cell, normal, offset, keep_upper=False))
        cells = split
    for cell in cells:
        n = len(cell)
        centroid = tuple(
            sum(p[k] for p in cell) / n for k in range(dom.dim)
        )
        active = min(pieces, key=lambda p: p.value_at(centroid))
        yield cell, active


def _cell_integral(cell, piece: AffinePiece) -> ExactScalar:
    vol = simplex_volume(cell) if len(cell[0]) else Fraction(1)
    acc = ExactScalar(0)
    for v in cell:
        acc = acc + piece.value_at(v)
    return acc.scale(vol / len(cell))


def _cell_integral_positive(cell, piece: AffinePiece) -> ExactScalar:
    """Integral of max(0, piece) over the cell."""
    values = [piece.value_at(v) for v in cell]
    if all(v >= 0 for v in values):
        return _cell_integral(cell, piece)
    if all(v <= 0 for v in values):
        return ExactScalar(0)
    if not piece.is_rational:
        raise OkounkovError(
            "sign-changing cells with non-rational coefficients are unsupported"
        )
    grad, off = piece.rational_data()
    acc = ExactScalar(0)
    for part in clip_simplex(cell, grad, -off, keep_upper=True):
        acc = acc + _cell_integral(part, piece)
    return acc


@dataclass(frozen=True)
class RoofIntegral:
    dim: int
    integral: ExactScalar  # integral of G over the domain
    integral_positive: ExactScalar  # integral of max(0, G)
    vol_chi: ExactScalar  # (d+1)! * field_degree * integral
    vol_arith: ExactScalar  # (d+1)! * field_degree * integral_positive
    field_degree: int


def roof_integral(roof: RoofFunction, field_degree: int = 1) -> RoofIntegral:
    """Exact integral of the roof and of its positive part, with the
    normalized chi- and arithmetic volumes."""
    dom = roof.domain
    if dom.degenerate:
        raise OkounkovError("roof domain is degenerate")
    total = ExactScalar(0)
    positive = ExactScalar(0)
    for cell, piece in _affine_cells(roof):
        total = total + _cell_integral(cell, piece)
        positive = positive + _cell_integral_positive(cell, piece)
    norm = Fraction(factorial(dom.dim + 1) * field_degree)
    return RoofIntegral(
        dim=dom.dim,
        integral=total,
        integral_positive=positive,
        vol_chi=total.scale(norm),
        vol_arith=positive.scale(norm),
        field_degree=field_degree,
    )


@dataclass(frozen=True)
class ZhangReport:
    dim: int
    degree: Fraction
    zeta_ess: ExactScalar  # roof maximum (essential minimum, semi-positive)
    h: ExactScalar  # normalized chi-volume
    bound: ExactScalar  # h / ((d+1) * degree)
    equality: bool
    constant_roof: bool

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": str(self.degree),
            "zeta_ess": self.zeta_ess.to_json(),
            "h": self.h.to_json(),
            "bound": self.bound.to_json(),
            "equality": self.equality,
            "constant_roof": self.constant_roof,
        }


def zhang_check(roof: RoofFunction, degree_d) -> ZhangReport:
    """Zhang-type lower bound for the roof maximum.

    Checks zeta_ess >= vol_chi / ((d+1) * degree) exactly and reports the
    equality case, which occurs precisely for constant roofs.
    """
    degree = Fraction(degree_d)
    if degree <= 0:
        raise OkounkovError("degree must be positive")
    dom = roof.domain
    if dom.dim > 0 and dom.volume() == 0:
        raise OkounkovError("zero-volume domain")
    top = roof_max(roof)
    integ = roof_integral(roof)
    bound = integ.vol_chi.scale(Fraction(1, dom.dim + 1) / degree)
    if top.value < bound:
        raise AssertionError("Zhang inequality violated: implementation bug")
    equality = top.value == bound
    vertex_min = min(roof.value_at(v) for v in dom.vertices)
    constant = top.value == vertex_min
    return ZhangReport(
        dim=dom.dim,
        degree=degree,
        zeta_ess=top.value,
        h=integ.vol_chi,
        bound=bound,
        equality=equality,
        constant_roof=constant,
    )


def roof_from_diagonal_lattice(q) -> RoofFunction:
    """Roof on the standard (d-1)-simplex with vertex values -(1/2) ln q_i.

    The vertex at the origin carries q_1 and the unit vector e_j carries
    q_{j+1}; the single affine piece interpolates.  Its maximum is
    -(1/2) ln(min q_i), the asymptotic maximal slope of diag(q).
    """
    qs = [Fraction(x) for x in q]
    if not qs:
        raise OkounkovError("need at least one diagonal entry")
    if any(x <= 0 for x in qs):
        raise OkounkovError("diagonal entries must be positive")
    values = [
        ExactScalar(0, log_of_rational(x).scale(Fraction(-1, 2))) for x in qs
    ]
    d = len(qs) - 1
    domain = RationalPolytope.standard_simplex(d)
    gradient = tuple(values[j + 1] - values[0] for j in range(d))
    piece = AffinePiece(gradient=gradient, offset=values[0])
    return RoofFunction(domain=domain, pieces=(piece,))
