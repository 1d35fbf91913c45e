"""Exact convex geometry in dimension <= 3.

Convex hulls, facet enumeration, deterministic star triangulations and
halfspace clipping, all in rational arithmetic.  Dimensions are kept small
on purpose: every polytope this library produces lives in d <= 3.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from . import linalg
from .simplexlp import solve_lp

__all__ = [
    "GeometryError",
    "affine_dim",
    "convex_hull",
    "triangulate",
    "simplex_volume",
    "clip_simplex",
]

Point = tuple[Fraction, ...]


class GeometryError(ValueError):
    pass


def _frac_pt(p) -> Point:
    return tuple(Fraction(x) for x in p)


def affine_dim(points) -> int:
    pts = [_frac_pt(p) for p in points]
    if not pts:
        return -1
    base = pts[0]
    rows = [[x - y for x, y in zip(p, base)] for p in pts[1:]]
    return linalg.rank(rows) if rows else 0


def _primitive(ints: list[int]) -> tuple[int, ...]:
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def _hyperplane_through(points: list[Point], d: int):
    """Primitive integer (normal, offset) of the hyperplane through d
    affinely independent points, or None."""
    base = points[0]
    rows = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    if linalg.rank(rows) != d - 1:
        return None
    kernel = linalg.integer_kernel(rows) if rows else [[1]]
    if len(kernel) != 1:
        return None
    normal = kernel[0]
    offset = sum(Fraction(n) * x for n, x in zip(normal, base))
    mult = offset.denominator
    prim = _primitive([n * mult for n in normal] + [offset.numerator])
    return prim[:-1], Fraction(prim[-1])


def _is_vertex(p: Point, others: list[Point]) -> bool:
    """p extreme iff p not in conv(others): LP feasibility test."""
    if not others:
        return True
    d = len(p)
    n = len(others)
    # lambda >= 0, sum lambda = 1, sum lambda q = p
    a = []
    b = []
    for j in range(d):
        row = [others[i][j] for i in range(n)]
        a.append(row)
        b.append(p[j])
        a.append([-x for x in row])
        b.append(-p[j])
    a.append([Fraction(1)] * n)
    b.append(Fraction(1))
    a.append([Fraction(-1)] * n)
    b.append(Fraction(-1))
    for i in range(n):
        a.append([Fraction(-int(k == i)) for k in range(n)])
        b.append(Fraction(0))
    res = solve_lp(a, b, [Fraction(0)] * n)
    return res.status == "infeasible"


def convex_hull(points):
    """Vertices and facets of the hull of full-dimensional point sets.

    Returns (vertices, facets) with facets as (normal, offset) meaning
    normal . x <= offset, normals primitive integers.  Raises on
    degenerate input; callers test affine_dim first.
    """
    pts = sorted(set(_frac_pt(p) for p in points))
    if not pts:
        raise GeometryError("empty point set")
    d = len(pts[0])
    if affine_dim(pts) < d:
        raise GeometryError("point set is not full-dimensional")
    if d == 1:
        lo, hi = pts[0], pts[-1]
        verts = [lo] if lo == hi else [lo, hi]
        facets = [((-1,), -lo[0]), ((1,), hi[0])]
        return verts, facets
    verts = [p for i, p in enumerate(pts) if _is_vertex(p, pts[:i] + pts[i + 1 :])]
    facets = {}
    for combo in itertools.combinations(verts, d):
        hp = _hyperplane_through(list(combo), d)
        if hp is None:
            continue
        normal, offset = hp
        vals = [sum(Fraction(n) * x for n, x in zip(normal, p)) for p in verts]
        if all(v <= offset for v in vals):
            facets[(normal, offset)] = True
        if all(v >= offset for v in vals):
            neg = tuple(-n for n in normal)
            facets[(neg, -offset)] = True
    return verts, sorted(facets)


def simplex_volume(simplex) -> Fraction:
    pts = [_frac_pt(p) for p in simplex]
    d = len(pts[0])
    if len(pts) != d + 1:
        raise GeometryError("simplex needs d+1 vertices")
    base = pts[0]
    rows = [[x - y for x, y in zip(p, base)] for p in pts[1:]]
    vol = linalg.det(rows)
    if vol < 0:
        vol = -vol
    denom = 1
    for k in range(2, d + 1):
        denom *= k
    return vol / denom


def _on_facet(p: Point, facet) -> bool:
    normal, offset = facet
    return sum(Fraction(n) * x for n, x in zip(normal, p)) == offset


def _sort_polygon(points: list[Point], drop: int | None = None) -> list[Point]:
    """Order coplanar 2D points around their centroid, exactly."""
    if drop is not None:
        flat = [tuple(x for i, x in enumerate(p) if i != drop) for p in points]
    else:
        flat = points
    n = len(flat)
    cx = sum(p[0] for p in flat) / n
    cy = sum(p[1] for p in flat) / n

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    order = list(range(n))

    def cross(i, j):
        ax, ay = flat[i][0] - cx, flat[i][1] - cy
        bx, by = flat[j][0] - cx, flat[j][1] - cy
        return ax * by - ay * bx

    import functools

    def compare(i, j):
        hi, hj = half(flat[i]), half(flat[j])
        if hi != hj:
            return -1 if hi < hj else 1
        c = cross(i, j)
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    order.sort(key=functools.cmp_to_key(compare))
    return [points[i] for i in order]


def triangulate(vertices, facets):
    """Deterministic star triangulation from the lex-smallest vertex."""
    verts = sorted(_frac_pt(p) for p in vertices)
    d = len(verts[0])
    if d == 1:
        return [tuple(verts)] if len(verts) == 2 else []
    apex = verts[0]
    simplices = []
    if d == 2:
        ordered = _sort_polygon(verts)
        k = ordered.index(apex)
        ordered = ordered[k:] + ordered[:k]
        for i in range(1, len(ordered) - 1):
            tri = (apex, ordered[i], ordered[i + 1])
            if simplex_volume(tri) > 0:
                simplices.append(tri)
        return simplices
    if d == 3:
        for facet in facets:
            if _on_facet(apex, facet):
                continue
            fverts = [p for p in verts if _on_facet(p, facet)]
            normal, _ = facet
            drop = max(range(3), key=lambda i: abs(normal[i]))
            ordered = _sort_polygon(fverts, drop=drop)
            for i in range(1, len(ordered) - 1):
                tet = (apex, ordered[0], ordered[i], ordered[i + 1])
                if simplex_volume(tet) > 0:
                    simplices.append(tet)
        return simplices
    raise GeometryError(f"triangulation unsupported in dimension {d}")


def clip_simplex(simplex, normal, offset, keep_upper: bool):
    """Intersect a d-simplex with a rational halfspace.

    keep_upper selects {normal . x >= offset}; otherwise <=.  Returns a
    list of simplices covering the intersection (empty if measure zero).
    """
    pts = [_frac_pt(p) for p in simplex]
    d = len(pts[0])
    normal = [Fraction(n) for n in normal]
    offset = Fraction(offset)

    def side(p) -> Fraction:
        s = sum(n * x for n, x in zip(normal, p)) - offset
        return s if keep_upper else -s

    vals = [side(p) for p in pts]
    if all(v >= 0 for v in vals):
        return [tuple(pts)]
    if all(v <= 0 for v in vals):
        return []
    kept = [p for p, v in zip(pts, vals) if v >= 0]
    for (p, vp), (q, vq) in itertools.combinations(zip(pts, vals), 2):
        if (vp > 0 > vq) or (vq > 0 > vp):
            t = vp / (vp - vq)
            kept.append(tuple(x + t * (y - x) for x, y in zip(p, q)))
    kept = sorted(set(kept))
    if affine_dim(kept) < d:
        return []
    verts, facets = convex_hull(kept)
    return triangulate(verts, facets)
