"""Lattices over k(T) as vector bundles on the projective line.

A bundle is either given directly by its splitting type (the multiset of
Grothendieck line-bundle degrees, which carries all slope data exactly) or
by a matrix divisor: an invertible polynomial matrix whose row span over
k[T], together with a degree twist at infinity, cuts out the unit-ball
sections.  Weak Popov row reduction recovers the splitting degrees.

Sign convention: the splitting degrees a_i are pinned by the dimension
count dim H^0(twist by m) = sum_i max(0, a_i + m + 1), so a row of degree
r in weak Popov form contributes a_i = -r.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

__all__ = [
    "SplittingType",
    "MatrixDivisor",
    "reduce_to_splitting",
    "slopes_ff",
    "minima_ff",
    "dual_ff",
    "sym_ff",
    "wedge_ff",
    "tensor_ff",
    "section_dimension",
    "DEFAULT_FF_CAP",
]

DEFAULT_FF_CAP = 4096


@dataclass(frozen=True)
class SplittingType:
    degrees: tuple[int, ...]

    def __post_init__(self):
        if not self.degrees:
            raise ValueError("splitting type must be nonempty")
        object.__setattr__(
            self, "degrees", tuple(sorted((int(a) for a in self.degrees), reverse=True))
        )

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def total_degree(self) -> int:
        return sum(self.degrees)

    def to_json(self) -> dict:
        return {"type": "splitting", "degrees": list(self.degrees)}

    @classmethod
    def from_json(cls, obj: dict) -> "SplittingType":
        if obj.get("type") != "splitting":
            raise ValueError(f"not a splitting object: {obj.get('type')}")
        return cls(tuple(obj["degrees"]))


def slopes_ff(s: SplittingType) -> list[int]:
    """mu-hat_i = a_i, sorted non-increasing."""
    return list(s.degrees)


def minima_ff(s: SplittingType) -> list[int]:
    """zeta_i = -mu-hat_i, sorted non-decreasing."""
    return [-a for a in s.degrees]


def dual_ff(s: SplittingType) -> SplittingType:
    return SplittingType(tuple(-a for a in s.degrees))


def sym_ff(s: SplittingType, n: int, cap: int = DEFAULT_FF_CAP) -> SplittingType:
    if n < 1:
        raise ValueError("sym power requires n >= 1")
    degrees = [
        sum(c) for c in combinations_with_replacement(s.degrees, n)
    ]
    if len(degrees) > cap:
        raise ValueError(f"sym power dimension {len(degrees)} exceeds cap {cap}")
    return SplittingType(tuple(degrees))


def wedge_ff(s: SplittingType, r: int, cap: int = DEFAULT_FF_CAP) -> SplittingType:
    if not 1 <= r <= s.dim:
        raise ValueError(f"wedge rank {r} out of range")
    degrees = [sum(c) for c in combinations(s.degrees, r)]
    if len(degrees) > cap:
        raise ValueError(f"wedge dimension {len(degrees)} exceeds cap {cap}")
    return SplittingType(tuple(degrees))


def tensor_ff(a: SplittingType, b: SplittingType, cap: int = DEFAULT_FF_CAP) -> SplittingType:
    degrees = [x + y for x, y in product(a.degrees, b.degrees)]
    if len(degrees) > cap:
        raise ValueError(f"tensor dimension {len(degrees)} exceeds cap {cap}")
    return SplittingType(tuple(degrees))


# ---------------------------------------------------------------------------
# Polynomials over F_p or Q, as coefficient lists (low degree first).
# ---------------------------------------------------------------------------


class _Field:
    """Prime field F_p (p > 0) or Q (p = 0)."""

    def __init__(self, p: int):
        if p < 0 or (p > 0 and not _is_prime(p)):
            raise ValueError(f"coefficient field must be Q or a prime field, got p={p}")
        self.p = p

    def conv(self, x) -> object:
        if self.p:
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def inv(self, a):
        if self.p:
            return pow(int(a), -1, self.p)
        return 1 / a

    def zero(self):
        return 0 if self.p else Fraction(0)

    def is_zero(self, a) -> bool:
        return (a % self.p == 0) if self.p else a == 0

    def rand(self, rng):
        if self.p:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-3, 3))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _trim(poly: list) -> list:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def poly_deg(poly: list) -> int:
    return len(poly) - 1 if poly else -1


def poly_add(field: _Field, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero()
        y = b[i] if i < len(b) else field.zero()
        out.append(field.add(x, y))
    return _trim(out)


def poly_scale_shift(field: _Field, a: list, c, k: int) -> list:
    """c * T^k * a."""
    if field.is_zero(c) or not a:
        return []
    return [field.zero()] * k + [field.mul(c, x) for x in a]


def poly_mul(field: _Field, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return _trim(out)


_TERM_RE = re.compile(r"^([+-]?[^T]*)(T(\^(\d+))?)?$")


def parse_poly(field: _Field, text: str) -> list:
    """Parse expressions like '3*T^2 - T + 1/2' into a coefficient list."""
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    chunks = re.findall(r"[+-]?[^+-]+", text)
    poly: list = []
    for chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m:
            raise ValueError(f"cannot parse polynomial term {chunk!r}")
        coeff_txt, t_part, _, exp_txt = m.groups()
        coeff_txt = coeff_txt.rstrip("*")
        if t_part is None:
            coeff = Fraction(coeff_txt)
            k = 0
        else:
            if coeff_txt in ("", "+"):
                coeff = Fraction(1)
            elif coeff_txt == "-":
                coeff = Fraction(-1)
            else:
                coeff = Fraction(coeff_txt)
            k = int(exp_txt) if exp_txt else 1
        term = [field.zero()] * k + [field.conv(coeff)]
        poly = poly_add(field, poly, term)
    return poly


def format_poly(poly: list) -> str:
    if not poly:
        return "0"
    parts = []
    for k in range(len(poly) - 1, -1, -1):
        c = poly[k]
        if c == 0:
            continue
        if k == 0:
            parts.append(str(c))
        elif k == 1:
            parts.append("T" if c == 1 else f"{c}*T")
        else:
            parts.append(f"T^{k}" if c == 1 else f"{c}*T^{k}")
    return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class MatrixDivisor:
    """Invertible polynomial matrix plus an infinity twist.

    Sections of the associated bundle twisted by O(m) are the polynomial
    row combinations y with deg((y M)_j) <= m + twist_j for every column j.
    """

    p: int  # 0 for Q, else the prime
    matrix: tuple[tuple[tuple, ...], ...]  # rows of coefficient tuples
    infinity_twist: tuple[int, ...]

    @property
    def field(self) -> _Field:
        return _Field(self.p)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def build(cls, p: int, rows: list[list[list]], twist=None) -> "MatrixDivisor":
        field = _Field(p)
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise ValueError("matrix must be square")
        mat = tuple(
            tuple(tuple(field.conv(c) for c in _trim(list(e))) for e in row)
            for row in rows
        )
        twist = tuple(int(t) for t in (twist or [0] * d))
        if len(twist) != d:
            raise ValueError("twist length must match dimension")
        md = cls(p=p, matrix=mat, infinity_twist=twist)
        if _poly_matrix_rank(field, [[list(e) for e in row] for row in mat]) != d:
            raise ValueError("matrix divisor must be nonsingular over k(T)")
        return md

    def to_json(self) -> dict:
        field_name = "QQ" if self.p == 0 else f"GF({self.p})"
        return {
            "type": "matrix_divisor",
            "field": field_name,
            "matrix": [[format_poly(list(e)) for e in row] for row in self.matrix],
            "infinity_twist": list(self.infinity_twist),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MatrixDivisor":
        if obj.get("type") != "matrix_divisor":
            raise ValueError(f"not a matrix divisor object: {obj.get('type')}")
        fname = obj["field"]
        if fname in ("QQ", "Q"):
            p = 0
        else:
            m = re.match(r"^GF\((\d+)\)$", fname)
            if not m:
                raise ValueError(f"unsupported coefficient field {fname!r}")
            p = int(m.group(1))
        field = _Field(p)
        rows = [[parse_poly(field, e) for e in row] for row in obj["matrix"]]
        return cls.build(p, rows, obj.get("infinity_twist"))


def _poly_matrix_rank(field: _Field, rows: list[list[list]]) -> int:
    """Rank over k(T) by evaluating-free elimination on polynomials."""
    rows = [[list(e) for e in row] for row in rows]
    d = len(rows[0]) if rows else 0
    rnk = 0
    for col in range(d):
        pivot = next(
            (i for i in range(rnk, len(rows)) if rows[i][col]), None
        )
        if pivot is None:
            continue
        rows[rnk], rows[pivot] = rows[pivot], rows[rnk]
        for i in range(len(rows)):
            if i == rnk or not rows[i][col]:
                continue
            # cross-multiply to eliminate: row_i <- p_r * row_i - p_i * row_r
            p_r, p_i = rows[rnk][col], rows[i][col]
            rows[i] = [
                poly_add(
                    field,
                    poly_mul(field, p_r, rows[i][j]),
                    poly_scale_shift(
                        field, poly_mul(field, p_i, rows[rnk][j]), field.conv(-1), 0
                    ),
                )
                for j in range(d)
            ]
        rnk += 1
    return rnk


def weak_popov(field: _Field, rows: list[list[list]]) -> list[list[list]]:
    """Weak Popov form: all rows have distinct pivot columns.

    The pivot of a row is the rightmost column attaining the row degree.
    While two rows share a pivot, the higher-degree one is reduced by a
    monomial multiple of the other; row degrees only ever decrease, so the
    loop terminates.
    """
    rows = [[list(e) for e in row] for row in rows]

    def row_degree(row) -> int:
        return max((poly_deg(e) for e in row), default=-1)

    def pivot(row) -> int:
        rd = row_degree(row)
        if rd < 0:
            return -1
        return max(j for j, e in enumerate(row) if poly_deg(e) == rd)

    while True:
        piv = {}
        clash = None
        for i, row in enumerate(rows):
            p = pivot(row)
            if p < 0:
                raise ValueError("zero row encountered: matrix is singular")
            if p in piv:
                clash = (piv[p], i)
                break
            piv[p] = i
        if clash is None:
            return rows
        a, b = clash
        if row_degree(rows[a]) > row_degree(rows[b]):
            a, b = b, a
        # reduce row b by row a at the shared pivot column
        col = pivot(rows[a])
        da, db = poly_deg(rows[a][col]), poly_deg(rows[b][col])
        ca, cb = rows[a][col][da], rows[b][col][db]
        factor = field.mul(cb, field.inv(ca))
        shift = db - da
        rows[b] = [
            poly_add(
                field,
                rows[b][j],
                poly_scale_shift(field, rows[a][j], field.sub(field.zero(), factor), shift),
            )
            for j in range(len(rows[b]))
        ]


def reduce_to_splitting(md: MatrixDivisor) -> SplittingType:
    """Splitting degrees of the bundle cut out by a matrix divisor."""
    field = md.field
    rows = [[list(e) for e in row] for row in md.matrix]
    d = md.dim
    # fold the infinity twist into the matrix: multiplying column j by
    # T^(m0 - t_j) shifts all degrees; subtract m0 at the end
    m0 = max(md.infinity_twist)
    for j in range(d):
        k = m0 - md.infinity_twist[j]
        if k:
            for i in range(d):
                rows[i][j] = poly_scale_shift(field, rows[i][j], field.conv(1), k)
    reduced = weak_popov(field, rows)
    row_degs = [max(poly_deg(e) for e in row) for row in reduced]
    return SplittingType(tuple(m0 - r for r in row_degs))


def section_dimension(md: MatrixDivisor, m: int) -> int:
    """dim_k of {y polynomial rows : deg((yM)_j) <= m + twist_j}.

    Brute-force oracle used to pin the sign convention: solves the linear
    system on coefficients directly, independent of weak Popov reduction.
    """
    return _section_dim_linear(md, m)


def _section_dim_linear(md: MatrixDivisor, m: int) -> int:
    field = md.field
    d = md.dim
    # y_i polynomial of degree <= bound; generous bound: sections have
    # deg(y_i) <= m + max twist + max column degree of adj relation; use
    # m + max twist + total matrix degree as a safe cap
    maxdeg = max(
        (poly_deg(list(e)) for row in md.matrix for e in row), default=0
    )
    bound = m + max(md.infinity_twist) + d * maxdeg + 1
    if bound < 0:
        return 0
    nvars = d * (bound + 1)
    # constraint: coefficient of T^k in (yM)_j vanishes for
    # k > m + twist_j
    constraints = []
    max_out = bound + maxdeg
    for j in range(d):
        for k in range(m + md.infinity_twist[j] + 1, max_out + 1):
            rowc = [field.zero()] * nvars
            for i in range(d):
                entry = list(md.matrix[i][j])
                for s in range(bound + 1):
                    t = k - s
                    if 0 <= t < len(entry):
                        rowc[i * (bound + 1) + s] = field.add(
                            rowc[i * (bound + 1) + s], entry[t]
                        )
            constraints.append(rowc)
    rk = _field_rank(field, constraints)
    return nvars - rk


def _field_rank(field: _Field, rows: list[list]) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rnk = 0
    for col in range(ncols):
        pivot = next(
            (i for i in range(rnk, len(rows)) if not field.is_zero(rows[i][col])),
            None,
        )
        if pivot is None:
            continue
        rows[rnk], rows[pivot] = rows[pivot], rows[rnk]
        inv = field.inv(rows[rnk][col])
        rows[rnk] = [field.mul(x, inv) for x in rows[rnk]]
        for i in range(len(rows)):
            if i != rnk and not field.is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [
                    field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[rnk])
                ]
        rnk += 1
        if rnk == len(rows):
            break
    return rnk
