"""Symmetric-power slope sequences, symmetry defects, sandwich and
transference certificates.

The d-th absolute minimum of a lattice is the limit of pmax(S^n(E-dual))/n;
no extrapolation is attempted here.  The module reports the exact finite-n
prefix of that sequence, the finite-n symmetry defects, and two-sided
certificates: -mu-hat_i <= zeta_i <= lambda_i(Q), tight exactly when the
two exact ends agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactlog import (
    EQUAL,
    GREATER,
    LESS,
    ExactScalar,
    LogValue,
    compare,
    compare_values,
    harmonic,
    log_of_rational,
)
from .lattices import (
    DEFAULT_DIM_CAP,
    DEFAULT_NODE_BUDGET,
    EuclideanLattice,
    ResourceError,
    dual,
    hn_polygon,
    max_slope,
    successive_minima,
)
from .multilinear import DEFAULT_SYM_CAP, sym_power

__all__ = [
    "SlopeEntry",
    "SlopeSequence",
    "SandwichCertificate",
    "DefectEstimate",
    "TransferenceRow",
    "slope_sequence",
    "defect_estimates",
    "zeta_sandwich",
    "transference_check",
    "default_max_n",
]


def default_max_n(d: int) -> int:
    # keeps sym-power dimensions inside the certified search range
    if d <= 2:
        return 8
    if d == 3:
        return 4
    return 2


@dataclass(frozen=True)
class SlopeEntry:
    n: int
    pmax_over_n: LogValue
    pmin_over_n: LogValue
    certified: bool


@dataclass(frozen=True)
class SlopeSequence:
    entries: tuple[SlopeEntry, ...]
    truncated: bool = False


def _pmax_pmin(lat: EuclideanLattice, budget: int):
    top = max_slope(lat, cap=lat.dim, budget=budget)
    bottom = max_slope(dual(lat), cap=lat.dim, budget=budget)
    return top.value, -bottom.value, top.certified and bottom.certified


def slope_sequence(
    lat: EuclideanLattice,
    max_n: int | None = None,
    sym_cap: int = DEFAULT_SYM_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> SlopeSequence:
    if max_n is None:
        max_n = default_max_n(lat.dim)
    edual = dual(lat)
    entries = []
    truncated = False
    for n in range(1, max_n + 1):
        try:
            power = sym_power(edual, n, cap=sym_cap)
            pmax, pmin, certified = _pmax_pmin(power, budget)
        except ResourceError:
            truncated = True
            break
        entries.append(
            SlopeEntry(
                n=n,
                pmax_over_n=pmax.scale(Fraction(1, n)),
                pmin_over_n=pmin.scale(Fraction(1, n)),
                certified=certified,
            )
        )
    return SlopeSequence(entries=tuple(entries), truncated=truncated)


@dataclass(frozen=True)
class DefectEntry:
    n: int
    value: LogValue
    certified: bool
    # exact trichotomies of value against the limit bounds
    vs_zero: int
    vs_harmonic: int


@dataclass(frozen=True)
class DefectEstimate:
    kind: str  # "alpha" or "alpha_strong"
    dim: int
    entries: tuple[DefectEntry, ...]
    lower_limit: LogValue  # (1/2) ln d, the limit lower bound
    upper_limit: Fraction  # H_{d-1}, the limit upper bound
    truncated: bool = False


def defect_estimates(
    lat: EuclideanLattice,
    max_n: int | None = None,
    sym_cap: int = DEFAULT_SYM_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[DefectEstimate, DefectEstimate]:
    """Finite-n values of the symmetry defect and the strong symmetry defect.

    alpha_n   = (pmax(S^n(E-dual)) - n pmax(E-dual)) / n
    alpha_s,n = (pmax(S^n(E-dual)) - pmax((S^n E)-dual)) / n
    """
    d = lat.dim
    if max_n is None:
        max_n = default_max_n(d)
    edual = dual(lat)
    base = max_slope(edual, cap=d, budget=budget)
    h_bound = harmonic(d - 1)
    alpha_entries, strong_entries = [], []
    truncated = False
    for n in range(1, max_n + 1):
        try:
            power_dual = sym_power(edual, n, cap=sym_cap)
            pmax_sym_dual = max_slope(power_dual, cap=power_dual.dim, budget=budget)
            dual_sym = dual(sym_power(lat, n, cap=sym_cap))
            pmax_dual_sym = max_slope(dual_sym, cap=dual_sym.dim, budget=budget)
        except ResourceError:
            truncated = True
            break
        alpha_val = (pmax_sym_dual.value - base.value.scale(n)).scale(Fraction(1, n))
        strong_val = (pmax_sym_dual.value - pmax_dual_sym.value).scale(Fraction(1, n))
        for kind, val, cert, sink in (
            ("alpha", alpha_val, pmax_sym_dual.certified and base.certified, alpha_entries),
            (
                "alpha_strong",
                strong_val,
                pmax_sym_dual.certified and pmax_dual_sym.certified,
                strong_entries,
            ),
        ):
            sink.append(
                DefectEntry(
                    n=n,
                    value=val,
                    certified=cert,
                    vs_zero=compare(val, 0),
                    vs_harmonic=compare(val, h_bound),
                )
            )
    half_log_d = log_of_rational(d).scale(Fraction(1, 2))
    return (
        DefectEstimate("alpha", d, tuple(alpha_entries), half_log_d, h_bound, truncated),
        DefectEstimate(
            "alpha_strong", d, tuple(strong_entries), half_log_d, h_bound, truncated
        ),
    )


@dataclass(frozen=True)
class SandwichCertificate:
    index: int
    lower: LogValue  # -mu-hat_i
    upper: LogValue  # lambda_i over Q
    tight: bool
    status: str  # certified | bounded


def zeta_sandwich(
    lat: EuclideanLattice,
    cap: int = DEFAULT_DIM_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> list[SandwichCertificate]:
    poly = hn_polygon(lat, cap=cap, budget=budget)
    minima = successive_minima(lat, cap=cap, budget=budget)
    out = []
    for i in range(lat.dim):
        lower = -poly.slopes[i]
        upper = minima.values[i]
        verdict = compare_values(lower, upper)
        assert verdict != GREATER, "sandwich inverted: implementation bug"
        tight = verdict == EQUAL
        status = "certified" if (tight and poly.certified) else "bounded"
        out.append(
            SandwichCertificate(
                index=i + 1, lower=lower, upper=upper, tight=tight, status=status
            )
        )
    return out


@dataclass(frozen=True)
class TransferenceRow:
    index: int
    minima_sum: LogValue  # lambda_i(E) + lambda_(d+1-i)(E-dual), over Q
    nonnegative: bool
    banaszczyk_ok: bool  # minima_sum <= ln d (theorem over Q)
    harmonic_bound: Fraction  # H_(i-1) + H_(d-i)
    slope_sum_vs_harmonic: int  # (-mu_i) + (-mu_(d+1-i) of dual) vs bound
    minima_sum_vs_harmonic: int  # reported descriptively


def transference_check(
    lat: EuclideanLattice,
    cap: int = DEFAULT_DIM_CAP,
    budget: int = DEFAULT_NODE_BUDGET,
) -> list[TransferenceRow]:
    d = lat.dim
    lat_dual = dual(lat)
    minima = successive_minima(lat, cap=cap, budget=budget)
    minima_dual = successive_minima(lat_dual, cap=cap, budget=budget)
    poly = hn_polygon(lat, cap=cap, budget=budget)
    poly_dual = hn_polygon(lat_dual, cap=cap, budget=budget)
    ln_d = log_of_rational(d)
    rows = []
    for i in range(1, d + 1):
        total = minima.values[i - 1] + minima_dual.values[d - i]
        h_bound = harmonic(i - 1) + harmonic(d - i)
        slope_sum = (-poly.slopes[i - 1]) + (-poly_dual.slopes[d - i])
        rows.append(
            TransferenceRow(
                index=i,
                minima_sum=total,
                nonnegative=compare(total, 0) != LESS,
                banaszczyk_ok=compare_values(total, ln_d) != GREATER,
                harmonic_bound=h_bound,
                slope_sum_vs_harmonic=compare(slope_sum, h_bound),
                minima_sum_vs_harmonic=compare(total, h_bound),
            )
        )
    return rows
