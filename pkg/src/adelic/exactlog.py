"""Exact log-valued arithmetic.

All degrees, heights, slopes and minima computed by this library live in the
Q-vector space spanned by {ln p : p prime}.  An element is stored as its
canonical prime-exponent map, so equality is decidable by inspection and
strict comparison is decidable by interval refinement (logs of distinct
primes are linearly independent over Q, so distinct canonical forms have
distinct real values and refinement terminates).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import gmpy2
from sympy import factorint

__all__ = [
    "LogValue",
    "LogInterval",
    "ExactScalar",
    "PrecisionExhausted",
    "log_of_rational",
    "compare",
    "compare_values",
    "LESS",
    "EQUAL",
    "GREATER",
]

LESS, EQUAL, GREATER = -1, 0, 1

DEFAULT_START_BITS = 64
# Hard cap on refinement precision; unreachable for genuinely distinct
# values, only triggers under implementation bugs.
DEFAULT_MAX_BITS = 16384


def _precision_cap() -> int:
    raw = os.environ.get("ADELIC_PRECISION_CAP")
    if raw is None:
        return DEFAULT_MAX_BITS
    return max(DEFAULT_START_BITS, int(raw))


class PrecisionExhausted(ArithmeticError):
    """Interval refinement hit the precision cap without separating."""


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q)
    raise TypeError(f"expected a rational, got {type(q).__name__}")


@lru_cache(maxsize=None)
def _ln_interval(p: int, bits: int) -> tuple[Fraction, Fraction]:
    """Certified enclosure of ln(p) as a pair of binary rationals."""
    with gmpy2.context(precision=bits, round=gmpy2.RoundDown):
        lo = gmpy2.log(gmpy2.mpfr(p))
    with gmpy2.context(precision=bits, round=gmpy2.RoundUp):
        hi = gmpy2.log(gmpy2.mpfr(p))
    qlo, qhi = gmpy2.mpq(lo), gmpy2.mpq(hi)
    return (
        Fraction(int(qlo.numerator), int(qlo.denominator)),
        Fraction(int(qhi.numerator), int(qhi.denominator)),
    )


@dataclass(frozen=True)
class LogInterval:
    """Enclosure [lo, hi] of a real value, endpoints binary rationals."""

    lo: Fraction
    hi: Fraction
    precision: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def compare_to(self, r: Fraction) -> int | None:
        """Trichotomy against a rational, or None if r is inside."""
        if self.hi < r:
            return LESS
        if self.lo > r:
            return GREATER
        return None


class LogValue:
    """Exact element of the Q-span of {ln p}, value = sum c_p * ln p."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Fraction] | None = None):
        canon = {}
        if terms:
            for p, c in terms.items():
                c = _as_fraction(c)
                if c == 0:
                    continue
                if p < 2 or not gmpy2.is_prime(p):
                    raise ValueError(f"{p} is not prime")
                canon[int(p)] = c
        object.__setattr__(self, "_terms", dict(sorted(canon.items())))

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "LogValue") -> "LogValue":
        terms = dict(self._terms)
        for p, c in other._terms.items():
            terms[p] = terms.get(p, Fraction(0)) + c
        return LogValue(terms)

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + other.scale(-1)

    def __neg__(self) -> "LogValue":
        return self.scale(-1)

    def scale(self, c) -> "LogValue":
        c = _as_fraction(c)
        return LogValue({p: c * e for p, e in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogValue):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def enclosure(self, bits: int) -> LogInterval:
        lo = Fraction(0)
        hi = Fraction(0)
        for p, c in self._terms.items():
            llo, lhi = _ln_interval(p, bits)
            if c >= 0:
                lo += c * llo
                hi += c * lhi
            else:
                lo += c * lhi
                hi += c * llo
        return LogInterval(lo, hi, bits)

    def to_float(self, bits: int = 128) -> float:
        """Float approximation: midpoint of the enclosure at `bits` bits."""
        return float(self.enclosure(bits).midpoint())

    def __repr__(self) -> str:
        if not self._terms:
            return "LogValue(0)"
        body = " + ".join(f"{c}*ln({p})" for p, c in self._terms.items())
        return f"LogValue({body})"

    def to_json(self) -> dict:
        return {"terms": {str(p): str(c) for p, c in self._terms.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "LogValue":
        return cls({int(p): Fraction(c) for p, c in obj["terms"].items()})


ZERO = LogValue()


def log_of_rational(q) -> LogValue:
    """ln(q) of a positive rational, as an exact LogValue."""
    q = _as_fraction(q)
    if q <= 0:
        raise ValueError(f"log of non-positive rational {q}")
    terms: dict[int, Fraction] = {}
    # factorint may hand back gmpy2 integer types; normalize to int
    for p, e in factorint(q.numerator).items():
        terms[int(p)] = terms.get(int(p), Fraction(0)) + int(e)
    for p, e in factorint(q.denominator).items():
        terms[int(p)] = terms.get(int(p), Fraction(0)) - int(e)
    return LogValue(terms)


def scalar_mul(c, a: LogValue) -> LogValue:
    return a.scale(c)


def add(a: LogValue, b: LogValue) -> LogValue:
    return a + b


def compare(a: LogValue, r) -> int:
    """Exact trichotomy of a LogValue against a rational.

    A nonzero LogValue is never equal to a rational (exp of a nonzero
    rational is transcendental while exp of a nonzero LogValue is a
    nontrivial rational power product), so Equal holds only for 0 vs 0 and
    strict comparisons are settled by refinement.
    """
    r = _as_fraction(r)
    if a.is_zero():
        return EQUAL if r == 0 else (GREATER if r < 0 else LESS)
    bits = DEFAULT_START_BITS
    cap = _precision_cap()
    while True:
        verdict = a.enclosure(bits).compare_to(r)
        if verdict is not None:
            return verdict
        if bits >= cap:
            raise PrecisionExhausted(
                f"could not separate {a!r} from {r} within {cap} bits"
            )
        bits = min(2 * bits, cap)


def compare_values(a: LogValue, b: LogValue) -> int:
    """Exact trichotomy between two LogValues."""
    if a == b:
        return EQUAL
    return compare(a - b, 0)


class ExactScalar:
    """Exact value of the form rational + LogValue.

    The two parts never mix: a nonzero LogValue is irrational, so equality
    and trichotomy reduce to `compare` on the log part against a rational.
    Used for roof-function offsets and the bound comparisons that
    subtract harmonic numbers from slopes.
    """

    __slots__ = ("rat", "log")

    def __init__(self, rat=0, log: LogValue | None = None):
        self.rat = _as_fraction(rat)
        self.log = log if log is not None else ZERO

    @classmethod
    def of(cls, value) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, LogValue):
            return cls(0, value)
        return cls(value)

    def __add__(self, other) -> "ExactScalar":
        other = ExactScalar.of(other)
        return ExactScalar(self.rat + other.rat, self.log + other.log)

    __radd__ = __add__

    def __sub__(self, other) -> "ExactScalar":
        other = ExactScalar.of(other)
        return ExactScalar(self.rat - other.rat, self.log - other.log)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.rat, -self.log)

    def scale(self, c) -> "ExactScalar":
        c = _as_fraction(c)
        return ExactScalar(c * self.rat, self.log.scale(c))

    def is_zero(self) -> bool:
        return self.rat == 0 and self.log.is_zero()

    def compare_to(self, other) -> int:
        other = ExactScalar.of(other)
        diff_log = self.log - other.log
        return compare(diff_log, other.rat - self.rat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (ExactScalar, LogValue, Fraction, int)):
            return NotImplemented
        return self.compare_to(ExactScalar.of(other)) == EQUAL

    def __hash__(self):
        return hash((self.rat, self.log))

    def __lt__(self, other):
        return self.compare_to(ExactScalar.of(other)) == LESS

    def __le__(self, other):
        return self.compare_to(ExactScalar.of(other)) != GREATER

    def __gt__(self, other):
        return self.compare_to(ExactScalar.of(other)) == GREATER

    def __ge__(self, other):
        return self.compare_to(ExactScalar.of(other)) != LESS

    def to_float(self, bits: int = 128) -> float:
        return float(self.rat + self.log.enclosure(bits).midpoint())

    def __repr__(self):
        return f"ExactScalar({self.rat}, {self.log!r})"

    def to_json(self) -> dict:
        return {"rational": str(self.rat), "log": self.log.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "ExactScalar":
        return cls(Fraction(obj["rational"]), LogValue.from_json(obj["log"]))


def harmonic(n: int) -> Fraction:
    """n-th harmonic number H_n, with H_0 = 0."""
    if n < 0:
        raise ValueError("harmonic number of negative index")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))
