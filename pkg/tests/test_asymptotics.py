import random
from fractions import Fraction
from math import comb

from adelic.asymptotics import (
    default_max_n,
    defect_estimates,
    slope_sequence,
    transference_check,
    zeta_sandwich,
)
from adelic.exactlog import EQUAL, GREATER, LESS, log_of_rational
from adelic.lattices import EuclideanLattice, dual
from oracles import random_pd_gram


def lat_of(gram):
    return EuclideanLattice(tuple(tuple(Fraction(x) for x in row) for row in gram))


def half_log(q):
    return log_of_rational(q).scale(Fraction(1, 2))


def test_default_max_n():
    assert default_max_n(1) == 8
    assert default_max_n(2) == 8
    assert default_max_n(3) == 4
    assert default_max_n(5) == 2


def test_slope_sequence_standard_lattice():
    seq = slope_sequence(EuclideanLattice.standard(2), max_n=6)
    assert not seq.truncated
    for e in seq.entries:
        n = e.n
        expected = half_log(comb(n, n // 2)).scale(Fraction(1, n))
        assert e.certified
        assert e.pmax_over_n == expected
        # the extreme monomials x^n, y^n have norm 1, so pmin stays 0
        assert e.pmin_over_n.is_zero()


def test_defects_standard_lattice():
    alpha, strong = defect_estimates(EuclideanLattice.standard(2), max_n=6)
    assert alpha.lower_limit == half_log(2)
    assert alpha.upper_limit == 1  # harmonic(1)
    for e in alpha.entries:
        n = e.n
        assert e.value == half_log(comb(n, n // 2)).scale(Fraction(1, n))
        assert e.vs_zero in (EQUAL, GREATER)  # alpha_n >= 0
    # monotone increase toward (1/2) ln 2 for this family
    vals = [e.value for e in alpha.entries]
    assert all(
        (b - a).enclosure(128).lo >= 0 or (b - a).is_zero()
        for a, b in zip(vals[::2], vals[2::2])
    )


def test_defects_nonnegative_random():
    rng = random.Random(6)
    for _ in range(10):
        lat = lat_of(random_pd_gram(rng, 2))
        alpha, strong = defect_estimates(lat, max_n=3)
        for e in alpha.entries + strong.entries:
            assert e.vs_zero in (EQUAL, GREATER)


def test_zeta_sandwich_diagonal_tight():
    rng = random.Random(8)
    for _ in range(10):
        q = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(3)]
        lat = EuclideanLattice.diagonal(q)
        certs = zeta_sandwich(lat)
        expected = sorted((half_log(x) for x in q), key=lambda v: v.to_float())
        for c, e in zip(certs, expected):
            assert c.tight and c.status == "certified"
            assert c.lower == e and c.upper == e


def test_zeta_sandwich_orders_and_bounds():
    rng = random.Random(10)
    for _ in range(15):
        lat = lat_of(random_pd_gram(rng, rng.choice([2, 3])))
        certs = zeta_sandwich(lat)
        for c in certs:
            # lower <= upper enforced internally; statuses well-formed
            assert c.status in ("certified", "bounded")
            if c.status == "certified":
                assert c.tight


def test_transference_rows():
    rng = random.Random(12)
    for _ in range(15):
        d = rng.choice([2, 3, 4])
        lat = lat_of(random_pd_gram(rng, d))
        rows = transference_check(lat)
        assert len(rows) == d
        for r in rows:
            assert r.nonnegative
            assert r.banaszczyk_ok
            assert r.minima_sum_vs_harmonic in (LESS, EQUAL, GREATER)


def test_transference_standard_lattice_tight():
    rows = transference_check(EuclideanLattice.standard(3))
    for r in rows:
        assert r.minima_sum.is_zero()
        assert r.nonnegative and r.banaszczyk_ok


def test_slope_sequence_truncates_on_cap():
    seq = slope_sequence(EuclideanLattice.standard(3), max_n=10, sym_cap=20)
    assert seq.truncated
    assert seq.entries  # a prefix was still produced
