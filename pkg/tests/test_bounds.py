import math
from fractions import Fraction

import pytest

from flatstat import bounds
from flatstat.gf2core import BitMatrix, q_binomial, rank
from flatstat.grassmann import enumerate_subspaces


def rank_census(n, d, k):
    """Fraction of d-subspaces U on which the projection onto d - k coordinates has full rank."""
    r = d - k
    good = 0
    for u in enumerate_subspaces(n, d):
        images = [v & ((1 << r) - 1) for v in u.basis]
        if rank(BitMatrix(tuple(images), r)) == r:
            good += 1
    return Fraction(good, q_binomial(n, d))


@pytest.mark.parametrize("n", range(1, 6))
def test_c_n_matches_rank_census(n):
    for d in range(1, n + 1):
        for k in range(0, d + 1):
            assert bounds.c_n_dk(n, d, k) == rank_census(n, d, k)


def test_c_n_examples():
    assert bounds.c_n_dk(4, 3, 1) == Fraction(4, 5)
    assert all(bounds.c_n_dk(n, d, d) == 1 for n in range(1, 8) for d in range(1, n + 1))


def test_c_n_converges_to_c():
    for d in range(1, 5):
        for k in range(0, d + 1):
            for n in range(d, 21):
                assert abs(bounds.c_n_dk(n, d, k) - bounds.c_dk(d, k)) < Fraction(2) ** -(n - d - 5)


def test_constants():
    assert bounds.c_dk(3, 1) == Fraction(21, 32)
    assert bounds.c_dk(2, 2) == 1
    assert bounds.c_d(1) == 1
    assert bounds.c_d(2) == Fraction(2, 3)
    assert abs(float(bounds.c_d(10)) - 0.2919) < 1e-4
    assert bounds.E_LOWER < Fraction(math.e) < bounds.E_UPPER


def test_upper_flat_even_examples():
    assert bounds.upper_flat_even(2, 1) == Fraction(6, 7)
    assert bounds.upper_flat_even(3, 1) == Fraction(4, 5)
    with pytest.raises(ValueError):
        bounds.upper_flat_even(3, 3)


def test_bootstrap_examples():
    assert bounds.bootstrap_upper(3, 1, 1) == (Fraction(1, 2), Fraction(1))
    assert bounds.bootstrap_factor(3, 1, 0) == Fraction(3, 10)
    assert bounds.bootstrap_upper(3, 1, 2) == (Fraction(13, 20), Fraction(9, 10))
    partial, certified = bounds.bootstrap_upper(3, 1, 64)
    assert certified < bounds.upper_flat_even(3, 1) + Fraction(1, 2**60)
    assert bounds.bootstrap_upper_dyadic(3, 1, 64) >= certified


def test_bootstrap_partial_sums_increase_and_tail_certificate():
    sums = bounds.bootstrap_partial_sums(5, 2, 40)
    assert all(a < b for a, b in zip(sums, sums[1:]))
    # the 2^-M tail really covers the rest of the series
    for m in (5, 10, 20):
        assert sums[-1] <= sums[m - 1] + Fraction(1, 2**m)


def test_bootstrap_asymptotics():
    target = 1 - Fraction(2, 3) * (1 - Fraction(1, 2**15)) * Fraction(1, 2**5)
    assert bounds.bootstrap_asymptotic(20, 5) == target
    _, certified = bounds.bootstrap_upper(20, 5, 80)
    assert abs(certified - target) <= Fraction(1, 2**9) + Fraction(1, 2**20)


def test_half_level_and_odd():
    assert bounds.upper_half_level(4, 2) == Fraction(4, 5)
    assert bounds.upper_half_level(3, 2) == Fraction(6, 7)
    assert bounds.upper_half_level(3, 3) == 1
    assert bounds.half_level_limit(3) == Fraction(7, 8)
    assert bounds.odd_upper(4, 2) == Fraction(4, 7)
    for d in range(2, 6):
        vals = [bounds.upper_half_level(n, d) for n in range(d, 25)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
        assert vals[-1] - bounds.half_level_limit(d) < Fraction(1, 10**5)


def test_one_point_and_corollary():
    down, up = bounds.one_point_ratios(3, 6)
    assert down == Fraction(6, 5) ** 5 and up == 2
    assert bounds.one_point_ratios(2, 1) == (None, Fraction(3, 2) ** 2)
    with pytest.raises(ValueError):
        bounds.one_point_ratios(1, 1)
    assert bounds.corollary_lower(3, 3) == Fraction(3, 4) / bounds.E_UPPER
    assert bounds.corollary_lower(3, 1) == Fraction(1, 2) / bounds.E_UPPER
    with pytest.raises(ValueError):
        bounds.corollary_lower(1, 1)


def test_bose_burton():
    assert bounds.bose_burton_min(2, 1) == 3
    assert bounds.bose_burton_min(3, 0) == 15


def test_summary_examples():
    r = bounds.summary(3, 4)
    assert r.exact == Fraction(7, 8) == r.best_lower == r.best_upper
    r = bounds.summary(3, 2)
    assert r.k == 1 and r.j == 1
    assert r.lower["c(d,k)"][0] == Fraction(21, 32)
    assert r.upper["flat_even_upper"][0] == Fraction(4, 5)
    assert "bootstrap_certified" in r.upper
    r = bounds.summary(3, 3)
    assert r.best_upper == Fraction(1, 2)
    assert r.lower["c(d,k)"][0] == bounds.c_dk(3, 0)
    assert bounds.summary(2, 0).exact == 1


def test_summary_finite_n():
    r = bounds.summary(2, 2, n=4)
    assert r.exact == Fraction(4, 5)
    assert "bootstrap_certified" not in r.upper
    r = bounds.summary(2, 3, n=4)
    assert r.upper["odd_fraction"][0] == Fraction(4, 7)
    assert r.lower["c_n(d,k)"][0] == bounds.c_n_dk(4, 2, 0)


def test_summary_consistent_grid():
    for d in range(1, 8):
        for s in range(1, 1 << d):
            r = bounds.summary(d, s)
            assert r.best_lower <= r.best_upper
            for n in (d, d + 1, d + 3):
                r = bounds.summary(d, s, n)
                assert r.best_lower <= r.best_upper


def test_summary_errors():
    with pytest.raises(ValueError):
        bounds.summary(0, 1)
    with pytest.raises(ValueError):
        bounds.summary(2, 5)
    with pytest.raises(ValueError):
        bounds.summary(3, 2, n=2)


def test_nu2_and_split():
    assert bounds.nu2(12) == 2
    assert bounds.split_power_of_two(12) == (3, 2)
    with pytest.raises(ValueError):
        bounds.nu2(0)
