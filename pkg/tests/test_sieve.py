"""Smooth-number census against trial division."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dickman.errors import ParameterError
from dickman.sieve import (
    SieveCensus,
    brute_force_psi,
    census,
    empirical_F,
    largest_prime_factor,
    primes_up_to,
    psi,
    smoothness_bound,
)


@pytest.mark.parametrize("n, y, count", [(10, 2, 4), (20, 3, 10), (100, 100, 100), (1, 1, 1)])
def test_small_counts(n, y, count):
    assert psi(n, y) == count


@pytest.mark.parametrize("y", [2, 3, 5, 7, 10, 100])
def test_exhaustive_against_trial_division(y):
    counts = brute_force_psi(10**4, y)
    assert all(psi(n, y) == counts[n] for n in range(y, 10**4 + 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=3000), st.integers(min_value=1, max_value=400), st.integers(1, 500))
def test_block_size_does_not_matter(n, y, block):
    y = min(y, n)
    assert psi(n, y, block=block) == psi(n, y)


def test_monotone():
    assert psi(5000, 30) <= psi(5000, 31) <= psi(5001, 31)


def test_primes():
    assert list(primes_up_to(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_up_to(1)) == 0


def test_largest_prime_factor():
    assert [largest_prime_factor(n) for n in (1, 2, 12, 97, 91, 1024)] == [1, 2, 3, 97, 13, 2]


def test_census_type():
    c = census(20, 3)
    assert c == SieveCensus(20, 3, 10)
    assert c.fraction == Fraction(1, 2)
    with pytest.raises(ParameterError):
        SieveCensus(10, 2, 0)


@pytest.mark.parametrize("n, y", [(0, 1), (10, 0), (10, 11), (10**9 + 1, 5), (10.0, 2), (True, 1)])
def test_range_errors(n, y):
    with pytest.raises(ParameterError):
        psi(n, y)


def test_smoothness_bound_exact():
    assert smoothness_bound(10**6, Fraction(1, 2)) == 1000
    assert smoothness_bound(10**6, Fraction(1, 3)) == 100
    assert smoothness_bound(999_999, Fraction(1, 3)) == 99


def test_empirical_half():
    # count confirmed by an independent largest-prime-factor table; it sits
    # above the limit 1 - log 2 = 0.3069 and inside the 3/log N envelope
    value = empirical_F(10**6, Fraction(1, 2))
    assert value == Fraction(344299, 10**6)
    assert 0.3069 < value < 0.3069 + 3 / 13.8155


def test_empirical_one():
    assert empirical_F(12345, 1) == 1


def test_empirical_third_approaches_limit():
    exact = 0.048608388291131566907
    assert abs(float(empirical_F(10**7, Fraction(1, 3))) - exact) < abs(float(empirical_F(10**5, Fraction(1, 3))) - exact)


def test_empirical_errors():
    with pytest.raises(ParameterError):
        empirical_F(10, 0)
    with pytest.raises(ParameterError):
        empirical_F(0, Fraction(1, 2))
