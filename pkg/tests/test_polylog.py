"""Standard polylogarithms, compared with mpmath.polylog as an independent oracle."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dickman.errors import DomainError, ParameterError
from dickman.polylog import li, li3_by_reflection, li3_inversion_check
from dickman.precision import make_context

CTX = make_context(50)
MP = CTX.mp
TOL = MP.mpf(10) ** -50


def oracle(k, x):
    with mpmath.workprec(CTX.work_bits + 40):
        return mpmath.polylog(k, mpmath.mpf(x))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize(
    "x", ["0.5", "0.3", "-0.3", "-0.5", "0.51", "0.75", "0.999", "-0.51", "-0.9", "-1", "1e-12", "0.2358"]
)
def test_against_mpmath(k, x):
    assert abs(li(k, x, CTX) - oracle(k, x)) < TOL


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("x", ["-1.0001", "-3", "-17.5", "-1e6"])
def test_inversion_region_against_mpmath(k, x):
    assert abs(li(k, x, CTX) - oracle(k, x)) < TOL * max(1, abs(oracle(k, x)))


def test_special_values():
    pi, z3 = CTX.constants.pi, CTX.constants.zeta(3)
    assert abs(li(2, 1, CTX) - pi**2 / 6) < TOL
    assert abs(li(3, -1, CTX) + z3 * 3 / 4) < TOL
    assert abs(li(1, Fraction(1, 2), CTX) - CTX.constants.log2) < TOL


def test_trilog_identity_at_three():
    l3 = CTX.constants.log3
    lhs = 3 * (2 * li(3, Fraction(1, 3), CTX) - li(3, -3, CTX)) - l3**3
    assert abs(lhs - 13 * CTX.constants.zeta(3) / 2) < TOL


@pytest.mark.parametrize("y", [3, "1.00000000000000000001", "1.5", 40])
def test_inversion_check(y):
    assert li3_inversion_check(y, CTX) < TOL


@pytest.mark.parametrize("y", [1, "0.5"])
def test_inversion_check_domain(y):
    with pytest.raises(DomainError):
        li3_inversion_check(y, CTX)


def test_reflection_route_is_independent():
    assert abs(li3_by_reflection(5, CTX) - oracle(3, -5)) < TOL


@pytest.mark.parametrize("x", ["0.2", "0.5", "0.9"])
def test_duplication(x):
    lhs = li(2, x, CTX) + li(2, "-" + x, CTX)
    assert abs(lhs - li(2, MP.mpf(x) ** 2, CTX) / 2) < TOL


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("x", ["-0.7", "-0.3", "0.3", "0.7"])
def test_derivative_order(k, x):
    x = MP.mpf(x)

    def resid(h):
        d = (li(k, x + h, CTX) - li(k, x - h, CTX)) / (2 * h)
        return abs(d - li(k - 1, x, CTX) / x)

    h = MP.mpf("1e-4")
    order = MP.log(resid(h) / resid(h / 2), 2)
    assert order >= 1.9


def test_errors():
    with pytest.raises(ParameterError):
        li(5, "0.1", CTX)
    with pytest.raises(DomainError):
        li(2, "1.01", CTX)
    with pytest.raises(DomainError):
        li(1, 1, CTX)
    with pytest.raises(DomainError):
        li(4, -2, CTX)


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-50, max_value=1), st.integers(min_value=1, max_value=3))
def test_random_arguments(x, k):
    if k == 1 and x == 1:
        return
    assert abs(li(k, x, CTX) - oracle(k, CTX.convert(x))) < TOL * max(1, abs(oracle(k, CTX.convert(x))))
