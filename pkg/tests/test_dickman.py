"""Dickman polylogarithms, auxiliary functions, constants and F(alpha)."""

from fractions import Fraction

import pytest

from dickman import dickman as dk
from dickman.cli import load_reference_values
from dickman.errors import DomainError, ParameterError, UnsupportedWeightError
from dickman.precision import make_context
from dickman.quadrature import integrate

CTX = make_context(30)
MP = CTX.mp
EV = dk.get_evaluator(CTX)
TOL = MP.mpf(10) ** -30
REFS = load_reference_values()


def ref(name):
    return MP.mpf(REFS[name][0])


# --- L_k -----------------------------------------------------------------------


@pytest.mark.parametrize("k", range(1, 10))
def test_boundary_value_exact(k):
    assert EV.L(k, Fraction(1, k)) == 0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_closed_forms_vanish_at_boundary(k):
    # not the snapped boundary: the formulas themselves
    assert abs(EV._L(k, MP.one / k)) < TOL


@pytest.mark.parametrize("k", [5, 6, 7])
def test_high_weights_vanish_towards_boundary(k):
    # L_k(1/k - d) = G_k d**k (1 + O(d)) with G_k = (-1)**k (k**k / k!)**2
    from dickman.series import leading_coefficient

    d = MP.mpf(10) ** -3
    ratio = EV.L(k, MP.one / k - d) / (CTX.convert(leading_coefficient(k)) * d**k)
    assert abs(ratio - 1) < 0.05


def test_l2_at_one_third():
    expected = ref("F(1/3)") - 1 + CTX.constants.log3
    assert abs(EV.L(2, Fraction(1, 3)) - expected) < MP.mpf(10) ** -30
    assert MP.nstr(expected, 15).startswith("0.1472206769")


def test_l4_two_strategies_at_0_24():
    assert abs(EV.L4(Fraction(24, 100), "taylor") - EV.L4(Fraction(24, 100), "small")) < TOL


@pytest.mark.parametrize("k", range(1, 8))
@pytest.mark.parametrize("frac", [Fraction(1, 20), Fraction(1, 3), Fraction(4, 5)])
def test_sign(k, frac):
    t = frac / k
    assert (-1) ** k * EV.L(k, t) >= 0


@pytest.mark.parametrize("k", [2, 3, 4, 5])
@pytest.mark.parametrize("t", ["0.05", "0.1"])
def test_derivative_relation(k, t):
    t = MP.mpf(t)
    rhs = EV.L(k - 1, t / (1 - t)) / t

    def resid(h):
        return abs((EV.L(k, t + h) - EV.L(k, t - h)) / (2 * h) - rhs)

    h = MP.mpf(10) ** -4
    assert MP.log(resid(h) / resid(h / 2), 2) >= 1.9


def test_l3_against_recursion_quadrature():
    # L_3(t) = -int_t^{1/3} L_2(x/(1-x)) dx / x
    t = MP.mpf("0.15")
    q = integrate(lambda x: EV.L(2, x / (1 - x)) / x, t, MP.one / 3, CTX).value
    assert abs(EV.L(3, t) + q) < TOL


@pytest.mark.parametrize("k, plans", [(4, (0, 1, 2, 3)), (5, (1, 2, 3)), (6, (2, 3))])
def test_plans_agree(k, plans):
    values = [EV.L_plan(k, Fraction(1, 10), n) for n in plans]
    assert max(values) - min(values) < MP.mpf(10) ** -25


def test_l4_plans_match_series():
    t = Fraction(23, 100)
    assert abs(EV.L_plan(4, t, 2) - EV.L(4, t)) < MP.mpf(10) ** -25


def test_memo_reuses_values():
    a = EV.L(5, Fraction(1, 12))
    assert EV.L(5, Fraction(1, 12)) is a


# --- f_n and M_{k,n} -------------------------------------------------------------


def test_f1_is_log():
    assert EV.f(1, MP.mpf("0.3")) == MP.log(MP.mpf("0.3"))


@pytest.mark.parametrize("n, t", [(2, "0.2"), (3, "0.15"), (4, "0.1")])
def test_f_against_definition(n, t):
    # f_n(t) = -int_t^{1/n} f_{n-1}(x) dx / (x (1 - (n-1) x))
    t = MP.mpf(t)
    q = integrate(lambda x: EV.f(n - 1, x) / (x * (1 - (n - 1) * x)), t, MP.one / n, CTX).value
    assert abs(EV.f(n, t) + q) < TOL


def test_m_with_n_zero_is_l():
    assert abs(EV.M(3, 0, MP.mpf("0.2")) - EV.L(3, MP.mpf("0.2"))) < TOL


def test_m_empty_range():
    assert EV.M(7, 3, Fraction(1, 7)) == 0


def test_m_equals_closed_sum():
    t = MP.mpf("0.1")
    assert abs(EV.M(5, 2, t) - EV.M_sum(5, 2, t)) < MP.mpf(10) ** -28


def test_module_level_wrappers():
    assert dk.L(2, Fraction(1, 2), CTX) == 0
    assert dk.f(0, "0.3", CTX) == 1
    assert abs(dk.M_kn(3, 0, "0.2", CTX) - EV.L(3, MP.mpf("0.2"))) < TOL


def test_argument_errors():
    with pytest.raises(DomainError):
        EV.L(3, Fraction(1, 2))
    with pytest.raises(DomainError):
        EV.L(2, 0)
    with pytest.raises(ParameterError):
        EV.L(10, "0.01")
    with pytest.raises(ParameterError):
        EV.f(5, "0.1")
    with pytest.raises(ParameterError):
        EV.M(8, 1, "0.1")
    with pytest.raises(ParameterError):
        EV.L4("0.2", "guess")


@pytest.mark.parametrize("k, n", [(5, 0), (9, 3), (6, 5), (3, 1), (10, 4)])
def test_invalid_plans(k, n):
    with pytest.raises(ParameterError):
        dk.DecompositionPlan(k, n)


def test_bad_threshold():
    with pytest.raises(ParameterError):
        dk.DickmanEvaluator(CTX, t4_threshold=Fraction(1, 4))


def test_other_threshold_same_values():
    ev = dk.DickmanEvaluator(CTX, t4_threshold=Fraction(22, 100))
    t = Fraction(23, 100)
    assert abs(ev.L(4, t) - EV.L(4, t)) < TOL
    assert abs(ev.C4 - EV.C4) < TOL


def test_g4_cache_round_trip(tmp_path):
    path = tmp_path / "g4.txt"
    first = dk.DickmanEvaluator(CTX, g4_order=120, g4_cache=path)
    v = first.L(4, Fraction(24, 100))
    assert path.exists()
    second = dk.DickmanEvaluator(CTX, g4_order=120, g4_cache=path)
    assert second.L(4, Fraction(24, 100)) == v


# --- F(alpha) ----------------------------------------------------------------------


def test_f_half():
    assert abs(dk.dickman_F(Fraction(1, 2), CTX) - (1 - CTX.constants.log2)) < TOL


@pytest.mark.parametrize("name", ["F(1/3)", "F(1/4)", "F(1/5)"])
def test_f_reference_digits(name):
    alpha = Fraction(name[2:-1])
    value = dk.dickman_F(alpha, CTX)
    assert abs(value / ref(name) - 1) < MP.mpf(10) ** -29


@pytest.mark.parametrize("alpha", [1, Fraction(3, 2), "7"])
def test_f_is_one_above_one(alpha):
    assert dk.dickman_F(alpha, CTX) == 1


def test_f_string_rational():
    assert dk.dickman_F("1/3", CTX) == dk.dickman_F(Fraction(1, 3), CTX)


def test_f_errors():
    with pytest.raises(DomainError):
        dk.dickman_F(0, CTX)
    with pytest.raises(DomainError):
        dk.dickman_F("-0.5", CTX)
    with pytest.raises(UnsupportedWeightError):
        dk.dickman_F(Fraction(1, 11), CTX)
    with pytest.raises(UnsupportedWeightError):
        dk.dickman_F(MP.mpf("0.099"), CTX)


def test_f_monotone():
    ctx = make_context(12)
    alphas = ["0.11", "0.15"] + [f"{a / 100:.2f}" for a in range(20, 100, 5)]
    values = [dk.dickman_F(MP.mpf(a), ctx) for a in alphas]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_f_more_digits_agree():
    lo = dk.dickman_F(Fraction(1, 4), make_context(30))
    hi = dk.dickman_F(Fraction(1, 4), make_context(40))
    assert MP.nstr(lo, 30) == MP.nstr(hi, 40)[:32] or abs(lo / hi - 1) < MP.mpf(10) ** -30


# --- constants ------------------------------------------------------------------


def test_closed_constants():
    c = EV.closed_constants()
    assert c[0] == 1 and c[1] == 0
    assert dk.constant_C(2, "closed", CTX) == -CTX.constants.pi ** 2 / 12
    assert abs(dk.constant_C(3, "closed", CTX) + CTX.constants.zeta(3) / 3) < TOL


def test_c4_matched():
    assert abs(dk.constant_C(4, "matched", CTX) - CTX.constants.pi ** 4 / 1440) < TOL


@pytest.mark.parametrize("k, method", [(4, "closed"), (3, "matched"), (2, "fitted"), (10, "fitted"), (4, "guess")])
def test_constant_bad_method(k, method):
    with pytest.raises(ParameterError):
        dk.constant_C(k, method, CTX)


def test_fitted_c5_with_uncertainty():
    ctx = make_context(20)
    fit = dk.fitted_constant(5, ctx)
    from dickman.series import gf_coefficients

    exact = gf_coefficients(6, ctx)[5]
    assert fit.uncertainty > 0
    assert abs(fit.value - exact) < ctx.mp.mpf(10) ** -20


def test_fit_schedule_grows_with_digits():
    assert dk.fit_schedule(20)[0] < dk.fit_schedule(40)[0]
    assert dk.fit_schedule(1)[0] == 12


def test_constants_table_provenance():
    table = dk.constants_table(make_context(20), fit_through=5)
    assert table.provenance == ["closed"] * 4 + ["matched", "fitted"]
    assert len(table.uncertainty) == 6 and table.uncertainty[5] > 0


# --- M_4 and identities -------------------------------------------------------------


def test_m4_matches_taylor_integration():
    assert abs(dk.m4(Fraction(1, 4), CTX) - dk.m4_series(Fraction(1, 4), CTX)) < TOL


def test_m4_small_argument():
    # leading behaviour -y (log(y)**2 - 2 log(y) + 2) from the log(x)**2 Li_1(-2x) term
    y = MP.mpf(10) ** -15
    ly = MP.log(y)
    value = dk.m4(y, CTX)
    assert abs(value) < 2 * MP.mpf(10) ** -12
    assert abs(value / (-y * (ly**2 - 2 * ly + 2)) - 1) < 0.05
    assert abs(value - dk.m4_series(y, CTX)) < MP.mpf(10) ** -40


def test_m4_domain():
    with pytest.raises(DomainError):
        dk.m4(Fraction(3, 5), CTX)
    with pytest.raises(DomainError):
        dk.m4(0, CTX)


def test_c4_closed_form_identity():
    assert dk.check_identity("C4", None, CTX) < MP.mpf(10) ** -28


def test_l33():
    assert dk.check_identity("L33", None, CTX) < TOL


@pytest.mark.parametrize("t", ["0.05", "0.2", "0.3", "0.13"])
def test_l32(t):
    assert dk.check_identity("L32", {"t": t}, CTX) < TOL


@pytest.mark.parametrize("t", ["0.05", "0.17", "0.3"])
def test_l31_direct(t):
    assert dk.check_identity("L31", {"t": t}, CTX) < TOL


def test_l31_derivative_order():
    r1 = dk.check_identity("L31", {"t": "0.2", "h": MP.mpf("1e-4")}, CTX)
    r2 = dk.check_identity("L31", {"t": "0.2", "h": MP.mpf("5e-5")}, CTX)
    assert MP.log(r1 / r2, 2) >= 1.9


def test_f1_second_order():
    r1 = dk.check_identity("F1", {"alpha": "0.3", "h": MP.mpf("1e-8")}, CTX)
    r2 = dk.check_identity("F1", {"alpha": "0.3", "h": MP.mpf("5e-9")}, CTX)
    assert 3.5 < r1 / r2 < 4.5


def test_identity_errors():
    with pytest.raises(DomainError):
        dk.check_identity("L32", {"t": "0.4"}, CTX)
    with pytest.raises(DomainError):
        dk.check_identity("F1", {"alpha": "0.6"}, CTX)
    with pytest.raises(ParameterError):
        dk.check_identity("L99", None, CTX)
