"""Dickman polylogarithms L_k, the auxiliary functions f_n, and F(alpha).

Evaluation strategy by weight:

* ``L_0 .. L_3`` and ``f_0 .. f_4`` have closed forms in standard polylogs
  (``f_4`` and ``L_4`` also need the tetralog below);
* ``L_4`` uses the rational Taylor series about ``t = 1/4`` above the
  threshold ``t4`` and the small-argument expansion with the exact
  ``a_n, b_n`` tables below it; the constant ``C_4`` is obtained by
  matching the two at ``t4``;
* ``L_5 .. L_9`` use the integration-by-parts decomposition

      L_k(t) = (-1)**n M_{k,n}(t) - sum_{m=1}^n (-1)**m L_{k-m}(t/(1-mt)) f_m(t)

  where ``M_{k,n}`` is a single log-space quadrature whose integrand only
  involves ``L_{k-n-1}`` (weight <= 4) and ``f_n``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from mpmath.libmp import to_fixed

from .errors import DomainError, ParameterError, UnsupportedWeightError
from .polylog import li
from .precision import PrecisionContext, zeta_odd
from .quadrature import integrate, integrate_logspace
from .series import dump_series, g_series, leading_coefficient, load_series, s4_coefficients

T4_DEFAULT = Fraction(2358, 10000)
G4_ORDER_DEFAULT = 300
MAX_WEIGHT = 9
DEFAULT_PLANS = {5: 2, 6: 3, 7: 3, 8: 3, 9: 4}
_FIXED_GUARD = 32
S4_MAX_TERMS = 12000


@dataclass(frozen=True)
class DecompositionPlan:
    """Which ``(L_{k-n-1}, f_n)`` pair drives the quadrature for ``L_k``."""

    k: int
    n: int

    def __post_init__(self):
        if not 4 <= self.k <= MAX_WEIGHT:
            raise ParameterError(f"decomposition plans cover weights 4..9, got k={self.k}")
        lowest = 0 if self.k == 4 else 1
        if not lowest <= self.n <= min(4, self.k - 1):
            raise ParameterError(f"split index n={self.n} invalid for k={self.k}")
        if self.k - self.n - 1 > 4:
            raise ParameterError(
                f"plan (k={self.k}, n={self.n}) needs L_{self.k - self.n - 1} inside the integrand"
            )


@dataclass
class ConstantsTable:
    """C_0..C_9 with per-entry provenance and (for fitted entries) uncertainty."""

    c: list
    provenance: list
    uncertainty: list = field(default_factory=list)

    def __getitem__(self, k):
        return self.c[k]


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and "/" in x:
        return Fraction(x)
    return None


class DickmanEvaluator:
    """Evaluates the Dickman polylogarithm stack at one working precision.

    Tables (the ``g_4`` series, the ``a_n, b_n`` sums, ``C_4``) are built
    lazily on first use and then shared. The memo of ``L_k`` values for
    ``k >= 5`` is the only mutable state; writes are idempotent.
    """

    def __init__(
        self,
        ctx: PrecisionContext,
        t4_threshold=T4_DEFAULT,
        g4_order: int = G4_ORDER_DEFAULT,
        g4_cache=None,
        plans=None,
        max_level: int = 12,
    ):
        self.ctx = ctx
        self.mp = ctx.mp
        self.t4_threshold = Fraction(t4_threshold)
        if not Fraction(1, 5) <= self.t4_threshold < Fraction(1, 4):
            raise ParameterError("t4 threshold must lie in [1/5, 1/4)")
        self.g4_order = g4_order
        self.g4_cache = g4_cache
        self.plans = dict(DEFAULT_PLANS if plans is None else plans)
        for k, n in self.plans.items():
            DecompositionPlan(k, n)
        self.max_level = max_level
        self._memo = {}
        self._lock = threading.Lock()
        self._tables = {}
        mp = self.mp
        self._pi = ctx.constants.pi
        self._zeta3 = zeta_odd(3, ctx)
        self._t4 = ctx.convert(self.t4_threshold)
        self._wp = ctx.work_bits + _FIXED_GUARD

    # --- lazily built tables ---------------------------------------------

    def _table(self, name, make):
        try:
            return self._tables[name]
        except KeyError:
            value = make()
            with self._lock:
                return self._tables.setdefault(name, value)

    @property
    def g4(self):
        """Rational Taylor series of ``L_4(1/4 - z)``."""
        return self._table("g4", self._load_g4)

    def _load_g4(self):
        order = max(self.g4_order, self._g4_terms_needed() + 8)
        if self.g4_cache is not None:
            try:
                series = load_series(self.g4_cache)
                if series.order >= order and series.coeffs[4] == leading_coefficient(4):
                    return series.truncate(order)
            except (OSError, ParameterError):
                pass
        series = g_series(4, order)
        if self.g4_cache is not None:
            try:
                dump_series(series, self.g4_cache)
            except OSError:
                pass
        return series

    def _g4_terms_needed(self) -> int:
        # coefficients grow like 12**n (nearest singularity at z = -1/12)
        z = float(Fraction(1, 4) - self.t4_threshold)
        return math.ceil((self._wp + 16) * math.log(2) / -math.log(12 * z)) + 16

    def _g4_fixed(self):
        def make():
            wp = self._wp
            coeffs = [(c.numerator << wp) // c.denominator for c in self.g4.coeffs]
            sizes = [
                (math.log2(abs(c.numerator)) - math.log2(c.denominator)) if c else -math.inf
                for c in self.g4.coeffs
            ]
            return coeffs, sizes

        return self._table("g4_fixed", make)

    def _s4_terms_needed(self, y: float | None = None) -> int:
        if y is None:
            t4 = float(self.t4_threshold)
            y = t4 / (1 - 2 * t4)
        return math.ceil((self._wp + 16) * math.log(2) / -math.log(2 * y)) + 40

    @property
    def s4(self):
        return self._s4_tables(self._s4_terms_needed())[0]

    def _s4_tables(self, need: int):
        """(exact tables, fixed-point a, b) holding at least ``need`` terms.

        a_n, b_n grow like 2**n; the fixed-point copies are scaled by 2**-n
        and summed against powers of 2y so every factor stays bounded.
        """
        current = self._tables.get("s4")
        if current is not None and current[0].order >= need:
            return current
        if need > S4_MAX_TERMS:
            raise DomainError(f"small-t expansion of L_4 would need {need} terms (limit {S4_MAX_TERMS})")
        order = max(need, self._s4_terms_needed())
        s4 = s4_coefficients(order)
        wp = self._wp
        a = [(c.numerator << wp) // (c.denominator << n) for n, c in enumerate(s4.a)]
        b = [(c.numerator << wp) // (c.denominator << n) for n, c in enumerate(s4.b)]
        with self._lock:
            current = self._tables.get("s4")
            if current is None or current[0].order < order:
                self._tables["s4"] = current = (s4, a, b)
        return current

    @property
    def C4(self):
        """C_4 from matching the two L_4 strategies at the threshold."""
        return self._table("C4", self._match_c4)

    def _match_c4(self):
        t4 = self._t4
        return self._L4_taylor(t4) - self._L4_small_rest(t4)

    # --- weight <= 4 -----------------------------------------------------

    def _L2(self, t):
        mp = self.mp
        lt = mp.log(t)
        return li(2, t, self.ctx) + lt * lt / 2 - self._pi**2 / 12

    def _L3(self, t):
        mp, ctx = self.mp, self.ctx
        lt = mp.log(t)
        u = 1 - 2 * t
        return (
            li(3, 2 * t - 1, ctx)
            - li(3, u, ctx)
            - li(3, t, ctx)
            - li(3, 2 - 1 / t, ctx)
            + mp.log(t / u) * self._L2(t)
            + self._pi**2 / 6 * lt
            - lt**3 / 6
            + Fraction(17, 12) * self._zeta3
        )

    def _L4_taylor(self, t):
        mp = self.mp
        wp = self._wp
        z = Fraction(1, 4) - t if isinstance(t, Fraction) else mp.mpf(0.25) - t
        z = self.ctx.convert(z)
        coeffs, sizes = self._g4_fixed()
        if z == 0:
            return mp.zero
        lz = float(mp.log(abs(z), 2)) if z else -math.inf
        top = len(coeffs) - 1
        while top > 4 and sizes[top] + top * lz < -wp - 8:
            top -= 1
        if top == len(coeffs) - 1 and sizes[top] + top * lz > -wp:
            raise DomainError(f"g4 series too short for z = {mp.nstr(z, 5)}")
        Z = to_fixed(z._mpf_, wp)
        acc = 0
        for n in range(top, -1, -1):
            acc = ((acc * Z) >> wp) + coeffs[n]
        return mp.ldexp(mp.mpf(acc), -wp)

    def _s4_sums(self, y):
        """(sum a_n (-y)**n, sum b_n (-y)**n) over n >= 2 in fixed point."""
        mp = self.mp
        wp = self._wp
        _, a, b = self._s4_tables(self._s4_terms_needed(float(y)))
        Y = -to_fixed((2 * y)._mpf_, wp)
        power = (Y * Y) >> wp
        sa = sb = 0
        n = 2
        limit = len(a)
        while power and n < limit:
            sa += (a[n] * power) >> wp
            sb += (b[n] * power) >> wp
            power = (power * Y) >> wp
            n += 1
        if power:
            raise DomainError(f"S4 tables too short for y = {mp.nstr(y, 5)}")
        return mp.ldexp(mp.mpf(sa), -wp), mp.ldexp(mp.mpf(sb), -wp)

    def _L4_small_rest(self, t):
        """L_4(t) - C_4 from the small-argument expansion."""
        mp, ctx = self.mp, self.ctx
        t = ctx.convert(t)
        x = t / (1 - t)
        y = t / (1 - 2 * t)
        lt = mp.log(t)
        lx = mp.log(x)
        ly = mp.log(y)
        sa, sb = self._s4_sums(y)
        ly2 = ly * ly
        return (
            sa
            + sb * ly
            + self._L3(x) * lt
            + li(2, -y, ctx) * ly2
            + (li(2, -x, ctx) + lx * lx / 2) * (self._pi**2 / 12 - ly2 / 2)
            + ly2 * ly2 / 8
        )

    def _L4(self, t, strategy=None):
        if strategy is None:
            strategy = "taylor" if t > self._t4 else "small"
        if strategy == "taylor":
            return self._L4_taylor(t)
        return self.C4 + self._L4_small_rest(t)

    # --- auxiliary functions ---------------------------------------------

    def _f(self, n, t):
        mp = self.mp
        if n == 0:
            return mp.one
        lt = mp.log(t)
        if n == 1:
            return lt
        f2 = mp.log(t / (1 - t)) * lt - self._L2(t)
        if n == 2:
            return f2
        f3 = mp.log(t / (1 - 2 * t)) * f2 - self._L2(t / (1 - t)) * lt + self._L3(t)
        if n == 3:
            return f3
        return (
            -self._L4(t)
            + self._L3(t / (1 - t)) * lt
            - self._L2(t / (1 - 2 * t)) * f2
            + mp.log(t / (1 - 3 * t)) * f3
        )

    # --- general weight --------------------------------------------------

    def _L(self, k, t):
        mp = self.mp
        if k == 0:
            return mp.one
        if k == 1:
            return mp.log(t)
        if k == 2:
            return self._L2(t)
        if k == 3:
            return self._L3(t)
        if k == 4:
            return self._L4(t)
        key = (k, t._mpf_)
        try:
            return self._memo[key]
        except KeyError:
            pass
        value = self._L_by_plan(k, t, self.plans[k])
        with self._lock:
            return self._memo.setdefault(key, value)

    def _M(self, k, n, t):
        """-int_t^{1/k} L_{k-n-1}(x/(1-(n+1)x)) f_n(x) dx / (x(1-nx))."""
        mp = self.mp
        upper = mp.one / k
        if t >= upper:
            return mp.zero
        j = k - n - 1

        def integrand(x):
            return self._L(j, x / (1 - (n + 1) * x)) * self._f(n, x) / (x * (1 - n * x))

        result = integrate_logspace(integrand, t, upper, self.ctx, max_level=self.max_level)
        return -result.value

    def _L_by_plan(self, k, t, n):
        mp = self.mp
        if t >= mp.one / k:
            return mp.zero
        total = (-1) ** n * self._M(k, n, t)
        for m in range(1, n + 1):
            total -= (-1) ** m * self._L(k - m, t / (1 - m * t)) * self._f(m, t)
        return total

    # --- public surface ----------------------------------------------------

    def _argument(self, t, upper: Fraction | None):
        ctx = self.ctx
        frac = _as_fraction(t)
        if frac is not None:
            if frac <= 0 or (upper is not None and frac > upper):
                raise DomainError(f"argument {frac} outside (0, {upper}]")
            return ctx.convert(frac), frac == upper
        x = ctx.convert(t)
        if x <= 0:
            raise DomainError(f"argument {x} must be positive")
        if upper is not None:
            up = ctx.convert(upper)
            slack = up * ctx.eps * 16
            if x > up + slack:
                raise DomainError(f"argument {x} outside (0, {upper}]")
            if x >= up - slack:
                return up, True
        return x, False

    def L(self, k: int, t):
        """Dickman polylogarithm ``L_k(t)``, ``0 < t <= 1/k``."""
        if not isinstance(k, int) or not 0 <= k <= MAX_WEIGHT:
            raise ParameterError(f"weight k must be in 0..{MAX_WEIGHT}, got {k!r}")
        if k == 0:
            x, _ = self._argument(t, None)
            return self.mp.one
        x, at_boundary = self._argument(t, Fraction(1, k))
        if at_boundary:
            return self.mp.zero
        return self._L(k, x)

    def L_plan(self, k: int, t, n: int):
        """``L_k(t)`` through an explicit decomposition plan (k >= 4)."""
        DecompositionPlan(k, n)
        x, at_boundary = self._argument(t, Fraction(1, k))
        if at_boundary:
            return self.mp.zero
        return self._L_by_plan(k, x, n)

    def L4(self, t, strategy: str):
        """``L_4(t)`` by a forced strategy: ``"taylor"`` or ``"small"``."""
        if strategy not in ("taylor", "small"):
            raise ParameterError(f"unknown L4 strategy {strategy!r}")
        x, at_boundary = self._argument(t, Fraction(1, 4))
        return self._L4(x, strategy)

    def f(self, n: int, t):
        """Auxiliary function ``f_n(t)``, ``0 < t <= 1/n``."""
        if not isinstance(n, int) or not 0 <= n <= 4:
            raise ParameterError(f"f_n is available for n = 0..4, got {n!r}")
        x, _ = self._argument(t, Fraction(1, n) if n else None)
        return self._f(n, x)

    def M(self, k: int, n: int, t):
        """``M_{k,n}(t)`` by quadrature; needs ``k > n >= 0`` and ``k - n - 1 <= 4``."""
        if not (isinstance(k, int) and isinstance(n, int) and k > n >= 0):
            raise ParameterError(f"M_kn needs integers k > n >= 0, got k={k!r}, n={n!r}")
        if n > 4:
            raise ParameterError("f_n is only available for n <= 4")
        if k - n - 1 > 4:
            raise ParameterError(f"M_{{{k},{n}}} would need L_{k - n - 1} inside the integrand")
        x, at_boundary = self._argument(t, Fraction(1, k))
        if at_boundary:
            return self.mp.zero
        return self._M(k, n, x)

    def M_sum(self, k: int, n: int, t):
        """Right-hand side of the closed evaluation of ``M_{k,n}``."""
        x, _ = self._argument(t, Fraction(1, k))
        total = self.mp.zero
        for m in range(n + 1):
            total += (-1) ** (n - m) * self._L(k - m, x / (1 - m * x)) * self._f(m, x)
        return total

    def F(self, alpha):
        """Dickman function as the finite sum of ``L_k(alpha)``."""
        mp = self.mp
        frac = _as_fraction(alpha)
        if frac is not None:
            if frac <= 0:
                raise DomainError(f"alpha must be positive, got {frac}")
            if frac >= 1:
                return mp.one
            K = (frac.denominator - 1) // frac.numerator
            if K > MAX_WEIGHT:
                raise UnsupportedWeightError(f"alpha = {frac} < 1/10 needs weight {K}")
            return mp.fsum(self.L(k, frac) for k in range(K + 1))
        a = self.ctx.convert(alpha)
        if a <= 0:
            raise DomainError(f"alpha must be positive, got {a}")
        if a >= 1:
            return mp.one
        K = int(mp.ceil(1 / a)) - 1
        if K > MAX_WEIGHT:
            raise UnsupportedWeightError(f"alpha = {a} < 1/10 needs weight {K}")
        return mp.fsum(self.L(k, a) for k in range(K + 1))

    # --- constants ---------------------------------------------------------

    def closed_constants(self):
        """C_0..C_3 in closed form."""
        mp = self.mp
        return [mp.one, mp.zero, -self._pi**2 / 12, -self._zeta3 / 3]

    def fit_constant(
        self,
        k: int,
        lower,
        p0: int | None = None,
        orders: int | None = None,
        extra: int = 2,
        lower_uncertainty=None,
    ):
        """Estimate C_k from L_k at t = 2**-p, p = p0, p0+1, ...

        ``lower`` supplies C_0..C_{k-1}. The residual
        ``L_k(t) - sum_{j=1}^k C_{k-j} log(t)**j / j!`` is fitted by least
        squares to ``C_k + sum_{m=1}^{orders} t**m sum_{j<k} d_{mj} log(t)**j``.

        The reported uncertainty adds three parts: the largest leave-one-out
        deviation, the size of the first omitted order at the largest sample
        (the highest fitted order times t), and the effect of
        ``lower_uncertainty`` pushed through the linear fit.
        """
        mp = self.mp
        if not 4 <= k <= MAX_WEIGHT:
            raise ParameterError(f"fitted constants cover k = 4..9, got {k}")
        if p0 is None or orders is None:
            p0_default, orders_default = fit_schedule(self.ctx.target_digits)
            p0 = p0_default if p0 is None else p0
            orders = orders_default if orders is None else orders
        nparams = 1 + orders * k
        rows, rhs, logs = [], [], []
        for p in range(p0, p0 + nparams + extra):
            t = mp.ldexp(mp.one, -p)
            lt = mp.log(t)
            r = self._L(k, t)
            power = mp.one
            powers = []
            for j in range(1, k + 1):
                power = power * lt / j
                powers.append(power)
                r -= lower[k - j] * power
            rows.append([mp.one] + [t**m * lt**j for m in range(1, orders + 1) for j in range(k)])
            rhs.append(r)
            logs.append(powers)
        scale = [max(abs(row[i]) for row in rows) for i in range(nparams)]

        def solve(rs, bs):
            A = mp.matrix([[row[i] / scale[i] for i in range(nparams)] for row in rs])
            x = mp.qr_solve(A, mp.matrix(bs))[0]
            return [x[i] / scale[i] for i in range(nparams)]

        coeffs = solve(rows, rhs)
        value = coeffs[0]
        spread = max(
            abs(solve(rows[:i] + rows[i + 1:], rhs[:i] + rhs[i + 1:])[0] - value) for i in range(len(rows))
        )
        t0 = mp.ldexp(mp.one, -p0)
        top = rows[0][1 + (orders - 1) * k:]
        truncation = abs(mp.fsum(c * v for c, v in zip(coeffs[1 + (orders - 1) * k:], top))) * t0
        propagated = mp.zero
        if lower_uncertainty is not None:
            for j in range(1, k + 1):
                u = lower_uncertainty[k - j]
                if u:
                    sensitivity = solve(rows, [powers[j - 1] for powers in logs])[0]
                    propagated += abs(sensitivity) * u
        return FitResult(value, spread + truncation + propagated, p0, orders, len(rows), spread, truncation, propagated)


@dataclass(frozen=True)
class FitResult:
    value: Any
    uncertainty: Any
    p0: int
    orders: int
    samples: int
    loo_spread: Any = None
    truncation: Any = None
    propagated: Any = None


def fit_schedule(target_digits: int) -> tuple[int, int]:
    """Smallest sampled exponent and number of correction orders for a fit.

    The neglected correction behaves like ``2**(-p0 (orders + 1))``.
    """
    orders = 2
    p0 = max(12, math.ceil((target_digits + 8) * LOG2_10 / (orders + 1)))
    return p0, orders


LOG2_10 = math.log2(10)

# --- module-level operations ------------------------------------------------

_EVALUATORS: dict = {}
_EVALUATORS_LOCK = threading.Lock()
CLOSED, MATCHED, FITTED = "closed", "matched", "fitted"


def get_evaluator(ctx: PrecisionContext, t4_threshold=T4_DEFAULT, g4_cache=None) -> DickmanEvaluator:
    """Shared evaluator per (context, threshold, cache path)."""
    key = (ctx, Fraction(t4_threshold), None if g4_cache is None else str(g4_cache))
    with _EVALUATORS_LOCK:
        ev = _EVALUATORS.get(key)
        if ev is None:
            ev = _EVALUATORS[key] = DickmanEvaluator(ctx, t4_threshold=t4_threshold, g4_cache=g4_cache)
    return ev


def L(k: int, t, ctx: PrecisionContext):
    return get_evaluator(ctx).L(k, t)


def f(n: int, t, ctx: PrecisionContext):
    return get_evaluator(ctx).f(n, t)


def M_kn(k: int, n: int, t, ctx: PrecisionContext):
    return get_evaluator(ctx).M(k, n, t)


def dickman_extra_digits(alpha) -> int:
    """Decimal digits lost because F(alpha) ~ rho(1/alpha) is small."""
    u = 1 / float(alpha)
    if u <= 1:
        return 0
    return math.ceil(u * math.log10(1.5 * u)) + 1


def dickman_F(alpha, ctx: PrecisionContext, **kwargs):
    """F(alpha) to ``ctx.target_digits`` significant digits.

    ``alpha`` may be an exact :class:`~fractions.Fraction`, an ``"p/q"``
    string, an int or a real. Works internally with extra guard digits to
    absorb the cancellation in the sum of ``L_k(alpha)``.
    """
    frac = _as_fraction(alpha)
    probe = frac if frac is not None else ctx.convert(alpha)
    if probe <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    inner = ctx.extended(dickman_extra_digits(probe)) if probe < 1 else ctx
    value = get_evaluator(inner, **kwargs).F(frac if frac is not None else alpha)
    return +ctx.convert(value)


def constant_C(k: int, method: str, ctx: PrecisionContext):
    """Dickman constant C_k by ``closed`` (k <= 3), ``matched`` (k = 4) or
    ``fitted`` (4 <= k <= 9)."""
    if method == CLOSED and isinstance(k, int) and 0 <= k <= 3:
        return get_evaluator(ctx).closed_constants()[k]
    if method == MATCHED and k == 4:
        return get_evaluator(ctx).C4
    if method == FITTED and isinstance(k, int) and 4 <= k <= MAX_WEIGHT:
        return fitted_constant(k, ctx).value
    raise ParameterError(f"method {method!r} is not available for k = {k!r}")


FIT_GUARD_DIGITS = 20


def fitted_constant(k: int, ctx: PrecisionContext) -> FitResult:
    """C_k fitted at ``ctx.target_digits`` (lower constants fitted first)."""
    return _fitted_chain(ctx, k)[k]


def _fitted_chain(ctx: PrecisionContext, upto: int) -> dict:
    inner = ctx.extended(FIT_GUARD_DIGITS)
    ev = get_evaluator(inner)
    chain = ctx.cached("fitted-constants", dict)
    lower = ev.closed_constants() + [ev.C4]
    # C_4 is matched at the inner precision; its residual error is far below the fits'
    unc = [inner.mp.zero] * 4 + [inner.tolerance * inner.mp.mpf(10) ** -FIT_GUARD_DIGITS]
    for k in range(4, upto + 1):
        if k not in chain:
            chain[k] = ev.fit_constant(k, lower, lower_uncertainty=unc)
        if k >= 5:
            lower.append(chain[k].value)
            unc.append(chain[k].uncertainty)
    return chain


def constants_table(ctx: PrecisionContext, fit_through: int = MAX_WEIGHT) -> ConstantsTable:
    """C_0..C_9: closed forms, the matched C_4 and fitted C_5.. entries."""
    ev = get_evaluator(ctx)
    values = ev.closed_constants() + [ev.C4]
    provenance = [CLOSED] * 4 + [MATCHED]
    uncertainty = [ctx.mp.zero] * 5
    chain = _fitted_chain(ctx, fit_through) if fit_through >= 5 else {}
    for k in range(5, fit_through + 1):
        values.append(+chain[k].value)
        provenance.append(FITTED)
        uncertainty.append(+chain[k].uncertainty)
    return ConstantsTable(values, provenance, uncertainty)


# --- M_4 and the C_4 closed-form check ------------------------------------------


def m4(y, ctx: PrecisionContext):
    """int_0^y (log(x/(1+2x)) Li_2(x) + log(x)**2 Li_1(-2x)/2) dx / (x (1+x)), 0 < y <= 1/2."""
    mp = ctx.mp
    y = ctx.convert(y)
    if not 0 < y <= mp.mpf(0.5):
        raise DomainError(f"m4 needs 0 < y <= 1/2, got {y}")

    def integrand(x):
        lx = mp.log(x)
        l2x = mp.log1p(2 * x)
        return ((lx - l2x) * li(2, x, ctx) - lx * lx * l2x / 2) / (x * (1 + x))

    return integrate(integrand, 0, y, ctx).value


def m4_series(y, ctx: PrecisionContext):
    """M_4(y) by integrating the Taylor expansion of the integrand term by term.

    With ``Li_2(x)/(1+x) = sum q_n x**n``, ``-log(1+2x)/(1+x) = sum r_n x**n``
    and ``c_n`` the S4 product coefficients, each power integrates in closed
    form against ``1, log x, log(x)**2``. Converges for ``y < 1/2``.
    """
    mp = ctx.mp
    y = ctx.convert(y)
    if not 0 < y < mp.mpf(0.49):
        raise DomainError(f"m4_series needs 0 < y < 0.49, got {y}")
    nterms = math.ceil((ctx.work_bits + 20) * math.log(2) / -math.log(2 * float(y))) + 20
    c = s4_coefficients(nterms + 1).c
    ly = mp.log(y)
    total = mp.zero
    q = Fraction(0)
    r = Fraction(0)
    power = mp.one
    for n in range(1, nterms + 1):
        q = Fraction(1, n * n) - q
        r = Fraction((-1) ** n * 2**n, n) - r
        power *= y
        qn = ctx.convert(q)
        rn = ctx.convert(r)
        total += power * (
            qn * (ly / n - mp.one / n**2)
            - ctx.convert(c[n]) / n
            + rn * (ly * ly / n - 2 * ly / n**2 + mp.mpf(2) / n**3) / 2
        )
    return total


def c4_closed_form(ctx: PrecisionContext):
    """C_4 from M_4(1/2) plus standard polylogarithm constants."""
    mp = ctx.mp
    consts = ctx.constants
    pi, l2, l3, z3 = consts.pi, consts.log2, consts.log3, consts.zeta(3)
    quarter = Fraction(1, 4)
    return (
        m4(Fraction(1, 2), ctx)
        + 3 * li(4, Fraction(1, 2), ctx)
        - mp.mpf(3) / 8 * li(4, quarter, ctx)
        - 3 * l2 / 4 * li(3, quarter, ctx)
        + (pi**2 - 9 * l2**2) / 12 * li(2, quarter, ctx)
        + 21 * l2 * z3 / 8
        + pi**2 * l2**2 / 24
        - pi**2 * l2 * l3 / 6
        + l2**3 * l3 / 2
        - 5 * l2**4 / 8
    )


# --- identity checks ------------------------------------------------------------


def _l31_rhs(t, ctx: PrecisionContext):
    mp = ctx.mp
    ev = get_evaluator(ctx)
    c0, c1, c2, c3 = ev.closed_constants()
    lt = mp.log(t)

    def integrand(x):
        l1 = -mp.log1p(-x)
        return (li(2, x / (1 - x), ctx) + l1 * l1 / 2) / x

    integral = integrate(integrand, 0, t, ctx).value
    return c3 + c2 * lt + lt**3 / 6 - li(3, t, ctx) + li(2, t, ctx) * lt + integral


def _l32_rhs(t, ctx: PrecisionContext):
    mp = ctx.mp

    def integrand(x):
        l1 = -mp.log1p(-x)
        return (li(2, x / (1 - x), ctx) + l1 * l1 / 2) / x

    integral = integrate(integrand, 0, t, ctx).value
    li1_2t = -mp.log1p(-2 * t)
    li1_1mt = -mp.log(t)
    return (
        integral
        + li(3, 1 - 2 * t, ctx)
        - li(3, 2 * t - 1, ctx)
        + li(3, -t / (1 - 2 * t), ctx)
        + (
            -li(2, t, ctx)
            + li1_2t**2 / 6
            - li1_2t * li1_1mt / 2
            + mp.mpf(3) / 2 * li(2, 1, ctx)
        )
        * li1_2t
    )


IDENTITIES = ("L31", "L32", "L33", "F1", "C4")


def check_identity(name: str, params: dict | None, ctx: PrecisionContext):
    """|LHS - RHS| for one of the named identities.

    ``L31``/``L32`` take ``t`` in (0, 1/3); ``L31`` with ``h`` instead
    compares a central difference of its right-hand side with
    ``L_2(t/(1-t))/t``. ``F1`` takes ``alpha`` in (0.1, 0.5) and step ``h``.
    """
    params = dict(params or {})
    mp = ctx.mp
    consts = ctx.constants
    if name == "L33":
        l3 = consts.log3
        lhs = 3 * (2 * li(3, Fraction(1, 3), ctx) - li(3, -3, ctx)) - l3**3
        return abs(lhs - mp.mpf(13) / 2 * consts.zeta(3))
    if name == "C4":
        return abs(c4_closed_form(ctx) - get_evaluator(ctx).C4)
    if name in ("L31", "L32"):
        t = ctx.convert(params.get("t", Fraction(1, 5)))
        if not 0 < t < mp.one / 3:
            raise DomainError(f"{name} needs 0 < t < 1/3, got {t}")
        if name == "L32":
            return abs(_l32_rhs(t, ctx) - mp.mpf(7) / 4 * consts.zeta(3))
        h = params.get("h")
        if h is None:
            return abs(get_evaluator(ctx).L(3, t) - _l31_rhs(t, ctx))
        h = ctx.convert(h)
        slope = (_l31_rhs(t + h, ctx) - _l31_rhs(t - h, ctx)) / (2 * h)
        return abs(slope - get_evaluator(ctx).L(2, t / (1 - t)) / t)
    if name == "F1":
        alpha = ctx.convert(params.get("alpha", Fraction(3, 10)))
        h = ctx.convert(params.get("h", mp.mpf(10) ** -8))
        if not mp.mpf(0.1) < alpha < mp.mpf(0.5):
            raise DomainError(f"F1 needs 0.1 < alpha < 0.5, got {alpha}")
        slope = (dickman_F(alpha + h, ctx) - dickman_F(alpha - h, ctx)) / (2 * h)
        return abs(slope - dickman_F(alpha / (1 - alpha), ctx) / alpha)
    raise ParameterError(f"unknown identity {name!r}; expected one of {IDENTITIES}")
