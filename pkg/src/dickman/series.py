"""Truncated power series over exact rationals and over mpmath reals.

Besides the usual algebra this module builds three families of
coefficients:

* ``g_series(n)``: the rational Taylor series of ``L_n(1/n - z)``, obtained
  by iterating the substitution-and-integrate recursion from
  ``g_1(z) = log(1 - z)``;
* ``s4_coefficients``: the rational tables ``a_n, b_n, c_n`` behind the
  small-argument expansion of ``L_4``;
* ``gf_coefficients``: the coefficients of ``exp(gamma z) / Gamma(1 - z)``,
  built by two unrelated routes that must agree.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import gmpy2

from .errors import ConsistencyError, ParameterError, SeriesDomainError
from .precision import PrecisionContext, even_zeta, zeta_odd


class _Series:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order > 6 else ""
        return f"{type(self).__name__}([{head}{more}], order={self.order})"

    def _new(self, coeffs):
        raise NotImplementedError

    def _zero(self):
        raise NotImplementedError

    def truncate(self, order: int):
        if order > self.order:
            raise SeriesDomainError(f"cannot extend a series of order {self.order} to {order}")
        return self._new(self.coeffs[:order])

    def __neg__(self):
        return self._new(-c for c in self.coeffs)

    def __add__(self, other):
        if isinstance(other, _Series):
            n = min(self.order, other.order)
            return self._new(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n]))
        return self._new((self.coeffs[0] + other,) + self.coeffs[1:])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _Series):
            return series_mul(self, other)
        return self._new(c * other for c in self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _Series):
            return series_div(self, other)
        return self._new(c / other for c in self.coeffs)

    def __eq__(self, other):
        return type(self) is type(other) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs))

    def evaluate(self, z):
        """Horner evaluation of the truncated polynomial at ``z``."""
        acc = self._zero()
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc


class RationalSeries(_Series):
    """Truncated series with exact :class:`fractions.Fraction` coefficients."""

    __slots__ = ()

    def __init__(self, coeffs: Sequence):
        super().__init__(Fraction(c) for c in coeffs)

    def _new(self, coeffs):
        return RationalSeries(coeffs)

    def _zero(self):
        return Fraction(0)

    def to_real(self, ctx: PrecisionContext) -> "RealSeries":
        return RealSeries((ctx.convert(c) for c in self.coeffs), ctx)


class RealSeries(_Series):
    """Truncated series with coefficients in a context's working precision."""

    __slots__ = ("ctx",)

    def __init__(self, coeffs, ctx: PrecisionContext):
        self.ctx = ctx
        super().__init__(ctx.convert(c) for c in coeffs)

    def _new(self, coeffs):
        return RealSeries(coeffs, self.ctx)

    def _zero(self):
        return self.ctx.mp.zero


def _same_kind(a: _Series, b: _Series):
    if type(a) is not type(b):
        raise SeriesDomainError(f"cannot combine {type(a).__name__} with {type(b).__name__}")


def series_mul(a: _Series, b: _Series) -> _Series:
    _same_kind(a, b)
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    zero = a._zero()
    out = []
    for k in range(n):
        acc = zero
        for i in range(k + 1):
            if ac[i] and bc[k - i]:
                acc += ac[i] * bc[k - i]
        out.append(acc)
    return a._new(out)


def series_div(a: _Series, b: _Series) -> _Series:
    _same_kind(a, b)
    if not b.coeffs or b.coeffs[0] == 0:
        raise SeriesDomainError("divisor series needs a nonzero constant term")
    n = min(a.order, b.order)
    bc = b.coeffs
    out = []
    for k in range(n):
        acc = a.coeffs[k]
        for i in range(1, k + 1):
            if bc[i]:
                acc -= bc[i] * out[k - i]
        out.append(acc / bc[0])
    return a._new(out)


def series_derivative(s: _Series) -> _Series:
    """d/dz; the result has order ``s.order - 1``."""
    return s._new(k * s.coeffs[k] for k in range(1, s.order))


def series_integrate(s: _Series) -> _Series:
    """Antiderivative vanishing at 0, truncated at the input order."""
    if s.order == 0:
        return s
    return s._new([s._zero()] + [s.coeffs[k] / (k + 1) for k in range(s.order - 1)])


def series_exp(s: _Series) -> _Series:
    if s.order and s.coeffs[0] != 0:
        raise SeriesDomainError("exp needs a series with zero constant term")
    n = s.order
    a = s.coeffs
    out = [s._zero() + 1]
    # k e_k = sum_{j=1}^k j a_j e_{k-j}
    for k in range(1, n):
        acc = s._zero()
        for j in range(1, k + 1):
            if a[j]:
                acc += j * a[j] * out[k - j]
        out.append(acc / k)
    return s._new(out)


def series_log(s: _Series) -> _Series:
    if not s.coeffs or s.coeffs[0] != 1:
        raise SeriesDomainError("log needs a series with constant term 1")
    q = series_div(series_derivative(s), s.truncate(s.order - 1))
    return s._new([s._zero()] + [q.coeffs[k] / (k + 1) for k in range(s.order - 1)])


def series_sqrt(s: _Series) -> _Series:
    if not s.coeffs or s.coeffs[0] != 1:
        raise SeriesDomainError("sqrt needs a series with constant term 1")
    n = s.order
    a = s.coeffs
    r = [s._zero() + 1]
    # (r*r)_k = a_k  =>  2 r_k = a_k - sum_{i=1}^{k-1} r_i r_{k-i}
    for k in range(1, n):
        acc = a[k]
        for i in range(1, k):
            acc -= r[i] * r[k - i]
        r.append(acc / 2)
    return s._new(r)


# --- Theorem-2 machinery: rational Taylor series of L_n about 1/n ----------


def _common_denominator(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def compose_rational_arg(s: RationalSeries, n: int) -> RationalSeries:
    """``s(w)`` expanded in ``y`` for ``w = (n+1)**2 y / (n**2 + n(n+1) y)``.

    With ``r = (n+1)/n`` the substitution reads ``w = r**2 y / (1 + r y)``
    and ``[y**N] w**m = (-1)**(N-m) C(N-1, m-1) r**(N+m)``.
    """
    if not isinstance(s, RationalSeries):
        raise SeriesDomainError("compose_rational_arg needs a RationalSeries")
    if n < 1:
        raise ParameterError(f"substitution index must be positive, got {n}")
    if s.order and s.coeffs[0] != 0:
        raise SeriesDomainError("composition needs a series with zero constant term")
    order = s.order
    nums, den = _common_denominator(s.coeffs)
    up = [(n + 1) ** e for e in range(2 * order + 1)]
    down = [n**e for e in range(order + 1)]
    out = [Fraction(0)]
    for N in range(1, order):
        acc = 0
        binom = 1  # C(N-1, m-1) at m = 1
        for m in range(1, N + 1):
            p = nums[m]
            if p:
                term = p * binom * up[N + m] * down[N - m]
                acc += -term if (N - m) % 2 else term
            binom = binom * (N - m) // m
        out.append(Fraction(acc, den * n ** (2 * N)))
    return RationalSeries(out)


@lru_cache(maxsize=None)
def g_series(n: int, order: int) -> RationalSeries:
    """Taylor series of ``g_n(z) = L_n(1/n - z)`` with ``order`` terms.

    ``g_{n+1}(z) = -int_0^z g_n(w(y)) (n+1) dy / (1 - (n+1) y)`` with the
    substitution of :func:`compose_rational_arg`.
    """
    if n not in (1, 2, 3, 4):
        raise ParameterError(f"g_series supports n = 1..4, got {n!r}")
    if order <= n:
        raise ParameterError(f"order must exceed n, got order={order}, n={n}")
    series = RationalSeries([0] + [Fraction(-1, k) for k in range(1, order)])
    for m in range(1, n):
        h = compose_rational_arg(series, m)
        # times (m+1) / (1 - (m+1) y): running sum q_N = (m+1) q_{N-1} + h_N
        q = Fraction(0)
        out = [Fraction(0)]
        for N in range(order - 1):
            q = (m + 1) * q + h.coeffs[N]
            out.append(-(m + 1) * q / (N + 1))
        series = RationalSeries(out)
    return series


def leading_coefficient(n: int) -> Fraction:
    """``G_n = (-1)**n (n**n / n!)**2``."""
    return (-1) ** n * Fraction(n**n, math.factorial(n)) ** 2


def dump_series(series: RationalSeries, path) -> None:
    """Write one ``numerator/denominator`` per line, index-ordered."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in series.coeffs:
            fh.write(f"{c.numerator}/{c.denominator}\n")


def load_series(path) -> RationalSeries:
    coeffs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            coeffs.append(Fraction(line))
        except ValueError as exc:
            raise ParameterError(f"{path}:{lineno}: not a rational: {line!r}") from exc
    return RationalSeries(coeffs)


# --- S4 tables ----------------------------------------------------------------


class S4Coefficients:
    """Exact ``a_n, b_n, c_n`` for ``1 <= n < order``; index 0 holds 0."""

    __slots__ = ("a", "b", "c", "order")

    def __init__(self, a, b, c, order):
        self.a, self.b, self.c, self.order = tuple(a), tuple(b), tuple(c), order

    def __repr__(self):
        return f"S4Coefficients(order={self.order})"


def _convolve_int(a: list[int], b: list[int]) -> list[int]:
    """Exact integer convolution by Kronecker substitution (one big multiply)."""
    n = len(a)
    width = max(abs(x) for x in a).bit_length() + max(abs(x) for x in b).bit_length()
    nbytes = (width + n.bit_length() + 9) // 8

    def pack(v):
        return gmpy2.mpz(int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in v), "little"))

    pos = pack([x if x > 0 else 0 for x in a])
    neg = pack([-x if x < 0 else 0 for x in a])
    bb = pack(b)  # b is non-negative here
    if any(x < 0 for x in b):
        raise ValueError("second operand must be non-negative")
    size = 2 * n * nbytes
    hi = int(pos * bb).to_bytes(size, "little")
    lo = int(neg * bb).to_bytes(size, "little")
    return [
        int.from_bytes(hi[m * nbytes:(m + 1) * nbytes], "little")
        - int.from_bytes(lo[m * nbytes:(m + 1) * nbytes], "little")
        for m in range(n)
    ]


@lru_cache(maxsize=8)
def s4_coefficients(order: int) -> S4Coefficients:
    """Tables for the small-argument expansion of ``L_4``.

    ``b_n = -3/n**3 + sum_{k=1}^n (2**k k + (-1)**(k-1) n) / (k**2 n**2)``,
    ``c_n = [z**n] log(1 + 2z) Li_2(z) / (1 + z)`` and
    ``a_n = (-b_n + (-1)**n c_n) / n``.

    The product coefficients are convolved as integers over the common
    denominator ``lcm(1..N)**3``, which keeps large orders affordable.
    """
    if not isinstance(order, int) or order < 2:
        raise ParameterError(f"s4 order must be an integer >= 2, got {order!r}")
    N = order - 1
    L = 1
    for k in range(2, N + 1):
        L = math.lcm(L, k)
    L2 = L * L
    D = L * L2
    # log(1+2z) = sum (-1)**(k+1) 2**k z**k / k ; Li_2(z) = sum z**j / j**2
    A = [0] + [(-1) ** (k + 1) * (L // k) << k for k in range(1, N + 1)]
    B = [0] + [L2 // (j * j) for j in range(1, N + 1)]
    product = _convolve_int(A, B)
    c_scaled = [0] * (N + 1)
    running = 0
    for m in range(1, N + 1):
        # divide by (1 + z): c_m = p_m - c_{m-1}
        running = product[m] - running
        c_scaled[m] = running
    a = [Fraction(0)]
    b = [Fraction(0)]
    c = [Fraction(0)]
    pow_sum = Fraction(0)  # sum_{k<=n} 2**k / k
    alt_sum = Fraction(0)  # sum_{k<=n} (-1)**(k-1) / k**2
    for n in range(1, N + 1):
        pow_sum += Fraction(2**n, n)
        alt_sum += Fraction((-1) ** (n - 1), n * n)
        bn = Fraction(-3, n**3) + pow_sum / (n * n) + alt_sum / n
        cn = Fraction(c_scaled[n], D)
        b.append(bn)
        c.append(cn)
        a.append((-bn + (-1) ** n * cn) / n)
    return S4Coefficients(a, b, c, order)


# --- generating function of the Dickman constants -----------------------------

GF_MAX_ORDER = 14


def _reciprocal_gamma_route(order: int, ctx: PrecisionContext) -> list:
    """exp(gamma z) times the series of 1/Gamma(1 - z).

    ``h = 1/Gamma(1-z)`` obeys ``n h_n = -gamma h_{n-1} - sum_{k=2}^n zeta(k) h_{n-k}``,
    with even zeta values taken as rational multiples of pi**k.
    """
    mp = ctx.mp
    consts = ctx.constants
    gamma = consts.euler_gamma
    zeta = [None, None] + [
        even_zeta(k, consts.pi) if k % 2 == 0 else zeta_odd(k, ctx) for k in range(2, order)
    ]
    h = [mp.one]
    for n in range(1, order):
        acc = -gamma * h[n - 1]
        for k in range(2, n + 1):
            acc -= zeta[k] * h[n - k]
        h.append(acc / n)
    e = [mp.one]
    for n in range(1, order):
        e.append(e[-1] * gamma / n)
    return list(series_mul(RealSeries(e, ctx), RealSeries(h, ctx)).coeffs)


def _sine_route(order: int, ctx: PrecisionContext) -> list:
    """sqrt(sin(pi z)/(pi z)) * exp(-sum_{n>0} zeta(2n+1) z**(2n+1) / (2n+1))."""
    mp = ctx.mp
    pi = ctx.constants.pi
    sinc = [mp.zero] * order
    for k in range(0, (order + 1) // 2):
        sinc[2 * k] = (-1) ** k * pi ** (2 * k) / math.factorial(2 * k + 1)
    odd = [mp.zero] * order
    for m in range(3, order, 2):
        odd[m] = -zeta_odd(m, ctx) / m
    root = series_sqrt(RealSeries(sinc, ctx))
    return list(series_mul(root, series_exp(RealSeries(odd, ctx))).coeffs)


def gf_coefficients(order: int, ctx: PrecisionContext) -> RealSeries:
    """Coefficients of ``exp(gamma z)/Gamma(1 - z)`` through ``z**(order-1)``.

    Raises :class:`ConsistencyError` if the two constructions differ by more
    than ``10**-target_digits`` in any coefficient.
    """
    if not isinstance(order, int) or not 1 <= order <= GF_MAX_ORDER:
        raise ParameterError(f"gf order must be in 1..{GF_MAX_ORDER}, got {order!r}")
    first = _reciprocal_gamma_route(order, ctx)
    second = _sine_route(order, ctx)
    tol = ctx.tolerance
    for k, (u, v) in enumerate(zip(first, second)):
        if abs(u - v) > tol:
            raise ConsistencyError(f"generating-function routes disagree at z**{k}: {u} vs {v}")
    return RealSeries(first, ctx)
