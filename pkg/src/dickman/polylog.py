"""Standard polylogarithms Li_k(x), k = 1..4, for real x <= 1.

Regions:

* ``|x| <= 1/2``: the defining series, summed in fixed point;
* ``1/2 < x < 1``: the expansion in ``mu = log x`` about x = 1, which
  converges like ``(|mu| / 2 pi)**n``;
* ``-1 <= x < -1/2``: duplication, ``Li(x) = 2**(1-k) Li(x**2) - Li(-x)``;
* ``x < -1`` (k <= 3): inversion to ``-1/x``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath.libmp import to_fixed

from .errors import DomainError, ParameterError
from .precision import PrecisionContext

_GUARD_BITS = 24


def _fixed(x, wp):
    return to_fixed(x._mpf_, wp)


def _series_fixed(s: int, x, ctx: PrecisionContext):
    """sum_{n>=1} x**n / n**s for |x| <= 1/2 (or any |x| < 1, slowly)."""
    mp = ctx.mp
    wp = ctx.work_bits + _GUARD_BITS
    X = _fixed(x, wp)
    if X == 0:
        return mp.zero
    power = X
    total = 0
    n = 1
    while power:
        total += power // n**s
        n += 1
        power = (power * X) >> wp
    return mp.ldexp(mp.mpf(total), -wp)


def _zeta_at(m: int, ctx: PrecisionContext):
    """zeta(m) for any integer m != 1 as needed by the log series."""

    def make():
        if m >= 2:
            return ctx.constants.zeta(m)
        if m == 0:
            return ctx.mp.mpf(-0.5)
        p, q = mpmath.bernfrac(1 - m)
        return ctx.mp.mpf(-p) / (q * (1 - m))

    return ctx.cached(("zeta_at", m), make)


def _log_series(s: int, mu, ctx: PrecisionContext):
    """Li_s(exp(mu)) for real -2 pi < mu < 0."""
    mp = ctx.mp
    amu = float(abs(mu))
    ratio = amu / (2 * math.pi)
    if ratio == 0:
        return ctx.constants.zeta(s)
    nterms = math.ceil((ctx.work_bits + _GUARD_BITS) * math.log(2) / -math.log(ratio)) + s + 2
    harmonic = sum(Fraction(1, j) for j in range(1, s))
    total = mp.zero
    power = mp.one  # mu**k / k!
    for k in range(nterms + 1):
        if k == s - 1:
            total += power * (ctx.convert(harmonic) - mp.log(-mu))
        else:
            m = s - k
            if m >= 0 or m % 2:
                total += _zeta_at(m, ctx) * power
        power = power * mu / (k + 1)
    return total


def _inversion(s: int, x, ctx: PrecisionContext):
    """Li_s(x) for x < -1 from Li_s(1/x).

    Li_s(-y) - (-1)**(s+1) Li_s(-1/y)
        = -log(y)**s / s! + 2 sum_{j=1}^{s//2} Li_{2j}(-1) log(y)**(s-2j) / (s-2j)!
    """
    mp = ctx.mp
    y = -x
    ly = mp.log(y)
    rhs = -ly**s / math.factorial(s)
    for j in range(1, s // 2 + 1):
        rhs += 2 * li(2 * j, -1, ctx) * ly ** (s - 2 * j) / math.factorial(s - 2 * j)
    sign = -1 if s % 2 == 0 else 1
    return rhs + sign * li(s, -1 / y, ctx)


def li(weight: int, x, ctx: PrecisionContext):
    """Li_weight(x) to ``ctx.work_bits`` for real x <= 1."""
    if weight not in (1, 2, 3, 4):
        raise ParameterError(f"polylog weight must be 1..4, got {weight!r}")
    mp = ctx.mp
    x = ctx.convert(x)
    if x > 1:
        raise DomainError(f"Li_{weight}({x}) needs x <= 1")
    if weight == 1:
        if x == 1:
            raise DomainError("Li_1 is singular at x = 1")
        return -mp.log1p(-x)
    if x == 1:
        return ctx.constants.zeta(weight)
    if x == 0:
        return mp.zero
    half = mp.mpf(0.5)
    if abs(x) <= half:
        return _series_fixed(weight, x, ctx)
    if x > 0:
        return _log_series(weight, mp.log(x), ctx)
    if x >= -1:
        if x == -1:
            return -(1 - mp.ldexp(mp.one, 1 - weight)) * ctx.constants.zeta(weight)
        return mp.ldexp(li(weight, x * x, ctx), 1 - weight) - li(weight, -x, ctx)
    if weight == 4:
        raise DomainError("Li_4 is only supported for x >= -1")
    return _inversion(weight, x, ctx)


def li3_by_reflection(y, ctx: PrecisionContext):
    """Li_3(-y) for y > 0 from the three-term reflection at z = 1/(1+y).

    Independent of :func:`_inversion`; used to cross-check it.
    """
    mp = ctx.mp
    y = ctx.convert(y)
    z = 1 / (1 + y)
    lz = mp.log(z)
    pi = ctx.constants.pi
    return (
        ctx.constants.zeta(3)
        + lz**3 / 6
        + pi**2 / 6 * lz
        - lz**2 * mp.log1p(-z) / 2
        - li(3, z, ctx)
        - li(3, 1 - z, ctx)
    )


def li3_inversion_check(y, ctx: PrecisionContext):
    """Residual of Li_3(-y) - Li_3(-1/y) = -log(y)**3/6 - pi**2/6 log(y), y > 1.

    Li_3(-y) comes from the reflection route and Li_3(-1/y) from the direct
    series, so the residual tests the identity rather than restating it.
    """
    mp = ctx.mp
    y = ctx.convert(y)
    if y <= 1:
        raise DomainError(f"inversion check needs y > 1, got {y}")
    ly = mp.log(y)
    pi = ctx.constants.pi
    lhs = li3_by_reflection(y, ctx) - li(3, -1 / y, ctx)
    return abs(lhs + ly**3 / 6 + pi**2 / 6 * ly)
