"""Working precision and the fundamental constants used throughout.

Every computation runs inside a private :class:`mpmath.ctx_mp.MPContext`
owned by a :class:`PrecisionContext`, so no global mpmath state is touched
and contexts of different precision can coexist.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Any

import mpmath

from .errors import ParameterError

LOG2_10 = math.log2(10)
MIN_DIGITS = 10
MAX_DIGITS = 1000
ZETA_ODD_ARGS = (3, 5, 7, 9, 11, 13)


def bits_for_digits(digits: int) -> int:
    return math.ceil(digits * LOG2_10)


def default_guard_digits(nesting_depth: int = 0) -> int:
    """Guard digits for a computation with ``nesting_depth`` composed
    quadrature or series stages."""
    return 10 + 2 * nesting_depth


@dataclass(frozen=True)
class FundamentalConstants:
    pi: Any
    euler_gamma: Any
    log2: Any
    log3: Any
    zeta_odd: dict

    def zeta(self, n: int):
        """zeta(n) for 2 <= n <= 13; even values come from powers of pi."""
        if n % 2:
            return self.zeta_odd[n]
        return even_zeta(n, self.pi)


@dataclass(frozen=True)
class PrecisionContext:
    """Binary working precision plus the decimal target it serves.

    The mpmath context and constant cache hang off the instance but do not
    take part in equality or hashing.
    """

    work_bits: int
    guard_digits: int
    target_digits: int
    _mp: Any = field(default=None, init=False, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: Any = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.target_digits < 1 or self.work_bits < 1 or self.guard_digits < 0:
            raise ParameterError("precision fields must be positive")
        if self.work_bits < bits_for_digits(self.target_digits + self.guard_digits):
            raise ParameterError(
                f"work_bits={self.work_bits} cannot hold "
                f"{self.target_digits}+{self.guard_digits} digits"
            )
        mp = mpmath.MPContext()
        mp.prec = self.work_bits
        object.__setattr__(self, "_mp", mp)

    @property
    def mp(self):
        """The private mpmath context running at ``work_bits``."""
        return self._mp

    @property
    def eps(self):
        return self._mp.ldexp(self._mp.one, -self.work_bits)

    @property
    def tolerance(self):
        """Absolute agreement threshold ``10**-target_digits``."""
        return self._mp.mpf(10) ** (-self.target_digits)

    def cached(self, key, make):
        """Return ``self._cache[key]``, building it with ``make()`` once.

        Concurrent builders may race; both compute the same value, so the
        write is idempotent.
        """
        try:
            return self._cache[key]
        except KeyError:
            pass
        value = make()
        with self._lock:
            return self._cache.setdefault(key, value)

    def extended(self, extra_digits: int) -> "PrecisionContext":
        """A context with the same target and ``extra_digits`` more guard."""
        guard = self.guard_digits + extra_digits
        return PrecisionContext(
            work_bits=bits_for_digits(self.target_digits + guard),
            guard_digits=guard,
            target_digits=self.target_digits,
        )

    def with_target(self, target_digits: int) -> "PrecisionContext":
        return PrecisionContext(
            work_bits=bits_for_digits(target_digits + self.guard_digits),
            guard_digits=self.guard_digits,
            target_digits=target_digits,
        )

    @property
    def constants(self) -> FundamentalConstants:
        return self.cached("constants", lambda: _build_constants(self))

    def convert(self, x):
        """Convert int, Fraction, str or mpf into this context's mpf.

        Fractions are divided at working precision, never routed through
        binary floating point.
        """
        mp = self._mp
        num = getattr(x, "numerator", None)
        den = getattr(x, "denominator", None)
        if isinstance(x, int) or (num is not None and den is not None and not isinstance(x, float)):
            return mp.mpf(int(num)) / int(den) if den != 1 else mp.mpf(int(num))
        return mp.mpf(x)


def make_context(target_digits: int, nesting_depth: int = 0, guard_digits: int | None = None) -> PrecisionContext:
    """Build a context certifying ``target_digits`` decimal digits."""
    if not isinstance(target_digits, int) or not MIN_DIGITS <= target_digits <= MAX_DIGITS:
        raise ParameterError(
            f"target_digits must be an integer in [{MIN_DIGITS}, {MAX_DIGITS}], got {target_digits!r}"
        )
    if guard_digits is None:
        guard_digits = default_guard_digits(nesting_depth)
    return PrecisionContext(
        work_bits=bits_for_digits(target_digits + guard_digits),
        guard_digits=guard_digits,
        target_digits=target_digits,
    )


def even_zeta(n: int, pi):
    """zeta(n) for even n >= 2 as a rational multiple of pi**n."""
    if n < 2 or n % 2:
        raise ParameterError(f"even_zeta needs an even n >= 2, got {n}")
    b = mpmath.bernfrac(n)
    coeff = abs(b[0]) * 2 ** (n - 1)
    return pi**n * coeff / (b[1] * math.factorial(n))


def _borwein_terms(work_bits: int) -> int:
    # error <= 3 / (3 + sqrt 8)**n
    return math.ceil((work_bits + 12) * math.log(2) / math.log(3 + math.sqrt(8))) + 1


def zeta_borwein(s: int, mp, terms: int):
    """zeta(s), s >= 2 an integer, by accelerated alternating-series
    summation of the eta function.

    ``terms`` controls the error, bounded by ``3 * (3 + sqrt 8)**-terms``
    relative to ``|1 - 2**(1-s)|``.
    """
    n = terms
    d = _borwein_d(n)
    dn = d[n]
    total = mp.zero
    for k in range(n):
        t = mp.mpf(d[k] - dn) / mp.mpf(k + 1) ** s
        total += -t if k % 2 else t
    eta = -total / dn
    return eta / (1 - mp.ldexp(mp.one, 1 - s))


def _borwein_d(n: int) -> list[int]:
    d = []
    acc = 0
    for i in range(n + 1):
        acc += n * math.factorial(n + i - 1) * 4**i // (math.factorial(n - i) * math.factorial(2 * i))
        d.append(acc)
    return d


def zeta_odd(n: int, ctx: PrecisionContext):
    """zeta(n) for odd 3 <= n <= 13, cached per context."""
    if not isinstance(n, int) or n % 2 == 0 or not 3 <= n <= 13:
        raise ParameterError(f"zeta_odd needs odd n in [3, 13], got {n!r}")

    def make():
        mp = ctx.mp
        with mp.workprec(ctx.work_bits + 16):
            value = zeta_borwein(n, mp, _borwein_terms(ctx.work_bits + 16))
        return +value

    return ctx.cached(("zeta", n), make)


def _build_constants(ctx: PrecisionContext) -> FundamentalConstants:
    mp = ctx.mp
    return FundamentalConstants(
        pi=+mp.pi,
        euler_gamma=+mp.euler,
        log2=+mp.ln2,
        log3=mp.log(3),
        zeta_odd={n: zeta_odd(n, ctx) for n in ZETA_ODD_ARGS},
    )
