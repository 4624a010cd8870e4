"""Exact counts of smooth integers by a segmented sieve.

``psi(N, y)`` counts n in [1, N] whose largest prime factor is at most y.
Each block holds the integers themselves; every prime p <= y (up to
sqrt(N)) is divided out of its multiples, powers included. What remains is
the cofactor free of small primes, which is either 1 or a single prime
(when y < sqrt(N) it may also be a product of large primes, which is never
smooth).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from .errors import ParameterError

MAX_LIMIT = 10**9
DEFAULT_BLOCK = 1 << 22


@dataclass(frozen=True)
class SieveCensus:
    limit: int
    bound: int
    count: int

    def __post_init__(self):
        if not 1 <= self.count <= self.limit:
            raise ParameterError(f"count {self.count} outside [1, {self.limit}]")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.limit)


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(n + 1, dtype=bool)
    mark[:2] = False
    mark[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if mark[p]:
            mark[p * p :: 2 * p] = False
    return np.flatnonzero(mark).astype(np.int64)


def _check(limit, bound):
    for name, v in (("limit", limit), ("bound", bound)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ParameterError(f"{name} must be an integer, got {v!r}")
    if not 1 <= bound <= limit <= MAX_LIMIT:
        raise ParameterError(f"need 1 <= bound <= limit <= {MAX_LIMIT}, got bound={bound}, limit={limit}")


def psi(limit: int, bound: int, block: int = DEFAULT_BLOCK) -> int:
    """Number of integers in [1, limit] with no prime factor above ``bound``."""
    _check(limit, bound)
    if block < 1:
        raise ParameterError(f"block must be positive, got {block}")
    limit, bound = int(limit), int(bound)
    if bound >= limit:
        return limit
    root = math.isqrt(limit)
    small = primes_up_to(min(bound, root))
    # a cofactor left after removing primes <= min(bound, root) is prime when
    # bound >= root, and then smooth exactly when it is <= bound
    cofactor_prime = bound >= root
    count = 0
    for start in range(1, limit + 1, block):
        stop = min(start + block, limit + 1)
        rest = np.arange(start, stop, dtype=np.int64)
        for p in small:
            p = int(p)
            first = (-start) % p
            if first >= len(rest):
                continue
            view = rest[first::p]
            view //= p
            q = p * p
            while q < stop:
                first = (-start) % q
                if first >= len(rest):
                    break
                sub = rest[first::q]
                sub //= p
                q *= p
        if cofactor_prime:
            count += int(np.count_nonzero(rest <= bound))
        else:
            count += int(np.count_nonzero(rest == 1))
    return count


def census(limit: int, bound: int, block: int = DEFAULT_BLOCK) -> SieveCensus:
    return SieveCensus(int(limit), int(bound), psi(limit, bound, block))


def smoothness_bound(limit: int, alpha: Fraction) -> int:
    """floor(limit**alpha) computed exactly for rational alpha."""
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ParameterError(f"alpha must be non-negative, got {alpha}")
    root, _ = gmpy2.iroot(gmpy2.mpz(limit) ** alpha.numerator, alpha.denominator)
    return int(root)


def empirical_F(limit: int, alpha) -> Fraction:
    """psi(limit, floor(limit**alpha)) / limit as an exact rational."""
    alpha = Fraction(alpha)
    if not 0 < alpha:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if isinstance(limit, bool) or not isinstance(limit, int) or not 1 <= limit <= MAX_LIMIT:
        raise ParameterError(f"limit must be an integer in [1, {MAX_LIMIT}], got {limit!r}")
    bound = min(max(smoothness_bound(limit, alpha), 1), limit)
    return Fraction(psi(limit, bound), limit)


def largest_prime_factor(n: int) -> int:
    """By trial division; 1 for n = 1."""
    big = 1
    p = 2
    while p * p <= n:
        while n % p == 0:
            n //= p
            big = p
        p += 1 if p == 2 else 2
    return max(big, n) if n > 1 else big


def brute_force_psi(limit: int, bound: int) -> list[int]:
    """``counts[n] = psi(n, bound)`` for 0 <= n <= limit, by factoring each n."""
    counts = [0]
    for n in range(1, limit + 1):
        counts.append(counts[-1] + (largest_prime_factor(n) <= bound))
    return counts
