"""Tanh-sinh (double-exponential) quadrature at arbitrary precision.

Nodes are stored as distances from the interval endpoints, so integrands
with logarithmic endpoint singularities are sampled without cancellation.
Each refinement level halves the step and only evaluates the new odd nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from .errors import EvaluationError, NonConvergenceError, ParameterError
from .precision import PrecisionContext

DEFAULT_MAX_LEVEL = 12
START_LEVEL = 3


@dataclass(frozen=True)
class QuadratureResult:
    value: Any
    error_estimate: Any
    levels_used: int
    evaluations: int


def pairwise_sum(values):
    """Sum in a fixed balanced tree, independent of evaluation order."""
    values = list(values)
    if not values:
        return 0
    while len(values) > 1:
        paired = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return values[0]


def _t_max(work_bits: int) -> float:
    # beyond this the endpoint offset 2/(1+exp(pi sinh t)) drops below 2**-work_bits
    return math.asinh((work_bits * math.log(2) + 20) / math.pi)


def _level_nodes(ctx: PrecisionContext, level: int):
    """(offset, weight) pairs for the nodes first appearing at ``level``.

    ``offset`` is 1 - tanh(pi/2 sinh t), the scaled distance from the
    endpoint; ``weight`` is the derivative of the transformation.
    """

    def make():
        mp = ctx.mp
        tmax = _t_max(ctx.work_bits)
        h = mp.ldexp(mp.one, -level)
        if level == START_LEVEL:
            js = range(0, int(tmax * 2**level) + 1)
        else:
            js = range(1, int(tmax * 2**level) + 1, 2)
        half_pi = mp.pi / 2
        nodes = []
        for j in js:
            t = j * h
            e = mp.exp(half_pi * mp.sinh(t))
            offset = 2 / (1 + e * e)
            cosh_u = (e + 1 / e) / 2
            weight = half_pi * mp.cosh(t) / (cosh_u * cosh_u)
            nodes.append((j == 0, offset, weight))
        return nodes

    return ctx.cached(("tanh-sinh", level), make)


def integrate(
    f: Callable,
    a,
    b,
    ctx: PrecisionContext,
    tol=None,
    max_level: int = DEFAULT_MAX_LEVEL,
) -> QuadratureResult:
    """Integrate ``f`` over ``[a, b]`` by level-doubling tanh-sinh.

    Stops once two successive levels agree to ``tol`` (default
    ``10**-(target_digits + guard_digits // 2)``, relative for results
    larger than 1). Raises :class:`NonConvergenceError` at ``max_level``.
    """
    mp = ctx.mp
    a = ctx.convert(a)
    b = ctx.convert(b)
    if not a < b:
        raise ParameterError(f"integration needs a < b, got [{a}, {b}]")
    if max_level < START_LEVEL:
        raise ParameterError(f"max_level must be >= {START_LEVEL}")
    if tol is None:
        tol = mp.mpf(10) ** (-(ctx.target_digits + ctx.guard_digits // 2))
    half = (b - a) / 2

    def sample(x):
        y = f(x)
        if not mp.isfinite(y):
            raise EvaluationError(f"integrand is not finite at x = {x}", abscissa=x)
        return y

    evaluations = 0
    raw = []  # weight * (f(left) + f(right)) for all nodes so far
    previous = None
    diff = None
    for level in range(START_LEVEL, max_level + 1):
        for centre, offset, weight in _level_nodes(ctx, level):
            if centre:
                raw.append(weight * sample(a + half))
                evaluations += 1
            else:
                d = half * offset
                # nodes that round onto an endpoint carry negligible weight
                left, right = a + d, b - d
                pair = mp.zero
                if left != a:
                    pair += sample(left)
                    evaluations += 1
                if right != b:
                    pair += sample(right)
                    evaluations += 1
                raw.append(weight * pair)
        estimate = half * mp.ldexp(pairwise_sum(raw), -level)
        if previous is not None:
            diff = abs(estimate - previous)
            if diff <= tol * max(1, abs(estimate)):
                return QuadratureResult(estimate, diff, level, evaluations)
        previous = estimate
    raise NonConvergenceError(
        f"tanh-sinh did not converge by level {max_level} (last difference {mp.nstr(diff, 5)})",
        best=previous,
        error_estimate=diff,
    )


def integrate_logspace(
    f: Callable,
    a,
    b,
    ctx: PrecisionContext,
    tol=None,
    max_level: int = DEFAULT_MAX_LEVEL,
) -> QuadratureResult:
    """``int_a^b f(x) dx`` computed as ``int f(e**u) e**u du`` over
    ``[log a, log b]``; suited to integrands behaving like poly(log x)/x."""
    mp = ctx.mp
    a = ctx.convert(a)
    b = ctx.convert(b)
    if not 0 < a < b:
        raise ParameterError(f"log-space integration needs 0 < a < b, got [{a}, {b}]")

    def g(u):
        x = mp.exp(u)
        return f(x) * x

    return integrate(g, mp.log(a), mp.log(b), ctx, tol=tol, max_level=max_level)
