"""Paired t-test with a self-contained Student-t CDF.

The t CDF is computed from the regularized incomplete beta function
(continued-fraction evaluation), so no external math library is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

PAIRED_TWO_TAILED = "paired_two_tailed"
PAIRED_ONE_TAILED = "paired_one_tailed"


@dataclass(frozen=True)
class TTestResult:
    t_stat: float
    dof: int
    p_value: float
    variant: str
    zero_variance: bool = False


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified
    Lentz's method)."""
    max_iter = 300
    tiny = 1e-300
    eps = 3e-16
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_cdf(t: float, dof: float) -> float:
    """CDF of Student's t distribution with ``dof`` degrees of freedom."""
    if dof <= 0:
        raise ValueError("dof must be positive")
    if t == 0.0:
        return 0.5
    x = dof / (dof + t * t)
    tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x)
    return tail if t < 0 else 1.0 - tail


def paired_t_test(sample_a: list[float], sample_b: list[float],
                  variant: str = PAIRED_TWO_TAILED) -> TTestResult:
    """Paired Student's t-test on the differences a_i - b_i.

    The one-tailed variant tests the upper tail (mean difference > 0).
    Zero variance with a non-zero mean difference yields an infinite t and
    p = 0, flagged via ``zero_variance``.
    """
    if variant not in (PAIRED_TWO_TAILED, PAIRED_ONE_TAILED):
        raise ValueError(f"unknown variant {variant!r}")
    if len(sample_a) != len(sample_b):
        raise ValueError("samples must have equal length")
    n = len(sample_a)
    if n < 2:
        raise ValueError("need at least 2 pairs")
    diffs = [a - b for a, b in zip(sample_a, sample_b)]
    mean = sum(diffs) / n
    ss = sum((d - mean) ** 2 for d in diffs)
    dof = n - 1
    if ss == 0.0:
        if mean == 0.0:
            raise ValueError("all differences are identically zero")
        t = math.copysign(math.inf, mean)
        return TTestResult(t, dof, 0.0, variant, zero_variance=True)
    se = math.sqrt(ss / dof / n)
    t = mean / se
    if variant == PAIRED_TWO_TAILED:
        p = 2.0 * (1.0 - t_cdf(abs(t), dof))
    else:
        p = 1.0 - t_cdf(t, dof)
    return TTestResult(t, dof, min(1.0, max(0.0, p)), variant)
