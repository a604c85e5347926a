"""Descriptive statistics, histograms and Welch's t-test.

The two-sided p-value comes from the regularized incomplete beta function
I_x(df/2, 1/2) at x = df / (df + t^2), evaluated with the standard
continued fraction (Lentz's method).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class Descriptive:
    n: int
    min: float
    max: float
    mean: float
    median: float
    stddev: Optional[float]  # sample (n-1); None for n < 2


@dataclass(frozen=True)
class WelchResult:
    t: float
    df: float
    p: float
    alpha: float
    significant: bool


def describe(values: Sequence[float]) -> Descriptive:
    if not values:
        raise ValueError("describe requires at least one value")
    data = sorted(float(v) for v in values)
    n = len(data)
    mean = sum(data) / n
    mid = n // 2
    median = data[mid] if n % 2 else (data[mid - 1] + data[mid]) / 2
    stddev = None
    if n >= 2:
        stddev = math.sqrt(sum((v - mean) ** 2 for v in data) / (n - 1))
    return Descriptive(n=n, min=data[0], max=data[-1], mean=mean,
                       median=median, stddev=stddev)


def histogram(values: Sequence[float], bin_width: float,
              origin: float = 0.0) -> list[tuple[float, int]]:
    """Counts per bin of the form [origin + k*w, origin + (k+1)*w).

    A value lands in bin floor((v - origin) / w), so exact right-boundary
    values belong to the upper bin; the bin of the maximum is the last one
    emitted, and interior empty bins are emitted with count zero.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    if not values:
        return []
    counts: dict[int, int] = {}
    for v in values:
        k = math.floor((float(v) - origin) / bin_width)
        counts[k] = counts.get(k, 0) + 1
    lo, hi = min(counts), max(counts)
    return [(origin + k * bin_width, counts.get(k, 0)) for k in range(lo, hi + 1)]


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz)."""
    max_iter = 300
    eps = 3e-16
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must be in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log(1.0 - x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def welch_t_test(a: Sequence[float], b: Sequence[float],
                 alpha: float = 0.05) -> WelchResult:
    """Two-sided Welch's t-test with Welch-Satterthwaite degrees of freedom.

    Requires both samples to have at least two values; when both variances
    are zero with equal means the conventional p = 1 is returned, any other
    zero-variance combination that makes the statistic undefined raises.
    """
    n_a, n_b = len(a), len(b)
    if n_a < 2 or n_b < 2:
        raise ValueError("welch_t_test requires at least two values per sample")
    mean_a = sum(a) / n_a
    mean_b = sum(b) / n_b
    var_a = sum((v - mean_a) ** 2 for v in a) / (n_a - 1)
    var_b = sum((v - mean_b) ** 2 for v in b) / (n_b - 1)
    if var_a == 0.0 and var_b == 0.0:
        if mean_a == mean_b:
            return WelchResult(t=0.0, df=float(n_a + n_b - 2), p=1.0,
                               alpha=alpha, significant=False)
        raise ValueError("both samples have zero variance with unequal means")
    se_a, se_b = var_a / n_a, var_b / n_b
    pooled = se_a + se_b
    t = (mean_a - mean_b) / math.sqrt(pooled)
    df = pooled ** 2 / (
        (se_a ** 2 / (n_a - 1)) + (se_b ** 2 / (n_b - 1))
    )
    p = betainc_regularized(df / 2.0, 0.5, df / (df + t * t))
    return WelchResult(t=t, df=df, p=p, alpha=alpha, significant=p < alpha)
