"""Small statistical helpers shared by the estimators."""

from __future__ import annotations

from math import sqrt

# two-sided normal quantiles
Z_99 = 2.5758293035489004
Z_999 = 3.2905267314919255


def wilson_interval(successes: int, trials: int, z: float = Z_99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Preferred over the normal approximation because it stays sane for small
    counts and near 0 or 1 (a zero count still gets a positive upper bound).
    """
    if trials < 0 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials")
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    margin = (z / denom) * sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
    return (max(0.0, center - margin), min(1.0, center + margin))


def mean_and_se(values) -> tuple[float, float]:
    """Sample mean and its standard error."""
    n = len(values)
    if n == 0:
        raise ValueError("empty sample")
    m = sum(values) / n
    if n == 1:
        return m, 0.0
    var = sum((v - m) ** 2 for v in values) / (n - 1)
    return m, sqrt(var / n)
