"""Two-sample comparison battery: KS, RBF-kernel MMD, histogram KL and a permutation test.

All functions take two 1-D samples ``a`` and ``b``. The permutation test is
the only randomised member and takes an explicit generator.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

DEFAULT_BINS = 50
DEFAULT_PERMUTATIONS = 10_000
MIN_BATTERY_SIZE = 100


class DegenerateInputError(ValueError):
    pass


@dataclass(frozen=True)
class StatReport:
    ks_statistic: float
    ks_p_value: float
    mmd: float
    kl_divergence: float
    permutation_p_value: float
    n_a: int
    n_b: int
    seed: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _sample(x, name, minimum=2) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size < minimum:
        raise ValueError(f"sample {name} needs at least {minimum} values, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"sample {name} contains non-finite values")
    return x


def kolmogorov_sf(x: float, terms: int = 100) -> float:
    """Survival function of the limiting Kolmogorov distribution.

    ``P(K > x) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2)``; the alternating
    series is poor near zero, where the theta-function form is used instead.
    """
    if x <= 0:
        return 1.0
    if x < 1.0:
        # P(K <= x) = sqrt(2 pi)/x * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
        k = np.arange(1, terms + 1)
        cdf = np.sqrt(2 * np.pi) / x * np.sum(np.exp(-((2 * k - 1) ** 2) * np.pi**2 / (8 * x * x)))
        return float(min(1.0, max(0.0, 1.0 - cdf)))
    k = np.arange(1, terms + 1)
    sf = 2.0 * np.sum((-1.0) ** (k - 1) * np.exp(-2.0 * k * k * x * x))
    return float(min(1.0, max(0.0, sf)))


def ks_two_sample(a, b) -> tuple[float, float]:
    """Two-sided KS statistic ``sup |F_a - F_b|`` and its asymptotic p-value.

    The p-value uses the limiting Kolmogorov law at ``sqrt(n_a n_b / (n_a + n_b)) * D``
    and is approximate for small samples.
    """
    a = np.sort(_sample(a, "a"))
    b = np.sort(_sample(b, "b"))
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    en = a.size * b.size / (a.size + b.size)
    return d, kolmogorov_sf(np.sqrt(en) * d)


def median_bandwidth(a, b) -> float:
    """Median pairwise distance of the pooled sample (distinct pairs only)."""
    pooled = np.sort(np.concatenate([np.ravel(a), np.ravel(b)]))
    n = pooled.size
    diffs = np.empty(n * (n - 1) // 2)
    pos = 0
    for i in range(n - 1):
        row = pooled[i + 1 :] - pooled[i]
        diffs[pos : pos + row.size] = row
        pos += row.size
    return float(np.median(diffs))


def _kernel_mean(x, y, h, exclude_diagonal=False, chunk=1024):
    total = 0.0
    for start in range(0, x.size, chunk):
        xs = x[start : start + chunk]
        k = np.exp(-((xs[:, None] - y[None, :]) ** 2) / (2.0 * h * h))
        total += k.sum()
    if exclude_diagonal:
        total -= x.size  # k(x, x) = 1
        return total / (x.size * (x.size - 1))
    return total / (x.size * y.size)


def mmd_rbf(a, b, bandwidth: float | str = "auto", floor: bool = True) -> float:
    """Unbiased MMD^2 with kernel ``exp(-(x-y)^2 / (2 h^2))``.

    ``bandwidth="auto"`` picks the median pooled pairwise distance. The
    unbiased estimate can dip below zero; it is floored at 0 unless ``floor``
    is false.
    """
    a = _sample(a, "a")
    b = _sample(b, "b")
    if bandwidth == "auto":
        h = median_bandwidth(a, b)
        if h <= 0:
            raise DegenerateInputError("median pairwise distance is zero; pass an explicit bandwidth")
    else:
        h = float(bandwidth)
        if not h > 0:
            raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    mmd2 = (
        _kernel_mean(a, a, h, exclude_diagonal=True)
        + _kernel_mean(b, b, h, exclude_diagonal=True)
        - 2.0 * _kernel_mean(a, b, h)
    )
    return max(0.0, float(mmd2)) if floor else float(mmd2)


def kl_divergence_hist(a, b, n_bins: int = DEFAULT_BINS) -> float:
    """``D_KL(P_a || P_b)`` between add-one-smoothed histograms on the pooled range."""
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    a = _sample(a, "a", n_bins)
    b = _sample(b, "b", n_bins)
    lo = min(a.min(), b.min())
    hi = max(a.max(), b.max())
    if hi == lo:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, n_bins + 1)
    ca, _ = np.histogram(a, edges)
    cb, _ = np.histogram(b, edges)
    p = (ca + 1.0) / (a.size + n_bins)
    q = (cb + 1.0) / (b.size + n_bins)
    return max(0.0, float(np.sum(p * np.log(p / q))))


def permutation_test(
    a,
    b,
    n_permutations: int = DEFAULT_PERMUTATIONS,
    rng: np.random.Generator | int | None = None,
    chunk: int = 500,
) -> float:
    """p-value for ``|mean(a) - mean(b)|`` under random relabelling, ``(k + 1) / (n + 1)``."""
    a = _sample(a, "a")
    b = _sample(b, "b")
    if n_permutations < 100:
        raise ValueError(f"n_permutations must be >= 100, got {n_permutations}")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    pooled = np.concatenate([a, b])
    na = a.size
    observed = abs(a.mean() - b.mean())
    total = pooled.sum()
    # tolerance keeps tied relabellings (e.g. a == b) on the >= side despite rounding
    tol = 1e-12 * max(1.0, np.abs(pooled).max())
    hits = 0
    done = 0
    while done < n_permutations:
        m = min(chunk, n_permutations - done)
        perm = rng.permuted(np.broadcast_to(pooled, (m, pooled.size)), axis=1)
        sa = perm[:, :na].sum(axis=1)
        stat = np.abs(sa / na - (total - sa) / b.size)
        hits += int(np.count_nonzero(stat >= observed - tol))
        done += m
    return (hits + 1) / (n_permutations + 1)


def full_battery(
    a,
    b,
    seed: int = 0,
    n_bins: int = DEFAULT_BINS,
    n_permutations: int = DEFAULT_PERMUTATIONS,
    bandwidth: float | str = "auto",
) -> StatReport:
    a = _sample(a, "a", MIN_BATTERY_SIZE)
    b = _sample(b, "b", MIN_BATTERY_SIZE)
    d, p = ks_two_sample(a, b)
    mmd = mmd_rbf(a, b, bandwidth)
    return StatReport(
        ks_statistic=d,
        ks_p_value=p,
        mmd=mmd,
        kl_divergence=kl_divergence_hist(a, b, n_bins),
        permutation_p_value=permutation_test(a, b, n_permutations, np.random.default_rng(seed)),
        n_a=int(a.size),
        n_b=int(b.size),
        seed=int(seed),
    )
