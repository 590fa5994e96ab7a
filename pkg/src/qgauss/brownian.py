"""Brownian paths driven by a Gaussian stream, and a drift detector for biased noise."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

DRIFT_THRESHOLD = 4.0
MIN_INCREMENTS = 100


@dataclass(frozen=True)
class BrownianPath:
    times: np.ndarray
    values: np.ndarray
    dt: float

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values)

    def quadratic_variation(self) -> float:
        return float(np.sum(self.increments**2))

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("time,value\n")
            for t, w in zip(self.times, self.values):
                fh.write(f"{float(t)!r},{float(w)!r}\n")


@dataclass(frozen=True)
class FidelityReport:
    increment_mean: float
    increment_mean_stderr: float
    drift_z_score: float
    verdict: str
    n_increments: int
    threshold: float = DRIFT_THRESHOLD

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def simulate_path(gaussian_stream, dt: float, mean_bias: float = 0.0) -> BrownianPath:
    """``W_0 = 0``, ``W_{k+1} = W_k + sqrt(dt) * (z_k + mean_bias)``."""
    z = np.asarray(gaussian_stream, dtype=np.float64)
    if not dt > 0 or not np.isfinite(dt):
        raise ValueError(f"dt must be positive and finite, got {dt}")
    if z.size == 0:
        raise ValueError("gaussian stream is empty")
    if not np.all(np.isfinite(z)) or not np.isfinite(mean_bias):
        raise ValueError("gaussian stream contains non-finite values")
    values = np.empty(z.size + 1)
    values[0] = 0.0
    np.cumsum(np.sqrt(dt) * (z + mean_bias), out=values[1:])
    times = dt * np.arange(z.size + 1)
    return BrownianPath(times, values, float(dt))


def fidelity_check(path: BrownianPath, threshold: float = DRIFT_THRESHOLD) -> FidelityReport:
    """z-test for non-zero mean of the standardised increments ``dW / sqrt(dt)``.

    A constant, non-zero increment sequence has zero standard error and an
    infinite z-score; an all-zero one scores 0.
    """
    inc = path.increments / np.sqrt(path.dt)
    n = inc.size
    if n < MIN_INCREMENTS:
        raise ValueError(f"fidelity check needs at least {MIN_INCREMENTS} increments, got {n}")
    m = float(inc.mean())
    se = float(inc.std(ddof=1) / np.sqrt(n))
    if se > 0:
        z = m / se
    else:
        z = 0.0 if m == 0 else float(np.copysign(np.inf, m))
    verdict = "drift-detected" if abs(z) > threshold else "consistent"
    return FidelityReport(m, se, z, verdict, n, threshold)


def drift_z_scores(streams: np.ndarray, mean_bias: float = 0.0) -> np.ndarray:
    """Detector z-scores for many equal-length paths at once (rows of ``streams``).

    Matches :func:`fidelity_check` row by row; ``dt`` cancels out of the score.
    """
    inc = np.asarray(streams, dtype=np.float64) + mean_bias
    n = inc.shape[-1]
    m = inc.mean(axis=-1)
    se = inc.std(axis=-1, ddof=1) / np.sqrt(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, m / se, np.where(m == 0, 0.0, np.copysign(np.inf, m)))
    return z


def lag1_autocorrelation(x) -> float:
    x = np.asarray(x, dtype=np.float64) - np.mean(x)
    denom = float(np.dot(x, x))
    return float(np.dot(x[:-1], x[1:]) / denom) if denom > 0 else 0.0
