"""Uniform-to-Gaussian transforms: Marsaglia polar (primary), Box-Muller and CLT sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .qrng import QrngConfig, QuantumRandomGenerator

MAX_REJECTIONS = 1000


class DegenerateSourceError(RuntimeError):
    """Too many consecutive rejections; the uniform source is not usable."""


@dataclass(frozen=True)
class GaussianPair:
    z1: float
    z2: float
    rejections: int = 0


class UniformSource:
    """Callable-backed stream of values in ``[0, 1]``.

    ``kind`` is ``"quantum"`` or ``"classical-prng"`` (or ``"fixed"`` for
    replayed sequences). ``take(n)`` returns the next ``n`` values as an array
    and is consistent with repeated ``next()`` calls.
    """

    def __init__(self, kind: str, draw: Callable[[int], np.ndarray]):
        self.kind = kind
        self._draw = draw

    def take(self, n: int) -> np.ndarray:
        values = np.asarray(self._draw(n), dtype=np.float64)
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError(f"{self.kind} source emitted a value outside [0, 1]")
        return values

    def next(self) -> float:
        return float(self.take(1)[0])

    __call__ = next

    @classmethod
    def quantum(cls, config: QrngConfig | None = None, batch_size: int = 4096) -> UniformSource:
        config = config or QrngConfig()
        if config.is_index:
            raise ValueError("a uniform source needs normalised values; is_index must be false")
        gen = QuantumRandomGenerator(config, batch_size=batch_size)
        return cls("quantum", gen.uniform)

    @classmethod
    def classical(cls, seed: int | np.random.Generator = 0) -> UniformSource:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return cls("classical-prng", rng.random)

    @classmethod
    def fixed(cls, values: Iterable[float]) -> UniformSource:
        """Replay ``values`` in order; raises ``IndexError`` when exhausted."""
        data = np.asarray(list(values), dtype=np.float64)
        pos = 0

        def draw(n):
            nonlocal pos
            if pos + n > data.size:
                raise IndexError("fixed uniform source exhausted")
            out = data[pos : pos + n]
            pos += n
            return out

        return cls("fixed", draw)


def marsaglia_polar(source: UniformSource, max_rejections: int = MAX_REJECTIONS) -> GaussianPair:
    """One accepted point of the polar method, returning both normals."""
    for rejections in range(max_rejections + 1):
        u1, u2 = source.take(2)
        u = 2.0 * u1 - 1.0
        v = 2.0 * u2 - 1.0
        s = u * u + v * v
        if 0.0 < s < 1.0:
            factor = math.sqrt(-2.0 * math.log(s) / s)
            return GaussianPair(u * factor, v * factor, rejections)
    raise DegenerateSourceError(f"{max_rejections} consecutive polar-method rejections")


def polar_transform(u1: np.ndarray, u2: np.ndarray):
    """Vectorised polar method over candidate pairs.

    Returns ``(z1, z2, accepted)`` where ``z1``/``z2`` hold only the accepted
    candidates, in input order.
    """
    u = 2.0 * np.asarray(u1) - 1.0
    v = 2.0 * np.asarray(u2) - 1.0
    s = u * u + v * v
    accepted = (s > 0.0) & (s < 1.0)
    sa = s[accepted]
    factor = np.sqrt(-2.0 * np.log(sa) / sa)
    return u[accepted] * factor, v[accepted] * factor, accepted


def _longest_false_run(mask: np.ndarray, carry: int) -> tuple[int, int]:
    """Longest run of False in ``mask`` (counting ``carry`` leading Falses) and the trailing run."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        run = carry + mask.size
        return run, run
    gaps = np.diff(np.concatenate([[-1], idx])) - 1
    gaps[0] += carry
    trailing = mask.size - 1 - idx[-1]
    return int(max(gaps.max(), trailing)), int(trailing)


def polar_stream(source: UniformSource, count: int, max_rejections: int = MAX_REJECTIONS) -> np.ndarray:
    """``count`` normals from consecutive polar-method acceptances.

    Emits ``z1, z2`` of each acceptance in turn. Consumes the source in the same
    order as repeated :func:`marsaglia_polar` calls, so both give identical output.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    pairs_needed = (count + 1) // 2
    out = []
    have = 0
    carry = 0
    while have < pairs_needed:
        # expected acceptance is pi/4; overshoot slightly to finish in one pass
        want = pairs_needed - have
        n_cand = max(16, int(want / 0.78) + 8)
        u = source.take(2 * n_cand)
        z1, z2, accepted = polar_transform(u[0::2], u[1::2])
        longest, carry = _longest_false_run(accepted, carry)
        if longest > max_rejections:
            raise DegenerateSourceError(f"{max_rejections} consecutive polar-method rejections")
        z = np.column_stack([z1, z2])[:want]
        out.append(z)
        have += z.shape[0]
    return np.concatenate(out).ravel()[:count]


def box_muller(source: UniformSource, max_rejections: int = MAX_REJECTIONS) -> GaussianPair:
    """Box-Muller pair from ``U`` (redrawn while zero) and ``V``."""
    for rejections in range(max_rejections + 1):
        u, v = source.take(2)
        if u > 0.0:
            r = math.sqrt(-2.0 * math.log(u))
            return GaussianPair(r * math.cos(2 * math.pi * v), r * math.sin(2 * math.pi * v), rejections)
    raise DegenerateSourceError(f"{max_rejections} consecutive zero draws for Box-Muller U")


def box_muller_stream(source: UniformSource, count: int, max_rejections: int = MAX_REJECTIONS) -> np.ndarray:
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    out = np.empty(2 * ((count + 1) // 2))
    for i in range(0, out.size, 2):
        pair = box_muller(source, max_rejections)
        out[i], out[i + 1] = pair.z1, pair.z2
    return out[:count]


def _clt_width(n: int, sigma: float, literal: bool) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    # S/n has variance 1/(12 n); the sqrt(n) factor restores variance sigma^2
    return 2.0 * sigma * math.sqrt(3.0) * (1.0 if literal else math.sqrt(n))


def clt_sum_gaussian(
    source: UniformSource, n: int, mean: float = 0.0, sigma: float = 1.0, literal: bool = False
) -> float:
    """Approximate normal ``mean - w * (S/n - 1/2)`` from the sum ``S`` of ``n`` uniforms.

    The width is ``w = 2 sigma sqrt(3 n)`` so the output has variance
    ``sigma**2`` for any ``n``. ``literal=True`` drops the ``sqrt(n)``,
    giving ``w = 2 sigma sqrt(3)`` and variance ``sigma**2 / n``; the two
    coincide at ``n = 1``.
    """
    w = _clt_width(n, sigma, literal)
    s = float(np.sum(source.take(n)))
    return mean - w * (s / n - 0.5)


def clt_stream(
    source: UniformSource, count: int, n: int = 12, mean: float = 0.0, sigma: float = 1.0, literal: bool = False
) -> np.ndarray:
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    w = _clt_width(n, sigma, literal)
    s = source.take(count * n).reshape(count, n).sum(axis=1)
    return mean - w * (s / n - 0.5)


def gaussian_stream(source: UniformSource, count: int, method: str = "marsaglia", clt_n: int = 12) -> np.ndarray:
    if method == "marsaglia":
        return polar_stream(source, count)
    if method == "box-muller":
        return box_muller_stream(source, count)
    if method == "clt":
        return clt_stream(source, count, clt_n)
    raise ValueError(f"unknown method {method!r}; expected marsaglia, box-muller or clt")


def quantum_gaussian_stream(config: QrngConfig | None = None, count: int = 2000, batch_size: int = 4096) -> np.ndarray:
    """Standard normals from the quantum cascade fed through the polar method."""
    return polar_stream(UniformSource.quantum(config, batch_size), count)
