"""Forward diffusion noising of grayscale images, plus binary PGM (P5) I/O.

Images are 2-D float arrays in ``[-1, 1]`` during arithmetic; clamping
happens only when converting back to 8-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PGMError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseSchedule:
    betas: np.ndarray
    alphas_bar: np.ndarray

    @classmethod
    def from_betas(cls, betas) -> NoiseSchedule:
        betas = np.asarray(betas, dtype=np.float64)
        if betas.ndim != 1 or betas.size == 0:
            raise ValueError("betas must be a non-empty 1-D sequence")
        if np.any(betas <= 0) or np.any(betas >= 1):
            raise ValueError("every beta must lie strictly inside (0, 1)")
        return cls(betas, np.cumprod(1.0 - betas))

    @property
    def steps(self) -> int:
        return self.betas.size


def linear_schedule(steps: int = 1000, beta_start: float = 1e-4, beta_end: float = 0.02) -> NoiseSchedule:
    return NoiseSchedule.from_betas(np.linspace(beta_start, beta_end, steps))


def _check_noise(image, noise):
    noise = np.asarray(noise, dtype=np.float64)
    if noise.size != image.size:
        raise ValueError(f"noise has {noise.size} values, image has {image.size} pixels")
    return noise.reshape(image.shape)


def forward_step(image, beta: float, noise) -> np.ndarray:
    """``sqrt(1 - beta) * x + sqrt(beta) * eps`` elementwise."""
    x = np.asarray(image, dtype=np.float64)
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    eps = _check_noise(x, noise)
    return np.sqrt(1.0 - beta) * x + np.sqrt(beta) * eps


def forward_to_t(image, schedule: NoiseSchedule, t: int, noise) -> np.ndarray:
    """Closed-form jump to step ``t``: ``sqrt(abar_t) * x0 + sqrt(1 - abar_t) * eps``."""
    if not 0 <= t < schedule.steps:
        raise IndexError(f"t must lie in [0, {schedule.steps - 1}], got {t}")
    x0 = np.asarray(image, dtype=np.float64)
    eps = _check_noise(x0, noise)
    abar = schedule.alphas_bar[t]
    return np.sqrt(abar) * x0 + np.sqrt(1.0 - abar) * eps


def iterate_forward(image, schedule: NoiseSchedule, t: int, noise_fn) -> np.ndarray:
    """Apply ``forward_step`` for steps ``0..t`` with fresh noise from ``noise_fn(n)`` each step.

    ``image`` may carry leading batch dimensions; ``noise_fn`` must return
    ``image.size`` values per call.
    """
    if not 0 <= t < schedule.steps:
        raise IndexError(f"t must lie in [0, {schedule.steps - 1}], got {t}")
    x = np.asarray(image, dtype=np.float64)
    for s in range(t + 1):
        x = forward_step(x, schedule.betas[s], noise_fn(x.size))
    return x


def to_unit_range(pixels) -> np.ndarray:
    """8-bit values to ``[-1, 1]`` via ``2 * v / 255 - 1``."""
    return 2.0 * np.asarray(pixels, dtype=np.float64) / 255.0 - 1.0


def from_unit_range(x) -> np.ndarray:
    """Clamp to ``[-1, 1]`` and rescale to rounded 8-bit values."""
    x = np.clip(np.asarray(x, dtype=np.float64), -1.0, 1.0)
    return np.rint((x + 1.0) * 127.5).astype(np.uint8)


def _tokens(data: bytes, count: int, pos: int):
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise PGMError("truncated PGM header")
        out.append(data[start:pos])
    return out, pos


def parse_pgm(data: bytes) -> np.ndarray:
    """Decode an 8-bit binary PGM into a ``(height, width)`` uint8 array."""
    if data[:2] != b"P5":
        raise PGMError("not a binary PGM (missing P5 magic)")
    try:
        (w, h, maxval), pos = _tokens(data, 3, 2)
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise PGMError(f"malformed PGM header: {exc}") from None
    if width <= 0 or height <= 0:
        raise PGMError(f"bad PGM dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise PGMError(f"only 8-bit PGM is supported, maxval={maxval}")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise PGMError("missing whitespace after PGM header")
    pos += 1
    body = data[pos : pos + width * height]
    if len(body) != width * height:
        raise PGMError(f"expected {width * height} pixel bytes, found {len(body)}")
    pixels = np.frombuffer(body, dtype=np.uint8).reshape(height, width)
    if maxval != 255:
        pixels = np.rint(pixels.astype(np.float64) * (255.0 / maxval)).astype(np.uint8)
    return pixels.copy()


def encode_pgm(pixels) -> bytes:
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise ValueError("PGM images must be 2-D")
    if pixels.dtype != np.uint8:
        raise ValueError("PGM pixels must be uint8")
    h, w = pixels.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return parse_pgm(fh.read())


def write_pgm(path, pixels) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_pgm(pixels))


def sample_image(size: int = 32) -> np.ndarray:
    """Deterministic ``size x size`` pattern in ``[-1, 1]``: a radial blob over a diagonal ramp."""
    y, x = np.mgrid[0:size, 0:size] / max(size - 1, 1)
    blob = np.exp(-((x - 0.5) ** 2 + (y - 0.5) ** 2) / 0.05)
    img = 0.6 * blob + 0.4 * (x + y) / 2
    return 2.0 * img / img.max() - 1.0
