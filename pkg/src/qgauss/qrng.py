"""Two-stage quantum uniform generator.

Stage 1 is a Hadamard wall on ``n_qubits_stage1`` qubits. Each shot is read
as a binary index and scaled to a rotation angle on the grid
``2*pi*k / (2**N - 1)``. Stage 2 puts ``n_qubits_stage2`` qubits into uniform
superposition, optionally rotates every qubit by a stage-1 angle, samples the
register once and emits the normalised binary index.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .statevector import (
    HADAMARD,
    MAX_QUBITS,
    BitSample,
    StateVector,
    apply_all,
    apply_gate,
    init_zero,
    make_general_u,
    make_rotation,
    sample_z,
)

AXES = ("x", "y", "z", "u")
TWO_PI = 2.0 * np.pi


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class QrngConfig:
    """Generator settings.

    ``rotation_axis`` is one of ``"x"``, ``"y"``, ``"z"`` or ``"u"`` (general
    U(theta, phi, lambda) with three independent stage-1 angles per qubit).
    With ``redraw_angles`` false, one set of stage-1 angles is drawn per
    generator and reused for every stage-2 shot.
    """

    n_qubits_stage1: int = 4
    n_qubits_stage2: int = 6
    use_rot: bool = True
    is_index: bool = False
    rotation_axis: str = "y"
    seed: int = 0
    redraw_angles: bool = True

    def __post_init__(self):
        for name in ("n_qubits_stage1", "n_qubits_stage2"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
                raise ConfigError(f"{name} must be an integer in [1, {MAX_QUBITS}], got {n!r}")
        if self.rotation_axis not in AXES:
            raise ConfigError(f"rotation_axis must be one of {AXES}, got {self.rotation_axis!r}")
        if self.use_rot and self.n_qubits_stage2 <= self.n_qubits_stage1:
            raise ConfigError(
                "use_rot requires more stage-2 qubits than stage-1 qubits "
                f"(got stage1={self.n_qubits_stage1}, stage2={self.n_qubits_stage2})"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def to_dict(self) -> dict:
        """Flat key-value form used in run manifests."""
        d = asdict(self)
        return {
            "qubits_stage1": d["n_qubits_stage1"],
            "qubits_stage2": d["n_qubits_stage2"],
            "use_rot": d["use_rot"],
            "is_index": d["is_index"],
            "axis": d["rotation_axis"],
            "seed": int(d["seed"]),
            "redraw_angles": d["redraw_angles"],
        }

    @classmethod
    def from_dict(cls, d: dict) -> QrngConfig:
        return cls(
            n_qubits_stage1=int(d.get("qubits_stage1", 4)),
            n_qubits_stage2=int(d.get("qubits_stage2", 6)),
            use_rot=bool(d.get("use_rot", True)),
            is_index=bool(d.get("is_index", False)),
            rotation_axis=str(d.get("axis", "y")),
            seed=int(d.get("seed", 0)),
            redraw_angles=bool(d.get("redraw_angles", True)),
        )


@dataclass(frozen=True)
class UniformVariate:
    value: float
    raw_index: int
    config: QrngConfig = field(repr=False)


def to_binary_index(sample: BitSample) -> int | np.ndarray:
    """Sum of ``2**i * bit_i`` over qubits ``i``; works on batched samples too."""
    bits = np.asarray(sample.bits, dtype=np.int64)
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    weights = np.left_shift(1, np.arange(bits.shape[-1], dtype=np.int64))
    value = bits @ weights
    return int(value) if np.ndim(value) == 0 else value


_HADAMARD_WALLS: dict[int, StateVector] = {}


def hadamard_wall(n_qubits: int) -> StateVector:
    """``H`` on every qubit of ``|0...0>``; cached since the circuit has no parameters."""
    if n_qubits not in _HADAMARD_WALLS:
        _HADAMARD_WALLS[n_qubits] = apply_all(init_zero(n_qubits), HADAMARD)
    return _HADAMARD_WALLS[n_qubits]


def hadamard_sampler(n_qubits: int, rng: np.random.Generator, shots: int | None = None) -> BitSample:
    """Sample the Hadamard wall; ``shots=None`` gives a single unbatched shot."""
    state = hadamard_wall(n_qubits)
    if shots is not None:
        state = StateVector(n_qubits, np.broadcast_to(state.amplitudes, (shots, 2**n_qubits)))
    return sample_z(state, rng)


def index_to_angle(index, n_qubits: int):
    """Scale a stage-1 index to ``[0, 2*pi)``; the top index wraps from 2*pi to 0."""
    index = np.asarray(index)
    top = 2**n_qubits - 1
    return np.where(index >= top, 0.0, TWO_PI * index.astype(np.float64) / top)


def random_rotation_angles(n_qubits: int, count, rng: np.random.Generator) -> np.ndarray:
    """One Hadamard-wall shot per angle. ``count`` may be an int or a shape tuple."""
    shape = (count,) if np.isscalar(count) else tuple(count)
    if int(np.prod(shape)) < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    shots = int(np.prod(shape))
    index = to_binary_index(hadamard_sampler(n_qubits, rng, shots=shots))
    return index_to_angle(index, n_qubits).reshape(shape)


def rotation_gate(axis: str, angles: np.ndarray):
    """Gate for one qubit position; ``angles[..., 0:3]`` are (theta, phi, lam) for axis ``u``."""
    if axis == "u":
        return make_general_u(angles[..., 0], angles[..., 1], angles[..., 2])
    return make_rotation(axis, angles)


def angles_per_qubit(axis: str) -> int:
    return 3 if axis == "u" else 1


def stage2_state(config: QrngConfig, angles: np.ndarray | None = None) -> StateVector:
    """Build the stage-2 register before measurement.

    ``angles`` has shape ``(..., M)`` (or ``(..., M, 3)`` for axis ``u``); leading
    dimensions become batch dimensions of the returned state. ``None`` skips the
    rotation layer.
    """
    m = config.n_qubits_stage2
    wall = hadamard_wall(m)
    if angles is None or not config.use_rot:
        return wall
    angles = np.asarray(angles, dtype=np.float64)
    per = angles_per_qubit(config.rotation_axis)
    batch = angles.shape[:-2] if per == 3 else angles.shape[:-1]
    state = StateVector(m, np.broadcast_to(wall.amplitudes, batch + (2**m,)))
    for q in range(m):
        state = apply_gate(state, rotation_gate(config.rotation_axis, angles[..., q, :] if per == 3 else angles[..., q]), q)
    return state


def index_distribution(config: QrngConfig, angles: np.ndarray | None = None) -> np.ndarray:
    """Exact probability of each binary index ``value = sum 2**i bit_i`` for fixed angles."""
    state = stage2_state(config, angles)
    probs = state.probabilities()
    m = config.n_qubits_stage2
    # basis index uses qubit 0 as MSB, binary index uses it as LSB
    basis = np.arange(2**m)
    rev = np.zeros_like(basis)
    for q in range(m):
        rev |= ((basis >> (m - 1 - q)) & 1) << q
    out = np.empty_like(probs)
    out[..., rev] = probs
    return out


def _draw_angles(config: QrngConfig, batch: int, rng: np.random.Generator) -> np.ndarray:
    m = config.n_qubits_stage2
    per = angles_per_qubit(config.rotation_axis)
    shape = (batch, m, 3) if per == 3 else (batch, m)
    return random_rotation_angles(config.n_qubits_stage1, shape, rng)


def _normalise(index, config: QrngConfig):
    if config.is_index:
        return index
    return np.asarray(index, dtype=np.float64) / (2**config.n_qubits_stage2 - 1)


def uniform_variate(config: QrngConfig, rng: np.random.Generator) -> UniformVariate:
    """Run the full cascade once and return a single variate."""
    angles = _draw_angles(config, 1, rng)[0] if config.use_rot else None
    sample = sample_z(stage2_state(config, angles), rng)
    index = to_binary_index(sample)
    value = _normalise(index, config)
    return UniformVariate(value=float(value), raw_index=int(index), config=config)


class QuantumRandomGenerator:
    """Buffered source of cascade variates.

    Shots are simulated in batches of ``batch_size`` registers. The output
    sequence depends only on ``config`` (including its seed) and
    ``batch_size``, not on how callers slice their requests.

    >>> gen = QuantumRandomGenerator(QrngConfig(use_rot=False, n_qubits_stage2=3, seed=1))
    >>> vals = gen.uniform(5)
    >>> bool(((vals * 7) % 1 == 0).all())
    True
    """

    def __init__(self, config: QrngConfig | None = None, batch_size: int = 4096):
        self.config = config or QrngConfig()
        self.batch_size = int(batch_size)
        self.rng = np.random.default_rng(int(self.config.seed))
        self._fixed_angles = None
        if self.config.use_rot and not self.config.redraw_angles:
            self._fixed_angles = _draw_angles(self.config, 1, self.rng)[0]
        self._buffer = np.empty(0, dtype=np.int64)

    def _fill(self):
        cfg = self.config
        k = self.batch_size
        if not cfg.use_rot:
            state = stage2_state(cfg)
            state = StateVector(state.n_qubits, np.broadcast_to(state.amplitudes, (k, state.amplitudes.shape[-1])))
        elif self._fixed_angles is not None:
            single = stage2_state(cfg, self._fixed_angles)
            state = StateVector(single.n_qubits, np.broadcast_to(single.amplitudes, (k, single.amplitudes.shape[-1])))
        else:
            state = stage2_state(cfg, _draw_angles(cfg, k, self.rng))
        index = to_binary_index(sample_z(state, self.rng))
        self._buffer = np.concatenate([self._buffer, index])

    def indices(self, count: int) -> np.ndarray:
        """Next ``count`` raw binary indices in ``[0, 2**M - 1]``."""
        while self._buffer.size < count:
            self._fill()
        out, self._buffer = self._buffer[:count], self._buffer[count:]
        return out

    def uniform(self, count: int) -> np.ndarray:
        """Next ``count`` outputs: indices if ``is_index`` else values in ``[0, 1]``."""
        return _normalise(self.indices(count), self.config)

    def variates(self, count: int) -> list[UniformVariate]:
        idx = self.indices(count)
        vals = _normalise(idx, self.config)
        return [UniformVariate(float(v), int(i), self.config) for v, i in zip(vals, idx)]

    def __call__(self) -> float:
        return float(self.uniform(1)[0])
