"""Dense statevector simulator restricted to single-qubit gates.

Qubit 0 is the most significant bit of the basis index, so for three qubits
the amplitude of ``|q0 q1 q2>`` lives at index ``4*q0 + 2*q1 + q2``.

Amplitude arrays may carry leading batch dimensions: a ``StateVector`` with
``amplitudes.shape == (K, 2**n)`` holds ``K`` independent registers that are
evolved and sampled together. Gates may likewise be batched, one 2x2 matrix
per register.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 20
UNITARY_ATOL = 1e-12


class CapacityError(ValueError):
    """Requested register exceeds the simulator's qubit cap."""


class DegenerateStateError(ValueError):
    """State has zero norm and cannot be sampled."""


def _abs2(amps):
    if np.iscomplexobj(amps):
        return amps.real**2 + amps.imag**2
    return amps * amps


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray  # real registers are kept as float64 until a complex gate acts

    def __post_init__(self):
        if self.amplitudes.shape[-1] != 2**self.n_qubits:
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got {self.amplitudes.shape[-1]}"
            )

    @property
    def batch_shape(self) -> tuple:
        return self.amplitudes.shape[:-1]

    def norm(self) -> np.ndarray:
        return np.sum(_abs2(self.amplitudes), axis=-1)

    def probabilities(self) -> np.ndarray:
        """Basis-state probabilities ``|amp|^2``, renormalised against rounding drift."""
        p = _abs2(self.amplitudes)
        total = p.sum(axis=-1, keepdims=True)
        if np.any(total <= 0.0):
            raise DegenerateStateError("state has zero norm")
        return p / total


@dataclass(frozen=True)
class Gate1Q:
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = self.matrix
        if m.shape[-2:] != (2, 2):
            raise ValueError(f"single-qubit gate must be 2x2, got {m.shape}")
        eye = np.eye(2)
        err = np.abs(np.conj(np.swapaxes(m, -1, -2)) @ m - eye).max()
        if err > UNITARY_ATOL:
            raise ValueError(f"gate {self.label!r} is not unitary (max |U^dag U - I| = {err:.3g})")


@dataclass(frozen=True)
class BitSample:
    """Per-qubit Z-basis outcomes; bit 0 is eigenvalue +1, bit 1 is eigenvalue -1."""

    bits: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return 1 - 2 * self.bits.astype(np.int64)

    @property
    def n_qubits(self) -> int:
        return self.bits.shape[-1]


def _check_qubits(n_qubits, max_qubits=MAX_QUBITS):
    if not isinstance(n_qubits, (int, np.integer)) or isinstance(n_qubits, bool):
        raise TypeError(f"n_qubits must be an integer, got {type(n_qubits).__name__}")
    if not 1 <= n_qubits <= max_qubits:
        raise CapacityError(f"n_qubits must lie in [1, {max_qubits}], got {n_qubits}")


def _check_target(state, target):
    if not 0 <= target < state.n_qubits:
        raise IndexError(f"qubit {target} out of range for {state.n_qubits}-qubit register")


def init_zero(n_qubits: int, batch: int | None = None, max_qubits: int = MAX_QUBITS) -> StateVector:
    """Return ``|0...0>`` on ``n_qubits`` qubits, optionally replicated ``batch`` times."""
    _check_qubits(n_qubits, max_qubits)
    shape = (2**n_qubits,) if batch is None else (batch, 2**n_qubits)
    amps = np.zeros(shape, dtype=np.float64)
    amps[..., 0] = 1.0
    return StateVector(int(n_qubits), amps)


def from_amplitudes(amplitudes, normalize: bool = False) -> StateVector:
    amps = np.asarray(amplitudes, dtype=np.complex128)
    size = amps.shape[-1]
    n = int(size).bit_length() - 1
    if size < 2 or 2**n != size:
        raise ValueError(f"amplitude length must be a power of two >= 2, got {size}")
    if normalize:
        norm = np.sqrt(np.sum(np.abs(amps) ** 2, axis=-1, keepdims=True))
        if np.any(norm == 0):
            raise DegenerateStateError("cannot normalise a zero vector")
        amps = amps / norm
    return StateVector(n, amps)


def apply_gate(state: StateVector, gate: Gate1Q, target: int) -> StateVector:
    """Apply ``I x ... x gate x ... x I`` with the gate acting on ``target``.

    Returns a new state; the input is not modified.
    """
    _check_target(state, target)
    n = state.n_qubits
    batch = state.batch_shape
    psi = state.amplitudes.reshape(batch + (2**target, 2, 2 ** (n - target - 1)))
    u = np.asarray(gate.matrix)[..., None, None]
    lo = psi[..., 0, :]
    hi = psi[..., 1, :]
    out = np.empty(
        np.broadcast_shapes(psi.shape, u.shape[:-4] + (1, 1, 1)),
        dtype=np.result_type(psi.dtype, u.dtype),
    )
    out[..., 0, :] = u[..., 0, 0, :, :] * lo + u[..., 0, 1, :, :] * hi
    out[..., 1, :] = u[..., 1, 0, :, :] * lo + u[..., 1, 1, :, :] * hi
    return StateVector(n, out.reshape(out.shape[:-3] + (2**n,)))


def apply_all(state: StateVector, gate: Gate1Q) -> StateVector:
    for q in range(state.n_qubits):
        state = apply_gate(state, gate, q)
    return state


def _finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise ValueError(f"rotation angles must be finite, got {v!r}")


HADAMARD = Gate1Q(np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2), "H")


def make_rotation(axis: str, theta) -> Gate1Q:
    """R_x, R_y or R_z by ``theta`` radians; ``theta`` may be an array (batched gate)."""
    theta = np.asarray(theta, dtype=np.float64)
    _finite(theta)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    # R_y is real; keeping it real lets real registers stay in float64
    m = np.zeros(theta.shape + (2, 2), dtype=np.float64 if axis == "y" else np.complex128)
    if axis == "x":
        m[..., 0, 0] = c
        m[..., 0, 1] = -1j * s
        m[..., 1, 0] = -1j * s
        m[..., 1, 1] = c
    elif axis == "y":
        m[..., 0, 0] = c
        m[..., 0, 1] = -s
        m[..., 1, 0] = s
        m[..., 1, 1] = c
    elif axis == "z":
        m[..., 0, 0] = np.exp(-0.5j * theta)
        m[..., 1, 1] = np.exp(0.5j * theta)
    else:
        raise ValueError(f"axis must be one of 'x', 'y', 'z', got {axis!r}")
    return Gate1Q(m, f"R{axis}")


def make_general_u(theta, phi, lam) -> Gate1Q:
    """General rotation U(theta, phi, lambda); arguments may be broadcastable arrays."""
    theta, phi, lam = np.broadcast_arrays(
        *(np.asarray(a, dtype=np.float64) for a in (theta, phi, lam))
    )
    _finite(theta, phi, lam)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    m = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    m[..., 0, 0] = c
    m[..., 0, 1] = -np.exp(1j * lam) * s
    m[..., 1, 0] = np.exp(1j * phi) * s
    m[..., 1, 1] = np.exp(1j * (phi + lam)) * c
    return Gate1Q(m, "U")


def _bit_table(n_qubits: int) -> np.ndarray:
    """``table[idx, q]`` is the bit of qubit ``q`` in basis index ``idx``."""
    idx = np.arange(2**n_qubits)
    shifts = n_qubits - 1 - np.arange(n_qubits)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


def expval_z(state: StateVector, target: int) -> float | np.ndarray:
    """<Z> on ``target``: sum of |amp|^2 weighted by the +1/-1 eigenvalue of its bit."""
    _check_target(state, target)
    n = state.n_qubits
    p = _abs2(state.amplitudes)
    p = p.reshape(state.batch_shape + (2**target, 2, 2 ** (n - target - 1)))
    result = p[..., :, 0, :].sum(axis=(-2, -1)) - p[..., :, 1, :].sum(axis=(-2, -1))
    return float(result) if np.ndim(result) == 0 else result


def sample_z(state: StateVector, rng: np.random.Generator) -> BitSample:
    """Draw one whole-register Z-basis outcome per register in the batch.

    The full basis state is drawn with probability ``|<basis|psi>|^2`` so
    correlations between qubits are exact.
    """
    probs = state.probabilities()
    cum = np.cumsum(probs, axis=-1)
    r = rng.random(state.batch_shape)
    idx = np.sum(cum <= np.asarray(r)[..., None], axis=-1)
    idx = np.minimum(idx, 2**state.n_qubits - 1)
    return BitSample(_bit_table(state.n_qubits)[idx])
