"""
Uniform variates from a two-stage circuit cascade
=================================================

Stage 1 samples N Hadamard qubits to pick rotation angles on a grid of
2**N - 1 steps around the circle. Stage 2 rotates each of M > N Hadamard
qubits by one of those angles and measures. The measured bits form the
index ``sum 2**i * bit_i``, scaled to [0, 1] by ``2**M - 1``.
"""

import numpy as np

from qgauss.qrng import QrngConfig, QuantumRandomGenerator, index_distribution, index_to_angle

# Without rotations the output is a plain Hadamard sampler: 16 equally
# likely levels k/15 for four qubits.
plain = QuantumRandomGenerator(QrngConfig(n_qubits_stage2=4, use_rot=False, seed=1))
v = plain.uniform(16_000)
levels, counts = np.unique(np.rint(v * 15).astype(int), return_counts=True)
print("levels:", levels.tolist())
print("counts:", counts.tolist())

# The stage-1 angle grid for N=2. The top index wraps to 2*pi, i.e. 0.
print("angle grid N=2:", np.round(index_to_angle(np.arange(4), 2), 4).tolist())

# For one fixed set of angles the stage-2 distribution is skewed ...
cfg = QrngConfig(n_qubits_stage1=2, n_qubits_stage2=3, seed=2)
skewed = index_distribution(cfg, [0.0, 2.0944, 4.1888])
print("fixed angles:", np.round(skewed, 4).tolist())

# ... but redrawing the angles every shot averages back to uniform.
gen = QuantumRandomGenerator(QrngConfig(seed=3))  # N=4, M=6, R_y
u = gen.uniform(50_000)
print(f"default cascade: mean {u.mean():.4f}, var {u.var():.4f} (uniform: 0.5, {1 / 12 * 65 / 63:.4f})")

# R_z only adds phases, so it leaves the Hadamard distribution untouched.
rz = QrngConfig(n_qubits_stage1=2, n_qubits_stage2=3, rotation_axis="z")
print("R_z distribution:", np.round(index_distribution(rz, [1.0, 2.0, 3.0]), 6).tolist())
