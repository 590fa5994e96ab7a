"""
Statevector basics: gates, expectation values and sampling
==========================================================

A dense statevector holds 2**n complex amplitudes. Qubit 0 is the most
significant bit of the basis index, so on two qubits |10> is index 2.
"""

import math

import numpy as np

from qgauss.statevector import (
    HADAMARD,
    apply_all,
    apply_gate,
    expval_z,
    from_amplitudes,
    init_zero,
    make_rotation,
    sample_z,
)

# A Hadamard on every qubit of |000> spreads the weight evenly over all
# eight basis states.
wall = apply_all(init_zero(3), HADAMARD)
print("H on 3 qubits, probabilities:", np.round(wall.probabilities(), 4))

# Rotations act on one target qubit. R_y(pi) flips |0> to |1> on qubit 1,
# moving all weight to index 0b010 = 2.
flipped = apply_gate(init_zero(3), make_rotation("y", math.pi), target=1)
print("R_y(pi) on qubit 1:", np.round(flipped.probabilities(), 4))

# Expectation values need no sampling. For (3|00> + 6|01> + 2|10>) / 7 the
# second qubit reads +1 with weight 9+4 and -1 with weight 36.
psi = from_amplitudes([3 / 7, 6 / 7, 2 / 7, 0])
print("<Z> on qubit B:", expval_z(psi, 1), " exact:", -23 / 49)

# Sampling collapses the whole register at once, so the zero-amplitude
# basis state |11> never shows up.
amp = 1 / math.sqrt(3)
batch = from_amplitudes(np.broadcast_to([amp, amp, amp, 0], (20_000, 4)))
bits = sample_z(batch, np.random.default_rng(0)).bits
print("P(qubit A reads +1) ~", np.mean(bits[:, 0] == 0), " exact: 2/3")
print("any |11> outcomes:", bool(np.any(bits.all(axis=1))))
