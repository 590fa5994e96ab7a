"""
Gaussian variates: polar method, Box-Muller and CLT sums
========================================================

The polar method keeps uniform pairs whose image in [-1, 1]^2 falls inside
the unit disc and turns each accepted pair into two independent normals.
Feeding it the quantum cascade gives quantum-sourced Gaussians.
"""

import numpy as np

from qgauss.gaussian import (
    UniformSource,
    clt_stream,
    gaussian_stream,
    marsaglia_polar,
    quantum_gaussian_stream,
)
from qgauss.qrng import QrngConfig

# One hand-checkable point: (u1, u2) = (0.75, 0.5) maps to (0.5, 0), s = 0.25.
pair = marsaglia_polar(UniformSource.fixed([0.75, 0.5]))
print("polar pair from (0.75, 0.5):", round(pair.z1, 4), pair.z2)

# 2000 quantum Gaussians with the default N=4, M=6 cascade.
z = quantum_gaussian_stream(QrngConfig(seed=0), 2000)
print(f"quantum: mean {z.mean():+.4f}, var {z.var():.4f}")
for k in (1, 2, 3):
    print(f"  within {k} sigma: {np.mean(np.abs(z) < k):.4f}")

# The six-qubit source has only 64 levels, which shows up as a slightly
# inflated variance on large samples.
big = quantum_gaussian_stream(QrngConfig(seed=1), 200_000)
print(f"200k quantum samples: var {big.var():.4f}")

# Cross-checks on a classical source.
src = UniformSource.classical(0)
bm = gaussian_stream(src, 100_000, "box-muller")
clt = clt_stream(src, 100_000, n=12)
print(f"Box-Muller var {bm.var():.4f}, CLT-12 var {clt.var():.4f}")

# The CLT sum needs a sqrt(n) width to keep unit variance; the unscaled
# form shrinks to 1/n.
lit = clt_stream(src, 100_000, n=12, literal=True)
print(f"CLT-12 without sqrt(n): var {lit.var():.4f} (1/12 = {1 / 12:.4f})")
