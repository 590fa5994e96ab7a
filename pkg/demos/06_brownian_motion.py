"""
Brownian motion and drift detection
===================================

Gaussian increments scaled by sqrt(dt) trace a Brownian path. If the
increments carry a non-zero mean the path drifts, and a z-test on the
mean standardised increment catches it.
"""

import numpy as np

from qgauss.brownian import fidelity_check, lag1_autocorrelation, simulate_path
from qgauss.gaussian import quantum_gaussian_stream
from qgauss.qrng import QrngConfig

dt = 0.01
z = quantum_gaussian_stream(QrngConfig(seed=6), 10_000)

path = simulate_path(z, dt)
print(f"W(0) = {path.values[0]}, W(T) = {path.values[-1]:.3f}, T = {path.times[-1]:.0f}")
print(f"quadratic variation {path.quadratic_variation():.2f} (elapsed time 100)")
print(f"lag-1 autocorrelation of increments {lag1_autocorrelation(path.increments):+.4f}")
print("unbiased:", fidelity_check(path).to_json())

# A bias of 0.1 per increment is small next to the unit noise, but over
# 10^4 steps it shifts the mean by ten standard errors.
drifting = simulate_path(z, dt, mean_bias=0.1)
rep = fidelity_check(drifting)
print(f"biased: z = {rep.drift_z_score:.2f}, verdict {rep.verdict}")

# Detection power across biases, 50 classical paths each.
rng = np.random.default_rng(0)
for mu in (0.0, 0.02, 0.04, 0.06, 0.1):
    hits = sum(
        fidelity_check(simulate_path(rng.standard_normal(10_000), dt, mu)).verdict == "drift-detected"
        for _ in range(50)
    )
    print(f"mu={mu:.2f}: flagged {hits}/50")
