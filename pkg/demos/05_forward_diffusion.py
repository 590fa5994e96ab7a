"""
Forward diffusion with quantum noise
====================================

Each step mixes in a little Gaussian noise,
``x_t = sqrt(1 - beta_t) x_{t-1} + sqrt(beta_t) eps``, and after enough
steps the image is indistinguishable from noise. The closed form
``sqrt(abar_t) x_0 + sqrt(1 - abar_t) eps`` jumps straight to step t.
"""

import os
import tempfile

import numpy as np

from qgauss.diffusion import (
    forward_to_t,
    from_unit_range,
    iterate_forward,
    linear_schedule,
    read_pgm,
    sample_image,
    to_unit_range,
    write_pgm,
)
from qgauss.gaussian import UniformSource, gaussian_stream
from qgauss.qrng import QrngConfig

schedule = linear_schedule()  # beta from 1e-4 to 0.02 over 1000 steps
print("abar at t = 0, 250, 500, 999:", np.round(schedule.alphas_bar[[0, 250, 500, 999]], 5).tolist())

# Round-trip a test pattern through 8-bit PGM.
out = tempfile.mkdtemp()
path = os.path.join(out, "pattern.pgm")
write_pgm(path, from_unit_range(sample_image(32)))
x0 = to_unit_range(read_pgm(path))

source = UniformSource.quantum(QrngConfig(seed=5))


def noise(n):
    return gaussian_stream(source, n)


for t in (0, 100, 300, 999):
    xt = forward_to_t(x0, schedule, t, noise(x0.size))
    corr = np.corrcoef(xt.ravel(), x0.ravel())[0, 1]
    print(f"t={t:4d}: corr with x0 {corr:+.3f}, pixel sd {xt.std():.3f}")
    write_pgm(os.path.join(out, f"noised_{t:04d}.pgm"), from_unit_range(xt))

# Iterating single steps reaches the same distribution as the jump.
small = linear_schedule(steps=100, beta_end=0.05)
draws = np.broadcast_to(x0[:8, :8], (500, 8, 8))
rng = np.random.default_rng(0)
it = iterate_forward(draws, small, 99, rng.standard_normal)
cf = forward_to_t(draws, small, 99, rng.standard_normal(draws.shape))
print(f"iterated vs closed form, mean pixel variance: {it.var(axis=0).mean():.4f} vs {cf.var(axis=0).mean():.4f}")
print("images written to", out)
