import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from qgauss.gaussian import (
    DegenerateSourceError,
    UniformSource,
    box_muller,
    clt_stream,
    clt_sum_gaussian,
    gaussian_stream,
    marsaglia_polar,
    polar_stream,
    polar_transform,
    quantum_gaussian_stream,
)
from qgauss.qrng import QrngConfig


class TestMarsagliaPolar:
    def test_hand_computed_point(self):
        # u = 0.5, v = 0, s = 0.25, factor = sqrt(-2 ln 0.25 / 0.25)
        factor = math.sqrt(-2 * math.log(0.25) / 0.25)
        assert factor == pytest.approx(3.3302, abs=1e-4)
        pair = marsaglia_polar(UniformSource.fixed([0.75, 0.5]))
        assert pair.z1 == pytest.approx(0.5 * factor, abs=1e-12)
        assert pair.z1 == pytest.approx(1.6651, abs=1e-4)
        assert pair.z2 == 0.0
        assert pair.rejections == 0

    def test_outside_disc_rejected(self):
        pair = marsaglia_polar(UniformSource.fixed([1.0, 1.0, 0.75, 0.5]))
        assert pair.rejections == 1
        assert pair.z1 == pytest.approx(1.6651, abs=1e-4)

    def test_origin_rejected(self):
        pair = marsaglia_polar(UniformSource.fixed([0.5, 0.5, 0.75, 0.5]))
        assert pair.rejections == 1

    def test_constant_source_aborts(self):
        src = UniformSource("stuck", lambda n: np.full(n, 0.5))
        with pytest.raises(DegenerateSourceError):
            marsaglia_polar(src)

    def test_source_range_enforced(self):
        with pytest.raises(ValueError):
            marsaglia_polar(UniformSource("bad", lambda n: np.full(n, 1.5)))

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 1), st.floats(0, 1))
    def test_acceptance_geometry(self, u1, u2):
        z1, z2, accepted = polar_transform(np.array([u1]), np.array([u2]))
        s = (2 * u1 - 1) ** 2 + (2 * u2 - 1) ** 2
        assert bool(accepted[0]) == (0 < s < 1)
        if accepted[0]:
            assert np.isfinite(z1[0]) and np.isfinite(z2[0])

    def test_vectorised_stream_matches_scalar_loop(self):
        values = np.random.default_rng(4).random(4000)
        src = UniformSource.fixed(values)
        scalar = []
        while len(scalar) < 1001:
            p = marsaglia_polar(src)
            scalar += [p.z1, p.z2]
        vec = polar_stream(UniformSource.fixed(values), 1001)
        np.testing.assert_allclose(vec, scalar[:1001], rtol=1e-15, atol=1e-15)

    def test_stream_detects_long_rejection_run(self):
        vals = np.concatenate([np.full(2 * 1200, 0.5), np.random.default_rng(0).random(5000)])
        with pytest.raises(DegenerateSourceError):
            polar_stream(UniformSource.fixed(vals), 100)

    def test_acceptance_rate(self):
        src = UniformSource.classical(17)
        attempts = accepted = 0
        while attempts < 10_000:
            attempts += marsaglia_polar(src).rejections + 1
            accepted += 1
        assert abs(accepted / attempts - math.pi / 4) < 0.02


class TestBoxMuller:
    def test_unit_u_gives_zero(self):
        assert box_muller(UniformSource.fixed([1.0, 0.3])).z1 == 0.0

    def test_e_minus_two(self):
        pair = box_muller(UniformSource.fixed([math.exp(-2), 0.0]))
        assert pair.z1 == pytest.approx(2.0, abs=1e-12)
        assert pair.z2 == pytest.approx(0.0, abs=1e-12)

    def test_quarter_turn(self):
        pair = box_muller(UniformSource.fixed([0.5, 0.25]))
        assert pair.z1 == pytest.approx(0.0, abs=1e-12)
        assert pair.z2 == pytest.approx(math.sqrt(2 * math.log(2)), abs=1e-12)
        assert pair.z2 == pytest.approx(1.1774, abs=1e-4)

    def test_zero_u_redrawn(self):
        pair = box_muller(UniformSource.fixed([0.0, 0.7, 1.0, 0.1]))
        assert pair.rejections == 1 and pair.z1 == 0.0

    def test_zero_source_aborts(self):
        with pytest.raises(DegenerateSourceError):
            box_muller(UniformSource("zeros", lambda n: np.zeros(n)))

    def test_agrees_with_marsaglia(self):
        a = gaussian_stream(UniformSource.classical(1), 5000, "marsaglia")
        b = gaussian_stream(UniformSource.classical(2), 5000, "box-muller")
        assert stats.ks_2samp(a, b).pvalue > 0.01


class TestCltSum:
    def test_centred_sum_returns_mean(self):
        assert clt_sum_gaussian(UniformSource.fixed([0.25, 0.75]), 2, mean=3.0, sigma=2.0) == 3.0

    def test_single_unit_draw(self):
        assert clt_sum_gaussian(UniformSource.fixed([1.0]), 1) == pytest.approx(-math.sqrt(3), abs=1e-15)

    def test_variance_n12(self):
        x = clt_stream(UniformSource.classical(3), 100_000, n=12)
        assert abs(x.var(ddof=1) - 1) < 0.05
        assert abs(x.mean()) < 0.02

    def test_literal_width_variance(self):
        # without the sqrt(n) factor the spread shrinks to sigma^2 / n
        x = clt_stream(UniformSource.classical(4), 100_000, n=12, literal=True)
        assert abs(x.var(ddof=1) - 1 / 12) < 0.005

    def test_literal_and_corrected_agree_at_n1(self):
        vals = [0.1, 0.9, 0.35]
        a = [clt_sum_gaussian(UniformSource.fixed([v]), 1, 0.5, 2.0) for v in vals]
        b = [clt_sum_gaussian(UniformSource.fixed([v]), 1, 0.5, 2.0, literal=True) for v in vals]
        assert a == b

    def test_stream_matches_scalar(self):
        vals = np.random.default_rng(0).random(36)
        x = clt_stream(UniformSource.fixed(vals), 3, n=12, mean=1.0, sigma=0.5)
        src = UniformSource.fixed(vals)
        y = [clt_sum_gaussian(src, 12, 1.0, 0.5) for _ in range(3)]
        np.testing.assert_allclose(x, y, atol=1e-14)

    @pytest.mark.parametrize("kw", [{"n": 0}, {"n": 3, "sigma": 0.0}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            clt_sum_gaussian(UniformSource.classical(0), **kw)


class TestQuantumStream:
    def test_count_and_finite(self):
        z = quantum_gaussian_stream(QrngConfig(seed=3), 2001)
        assert z.shape == (2001,) and np.all(np.isfinite(z))

    def test_moments(self):
        n = 10_000
        z = quantum_gaussian_stream(QrngConfig(seed=5), n)
        assert abs(z.mean()) <= 4 / math.sqrt(n)
        assert abs(z.var() - 1) <= 8 / math.sqrt(n)

    def test_one_sigma_fraction(self):
        z = quantum_gaussian_stream(QrngConfig(seed=6), 10_000)
        assert abs(np.mean(np.abs(z) < 1) - 0.6827) < 0.02

    def test_lattice_source_ks_distance(self):
        z = quantum_gaussian_stream(QrngConfig(seed=7, n_qubits_stage2=6), 2000)
        assert stats.kstest(z, "norm").statistic < 0.08

    def test_deterministic(self):
        a = quantum_gaussian_stream(QrngConfig(seed=2), 500)
        b = quantum_gaussian_stream(QrngConfig(seed=2), 500)
        np.testing.assert_array_equal(a, b)

    def test_index_config_rejected(self):
        with pytest.raises(ValueError):
            UniformSource.quantum(QrngConfig(is_index=True))

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            gaussian_stream(UniformSource.classical(0), 10, "ziggurat")
