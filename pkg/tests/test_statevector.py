import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgauss.statevector import (
    HADAMARD,
    BitSample,
    CapacityError,
    DegenerateStateError,
    Gate1Q,
    apply_all,
    apply_gate,
    expval_z,
    from_amplitudes,
    init_zero,
    make_general_u,
    make_rotation,
    sample_z,
)

angles = st.floats(-4 * math.pi, 4 * math.pi, allow_nan=False)


def kron_all(mats):
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def full_operator(u, target, n):
    """Dense I x ... x U x ... x I with qubit 0 as the leftmost factor."""
    return kron_all([u if q == target else np.eye(2) for q in range(n)])


class TestInitZero:
    def test_single_qubit(self):
        np.testing.assert_array_equal(init_zero(1).amplitudes, [1, 0])

    def test_three_qubits(self):
        amps = init_zero(3).amplitudes
        assert amps[0] == 1
        assert np.count_nonzero(amps) == 1 and amps.size == 8

    def test_two_qubit_hadamard_wall(self):
        # H x H on |00> by hand: every amplitude is (1/sqrt2)^2
        state = apply_all(init_zero(2), HADAMARD)
        np.testing.assert_allclose(state.amplitudes, [0.5] * 4, atol=1e-15)

    @pytest.mark.parametrize("n", [0, 21, -1])
    def test_capacity(self, n):
        with pytest.raises(CapacityError):
            init_zero(n)

    def test_configurable_cap(self):
        with pytest.raises(CapacityError):
            init_zero(5, max_qubits=4)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_hadamard_wall_exact(self, n):
        state = apply_all(init_zero(n), HADAMARD)
        np.testing.assert_allclose(state.amplitudes, 2 ** (-n / 2), atol=1e-12)


class TestApplyGate:
    def test_hadamard_on_zero(self):
        out = apply_gate(init_zero(1), HADAMARD, 0)
        np.testing.assert_allclose(out.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)

    def test_rz_on_zero(self):
        theta = 0.7
        out = apply_gate(init_zero(1), make_rotation("z", theta), 0)
        np.testing.assert_allclose(out.amplitudes, [cmath.exp(-0.5j * theta), 0], atol=1e-15)

    def test_general_u_on_plus_matches_hand_multiply(self):
        plus = apply_gate(init_zero(1), HADAMARD, 0)
        t, p, lam = math.pi / 4, math.pi / 2, math.pi
        c, s = math.cos(t / 2), math.sin(t / 2)
        r = 1 / math.sqrt(2)
        expected = [
            c * r - cmath.exp(1j * lam) * s * r,
            cmath.exp(1j * p) * s * r + cmath.exp(1j * (p + lam)) * c * r,
        ]
        out = apply_gate(plus, make_general_u(t, p, lam), 0)
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-14)

    def test_input_not_mutated(self):
        s0 = init_zero(2)
        before = s0.amplitudes.copy()
        apply_gate(s0, HADAMARD, 1)
        np.testing.assert_array_equal(s0.amplitudes, before)

    @pytest.mark.parametrize("target", [-1, 3])
    def test_bad_target(self, target):
        with pytest.raises(IndexError):
            apply_gate(init_zero(3), HADAMARD, target)

    @pytest.mark.parametrize("n,target", [(1, 0), (2, 0), (2, 1), (3, 1), (4, 3)])
    def test_matches_dense_kronecker(self, n, target):
        rng = np.random.default_rng(n * 10 + target)
        psi = from_amplitudes(rng.normal(size=2**n) + 1j * rng.normal(size=2**n), normalize=True)
        gate = make_general_u(0.3, 1.1, 2.7)
        expected = full_operator(gate.matrix, target, n) @ psi.amplitudes
        np.testing.assert_allclose(apply_gate(psi, gate, target).amplitudes, expected, atol=1e-13)

    def test_batched_gate_matches_loop(self):
        rng = np.random.default_rng(3)
        thetas = rng.uniform(0, 2 * np.pi, 5)
        base = apply_all(init_zero(3), HADAMARD)
        batch = apply_gate(
            type(base)(3, np.broadcast_to(base.amplitudes, (5, 8))), make_rotation("y", thetas), 1
        )
        for k, th in enumerate(thetas):
            single = apply_gate(base, make_rotation("y", th), 1)
            np.testing.assert_allclose(batch.amplitudes[k], single.amplitudes, atol=1e-15)

    def test_three_qubit_hadamard_then_u_layer(self):
        # H wall, then U on each qubit with a fixed angle table; compare to dense operator
        table = [(math.pi / 4, math.pi / 2, math.pi), (math.pi / 3, math.pi / 4, math.pi / 2),
                 (math.pi / 6, math.pi / 3, math.pi / 4)]
        state = apply_all(init_zero(3), HADAMARD)
        np.testing.assert_allclose(state.amplitudes, [1 / math.sqrt(8)] * 8, atol=1e-15)
        for q, (t, p, lam) in enumerate(table):
            state = apply_gate(state, make_general_u(t, p, lam), q)
        dense = kron_all([make_general_u(*row).matrix for row in table])
        np.testing.assert_allclose(state.amplitudes, dense @ np.full(8, 1 / math.sqrt(8)), atol=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from("xyzhu"), angles, angles, angles, st.integers(0, 3)),
                    min_size=1, max_size=12))
    def test_norm_preserved(self, ops):
        state = init_zero(4)
        for kind, a, b, c, q in ops:
            if kind == "h":
                gate = HADAMARD
            elif kind == "u":
                gate = make_general_u(a, b, c)
            else:
                gate = make_rotation(kind, a)
            state = apply_gate(state, gate, q)
            assert abs(state.norm() - 1.0) < 1e-10


class TestRotations:
    def test_rx_zero_is_identity(self):
        np.testing.assert_allclose(make_rotation("x", 0.0).matrix, np.eye(2), atol=1e-15)

    def test_ry_pi(self):
        np.testing.assert_allclose(make_rotation("y", math.pi).matrix, [[0, -1], [1, 0]], atol=1e-15)

    def test_rz_half_pi(self):
        expected = np.diag([cmath.exp(-1j * math.pi / 4), cmath.exp(1j * math.pi / 4)])
        np.testing.assert_allclose(make_rotation("z", math.pi / 2).matrix, expected, atol=1e-15)

    @pytest.mark.parametrize("axis,pauli", [
        ("x", np.array([[0, 1], [1, 0]])),
        ("y", np.array([[0, -1j], [1j, 0]])),
        ("z", np.array([[1, 0], [0, -1]])),
    ])
    def test_matches_exponential_form(self, axis, pauli):
        # cos(t/2) I - i sin(t/2) P
        t = 1.234
        expected = math.cos(t / 2) * np.eye(2) - 1j * math.sin(t / 2) * pauli
        np.testing.assert_allclose(make_rotation(axis, t).matrix, expected, atol=1e-15)

    @pytest.mark.parametrize("bad", [math.inf, math.nan, -math.inf])
    def test_non_finite(self, bad):
        with pytest.raises(ValueError):
            make_rotation("x", bad)
        with pytest.raises(ValueError):
            make_general_u(0.0, bad, 0.0)

    def test_bad_axis(self):
        with pytest.raises(ValueError):
            make_rotation("w", 0.1)

    def test_u_identity(self):
        np.testing.assert_allclose(make_general_u(0, 0, 0).matrix, np.eye(2), atol=1e-15)

    def test_u_angle_table_row(self):
        t, p, lam = math.pi / 4, math.pi / 2, math.pi
        expected = [
            [math.cos(math.pi / 8), -cmath.exp(1j * math.pi) * math.sin(math.pi / 8)],
            [cmath.exp(1j * math.pi / 2) * math.sin(math.pi / 8), cmath.exp(1.5j * math.pi) * math.cos(math.pi / 8)],
        ]
        np.testing.assert_allclose(make_general_u(t, p, lam).matrix, expected, atol=1e-15)

    def test_u_unitary(self):
        u = make_general_u(0.3, 1.1, 2.7).matrix
        np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(angles, angles, angles)
    def test_unitarity_property(self, t, p, lam):
        for g in (make_general_u(t, p, lam), make_rotation("x", t), make_rotation("y", p), make_rotation("z", lam)):
            assert np.abs(g.matrix.conj().T @ g.matrix - np.eye(2)).max() < 1e-12

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            Gate1Q(np.array([[1, 1], [0, 1]], dtype=complex), "bad")


class TestExpval:
    def test_two_qubit_example_qubit_b(self):
        psi = from_amplitudes([3 / 7, 6 / 7, 2 / 7, 0])
        assert abs(expval_z(psi, 1) - (-23 / 49)) < 1e-12

    def test_ground_state(self):
        assert expval_z(init_zero(1), 0) == 1.0

    def test_single_qubit_alpha_beta(self):
        a = math.sqrt(0.3)
        b = math.sqrt(0.7) * cmath.exp(0.4j)
        assert abs(expval_z(from_amplitudes([a, b]), 0) - (-0.4)) < 1e-12

    def test_does_not_modify(self):
        psi = from_amplitudes([3 / 7, 6 / 7, 2 / 7, 0])
        before = psi.amplitudes.copy()
        expval_z(psi, 0)
        np.testing.assert_array_equal(psi.amplitudes, before)

    def test_bad_target(self):
        with pytest.raises(IndexError):
            expval_z(init_zero(2), 2)


class TestSample:
    def test_bit_eigenvalue_convention(self):
        s = BitSample(np.array([0, 1, 1, 0]))
        np.testing.assert_array_equal(s.eigenvalues, [1, -1, -1, 1])

    def test_one_state_always_one(self):
        one = from_amplitudes([0, 1])
        rng = np.random.default_rng(0)
        for _ in range(50):
            assert sample_z(one, rng).bits.tolist() == [1]

    def test_equal_superposition(self):
        plus = from_amplitudes(np.full((20_000, 2), 1 / math.sqrt(2)))
        bits = sample_z(plus, np.random.default_rng(1)).bits[:, 0]
        assert abs(np.mean(bits == 0) - 0.5) < 4 * math.sqrt(0.25 / bits.size)

    def test_two_qubit_first_qubit_marginal(self):
        amp = 1 / math.sqrt(3)
        psi = from_amplitudes(np.broadcast_to([amp, amp, amp, 0], (30_000, 4)))
        bits = sample_z(psi, np.random.default_rng(2)).bits
        p = 2 / 3
        assert abs(np.mean(bits[:, 0] == 0) - p) < 4 * math.sqrt(p * (1 - p) / bits.shape[0])
        # whole-register sampling never yields the zero-amplitude |11>
        assert not np.any((bits[:, 0] == 1) & (bits[:, 1] == 1))

    def test_qubit_zero_is_most_significant(self):
        psi = from_amplitudes([0, 0, 1, 0])  # |10>
        assert sample_z(psi, np.random.default_rng(0)).bits.tolist() == [1, 0]

    def test_zero_norm_rejected(self):
        with pytest.raises(DegenerateStateError):
            sample_z(from_amplitudes([0, 0]), np.random.default_rng(0))

    @pytest.mark.parametrize("seed", range(3))
    def test_frequency_tracks_expval(self, seed):
        rng = np.random.default_rng(seed)
        state = apply_all(init_zero(3), HADAMARD)
        for q, t in enumerate(rng.uniform(0, 2 * np.pi, 3)):
            state = apply_gate(state, make_rotation("y", t), q)
        shots = 20_000
        batch = type(state)(3, np.broadcast_to(state.amplitudes, (shots, 8)))
        bits = sample_z(batch, rng).bits
        for q in range(3):
            p = (1 + expval_z(state, q)) / 2
            assert abs(np.mean(bits[:, q] == 0) - p) <= 4 * math.sqrt(p * (1 - p) / shots) + 1e-12
