import math

import numpy as np
import pytest

from rfqa import core


def two_level_x(omega):
    """H = (omega/2) sigma_x: Rabi flopping |0> -> |1> at frequency omega."""
    op = core.DenseOp(0.5 * omega * np.array([[0.0, 1.0], [1.0, 0.0]]))
    return core.TimeDependentHamiltonian(2, terms=[(op, 1.0)])


class TestQuantumState:
    def test_norm_validation(self):
        with pytest.raises(ValueError, match="norm"):
            core.QuantumState(np.array([1.0, 1.0]))

    def test_basis_dimension_checks(self):
        with pytest.raises(ValueError):
            core.QuantumState(np.array([1.0, 0.0, 0.0]), core.TWO_LEVEL)
        with pytest.raises(ValueError):
            core.QuantumState(np.eye(3)[0], core.FULL_Z_BASIS)

    def test_overlap_and_fidelity(self):
        a = core.basis_state(4, 0)
        b = core.basis_state(4, 1)
        assert a.fidelity(a) == pytest.approx(1.0)
        assert a.fidelity(b) == 0.0

    def test_paramagnet_ground_state(self):
        s = core.paramagnet_ground_state(3)
        assert np.allclose(s.amplitudes, 2.0 ** -1.5)


class TestOperators:
    @pytest.mark.parametrize("axis", ["x", "y"])
    @pytest.mark.parametrize("site", [0, 1, 2])
    def test_spin_flip_apply_matches_dense(self, axis, site):
        op = core.SpinFlipOp(site, axis, 3)
        rng = np.random.default_rng(7)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        assert np.allclose(op.apply(psi), op.dense() @ psi)

    def test_spin_flip_hermitian_and_involutive(self):
        for axis in ("x", "y"):
            m = core.SpinFlipOp(1, axis, 3).dense()
            assert np.allclose(m, m.conj().T)
            assert np.allclose(m @ m, np.eye(8))

    def test_dense_op_rejects_non_hermitian(self):
        with pytest.raises(core.HermiticityError):
            core.DenseOp(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_hamiltonian_dense_matches_apply(self):
        h = core.TimeDependentHamiltonian(
            8,
            static_diag=np.arange(8.0),
            terms=[(core.SpinFlipOp(0, "x", 3),
                    core.SineEnvelope(0.3, 0.05)),
                   (core.SpinFlipOp(2, "y", 3), 0.7)],
        )
        rng = np.random.default_rng(3)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        for t in (0.0, 1.3, 7.7):
            assert np.allclose(h.apply(psi, t), h.dense(t) @ psi)

    def test_dimension_mismatch(self):
        h = two_level_x(1.0)
        with pytest.raises(core.DimensionMismatchError):
            h.apply(np.zeros(3, dtype=complex), 0.0)


class TestEvolve:
    def test_rabi_flopping_oracle(self):
        # P_1(t) = sin^2(omega t / 2) for H = (omega/2) sigma_x
        omega = 0.8
        h = two_level_x(omega)
        psi0 = core.basis_state(2, 0, core.TWO_LEVEL)
        for t in (0.5, 2.0, math.pi / omega):
            out, diag = core.evolve(psi0, h, 0.0, t)
            assert abs(out.amplitudes[1]) ** 2 == pytest.approx(
                math.sin(omega * t / 2.0) ** 2, abs=1e-7)
            assert diag.max_drift < 1e-8

    def test_propagator_composition(self):
        h = core.TimeDependentHamiltonian(
            2,
            static_diag=np.array([0.4, -0.4]),
            terms=[(core.DenseOp(np.array([[0, 1], [1, 0]], dtype=float)),
                    core.CosineEnvelope(0.3, 0.02))],
        )
        psi0 = core.QuantumState(
            np.array([0.6, 0.8j]), core.TWO_LEVEL)
        control = core.StepControl(eps_step=0.01)
        mid, _ = core.evolve(psi0, h, 0.0, 4.0, control)
        end_a, _ = core.evolve(mid, h, 4.0, 9.0, control)
        end_b, _ = core.evolve(psi0, h, 0.0, 9.0, control)
        assert end_a.fidelity(end_b) == pytest.approx(1.0, abs=1e-9)

    def test_diag_shift_is_global_phase(self):
        # shifting the diagonal changes nothing observable
        base = np.array([[0.0, 0.2], [0.2, 1.0]])
        for shift in (0.0, 5.0):
            h = core.TimeDependentHamiltonian(
                2, static_diag=np.diag(base) + shift,
                terms=[(core.DenseOp(base - np.diag(np.diag(base))), 1.0)])
            psi0 = core.basis_state(2, 0, core.TWO_LEVEL)
            out, _ = core.evolve(psi0, h, 0.0, 3.0)
            if shift == 0.0:
                ref = out
        assert out.fidelity(ref) == pytest.approx(1.0, abs=1e-10)

    def test_zero_span_is_identity(self):
        psi0 = core.basis_state(2, 0, core.TWO_LEVEL)
        out, diag = core.evolve(psi0, two_level_x(1.0), 2.0, 2.0)
        assert out.fidelity(psi0) == 1.0
        assert diag.n_steps == 0

    def test_reversed_interval_rejected(self):
        psi0 = core.basis_state(2, 0, core.TWO_LEVEL)
        with pytest.raises(ValueError):
            core.evolve(psi0, two_level_x(1.0), 1.0, 0.0)

    def test_norm_conserved_long_run(self):
        h = core.TimeDependentHamiltonian(
            4, static_diag=np.array([0.0, 0.3, 0.5, 1.0]),
            terms=[(core.SpinFlipOp(0, "x", 2), core.SineEnvelope(0.2, 0.04)),
                   (core.SpinFlipOp(1, "y", 2), 0.15)])
        psi0 = core.basis_state(4, 0)
        out, diag = core.evolve(psi0, h, 0.0, 200.0)
        assert np.linalg.norm(out.amplitudes) == pytest.approx(1.0, abs=1e-12)
        assert diag.max_drift < 1e-6


class TestEigensystem:
    def test_matches_numpy(self):
        rng = np.random.default_rng(11)
        m = rng.normal(size=(6, 6))
        m = m + m.T
        vals, vecs = core.eigensystem(m)
        assert np.allclose(m @ vecs, vecs * vals, atol=1e-10)
        assert np.all(np.diff(vals) >= -1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(core.HermiticityError):
            core.eigensystem(np.array([[0.0, 1.0], [2.0, 0.0]]))

    def test_dense_cap(self):
        with pytest.raises(core.DenseCapError):
            core.eigensystem(np.zeros((2, 2)), dense_cap=1)
