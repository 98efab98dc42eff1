import numpy as np
import pytest
from scipy.linalg import block_diag

from cvqkdpy.errors import ContractViolation, UnphysicalStateError
from cvqkdpy.gaussian import (
    CovarianceMatrix,
    SymplecticTransform,
    apply_symplectic,
    beam_splitter_symplectic,
    entropy,
    g_entropy,
    heterodyne_split,
    homodyne_condition,
    omega,
    symplectic_eigenvalues,
    tmsv_covariance,
)


def random_state(rng, n_modes):
    """Thermal modes, locally squeezed and mixed on random beam splitters"""
    state = CovarianceMatrix(block_diag(*[v * np.eye(2) for v in rng.uniform(1.0, 5.0, n_modes)]))
    for _ in range(2 * n_modes):
        squeeze = np.eye(2 * n_modes)
        mode = int(rng.integers(n_modes))
        r = rng.uniform(-1.0, 1.0)
        squeeze[2 * mode, 2 * mode] = np.exp(-r)
        squeeze[2 * mode + 1, 2 * mode + 1] = np.exp(r)
        state = apply_symplectic(state, SymplecticTransform(squeeze))
        a, b = rng.choice(n_modes, size=2, replace=False)
        state = apply_symplectic(state, beam_splitter_symplectic(rng.uniform(), int(a), int(b), n_modes))
    return state


class TestCovarianceMatrix:
    """Construction checks and mode bookkeeping"""

    def test_rejects_asymmetric_matrix(self):
        with pytest.raises(ContractViolation, match="symmetric"):
            CovarianceMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]))

    @pytest.mark.parametrize("shape", [(3, 3), (2, 4), (0, 0)])
    def test_rejects_bad_shape(self, shape):
        with pytest.raises(ContractViolation):
            CovarianceMatrix(np.zeros(shape))

    def test_is_read_only(self):
        gamma = CovarianceMatrix.vacuum(2)
        with pytest.raises(ValueError):
            gamma.matrix[0, 0] = 3.0

    def test_marginal_and_permute(self):
        gamma = tmsv_covariance(5.0).direct_sum(CovarianceMatrix.thermal(3.0))
        assert gamma.n_modes == 3
        assert gamma.marginal([2]).variance(0) == 3.0
        swapped = gamma.permute([2, 0, 1])
        assert swapped.variance(0) == 3.0
        assert swapped.covariance(1, 2, "p") == pytest.approx(-np.sqrt(24.0))

    def test_bad_mode_index(self):
        with pytest.raises(ContractViolation, match="out of range"):
            CovarianceMatrix.vacuum(2).variance(2)

    def test_permute_needs_permutation(self):
        with pytest.raises(ContractViolation):
            CovarianceMatrix.vacuum(2).permute([0, 0])


class TestSymplectic:
    """Symplectic forms, transforms and spectra"""

    def test_omega_is_antisymmetric(self):
        w = omega(3)
        assert w.shape == (6, 6)
        assert np.array_equal(w, -w.T)
        assert np.allclose(w @ w, -np.eye(6))

    def test_rejects_non_symplectic(self):
        with pytest.raises(ContractViolation, match="not symplectic"):
            SymplecticTransform(np.diag([2.0, 1.0]))

    @pytest.mark.parametrize("t", [0.0, 0.3, 0.5, 1.0])
    def test_beam_splitter_is_symplectic(self, t):
        assert beam_splitter_symplectic(t, 0, 2, 3).symplectic_residual() < 1e-12

    def test_beam_splitter_mixes_variances(self):
        state = CovarianceMatrix.vacuum().direct_sum(CovarianceMatrix.thermal(9.0))
        mixed = apply_symplectic(state, beam_splitter_symplectic(0.25, 0, 1, 2))
        assert mixed.variance(0) == pytest.approx(0.25 * 1.0 + 0.75 * 9.0)
        assert mixed.variance(1, "p") == pytest.approx(0.75 * 1.0 + 0.25 * 9.0)

    def test_beam_splitter_arguments(self):
        with pytest.raises(ContractViolation):
            beam_splitter_symplectic(1.2, 0, 1, 2)
        with pytest.raises(ContractViolation):
            beam_splitter_symplectic(0.5, 1, 1, 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ContractViolation, match="dimension"):
            apply_symplectic(CovarianceMatrix.vacuum(2), SymplecticTransform.identity(3))

    def test_thermal_spectrum(self):
        assert symplectic_eigenvalues(CovarianceMatrix.thermal(7.0)) == pytest.approx([7.0])

    @pytest.mark.parametrize("v", [1.0, 2.0, 40.0, 1e4])
    def test_tmsv_is_pure(self, v):
        assert symplectic_eigenvalues(tmsv_covariance(v)) == pytest.approx([1.0, 1.0], abs=1e-9)
        assert entropy(tmsv_covariance(v)) == pytest.approx(0.0, abs=1e-9)

    def test_spectrum_is_descending(self):
        state = CovarianceMatrix(block_diag(2.0 * np.eye(2), 5.0 * np.eye(2), 3.0 * np.eye(2)))
        assert symplectic_eigenvalues(state) == pytest.approx([5.0, 3.0, 2.0])

    def test_spectrum_survives_symplectic_maps(self):
        rng = np.random.default_rng(7)
        state = random_state(rng, 3)
        moved = apply_symplectic(state, beam_splitter_symplectic(0.37, 0, 1, 3))
        assert symplectic_eigenvalues(moved) == pytest.approx(symplectic_eigenvalues(state), rel=1e-9)


class TestEntropy:
    """The thermal-mode entropy function"""

    def test_vacuum_has_no_entropy(self):
        assert g_entropy(1.0) == 0.0

    def test_value_at_three(self):
        assert g_entropy(3.0) == pytest.approx(2.0, abs=1e-12)

    def test_strictly_increasing(self):
        values = [g_entropy(nu) for nu in np.linspace(1.0, 50.0, 200)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_clamps_roundoff_below_one(self):
        assert g_entropy(1.0 - 1e-10) == 0.0

    def test_rejects_unphysical(self):
        with pytest.raises(UnphysicalStateError) as err:
            g_entropy(0.9)
        assert err.value.spectrum == [0.9]

    def test_state_entropy_reports_spectrum(self):
        with pytest.raises(UnphysicalStateError, match="spectrum"):
            entropy(CovarianceMatrix(0.5 * np.eye(2)))


class TestHomodyne:
    """Conditioning on one homodyned quadrature"""

    def test_tmsv_conditional_state(self):
        v = 5.0
        cond = homodyne_condition(tmsv_covariance(v), 0, "x")
        assert cond.n_modes == 1
        assert cond.variance(0, "x") == pytest.approx(1.0 / v)
        assert cond.variance(0, "p") == pytest.approx(v)

    def test_p_quadrature(self):
        cond = homodyne_condition(tmsv_covariance(5.0), 1, "p")
        assert cond.variance(0, "p") == pytest.approx(0.2)
        assert cond.variance(0, "x") == pytest.approx(5.0)

    def test_uncorrelated_modes_are_untouched(self):
        state = CovarianceMatrix.thermal(4.0).direct_sum(CovarianceMatrix.thermal(2.0))
        assert homodyne_condition(state, 1).allclose(CovarianceMatrix.thermal(4.0), 1e-15)

    def test_needs_two_modes(self):
        with pytest.raises(ContractViolation):
            homodyne_condition(CovarianceMatrix.thermal(2.0), 0)

    @pytest.mark.slow
    def test_conditioning_never_adds_entropy(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            n = int(rng.integers(2, 5))
            state = random_state(rng, n)
            measured = int(rng.integers(n))
            quadrature = "x" if rng.uniform() < 0.5 else "p"
            rest = state.marginal([m for m in range(n) if m != measured])
            assert entropy(homodyne_condition(state, measured, quadrature)) <= entropy(rest) + 1e-9

    def test_commutes_with_relabelling(self):
        rng = np.random.default_rng(11)
        state = random_state(rng, 4)
        conditioned_then_permuted = homodyne_condition(state, 3).permute([2, 0, 1])
        permuted_then_conditioned = homodyne_condition(state.permute([2, 0, 1, 3]), 3)
        assert conditioned_then_permuted.allclose(permuted_then_conditioned, 1e-12)

    def test_heterodyne_split_appends_mode(self):
        split = heterodyne_split(tmsv_covariance(9.0), 0)
        assert split.n_modes == 3
        assert split.variance(0) == pytest.approx(5.0)
        assert split.variance(2) == pytest.approx(5.0)
        assert entropy(split) == pytest.approx(0.0, abs=1e-9)
