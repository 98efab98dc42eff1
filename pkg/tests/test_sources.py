import math

import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.stats import norm

from cvqkdpy.errors import ContractViolation
from cvqkdpy.sources import (
    SourceSpec,
    SubtractionSpec,
    TwoModeCovariance,
    probability_turning_point,
    selection_probability,
    subtracted_covariance,
    success_probability,
)

VARIANCES = [5.0, 20.0, 40.0]
TRANSMITTANCES = [0.5, 0.8, 0.95, 1.0]


class TestSpecs:
    """Validation of source and subtraction parameters"""

    @pytest.mark.parametrize("v", [0.5, float("nan"), float("inf")])
    def test_bad_variance(self, v):
        with pytest.raises(ContractViolation):
            SourceSpec(v)

    def test_lambda_round_trip(self):
        src = SourceSpec.from_lambda(0.9)
        assert src.lambda_ == pytest.approx(0.9)
        assert math.tanh(src.r) == pytest.approx(0.9)
        assert SourceSpec(40.0).lambda_sq == pytest.approx(39.0 / 41.0)

    @pytest.mark.parametrize("k,t_ps", [(-1, 0.5), (True, 0.5), (1.5, 0.5), (1, 0.0), (1, 1.2)])
    def test_bad_subtraction(self, k, t_ps):
        with pytest.raises(ContractViolation):
            SubtractionSpec(k, t_ps)

    def test_disabled(self):
        assert not SubtractionSpec.disabled().enabled
        assert SubtractionSpec(0, 0.9).enabled
        assert SubtractionSpec(1, 1.0).enabled

    def test_unphysical_two_mode_state(self):
        with pytest.raises(ContractViolation):
            TwoModeCovariance(2.0, 1.9, 2.0)
        with pytest.raises(ContractViolation):
            TwoModeCovariance(2.0, 5.0, 2.0)


class TestSubtractedCovariance:
    """Closed-form covariance of the virtually subtracted source"""

    def test_single_photon_at_unit_transmittance(self):
        cov = subtracted_covariance(SourceSpec(40.0), SubtractionSpec(1, 1.0))
        assert cov.v1 == pytest.approx(81.0, rel=1e-12)
        assert cov.c == pytest.approx(2.0 * math.sqrt(1599.0), rel=1e-12)
        assert cov.v2 == pytest.approx(79.0, rel=1e-12)

    @pytest.mark.parametrize("v", VARIANCES)
    def test_disabled_is_gaussian(self, v):
        cov = subtracted_covariance(SourceSpec(v), SubtractionSpec.disabled())
        assert cov.as_tuple() == (v, math.sqrt(v * v - 1.0), v)

    @pytest.mark.parametrize("t_ps", [0.3, 0.7])
    def test_zero_photons_is_attenuated_tmsv(self, t_ps):
        src = SourceSpec(20.0)
        cov = subtracted_covariance(src, SubtractionSpec(0, t_ps))
        reduced = SourceSpec.from_lambda(math.sqrt(t_ps) * src.lambda_)
        assert cov.v1 == pytest.approx(reduced.v, rel=1e-12)
        assert cov.v2 == pytest.approx(reduced.v, rel=1e-12)
        assert cov.c == pytest.approx(math.sqrt(reduced.v ** 2 - 1.0), rel=1e-12)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_determinant_grows_with_photons(self, k):
        cov = subtracted_covariance(SourceSpec(40.0), SubtractionSpec(k, 0.8))
        assert cov.v1 * cov.v2 - cov.c ** 2 == pytest.approx(2 * k + 1, rel=1e-9)


class TestSuccessProbability:
    """Closed-form success probability and the heterodyne selection weight"""

    def test_known_value(self):
        p = success_probability(SourceSpec(40.0), SubtractionSpec(1, 0.5))
        assert p == pytest.approx(156.0 / 1849.0, rel=1e-12)
        assert p == pytest.approx(0.08437, abs=1e-5)

    def test_disabled_is_one(self):
        assert success_probability(SourceSpec(40.0), SubtractionSpec.disabled()) == 1.0

    def test_unit_transmittance_never_succeeds(self):
        assert success_probability(SourceSpec(40.0), SubtractionSpec(2, 1.0)) == 0.0

    @pytest.mark.parametrize("v", VARIANCES)
    @pytest.mark.parametrize("t_ps", TRANSMITTANCES)
    def test_probabilities_sum_to_one(self, v, t_ps):
        src = SourceSpec(v)
        total = sum(success_probability(src, SubtractionSpec(k, t_ps)) for k in range(2000))
        assert total == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_turning_point(self, k):
        src = SourceSpec(40.0)
        t_c = probability_turning_point(src, k)
        assert 0.0 < t_c < 1.0

        above = [success_probability(src, SubtractionSpec(k, t)) for t in np.linspace(t_c, 1.0, 50)]
        assert all(b <= a + 1e-15 for a, b in zip(above, above[1:]))
        below = [success_probability(src, SubtractionSpec(k, t)) for t in np.linspace(0.01, t_c, 50)]
        assert all(b >= a - 1e-15 for a, b in zip(below, below[1:]))

    def test_turning_point_single_photon(self):
        assert probability_turning_point(SourceSpec(40.0), 1) == pytest.approx(37.0 / 39.0)

    def test_weak_source_turning_point_is_zero(self):
        assert probability_turning_point(SourceSpec(1.5), 3) == 0.0

    def test_selection_weight_shape(self):
        src, sub = SourceSpec(40.0), SubtractionSpec(1, 0.5)
        x = np.linspace(-3.0, 3.0, 7)
        weights = selection_probability(src, sub, x, np.zeros_like(x))
        assert weights.shape == (7,)
        assert weights[3] == 0.0
        assert np.all((weights >= 0.0) & (weights <= 1.0))
        assert selection_probability(src, SubtractionSpec.disabled(), 1.0, 2.0) == 1.0

    @pytest.mark.parametrize("k,t_ps", [(0, 0.6), (1, 0.5), (2, 0.8), (3, 0.95)])
    def test_selection_averages_to_success(self, k, t_ps):
        src, sub = SourceSpec(40.0), SubtractionSpec(k, t_ps)
        sigma = math.sqrt((src.v + 1.0) / 2.0)
        axis = np.linspace(-12.0 * sigma, 12.0 * sigma, 1201)
        x, p = np.meshgrid(axis, axis, indexing="ij")
        density = norm.pdf(x, scale=sigma) * norm.pdf(p, scale=sigma)
        weighted = density * selection_probability(src, sub, x, p)
        average = trapezoid(trapezoid(weighted, axis, axis=1), axis)
        assert average == pytest.approx(success_probability(src, sub), abs=1e-6)
