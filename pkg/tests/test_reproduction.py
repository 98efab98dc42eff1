"""
Reproductions of the published comparison curves (V = 40, eps = 0.01,
beta = 0.95). Slow; deselected by default, run with ``pytest -m reproduction``.
"""

import numpy as np
import pytest

from cvqkdpy.analysis import Experiment, Scheme, TpsSearch, compare_schemes, max_distance, tolerable_excess_noise
from cvqkdpy.protocols import ProtocolConfig
from cvqkdpy.sources import SourceSpec

pytestmark = pytest.mark.reproduction

NOISE_DISTANCES = (10.0, 30.0, 50.0)
NOISE_TOL = 1e-5
# Bob's subtracted source never reduces to the plain source, so a small
# noise-tolerance gap remains; it is largest at short range
BOB_NOISE_GAP = 2.5e-3


def study_experiment():
    cfg = ProtocolConfig(alice_src=SourceSpec(40.0), bob_src=SourceSpec(40.0), t_a=0.5, beta=0.95)
    return Experiment(base=cfg, eps_forward=0.01, eps_backward=0.01, search=TpsSearch())


@pytest.fixture(scope="module")
def comparison():
    return compare_schemes(study_experiment(), np.linspace(0.0, 150.0, 31))


@pytest.fixture(scope="module")
def bob_noise():
    """(bob-k1, original) tolerable noise at each test distance"""
    experiment = study_experiment()
    return {
        km: tuple(
            tolerable_excess_noise(experiment, scheme, km, tol=NOISE_TOL).eps
            for scheme in (Scheme.parse("bob-k1"), Scheme())
        )
        for km in NOISE_DISTANCES
    }


def reach(experiment, name):
    return max_distance(experiment, Scheme.parse(name))


def key(point):
    return max(point.report.k_ps, 0.0)


class TestRates:
    def test_fewer_photons_reach_further(self, experiment):
        k1, k2, k3 = (reach(experiment, f"alice-k{k}") for k in (1, 2, 3))
        assert k1 > k2 > k3

    def test_alice_subtraction_beats_baselines(self, experiment):
        alice, original, gg02 = (reach(experiment, n) for n in ("alice-k1", "original", "gg02"))
        assert alice > original > gg02

    def test_alice_k1_beyond_150_km(self, experiment):
        km = reach(experiment, "alice-k1")
        assert km > 150.0
        if km < 200.0:
            pytest.xfail(f"alice-k1 reaches {km:.1f} km, short of 200 km")

    def test_one_way_subtraction_beats_gg02(self, experiment):
        assert reach(experiment, "one-way-k1") > reach(experiment, "gg02")


class TestComparison:
    """Scheme orderings at every point of the 0-150 km grid"""

    def test_grid(self, comparison):
        assert [len(result.points) for result in comparison.values()] == [31] * 4

    def test_bob_subtraction_does_not_help(self, comparison):
        for bob, none in zip(comparison["bob"].points, comparison["none"].points):
            assert key(bob) <= key(none), bob.parameter
            if none.report.k_ps > 0.0:
                assert bob.report.k_ps <= none.report.k_ps, bob.parameter

    def test_both_sides_no_better_than_alice(self, comparison):
        for both, alice in zip(comparison["both"].points, comparison["alice"].points):
            assert key(both) <= key(alice), both.parameter
            if alice.report.k_ps > 0.0:
                assert both.report.k_ps <= alice.report.k_ps, both.parameter

    @pytest.mark.parametrize("side", ["alice", "bob", "both"])
    def test_subtracting_points_keep_some_data(self, comparison, side):
        for point in comparison[side].points:
            assert point.report.p_success > 0.0, point.parameter
            assert point.t_ps_used < 1.0

    def test_rates_beyond_reach_are_negative(self, comparison):
        for bob, none in zip(comparison["bob"].points, comparison["none"].points):
            if none.report.k_ps < 0.0:
                assert bob.report.k_ps < 0.0, bob.parameter


class TestOptimalTps:
    def test_optimum_moves_with_distance(self, experiment):
        scheme = Scheme.parse("alice-k1")
        near = experiment.evaluate(scheme, 10.0).t_ps_alice
        far = experiment.evaluate(scheme, 100.0).t_ps_alice
        assert near != pytest.approx(far, abs=1e-3)


class TestNoise:
    def test_alice_tolerates_more_noise(self, experiment):
        alice = tolerable_excess_noise(experiment, Scheme.parse("alice-k1"), 50.0)
        original = tolerable_excess_noise(experiment, Scheme(), 50.0)
        assert alice.eps > original.eps

    @pytest.mark.parametrize("km", NOISE_DISTANCES)
    def test_bob_tolerance_matches_original(self, bob_noise, km):
        bob, original = bob_noise[km]
        gap = abs(bob - original)
        assert gap <= BOB_NOISE_GAP
        if gap > 2 * NOISE_TOL:
            pytest.xfail(f"bob-k1 tolerates eps={bob:.6f}, original {original:.6f} at {km:g} km")

    def test_bob_tolerance_gap_shrinks_with_distance(self, bob_noise):
        gaps = [abs(bob - original) for bob, original in (bob_noise[km] for km in NOISE_DISTANCES)]
        assert gaps[0] > gaps[1] > gaps[2]
