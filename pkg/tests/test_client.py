import pytest

from cvqkdpy import CVQKDClient
from cvqkdpy.analysis import Scheme, Side, TpsSearch


@pytest.fixture
def client():
    return CVQKDClient(v=40.0, beta=0.95, eps=0.01)


class TestClient:
    def test_missing_parameters(self):
        with pytest.raises(ValueError):
            CVQKDClient(v=40.0, beta=0.95)

    def test_key_rate(self, client):
        report = client.key_rate(10.0)
        assert report.positive
        assert report.p_success == 1.0

    def test_scheme_names_and_objects(self, client):
        by_name = client.key_rate(20.0, "alice-k1")
        by_object = client.key_rate(20.0, Scheme(k_alice=1))
        assert by_name == by_object
        assert by_name.p_success < 1.0

    def test_unknown_scheme(self, client):
        with pytest.raises(ValueError):
            client.key_rate(10.0, "carol-k1")

    def test_noise_override(self, client):
        assert client.key_rate(10.0, eps=0.0).k_ps > client.key_rate(10.0, eps=0.05).k_ps

    def test_one_way(self, client):
        gg02 = client.one_way_key_rate(10.0)
        assert gg02.positive
        assert gg02 == client.key_rate(10.0, "gg02")

    def test_optimize_tps(self, client):
        optimum = client.optimize_tps(30.0, "alice")
        assert 0.0 < optimum.t_ps_alice < 1.0
        assert optimum.t_ps_bob == 1.0
        assert optimum.report == client.key_rate(30.0, Scheme.for_side(Side.ALICE, 1))

    def test_noise_limit(self, client):
        limit = client.tolerable_excess_noise(10.0)
        assert limit.in_range
        assert limit.eps > 0.0

    def test_compare(self, client):
        results = client.compare([0.0, 20.0])
        assert list(results) == ["none", "alice", "bob", "both"]
        assert results["alice"].curve == "alice-k1"

    def test_sweep(self, client):
        result = client.sweep_distance([0.0, 10.0, 20.0], threads=2)
        assert result.parameters == [0.0, 10.0, 20.0]
        assert result.curve == "original"

    def test_custom_search(self):
        client = CVQKDClient(v=40.0, beta=0.95, eps=0.01, search=TpsSearch(grid_points=5))
        assert client.experiment.search.grid_points == 5

    def test_config_file(self, write_config):
        path = write_config(
            """
            protocol:
              v: 40
              beta: 0.95
              eps: 0.01
              scheme: alice-k1
              t_ps_alice: 0.8
            """
        )
        client = CVQKDClient(config_path=path)
        assert client.default_scheme == Scheme(k_alice=1, t_ps_alice=0.8)
        direct = CVQKDClient(v=40.0, beta=0.95, eps=0.01)
        assert client.key_rate(15.0) == direct.key_rate(15.0, Scheme(k_alice=1, t_ps_alice=0.8))
