import textwrap

import pytest

from cvqkdpy.analysis import Experiment, TpsSearch
from cvqkdpy.protocols import ChannelSpec, ProtocolConfig
from cvqkdpy.sources import SourceSpec

# parameters of the published comparison
V = 40.0
BETA = 0.95
EPS = 0.01
T_A = 0.5


@pytest.fixture
def source():
    return SourceSpec(V)


@pytest.fixture
def base_config():
    return ProtocolConfig(alice_src=SourceSpec(V), bob_src=SourceSpec(V), t_a=T_A, beta=BETA)


@pytest.fixture
def lossy_config(base_config):
    """Both channels at 20 km with the study's excess noise"""
    ch = ChannelSpec(10 ** (-0.4), EPS)
    return base_config.with_channels(ch, ch)


@pytest.fixture
def experiment(base_config):
    return Experiment(base=base_config, eps_forward=EPS, eps_backward=EPS, search=TpsSearch())


@pytest.fixture
def write_config(tmp_path):
    """Write a dedented YAML document and return its path"""

    def write(text, name="run.yaml"):
        path = tmp_path / name
        path.write_text(textwrap.dedent(text).lstrip("\n"), encoding="utf-8")
        return str(path)

    return write
