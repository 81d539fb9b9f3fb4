"""
Pytest fixtures for containerlab tests.
"""

import tempfile
from pathlib import Path

import pytest

from containerlab.config import Config
from containerlab.core.layer_graph import (
    ContainmentGraph,
    LayerGraphParams,
    complete_bipartite,
    cycle_graph,
)
from containerlab.models.certificate import ContainerParams
from containerlab.models.family import KFamily


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def isolated_config(temp_dir, monkeypatch):
    """Point the config lookup at an empty directory and clear the seed variable."""
    monkeypatch.setenv("XDG_CONFIG_HOME", str(temp_dir / "xdg"))
    monkeypatch.delenv("CONTAINER_LAB_SEED", raising=False)
    return temp_dir / "xdg" / "containerlab" / "config.yaml"


@pytest.fixture
def cycle6():
    """The 6-cycle as a (2,2)-biregular graph."""
    return cycle_graph(6)


@pytest.fixture
def k33():
    return complete_bipartite(3, 3)


@pytest.fixture
def h521():
    """H(5,2,1): pairs and singletons of [4]."""
    return ContainmentGraph(LayerGraphParams(5, 2, 1))


@pytest.fixture
def h622():
    return ContainmentGraph(LayerGraphParams(6, 2, 2))


@pytest.fixture
def triangle():
    """The non-trivial family {12, 13, 23} on [5]."""
    return KFamily.from_sets(5, 2, [(1, 2), (1, 3), (2, 3)])


@pytest.fixture
def default_params():
    return ContainerParams()


@pytest.fixture
def small_config():
    """Default configuration with a single container seed."""
    config = Config()
    config.containers.seeds = [0]
    return config
