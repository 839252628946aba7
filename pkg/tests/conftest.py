from pathlib import Path

import pytest

from interdict import build_layered, parse_network, parse_strategies

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def fixture_network_text() -> str:
    return (DATA_DIR / "fixture_network.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_strategies_text() -> str:
    return (DATA_DIR / "fixture_strategies.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_net(fixture_network_text):
    return parse_network(fixture_network_text)


@pytest.fixture(scope="session")
def fixture_mix(fixture_net, fixture_strategies_text):
    return parse_strategies(fixture_strategies_text, fixture_net)


@pytest.fixture(scope="session")
def fixture_layered(fixture_net):
    return build_layered(fixture_net)
