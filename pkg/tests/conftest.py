from pathlib import Path

import pytest
import yaml

from rlinv.model import SystemParameters
from rlinv.scenario import load_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

TYRE = sorted(p.stem for p in SCENARIOS.glob("tyre_*.yaml"))
EQUAL_DEMAND = ["equal_demand_s05", "equal_demand_s07", "equal_demand_s099", "equal_demand_s0995", "equal_demand_s1"]


def scenario(name):
    return load_scenario(SCENARIOS / f"{name}.yaml")


def raw_params(name):
    return yaml.safe_load((SCENARIOS / f"{name}.yaml").read_text())["params"]


@pytest.fixture
def two_market():
    return scenario("two_market")


@pytest.fixture
def cost_waste():
    return scenario("cost_waste")


@pytest.fixture
def tyre1():
    return scenario("tyre_p04_setup_heavy")
