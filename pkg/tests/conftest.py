import pytest

from ineqif import make_distribution

FLEET_SPECS = ("exp:1", "uniform:0,1", "pareto:3,1", "lognormal:0,0.5")


def build_distribution(spec: str):
    name, _, rest = spec.partition(":")
    params = [float(tok) for tok in rest.split(",")] if rest else []
    return make_distribution(name, *params)


@pytest.fixture(scope="session")
def fleet():
    """The four reference distributions used throughout the suite."""
    return {spec: build_distribution(spec) for spec in FLEET_SPECS}
