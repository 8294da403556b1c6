import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def night_down_setup1():
    from satlink import Scenario

    return Scenario.build("down", "night", setup=1)


@pytest.fixture(scope="session")
def night_up_setup1():
    from satlink import Scenario

    return Scenario.build("up", "night", setup=1)
