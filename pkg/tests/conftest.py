from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

SCENES = Path(__file__).resolve().parents[1] / "scenes"


@pytest.fixture(scope="session")
def scenes_dir() -> Path:
    return SCENES


@pytest.fixture(scope="session")
def genus1():
    from mumford_cup.scene import load

    return load(SCENES / "genus1.toml")


@pytest.fixture(scope="session")
def genus2():
    from mumford_cup.scene import load

    return load(SCENES / "genus2.toml")
