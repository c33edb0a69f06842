import pathlib

import pytest

from voinet.model import safety_config

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def configs_dir():
    return REPO_ROOT / "configs"


@pytest.fixture
def safety():
    return safety_config()
