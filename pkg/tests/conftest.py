import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

REPO = Path(__file__).resolve().parent.parent
DATA = REPO / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def emotions_manifest():
    path = DATA / "emotions" / "emotions.manifest"
    if not path.exists():
        pytest.skip("emotions data missing; run scripts/fetch_datasets.py")
    return path


@pytest.fixture(scope="session")
def ecoli_manifest():
    path = DATA / "ecoli" / "ecoli.manifest"
    if not path.exists():
        pytest.skip("ecoli data missing; run scripts/fetch_datasets.py")
    return path
