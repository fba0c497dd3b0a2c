import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# acceptance results, filled in by tests/test_acceptance.py and echoed in the terminal summary
ACCEPTANCE = {}


def record_acceptance(key, status, detail=""):
    ACCEPTANCE[key] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{status}] criterion {key}: {detail}")


@pytest.fixture(scope="session")
def synthetic_dir(tmp_path_factory):
    from ncaa_forecast.synthetic import generate_dataset

    root = tmp_path_factory.mktemp("synthetic")
    generate_dataset(root / "data", seasons=range(2019, 2026), n_teams=24, games_per_team=16,
                     n_tourney=16, seed=3)
    return root / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
