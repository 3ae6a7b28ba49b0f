from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def small_sweep():
    return DATA / "sweep_small.csv", DATA / "sweep_small.json"


@pytest.fixture(scope="session")
def q31_sweep():
    return DATA / "sweep_r3_q31.csv", DATA / "sweep_r3_q31.json"


@pytest.fixture(scope="session")
def bounds_report():
    return DATA / "pg23_cap_counts.json"
