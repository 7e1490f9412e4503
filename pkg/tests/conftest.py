import os
import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=15)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def fixtures_dir():
    if not (FIXTURES / "octagon_sp4.json").exists():
        import subprocess
        import sys

        script = FIXTURES.parent / "scripts" / "make_fixtures.py"
        subprocess.run([sys.executable, str(script), str(FIXTURES)], check=True, capture_output=True)
    return FIXTURES


@pytest.fixture(scope="session")
def octagon_rep():
    from torsionlab.surfcx import quad_fixture

    return quad_fixture(2, "sp", 2)


@pytest.fixture(scope="session")
def acceptance():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
