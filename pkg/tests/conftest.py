from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from ocpd.ocel import parse_ocel  # noqa: E402

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def bicycle_bytes() -> bytes:
    return (DATA / "bicycle.ocel.json").read_bytes()


@pytest.fixture
def bicycle(bicycle_bytes):
    return parse_ocel(bicycle_bytes)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
