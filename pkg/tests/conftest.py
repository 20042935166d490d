from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("default")


def int_matrix(rng: np.random.Generator, m: int, n: int, lo: int = -9, hi: int = 9,
               rank: int | None = None) -> np.ndarray:
    """Object-dtype integer matrix, optionally of prescribed (generic) rank."""
    if rank is None:
        vals = rng.integers(lo, hi + 1, size=(m, n))
    else:
        vals = rng.integers(lo, hi + 1, size=(m, rank)) @ rng.integers(lo, hi + 1, size=(rank, n))
    out = np.empty((m, n), dtype=object)
    for idx, v in np.ndenumerate(vals):
        out[idx] = int(v)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# acceptance criteria report one line each at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
