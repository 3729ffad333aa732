from __future__ import annotations

import numpy as np
import pytest

from qlgdirac.numerics import SpinorField

#: Acceptance lines collected by tests/test_acceptance.py and echoed in the
#: terminal summary, so they appear even when output capture is on.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_field(rng: np.random.Generator, n_sites: int) -> SpinorField:
    """Random normalized spinor field."""
    sites = rng.normal(size=(n_sites, 2)) + 1j * rng.normal(size=(n_sites, 2))
    return SpinorField(sites).normalized()


def pytest_terminal_summary(terminalreporter, exitstatus, config):  # noqa: ARG001
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
