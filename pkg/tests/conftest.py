"""Shared fixtures and the acceptance-line reporter.

Tests in test_acceptance.py register one verdict per numbered acceptance
check through the ``acceptance`` fixture; a terminal-summary hook prints
them as a block at the end of the run so the lines survive output capture.
"""

from __future__ import annotations

import numpy as np
import pytest

_LINES: dict[int, str] = {}


class AcceptanceRecorder:
    def record(self, number: int, ok: bool, detail: str = "") -> None:
        verdict = "PASS" if ok else "FAIL"
        line = f"ACCEPTANCE {number} {verdict}"
        if detail:
            line += f" — {detail}"
        _LINES[number] = line
        print(line)


@pytest.fixture(scope="session")
def acceptance() -> AcceptanceRecorder:
    return AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
