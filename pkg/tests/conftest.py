import os

import pytest
from hypothesis import settings

from wgqed import _backend

settings.register_profile("default", deadline=None, max_examples=150)
settings.register_profile("thorough", deadline=None, max_examples=2000)
settings.load_profile(os.environ.get("WGQED_HYPOTHESIS", "default"))

_ACCEPTANCE = []


@pytest.fixture(params=sorted(_backend.AVAILABLE))
def backend(request, monkeypatch):
    """Run the test once per importable kernel implementation."""
    monkeypatch.setattr(_backend, "kernels", _backend.AVAILABLE[request.param])
    return request.param


@pytest.fixture
def criterion():
    def report(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
