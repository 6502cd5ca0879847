from __future__ import annotations

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from grammod import _match, _vf2_py  # noqa: E402

try:
    from grammod import _vf2
except ImportError:  # extension not built; only the fallback is exercised
    _vf2 = None

KERNELS = {"python": _vf2_py.search}
if _vf2 is not None:
    KERNELS["cython"] = _vf2.search

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow,
                                                 HealthCheck.function_scoped_fixture])
settings.load_profile("default")


@pytest.fixture(params=sorted(KERNELS))
def kernel(request):
    """A raw search kernel, one per available backend."""
    return KERNELS[request.param]


@pytest.fixture(params=sorted(KERNELS))
def backend(request, monkeypatch):
    """Route the whole library through one backend for the test's duration."""
    monkeypatch.setattr(_match, "_search", KERNELS[request.param])
    return request.param


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.summary_lines():
        terminalreporter.write_line(line)
