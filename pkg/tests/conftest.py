import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from diffpowers import _backend, _kernels_py  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=["python", "cython"])
def backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    if request.param == "cython":
        try:
            from diffpowers import _ckernels as mod
        except ImportError:
            pytest.skip("compiled kernels not built")
    else:
        mod = _kernels_py
    for name in ("mul_terms", "reduce_terms", "hnf_rows"):
        monkeypatch.setattr(_backend, name, getattr(mod, name))
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
