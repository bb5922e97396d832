import numpy as np
import pytest

from flatstat import kernels


@pytest.fixture(params=["python", "compiled"])
def each_backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    if request.param == "compiled" and kernels.compiled_backend is None:
        pytest.skip("compiled kernels not built")
    monkeypatch.setattr(kernels, "_impl", kernels.backend(request.param))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
