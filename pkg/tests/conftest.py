import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def positive_samples(rng, count, n_low, n_high, spread=1.0):
    """Random log-normal-ish samples with random sizes in [n_low, n_high]."""
    out = []
    for _ in range(count):
        n = int(rng.integers(n_low, n_high + 1))
        out.append(np.exp(rng.normal(rng.normal(0, 0.5), spread, n)))
    return out


_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the acceptance summary."""
    def _report(name, ok, detail=""):
        _ACCEPTANCE.append((name, bool(ok), detail))
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
