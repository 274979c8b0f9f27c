import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_stable_ct_poles(rng, order):
    """Separated LHP poles, real or conjugate pairs, as a flat list."""
    poles = []
    while len(poles) < order:
        if order - len(poles) >= 2 and rng.random() < 0.5:
            p = complex(-rng.uniform(0.2, 3.0), rng.uniform(0.3, 3.0))
            cand = [p, p.conjugate()]
        else:
            cand = [complex(-rng.uniform(0.2, 3.0), 0.0)]
        if all(abs(c - q) > 0.2 for c in cand for q in poles):
            poles += cand
    return poles


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
