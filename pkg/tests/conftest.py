import numpy as np
import pytest


def disk_points(rng, n):
    return np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def naive_eval(coeffs, z):
    return sum(c * z ** k for k, c in enumerate(coeffs))


def naive_expand(rs):
    """Coefficients of prod (z - r), ascending, by repeated convolution."""
    out = [1 + 0j]
    for r in rs:
        nxt = [0j] * (len(out) + 1)
        for k, c in enumerate(out):
            nxt[k] -= r * c
            nxt[k + 1] += c
        out = nxt
    return out


def match_sets(a, b):
    """Max distance under greedy nearest matching of two equal-size point sets."""
    b = list(b)
    worst = 0.0
    for z in a:
        j = min(range(len(b)), key=lambda j: abs(b[j] - z))
        worst = max(worst, abs(b.pop(j) - z))
    return worst


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
