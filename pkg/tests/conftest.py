import numpy as np
import pytest

from gibbsqfi import random_hermitian


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_instances(n, dims=range(2, 9), betas=(0.1, 1.0, 10.0), seed=7):
    """Deterministic stream of (H, Hprime, beta) test instances."""
    gen = np.random.default_rng(seed)
    dims, betas = list(dims), list(betas)
    for k in range(n):
        D = dims[k % len(dims)]
        beta = betas[(k // len(dims)) % len(betas)]
        yield random_hermitian(D, gen), random_hermitian(D, gen), beta


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# acceptance verdicts, echoed in the terminal summary so they show without -s
VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
