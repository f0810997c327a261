import time
from pathlib import Path

import numpy as np
import pytest

from mpnormal import Block, Interval

GOLDEN = Path(__file__).resolve().parent.parent / "instances"


def random_unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_block(rng, dim=None, a=None, length=None, alpha_max=10.0, degenerate=True):
    """Valid block with commuting (A, W) built by conjugating random diagonals."""
    dim = dim or int(rng.integers(1, 7))
    alphas = 1.0 + (alpha_max - 1.0) * rng.random(dim)
    if degenerate and dim > 1 and rng.random() < 0.5:
        alphas[1] = alphas[0]
    thetas = rng.uniform(-np.pi, np.pi, dim)
    Q = random_unitary(rng, dim)
    A = Q @ np.diag(alphas) @ Q.conj().T
    A = 0.5 * (A + A.conj().T)
    W = Q @ np.diag(np.exp(1j * thetas)) @ Q.conj().T
    a = float(rng.uniform(-5, 5)) if a is None else a
    length = float(rng.uniform(0.1, 5.0)) if length is None else length
    return Block(Interval(a, a + length), A, W), np.sort(alphas), thetas


def scalar_block(alpha=1.0, omega=1.0, a=0.0, b=1.0):
    return Block(Interval(a, b), [[alpha]], [[omega]])


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def trivial():
    return scalar_block()


@pytest.fixture
def golden():
    return GOLDEN


# acceptance lines keyed by criterion number, filled by test_acceptance.py
ACCEPTANCE = {}
_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
    terminalreporter.write_line(f"suite wall time {time.perf_counter() - _START:.1f} s (criterion 10 budget: 120 s)")
