import math

import numpy as np
import pytest

from qwalk2d import CoinParams, CoinState2, grover_equivalent_init

SQ2 = math.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def symmetric():
    return CoinState2.symmetric()


@pytest.fixture
def nonlocalized():
    return grover_equivalent_init(CoinParams(math.pi / 4), 0)


def dense_shift_x(L):
    """|i-1, j, 0><i, j, 0| + |i+1, j, 1><i, j, 1| as a dense matrix on [-L, L]^2 x {0, 1}."""
    n = 2 * L + 1
    dim = n * n * 2
    S = np.zeros((dim, dim))
    idx = lambda x, y, c: ((x + L) * n + (y + L)) * 2 + c
    for x in range(-L, L + 1):
        for y in range(-L, L + 1):
            if x - 1 >= -L:
                S[idx(x - 1, y, 0), idx(x, y, 0)] = 1
            if x + 1 <= L:
                S[idx(x + 1, y, 1), idx(x, y, 1)] = 1
    return S


def dense_shift_y(L):
    n = 2 * L + 1
    dim = n * n * 2
    S = np.zeros((dim, dim))
    idx = lambda x, y, c: ((x + L) * n + (y + L)) * 2 + c
    for x in range(-L, L + 1):
        for y in range(-L, L + 1):
            if y - 1 >= -L:
                S[idx(x, y - 1, 0), idx(x, y, 0)] = 1
            if y + 1 <= L:
                S[idx(x, y + 1, 1), idx(x, y, 1)] = 1
    return S


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one acceptance line; the summary is printed at the end of the run."""

    def record(criterion, ok, detail):
        _VERDICTS.append((criterion, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(_VERDICTS):
        terminalreporter.write_line(f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
