from __future__ import annotations

import numpy as np
import pytest

from attainable.io import load_fixture
from attainable.network import ReactionNetwork

TRI_A = np.array([[-9.0, 6.0, 3.0], [1.0, -2.0, 1.0], [3.0, 6.0, -9.0]])
TRI_X0 = np.array([2.0, 3.0, 5.0])
TRI_STEADY = np.array([1.25, 7.5, 1.25])


def triangle_exact(t):
    """Hand-written solution of the triangle system from (2, 3, 5)."""
    t = np.asarray(t, dtype=float)[..., None]
    e8, e12 = np.exp(-8 * t), np.exp(-12 * t)
    return np.concatenate(
        [9 / 4 * e8 - 3 / 2 * e12 + 5 / 4, -9 / 2 * e8 + 15 / 2, 9 / 4 * e8 + 3 / 2 * e12 + 5 / 4], axis=-1
    )


@pytest.fixture(scope="session")
def branching():
    return load_fixture("branching")


@pytest.fixture(scope="session")
def triangle():
    return load_fixture("triangle")


@pytest.fixture(scope="session")
def quad_pair():
    return load_fixture("quad_pair")


@pytest.fixture(scope="session")
def pinned_quad():
    return load_fixture("pinned_quad")


@pytest.fixture(scope="session")
def cubic_triple():
    return load_fixture("cubic_triple")


def two_species_exchange(k12=1.0, k21=1.0) -> ReactionNetwork:
    return ReactionNetwork.build(2, [[1, 0], [0, 1]], [(0, 1, k12), (1, 0, k21)])


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
