from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dmgsep.fixtures import load_fixture
from dmgsep.graph import Dmg

settings.register_profile("default", deadline=None, max_examples=80,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GREEK = ["alpha", "beta", "gamma", "delta", "epsilon"]


@st.composite
def dmgs(draw, min_n: int = 1, max_n: int = 5, bidirected: bool = True) -> Dmg:
    n = draw(st.integers(min_n, max_n))
    v = st.integers(0, n - 1)
    d = draw(st.sets(st.tuples(v, v), max_size=n * n))
    b = set()
    if bidirected:
        b = draw(st.sets(st.tuples(v, v).map(lambda p: (min(p), max(p))), max_size=n * n))
    return Dmg([f"v{i}" for i in range(n)], d, b)


def dgs(min_n: int = 1, max_n: int = 5):
    return dmgs(min_n, max_n, bidirected=False)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def fx():
    return load_fixture


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line; printed again in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
