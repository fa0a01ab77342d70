import numpy as np
import pytest
from hypothesis import strategies as st

from fcalattice import FormalContext

ACCEPTANCE_LINES: list[str] = []


def diagonal(n):
    return FormalContext.from_array(np.eye(n, dtype=bool))


def contranominal(n):
    return FormalContext.from_array(~np.eye(n, dtype=bool))


def full(g, m):
    return FormalContext.from_array(np.ones((g, m), dtype=bool))


def chain():
    return FormalContext.from_incidence(
        ["g1", "g2", "g3"],
        ["m1", "m2", "m3"],
        [("g1", "m1"), ("g1", "m2"), ("g1", "m3"), ("g2", "m2"), ("g2", "m3"), ("g3", "m3")],
    )


def random_ctx(rng, n_obj, n_att, density):
    return FormalContext.from_array(rng.random((n_obj, n_att)) < density)


@st.composite
def contexts(draw, max_objects=8, max_attributes=8):
    n_obj = draw(st.integers(0, max_objects))
    n_att = draw(st.integers(0, max_attributes))
    rows = draw(st.lists(st.integers(0, (1 << n_att) - 1), min_size=n_obj, max_size=n_obj))
    return FormalContext([f"g{i + 1}" for i in range(n_obj)], [f"m{j + 1}" for j in range(n_att)], rows)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
