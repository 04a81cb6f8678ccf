import numpy as np
import pytest

from fermideco import make_state

SQ = np.sqrt

# Family-I states with constant concurrence 0.7 and 0.89.
FAMILY_I_A = (SQ(1 / 10), 0, SQ(8 / 10), 0, 0, SQ(1 / 10))
FAMILY_I_B = (0, 0, SQ(9 / 10), SQ(1 / 25), SQ(1 / 20), SQ(1 / 100))

# Persistent-but-not-invariant states: (a1, a2, a3) with a4 = a2.
PERSISTENT_TRIPLES = [
    (1 / SQ(10), 1 / SQ(5), 1 / SQ(2)),
    (SQ(3 / 10), SQ(3 / 20), SQ(2 / 5)),
    (1 / SQ(2), 1 / SQ(10), SQ(3 / 10)),
    (SQ(7 / 10), 1 / SQ(20), 1 / SQ(5)),
]


def persistent_state(triple):
    a1, a2, a3 = triple
    return make_state((a1, a2, a3, a2, 0, 0))


def random_complex_state(rng):
    v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    return make_state(v)


def random_mixed(rng, rank=None):
    rank = rank or rng.integers(1, 7)
    g = rng.standard_normal((6, rank)) + 1j * rng.standard_normal((6, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Pass/fail lines of the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
