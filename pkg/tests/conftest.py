import numpy as np
import pytest
from hypothesis import strategies as st

from chm6.core import MonomialUnitary, apply_monomials


def random_monomial(rng, n=6):
    return MonomialUnitary(tuple(int(p) for p in rng.permutation(n)), tuple(np.exp(2j * np.pi * rng.uniform(size=n))))


def scramble(m, rng):
    """Random P m Q with monomial unitaries P, Q."""
    return apply_monomials(random_monomial(rng, m.n), m, random_monomial(rng, m.n))


def unit(rng):
    return complex(np.exp(2j * np.pi * rng.uniform()))


angles = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, exclude_max=True)
units = angles.map(lambda t: complex(np.exp(2j * np.pi * t)))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
