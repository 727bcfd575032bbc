from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hjrelax import PLFunction
from hjrelax.corpus import random_pair

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


ABS = PLFunction.abs()
W = PLFunction([(-1, 0), (0, 1), (1, 0)], -2, 2)
HALF = Fraction(1, 2)


@pytest.fixture
def abs_h():
    return ABS


@pytest.fixture
def w_h():
    return W


rationals = st.fractions(min_value=-8, max_value=8, max_denominator=24)


@st.composite
def pl_functions(draw, min_points=1, max_points=6):
    n = draw(st.integers(min_points, max_points))
    xs = sorted(draw(st.sets(rationals, min_size=n, max_size=n)))
    ys = [draw(rationals) for _ in xs]
    return PLFunction(zip(xs, ys), draw(rationals), draw(rationals))


@st.composite
def corpus_pairs(draw):
    """Pairs from the seeded generator, so shrinking stays on valid inputs."""
    return random_pair(draw(st.integers(0, 2**16)), draw(st.integers(0, 500)))
