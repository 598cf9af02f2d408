import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from finmetric import validate_space  # noqa: E402
import oracles  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def metric_spaces(draw, min_n=1, max_n=6, values=None):
    n = draw(st.integers(min_n, max_n))
    if values is None:
        weight = st.builds(Fraction, st.integers(1, 9), st.integers(1, 3))
    else:
        weight = st.sampled_from([Fraction(v) for v in values])
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = draw(weight)
    return validate_space([f"x{i}" for i in range(n)], oracles.floyd(w))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES
