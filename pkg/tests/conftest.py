from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


small_fractions = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=7),
)
nonzero_fractions = small_fractions.filter(lambda f: f != 0)


@st.composite
def rational_lower(draw, size, invertible=True):
    """Random lower-triangular object array of Fractions."""
    M = np.empty((size, size), dtype=object)
    M.fill(Fraction(0))
    for i in range(size):
        for j in range(i + 1):
            if i == j and invertible:
                M[i, j] = draw(nonzero_fractions)
            else:
                M[i, j] = draw(small_fractions)
    return M


def random_rational_lower(rng, size, invertible=True):
    """Same as ``rational_lower`` but driven by a numpy Generator."""
    M = np.empty((size, size), dtype=object)
    M.fill(Fraction(0))
    for i in range(size):
        for j in range(i + 1):
            num = int(rng.integers(-9, 10))
            if i == j and invertible and num == 0:
                num = 1
            M[i, j] = Fraction(num, int(rng.integers(1, 8)))
    return M


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
