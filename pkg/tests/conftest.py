import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from reified.disc import BaseField, random_point, random_poly
from reified.values import Magnitude, Value

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


FIELDS = [BaseField.padic(2), BaseField.padic(3), BaseField.padic(2, "Z"), BaseField.trivial()]


@pytest.fixture
def K2():
    return BaseField.padic(2)


@pytest.fixture
def rng():
    return random.Random(20261015)


def mags(p: int = 2):
    """Magnitudes c * p^e with small c prime to p."""
    cs = [c for c in range(1, 12) if c % p]
    return st.builds(
        lambda a, b, e: Magnitude(Fraction(a, b), e, p),
        st.sampled_from(cs), st.sampled_from(cs),
        st.fractions(min_value=-4, max_value=4, max_denominator=6),
    )


def values(p: int = 2, allow_zero: bool = True):
    nonzero = st.builds(Value, st.integers(-2, 2), mags(p), st.integers(-3, 3))
    if allow_zero:
        return st.one_of(st.just(Value()), nonzero)
    return nonzero


def field_seeds():
    return st.tuples(st.sampled_from(FIELDS), st.integers(0, 10**9))


def sample_point(K, seed):
    return random_point(K, random.Random(seed))


def sample_poly(K, seed, max_degree=4):
    return random_poly(random.Random(seed), max_degree, K.p)
