"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from delsarte.fourier import point_profile

small_fractions = st.builds(
    Fraction, st.integers(min_value=-30, max_value=30), st.integers(min_value=1, max_value=9)
)
nonneg_fractions = st.builds(
    Fraction, st.integers(min_value=0, max_value=30), st.integers(min_value=1, max_value=9)
)


@st.composite
def profiles(draw, n=None, max_n=14, values=small_fractions):
    if n is None:
        n = draw(st.integers(min_value=1, max_value=max_n))
    return point_profile(n, draw(st.lists(values, min_size=n + 1, max_size=n + 1)))


@st.composite
def profile_pairs(draw, max_n=14, values=small_fractions):
    n = draw(st.integers(min_value=1, max_value=max_n))
    return draw(profiles(n=n, values=values)), draw(profiles(n=n, values=values))
