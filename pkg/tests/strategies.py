"""Hypothesis strategies shared by the property tests."""

import math
import random

from hypothesis import strategies as st

from twentyv.weights import WeightParams


@st.composite
def disorder_params(draw, margin=0.02):
    """A parameter triple strictly inside the disordered region."""
    seed = draw(st.integers(0, 2**32 - 1))
    return WeightParams.random_disorder(random.Random(seed), margin)


small_ints = st.integers(min_value=-6, max_value=6)
positive_fracs = st.fractions(min_value=1, max_value=9, max_denominator=7)


def angle(lo, hi):
    return st.floats(lo, hi, allow_nan=False, allow_infinity=False)


PI = math.pi
