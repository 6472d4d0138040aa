import random

import pytest
from hypothesis import strategies as st

from polab.randgen import random_poset


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def seeded_posets(max_size=5):
    """Small random posets driven by a drawn seed, so hypothesis can
    shrink over the generator input."""
    return st.builds(
        lambda seed, size: random_poset(random.Random(seed), size),
        st.integers(min_value=0, max_value=2**32 - 1),
        st.integers(min_value=0, max_value=max_size),
    )
