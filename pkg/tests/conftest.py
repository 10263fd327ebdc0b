import cmath

import numpy as np
import pytest
from hypothesis import strategies as st


def disk_points(max_radius=0.95):
    """Hypothesis strategy for complex numbers with modulus <= max_radius."""
    return st.builds(
        lambda r, t: r * cmath.exp(1j * t),
        st.floats(0.0, max_radius),
        st.floats(0.0, 2 * np.pi),
    )


def random_disk(rng, n, max_radius=1.0):
    """n points uniform by area in the disk of radius max_radius."""
    r = max_radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)
