import math

import numpy as np
import pytest

from proxcor import make_record, sample_tsphere, standardize, TsphereSpec


@pytest.fixture(scope="session")
def worked_example():
    """The three-subject configuration used across the golden tests:
    u at 30 degrees from both detector vectors, v at 105 degrees from u."""
    return {
        "u": standardize([0.816, -0.408, -0.408]),
        "v": standardize([-0.211, -0.577, 0.788]),
        "u_hat": standardize([0.707, 0.0, -0.707]),
        "u_hat_prime": standardize([0.707, -0.707, 0.0]),
        "q": math.cos(math.radians(30)),
        "r": math.cos(math.radians(105)),
    }


@pytest.fixture(scope="session")
def anchor20():
    return standardize(np.sin(np.arange(20) * 1.7) + 0.1 * np.arange(20))


def uniform_records(anchor, q, m, seed, tag="uniform"):
    batch = sample_tsphere(TsphereSpec(anchor=anchor, q=q), m, seed)
    return [make_record(f"{tag}-{i}", tag, batch[i], anchor) for i in range(m)]
