import random

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dworklab.ff import field_of_order
from dworklab.linalg import Mat

settings.register_profile("dworklab", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("dworklab")

SMALL_Q = (2, 3, 4, 5, 7, 8, 9, 16, 25, 27)


def random_mat(ctx, n, rng, invertible=True):
    while True:
        m = Mat(ctx, rng.integers(0, ctx.q, size=(n, n)))
        if not invertible or m.rank() == n:
            return m


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture(params=[2, 4, 8, 9, 5])
def ctx(request):
    return field_of_order(request.param)
