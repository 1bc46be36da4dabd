import functools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from focalis.curvespec import builtin

settings.register_profile(
    "focalis", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("focalis")


@functools.lru_cache(maxsize=None)
def fixture_curve(name):
    """Built-in curves are immutable, so one instance per name is shared."""
    return builtin(name)


GOOD_FIXTURES = (
    "unit_circle",
    "ellipse_2_1",
    "helix",
    "twisted_cubic",
    "sphere_curve_r3",
    "sphere_curve_r4",
    "trefoil_like",
    "random_poly_r4(0)",
    "random_poly_r4(1)",
    "random_poly_r4(2)",
    "random_closed_r3(0)",
    "random_closed_r3(1)",
    "random_closed_r3(2)",
)


def random_rotation(dim, seed):
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@pytest.fixture
def curve():
    return fixture_curve
