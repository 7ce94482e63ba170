import numpy as np
import pytest

from ratematch.quadforms import DemandProfile, QuadFormSet


def make_problem(n_t, n_users, rng, sigma2_over_p=0.05):
    """Random synthetic instance; steering rows scaled to ||a||^2 = n_t like
    a unit-modulus array response."""
    steering = rng.standard_normal((n_users, n_t)) + 1j * rng.standard_normal(
        (n_users, n_t))
    steering *= np.sqrt(n_t) / np.linalg.norm(steering, axis=1, keepdims=True)
    gammas = rng.uniform(0.1, 0.5, n_users)
    q = QuadFormSet(steering, gammas, sigma2_over_p)
    demands = DemandProfile.with_default_weight(
        rng.uniform(0.3, 2.0, n_users), rng.uniform(0.5, 1.5))
    return q, demands


def random_state(q, rng):
    dim = q.n_streams * q.n_t
    f = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    f /= np.linalg.norm(f)
    v = rng.uniform(0.2, 1.0, q.n_users + 1)
    v /= np.linalg.norm(v)
    return f, v


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
