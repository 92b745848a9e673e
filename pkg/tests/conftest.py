import pytest

from soliton_lab.model import ModelParams
from soliton_lab.profile import solve_profile

_CACHE: dict = {}


def cached_profile(n, alpha, t_max=200.0, tol=1e-10):
    """Session-wide profile cache; solves are the expensive part of the suite."""
    key = (n, alpha, t_max, tol)
    if key not in _CACHE:
        _CACHE[key] = solve_profile(ModelParams(n, alpha), t_max, tol)
    return _CACHE[key]


@pytest.fixture(scope="session")
def profile_of():
    return cached_profile
