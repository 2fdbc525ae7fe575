import numpy as np
import pytest

from ncprob.models import VacuumModel


def rand_hermitian(rng, d, scale=1.0):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (a + a.conj().T) / 2


def rand_upper_half(rng, d=1, height=(0.8, 2.5)):
    """A random matrix (or scalar) with positive-definite imaginary part."""
    if d == 1:
        return complex(rng.uniform(-2, 2), rng.uniform(*height))
    h = rand_hermitian(rng, d)
    p = rand_hermitian(rng, d)
    return h + 1j * (p @ p.conj().T + rng.uniform(*height) * np.eye(d))


def rand_centered_local(rng, k=3, scale=1.0):
    """A self-adjoint k x k matrix with zero vacuum expectation."""
    x = rand_hermitian(rng, k, scale)
    x = x - np.eye(k) * x[0, 0]
    return x


def rand_inf_pair(rng, k=3, scale=0.6, min_var=None):
    """A pair (x, x') of centered self-adjoint locals with nonsmall E[x²]."""
    if min_var is None:
        min_var = 0.05 * scale ** 2
    while True:
        x = rand_centered_local(rng, k, scale)
        xp = rand_centered_local(rng, k, scale)
        if abs(VacuumModel(k).state(x @ x)) > min_var:
            return x, xp


@pytest.fixture
def rng():
    return np.random.default_rng(0)
