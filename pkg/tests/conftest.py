import numpy as np
import pytest

from qutrit_pptes.linalg import random_invertible
from qutrit_pptes.segre import ProductVector


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def canonical_quintuple(b, y):
    """Quintuple (|00>, |11>, |22>, all-ones, |b,y>) used throughout the tests."""
    e = np.eye(3)
    ones = np.ones(3)
    return [
        ProductVector(e[0], e[0]),
        ProductVector(e[1], e[1]),
        ProductVector(e[2], e[2]),
        ProductVector(ones, ones),
        ProductVector(np.asarray(b, dtype=complex), np.asarray(y, dtype=complex)),
    ]


def random_angles(rng, margin=0.15):
    from qutrit_pptes.upb import UpbAngles

    g = rng.uniform(margin, np.pi / 2 - margin, 4)
    ph = rng.uniform(-np.pi, np.pi, 2)
    return UpbAngles(g[0], g[1], ph[0], g[2], g[3], ph[1])


def random_pptes(rng, margin=0.2, max_cond=50.0):
    """A random rank-4 PPT entangled state: ILO-conjugated UPB projector."""
    from qutrit_pptes.pptes import projector_state
    from qutrit_pptes.upb import upb_from_angles

    pi = projector_state(upb_from_angles(random_angles(rng, margin)))
    n = np.kron(random_invertible(rng, max_cond=max_cond), random_invertible(rng, max_cond=max_cond))
    rho = n @ pi @ n.conj().T
    return rho / rho.trace().real


def random_canonical_pptes(rng, lo=0.5, hi=2.0):
    """A trace-1 member of the transpose-invariant block family."""
    from qutrit_pptes.pptes import CanonicalParams, canonical_blocks, state_from_blocks

    a = rng.uniform(lo, hi) * rng.choice([-1.0, 1.0])
    b, c, d = rng.uniform(lo, hi, 3)
    rho = state_from_blocks(canonical_blocks(CanonicalParams(a, b, c, d)))
    return rho / rho.trace().real
