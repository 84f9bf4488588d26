"""Entanglement witnesses for rank-4 PPT entangled states.

The witness of a state sigma is W = P - eps I, where P projects onto
ker sigma and eps is the smallest overlap of the kernel with a product
state.  Because no product state lies in the orthogonal complement of
the kernel (the range of sigma), eps is strictly positive; every
separable state then has tr(W rho) >= 0 while tr(W sigma) = -eps < 0.

The infimum is computed by an alternating eigenvector descent: for a
fixed A-side factor the optimal B-side factor is the bottom eigenvector
of a 3x3 compression of P, and vice versa, so each half-step lowers the
objective exactly; many random restarts guard against the landscape's
local minima.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWitnessError, ValidationError
from .linalg import DEFAULT_TOL, Tolerances, kernel_basis, numeric_rank
from .segre import ProductVector

__all__ = ["Witness", "epsilon", "build_witness", "witness_value"]


@dataclass(frozen=True)
class Witness:
    """Witness data: kernel projector, offset, and the attaining product state."""

    p: np.ndarray
    epsilon: float
    certificate: ProductVector

    @property
    def matrix(self) -> np.ndarray:
        return self.p - self.epsilon * np.eye(9)


def _check_projector(p: np.ndarray, tol: Tolerances) -> None:
    if p.shape != (9, 9):
        raise ValidationError("expected a 9x9 projector")
    scale = max(float(np.abs(p).max()), 1.0)
    if np.abs(p @ p - p).max() > 1e3 * tol.eq_rel * scale:
        raise ValidationError("matrix is not a projector")
    if np.abs(p - p.conj().T).max() > 1e3 * tol.eq_rel * scale:
        raise ValidationError("projector is not Hermitian")


def epsilon(
    p,
    restarts: int = 200,
    seed: int = 0,
    max_iters: int = 400,
    stall: float = 1e-12,
    tol: Tolerances = DEFAULT_TOL,
    degenerate_tol: float = 1e-9,
) -> tuple[float, ProductVector]:
    """Minimum of <e,f|P|e,f> over product states, with the attaining state.

    Batched alternating minimisation from Haar-random product starts;
    each half-step is an exact bottom-eigenvector update, so the
    objective is non-increasing.  A value indistinguishable from zero
    means a product state sits in the complement of the projector's
    range, which makes the witness useless and raises
    :class:`DegenerateWitnessError`.
    """
    p = np.asarray(p, dtype=complex)
    _check_projector(p, tol)
    if restarts <= 0:
        raise ValidationError("restarts must be positive")
    rng = np.random.default_rng(seed)
    p4 = p.reshape(3, 3, 3, 3)

    e = rng.standard_normal((restarts, 3)) + 1j * rng.standard_normal((restarts, 3))
    e /= np.linalg.norm(e, axis=1)[:, None]
    prev = np.full(restarts, np.inf)
    f = np.zeros_like(e)
    for _ in range(max_iters):
        t_e = np.einsum("ri,ijkl,rk->rjl", e.conj(), p4, e)
        w, v = np.linalg.eigh((t_e + t_e.conj().transpose(0, 2, 1)) / 2)
        f = v[:, :, 0]
        s_f = np.einsum("rj,ijkl,rl->rik", f.conj(), p4, f)
        w, v = np.linalg.eigh((s_f + s_f.conj().transpose(0, 2, 1)) / 2)
        e = v[:, :, 0]
        val = w[:, 0]
        if np.abs(prev - val).max() < stall:
            prev = val
            break
        prev = val
    best = int(np.argmin(prev))
    value = float(prev[best])
    if value < -1e3 * tol.psd_slack:
        raise ValidationError("projector is not positive semidefinite on product states")
    value = max(value, 0.0)
    if value <= degenerate_tol:
        raise DegenerateWitnessError(
            "epsilon is numerically zero: a product state lies in the complement"
        )
    return value, ProductVector(e[best], f[best])


def build_witness(
    sigma,
    restarts: int = 200,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> Witness:
    """Witness of a rank-4 state: kernel projector minus the product-state floor."""
    sigma = np.asarray(sigma, dtype=complex)
    if numeric_rank(sigma, tol) != 4:
        raise ValidationError("witness construction expects a rank-4 state")
    rows = kernel_basis(sigma, tol)
    p = rows.T @ rows.conj()
    value, cert = epsilon(p, restarts=restarts, seed=seed, tol=tol)
    return Witness(p=p, epsilon=value, certificate=cert)


def witness_value(w: Witness, rho) -> float:
    """tr(W rho) for a Hermitian state rho."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (9, 9):
        raise ValidationError("expected a 9x9 state")
    return float(np.trace(w.matrix @ rho).real)
