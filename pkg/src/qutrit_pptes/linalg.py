"""Dense complex linear algebra for the 3x3 system.

Vectors on one side live in C^3, joint states in C^9 with the row-major
index convention |ij> <-> 3*i + j, so a product ket |x,y> corresponds to
the rank-1 matrix x y^T via :func:`vec_to_mat`.  The partial transpose
acts on the first (A) factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "kron",
    "vec_to_mat",
    "mat_to_vec",
    "partial_transpose",
    "is_hermitian",
    "is_psd",
    "min_eigenvalue",
    "numeric_rank",
    "kernel_basis",
    "range_basis",
    "orthonormal_complement",
    "projector_onto",
    "haar_unitary",
    "haar_vector",
    "random_invertible",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy shared by the whole package.

    rank_rel   relative singular-value cutoff for rank decisions
    eq_rel     relative tolerance for equality / projective-coincidence tests
    psd_slack  relative slack below zero allowed for PSD eigenvalues
    """

    rank_rel: float = 1e-9
    eq_rel: float = 1e-8
    psd_slack: float = 1e-10

    def __post_init__(self) -> None:
        if not (self.rank_rel > 0 and self.eq_rel > 0 and self.psd_slack > 0):
            raise ValidationError("tolerances must be strictly positive")
        if not self.rank_rel < self.eq_rel:
            raise ValidationError("rank_rel must be smaller than eq_rel")


DEFAULT_TOL = Tolerances()


def _as_complex(x, shape=None) -> np.ndarray:
    arr = np.asarray(x, dtype=complex)
    if shape is not None and arr.shape != shape:
        raise ValidationError(f"expected array of shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("array contains non-finite entries")
    return arr


def kron(a, b) -> np.ndarray:
    """Product ket |a,b> as a 9-vector, entry (i,j) at position 3*i+j."""
    a = _as_complex(a, (3,))
    b = _as_complex(b, (3,))
    return np.kron(a, b)


def vec_to_mat(v) -> np.ndarray:
    """9-vector -> 3x3 matrix [v_{3i+j}]; inverse of row-major flattening."""
    return _as_complex(v, (9,)).reshape(3, 3)


def mat_to_vec(m) -> np.ndarray:
    return _as_complex(m, (3, 3)).reshape(9)


def partial_transpose(rho) -> np.ndarray:
    """Transpose the A-side indices of a 9x9 operator."""
    rho = _as_complex(rho, (9, 9))
    r = rho.reshape(3, 3, 3, 3)
    return r.transpose(2, 1, 0, 3).reshape(9, 9)


def is_hermitian(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    m = _as_complex(m)
    scale = np.linalg.norm(m)
    if scale == 0.0:
        return True
    return bool(np.abs(m - m.conj().T).max() <= tol.eq_rel * scale)


def min_eigenvalue(m) -> float:
    m = _as_complex(m)
    return float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())


def is_psd(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Hermitian PSD check: min eigenvalue >= -psd_slack * ||m||."""
    m = _as_complex(m)
    if not is_hermitian(m, tol):
        return False
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    scale = max(abs(w[0]), abs(w[-1]))
    if scale == 0.0:
        return True
    return bool(w[0] >= -tol.psd_slack * scale)


def numeric_rank(m, tol: Tolerances = DEFAULT_TOL) -> int:
    m = _as_complex(m)
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


def kernel_basis(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the (right) null space, one row per basis vector."""
    m = _as_complex(m)
    _, s, vh = np.linalg.svd(m)
    if s.size and s[0] > 0.0:
        r = int(np.count_nonzero(s > tol.rank_rel * s[0]))
    else:
        r = 0
    return vh[r:].conj()


def range_basis(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column space, one row per basis vector."""
    m = _as_complex(m)
    u, s, _ = np.linalg.svd(m)
    if s.size and s[0] > 0.0:
        r = int(np.count_nonzero(s > tol.rank_rel * s[0]))
    else:
        r = 0
    return u[:, :r].T


def orthonormal_complement(rows, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of the orthogonal complement of the row span.

    Complement w.r.t. the Hermitian inner product: every returned row w
    satisfies <v, w> = 0 for all v in the row span (so conj(rows) @ w = 0).
    """
    rows = np.atleast_2d(_as_complex(rows))
    _, s, vh = np.linalg.svd(rows)
    r = int(np.count_nonzero(s > tol.rank_rel * s[0])) if s.size and s[0] > 0 else 0
    return vh[r:]


def projector_onto(rows) -> np.ndarray:
    """Orthogonal projector onto the row span (rows need not be orthonormal)."""
    rows = np.atleast_2d(_as_complex(rows))
    q = orthonormalize_rows(rows)
    return q.T @ q.conj()


def orthonormalize_rows(rows, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    rows = np.atleast_2d(_as_complex(rows))
    u, s, vh = np.linalg.svd(rows, full_matrices=False)
    r = int(np.count_nonzero(s > tol.rank_rel * s[0])) if s.size and s[0] > 0 else 0
    return vh[:r]


def haar_unitary(rng: np.random.Generator, n: int = 3) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_vector(rng: np.random.Generator, n: int = 3) -> np.ndarray:
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def random_invertible(rng: np.random.Generator, n: int = 3, max_cond: float = 50.0) -> np.ndarray:
    """Random invertible matrix with bounded condition number (keeps tests well-posed)."""
    while True:
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] > 0 and s[0] / s[-1] <= max_cond:
            return m
