import numpy as np
import pytest

from qutrit_pptes.errors import ValidationError
from qutrit_pptes.linalg import (
    DEFAULT_TOL,
    Tolerances,
    haar_unitary,
    is_hermitian,
    is_psd,
    kernel_basis,
    kron,
    min_eigenvalue,
    numeric_rank,
    orthonormal_complement,
    partial_transpose,
    range_basis,
    vec_to_mat,
)


def ket(i, j):
    v = np.zeros(9, dtype=complex)
    v[3 * i + j] = 1.0
    return v


def test_tolerances_validation():
    with pytest.raises(ValidationError):
        Tolerances(rank_rel=0.0)
    with pytest.raises(ValidationError):
        Tolerances(rank_rel=1e-6, eq_rel=1e-8)
    t = Tolerances()
    assert t.rank_rel < t.eq_rel


def test_partial_transpose_bookkeeping():
    # |01><10| -> |11><00|
    rho = np.outer(ket(0, 1), ket(1, 0).conj())
    expected = np.outer(ket(1, 1), ket(0, 0).conj())
    assert np.abs(partial_transpose(rho) - expected).max() < 1e-14


def test_partial_transpose_involution(rng):
    m = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    rho = m + m.conj().T
    assert np.abs(partial_transpose(partial_transpose(rho)) - rho).max() < 1e-14


def test_partial_transpose_product_state(rng):
    e = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    rho = np.outer(kron(e, f), kron(e, f).conj())
    expected = np.outer(kron(e.conj(), f), kron(e.conj(), f).conj())
    assert np.abs(partial_transpose(rho) - expected).max() < 1e-12
    assert is_psd(partial_transpose(rho))


def test_partial_transpose_preserves_trace_and_norm(rng):
    m = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    rho = m + m.conj().T
    pt = partial_transpose(rho)
    assert abs(np.trace(pt) - np.trace(rho)) < 1e-12
    assert abs(np.linalg.norm(pt) - np.linalg.norm(rho)) < 1e-12


def test_numeric_rank_basics():
    assert numeric_rank(np.eye(9)) == 9
    assert kernel_basis(np.eye(9)).shape[0] == 0
    rows = np.eye(9)[:5]
    proj = rows.T @ rows
    assert numeric_rank(proj) == 5
    assert kernel_basis(proj).shape[0] == 4


def test_numeric_rank_unitary_invariance(rng):
    m = rng.standard_normal((9, 9))
    u, s, vh = np.linalg.svd(m)
    s[6:] = 0.0
    m = (u * s) @ vh
    for _ in range(5):
        w = haar_unitary(rng, 9)
        assert numeric_rank(w @ m @ w.conj().T) == 6


def test_kernel_and_range_orthogonal(rng):
    m = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    u, s, vh = np.linalg.svd(m)
    s[4:] = 0.0
    m = (u * s) @ vh
    k = kernel_basis(m)
    assert k.shape[0] == 5
    assert np.abs(m @ k.T).max() < 1e-12
    r = range_basis(m)
    assert r.shape[0] == 4
    # rank + kernel dim = 9
    assert numeric_rank(m) + k.shape[0] == 9


def test_orthonormal_complement_hermitian_inner_product(rng):
    rows = rng.standard_normal((5, 9)) + 1j * rng.standard_normal((5, 9))
    comp = orthonormal_complement(rows)
    assert comp.shape[0] == 4
    # <v, w> = 0 for all span vectors v and complement rows w
    assert np.abs(rows.conj() @ comp.T).max() < 1e-12
    gram = comp.conj() @ comp.T
    assert np.abs(gram - np.eye(4)).max() < 1e-12


def test_kron_and_vec_to_mat():
    e0 = np.array([1.0, 0, 0])
    e1 = np.array([0.0, 1, 0])
    m = vec_to_mat(kron(e0, e1))
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    assert np.abs(m - expected).max() == 0.0


def test_vec_to_mat_linearity_and_rank_one(rng):
    u = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    v = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    assert np.abs(vec_to_mat(u + v) - vec_to_mat(u) - vec_to_mat(v)).max() < 1e-14
    a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert numeric_rank(vec_to_mat(kron(a, b))) == 1
    assert np.abs(vec_to_mat(kron(a, b)) - np.outer(a, b)).max() < 1e-12


def test_is_psd_and_hermitian(rng):
    m = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    h = m @ m.conj().T
    assert is_hermitian(h)
    assert is_psd(h)
    w = np.linalg.eigvalsh(h)
    assert np.all(np.abs(w.imag) == 0.0)
    assert not is_psd(h - 2 * w.max() * np.eye(9))
    assert min_eigenvalue(h) >= -DEFAULT_TOL.psd_slack * w.max()
