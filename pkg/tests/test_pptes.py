import warnings

import numpy as np
import pytest

from conftest import random_pptes
from qutrit_pptes.errors import (
    ReconstructionError,
    SextetPositionError,
    ValidationError,
)
from qutrit_pptes.invariants import invariants
from qutrit_pptes.linalg import (
    DEFAULT_TOL,
    is_psd,
    kron,
    min_eigenvalue,
    numeric_rank,
    partial_transpose,
    random_invertible,
    range_basis,
)
from qutrit_pptes.pptes import (
    BlockState,
    CanonicalParams,
    canonical_blocks,
    cubic_roots,
    is_pptes_rank4,
    is_symmetric_range,
    kernel_products,
    kernel_sextet,
    projector_state,
    pt_rank,
    pyramid_state,
    reconstruct,
    state_from_blocks,
    tiles_realization_sextet,
    tiles_state,
)
from qutrit_pptes.segre import ProductVector, general_position
from qutrit_pptes.subspace import MultiplicityWarning
from qutrit_pptes.upb import pyramid_sextet, symbol, tiles_quintuple


def random_params(rng):
    a = rng.uniform(0.3, 2.5) * rng.choice([-1.0, 1.0])
    b, c, d = rng.uniform(0.3, 2.5, 3)
    return CanonicalParams(a, b, c, d)


def test_param_validation():
    with pytest.raises(ValidationError):
        CanonicalParams(0.0, 1, 1, 1)
    with pytest.raises(ValidationError):
        CanonicalParams(1.0, -1, 1, 1)


def test_state_from_blocks_projector(rng):
    m = rng.standard_normal((4, 9)) + 1j * rng.standard_normal((4, 9))
    q, _ = np.linalg.qr(m.conj().T)
    c = q.conj().T  # orthonormal rows
    blocks = BlockState(c[:, :3], c[:, 3:6], c[:, 6:])
    rho = state_from_blocks(blocks)
    assert numeric_rank(rho) == 4
    assert np.abs(rho @ rho - rho).max() < 1e-12


def test_canonical_family_transpose_invariant(rng):
    for _ in range(10):
        p = random_params(rng)
        rho = state_from_blocks(canonical_blocks(p))
        assert np.linalg.norm(partial_transpose(rho) - rho) <= 1e-12 * np.linalg.norm(rho)
        assert numeric_rank(rho) == 4
        assert is_psd(rho)


def test_nonreal_parameter_breaks_positivity():
    # complex upper-left block entry: the 6x6 principal minor of the partial
    # transpose becomes c^2 (a - conj a)^2 < 0, so positivity fails
    p = CanonicalParams(1.0, 1.0, 1.3, 0.8)
    blocks = canonical_blocks(p)
    c0 = blocks.c0.copy()
    c0[0, 1] = 1.0 + 0.7j  # the entry holding the parameter that must stay real
    rho = state_from_blocks(BlockState(c0, blocks.c1, blocks.c2))
    pt = partial_transpose(rho)
    keep = [i for i in range(9) if i not in (0, 4, 8)]
    minor = np.linalg.det(pt[np.ix_(keep, keep)])
    expected = p.c**2 * (complex(1.0, 0.7) - complex(1.0, -0.7)) ** 2
    assert abs(minor - expected) < 1e-9 * max(1.0, abs(expected))
    assert minor.real < 0
    assert not is_psd(pt)
    # with the real value the same minor vanishes
    rho0 = state_from_blocks(blocks)
    pt0 = partial_transpose(rho0)
    assert abs(np.linalg.det(pt0[np.ix_(keep, keep)])) < 1e-12


def test_cubic_roots_signs_and_brackets(rng):
    p = CanonicalParams(1.0, 1.0, 1.0, 1.0)
    z1, z2, z3 = cubic_roots(p)
    lam = p.b**2 * p.c / (1 + p.b**2 + p.b**2 * p.c**2)
    assert lam == pytest.approx(1 / 3)
    assert lam < z1 < 0.5 and 1.0 < z2 < 2.0 and z3 < 0
    for _ in range(10):
        p = random_params(rng)
        z1, z2, z3 = cubic_roots(p)
        b, c, d = p.b, p.c, p.d
        lam = b * b * c / (1 + b * b + b * b * c * c)
        coeffs = np.array(
            [
                -p.a * b * c * (1 + c * c),
                p.a * b * (c * c + (1 + d * d) * (1 + c * c)) - d * c * (1 + b * b + b * b * c * c),
                -p.a * b * c * (1 + d * d) + d * (b * b * c * c + 1 + b * b + b * b * c * c),
                -d * b * b * c,
            ]
        )
        scale = np.abs(coeffs).max()
        for z in (z1, z2, z3):
            assert abs(np.polyval(coeffs, z)) <= 1e-10 * scale * max(1.0, abs(z)) ** 3
        # sign certificates of the bracket argument
        f0 = np.polyval(coeffs, 0.0)
        assert f0 == pytest.approx(-b * b * c * d, rel=1e-12)
        fmid = np.polyval(coeffs, c / (1 + c * c))
        assert fmid == pytest.approx(c * d / (1 + c * c) ** 2, rel=1e-9)
        if p.a > 0:
            assert z3 < 0 and lam < z1 < c / (1 + c * c) and 1 / c < z2 < (1 + d * d) / c
        else:
            assert 0 < z1 < lam and c / (1 + c * c) < z2 < 1 / c < (1 + d * d) / c < z3
        assert len({round(z, 9) for z in (z1, z2, z3)}) == 3


def test_kernel_sextet_properties(rng):
    for _ in range(6):
        p = random_params(rng)
        rho = state_from_blocks(canonical_blocks(p))
        sextet = kernel_sextet(p)
        assert len(sextet) == 6
        scale = np.linalg.norm(rho)
        for pv in sextet:
            assert np.linalg.norm(rho @ pv.vec9) <= 1e-9 * scale
        assert general_position(sextet, "both")
        stack = np.array([pv.vec9 for pv in sextet])
        assert np.linalg.matrix_rank(stack) == 5
        sym = symbol(invariants(sextet[:5]))
        assert sym == ("ppPNNp" if p.a > 0 else "pNNPpp")


def test_kernel_quintuple_invariant_formulas(rng):
    for _ in range(5):
        p = random_params(rng)
        z1, z2, _ = cubic_roots(p)
        c, d = p.c, p.d
        lam = p.b**2 * c / (1 + p.b**2 + p.b**2 * c**2)
        s = invariants(kernel_sextet(p)[:5])
        expected = np.array(
            [
                (1 + d * d - c * z2) / (1 + d * d - c * z1),
                z2 * (z1 - lam) / (z1 * (z2 - lam)),
                z1 * (1 + d * d - c * z1) * (z2 - lam) / (z2 * (1 + d * d - c * z2) * (z1 - lam)),
                z2 * (1 + d * d - c * z2) * (c * z1 - 1) / (z1 * (1 + d * d - c * z1) * (c * z2 - 1)),
                (1 + d * d - c * z1) * (c * z2 - 1) / ((1 + d * d - c * z2) * (c * z1 - 1)),
                z1 / z2,
            ]
        )
        assert np.abs(s.values - expected).max() < 1e-8 * (1 + np.abs(expected).max())


def test_projector_state_and_checks():
    q = tiles_quintuple()
    pi = projector_state(q)
    assert pi.trace().real == pytest.approx(1.0, abs=1e-12)
    assert numeric_rank(pi) == 4
    assert is_psd(partial_transpose(pi))
    assert np.abs(partial_transpose(pi) - pi).max() < 1e-12  # real UPB vectors
    assert is_pptes_rank4(pi)
    assert pt_rank(pi) == 4
    assert not is_symmetric_range(pi)
    with pytest.raises(ValidationError):
        projector_state(q[:4] + [ProductVector([1, 1, 0], [0, 1, 0])])


def test_is_pptes_counterexamples(rng):
    # separable state of rank 4: PPT with product states in its range
    e = np.eye(3)
    vecs = [kron(e[i], e[i]) for i in range(3)]
    extra = kron(np.ones(3) / np.sqrt(3), np.array([1.0, 2.0, 3.0]) / np.sqrt(14))
    rho = sum(np.outer(v, v.conj()) for v in vecs) / 3 + np.outer(extra, extra.conj())
    rho = rho / rho.trace().real
    assert not is_pptes_rank4(rho)
    # NPT rank-4 state with a product-free range
    from qutrit_pptes.fixtures import section3_fixtures

    fx = {f.name: f for f in section3_fixtures()}["count5"]
    rho5 = sum(np.outer(m.reshape(9), m.reshape(9).conj()) for m in fx.basis)
    rho5 = rho5 / rho5.trace().real
    assert min_eigenvalue(partial_transpose(rho5)) < -DEFAULT_TOL.psd_slack
    assert not is_pptes_rank4(rho5)


def test_kernel_products_on_canonical_state(rng):
    p = random_params(rng)
    rho = state_from_blocks(canonical_blocks(p))
    points = kernel_products(rho)
    assert len(points) == 6
    expected = kernel_sextet(p)
    for e in expected:
        assert any(e.same_point(f) for f in points)


def test_reconstruct_round_trips(rng):
    q = tiles_quintuple()
    res = reconstruct(projector_state(q))
    assert res.residual <= 1e-8
    # the recovered maps are proportional to unitaries for the projector itself
    for m in (res.a, res.b):
        gram = m.conj().T @ m
        c = gram.trace().real / 3
        assert np.abs(gram - c * np.eye(3)).max() < 1e-6 * c
    rho = random_pptes(rng)
    res = reconstruct(rho)
    assert res.residual <= 1e-6
    assert len(res.upb) == 5
    p = random_params(rng)
    res = reconstruct(state_from_blocks(canonical_blocks(p)))
    assert res.residual <= 1e-6


def test_reconstruct_rejects_non_pptes(rng):
    with pytest.raises(ValidationError):
        reconstruct(np.eye(9) / 9.0)  # rank 9
    # separable general-position state: six kernel products not in general position
    e = np.eye(3)
    ones = np.ones(3) / np.sqrt(3)
    vecs = [kron(e[i], e[i]) for i in range(3)] + [kron(ones, ones)]
    rho = sum(np.outer(v, v.conj()) for v in vecs)
    rho = rho / rho.trace().real
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MultiplicityWarning)
        with pytest.raises(ReconstructionError):
            reconstruct(rho)


def test_reconstruct_symmetric_tiles_realization():
    res = reconstruct(tiles_state())
    assert res.residual <= 1e-8


def test_reconstruct_rejects_npt_state_with_upb_kernel(rng):
    # an NPT state sharing the kernel of a PPT entangled state passes the
    # kernel stages but cannot match the unique rebuild with that range
    from conftest import random_angles
    from qutrit_pptes.errors import ReconstructionResidualError
    from qutrit_pptes.upb import upb_from_angles

    pi = projector_state(upb_from_angles(random_angles(rng)))
    x = range_basis(pi)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = g @ g.conj().T + 0.2 * np.eye(4)
    rho = x.T @ h @ x.conj()
    rho = rho / rho.trace().real
    assert not is_psd(partial_transpose(rho))
    with pytest.raises(ReconstructionResidualError):
        reconstruct(rho)


def test_same_range_uniqueness_perturbation(rng):
    rho = random_pptes(rng)
    x = range_basis(rho)
    for _ in range(5):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = g @ g.conj().T
        h = h / h.trace().real * 4
        if np.abs(h - np.eye(4)).max() < 0.1:
            continue
        rho2 = x.T @ h @ x.conj()
        rho2 = rho2 / rho2.trace().real
        # same range, different mixing: positivity of the partial transpose breaks
        assert min_eigenvalue(partial_transpose(rho2)) < -DEFAULT_TOL.psd_slack


def test_extremality_randomized(rng):
    rho = random_pptes(rng)
    x = range_basis(rho)
    found_split = False
    for _ in range(20):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        delta = (g + g.conj().T) / 2
        delta = delta - np.trace(delta) * np.eye(4) / 4
        d9 = x.T @ delta @ x.conj()
        d9 = d9 / max(np.linalg.norm(d9), 1e-300)
        w = np.linalg.eigvalsh(rho)
        w = w[w > 1e-12]
        t = 0.5 * w.min()
        plus, minus = rho + t * d9, rho - t * d9
        if (
            is_psd(plus)
            and is_psd(minus)
            and is_psd(partial_transpose(plus))
            and is_psd(partial_transpose(minus))
        ):
            found_split = True
            break
    assert not found_split


def test_tiles_and_pyramid_states():
    ts = tiles_state()
    assert is_pptes_rank4(ts)
    assert pt_rank(ts) == 4
    for pv in tiles_realization_sextet():
        assert np.linalg.norm(ts @ pv.vec9) < 1e-12
    ps = pyramid_state()
    assert numeric_rank(ps) == 4
    assert is_psd(partial_transpose(ps))
    for pv in pyramid_sextet():
        assert np.linalg.norm(ps @ pv.vec9) < 1e-12


def test_symmetric_range_detection():
    sym = []
    for i in range(3):
        v = np.zeros(9)
        v[4 * i] = 1.0
        sym.append(v)
    v = np.zeros(9)
    v[1] = v[3] = 1 / np.sqrt(2)
    sym.append(v)
    rho = sum(np.outer(s, s) for s in sym)
    assert is_symmetric_range(rho)
