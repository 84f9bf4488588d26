import math

import numpy as np
import pytest

from conftest import canonical_quintuple, random_angles
from qutrit_pptes.errors import BorderlineError, ValidationError
from qutrit_pptes.invariants import InvariantSextet, invariants, sixth_state
from qutrit_pptes.linalg import haar_unitary
from qutrit_pptes.segre import ProductVector, general_position
from qutrit_pptes.upb import (
    UPB_SYMBOL_TABLE,
    UpbAngles,
    angles_from_invariants,
    apply_permutation,
    is_upb_type,
    pyramid_sextet,
    real_family,
    real_family_invariants,
    sextet_symbol_scan,
    symbol,
    table1_lookup,
    tiles_angles,
    tiles_quintuple,
    upb_from_angles,
    upb_invariants,
    verify_upb_images_unitary,
)


def test_angle_domain_validated():
    with pytest.raises(ValidationError):
        UpbAngles(0.0, 0.5, 0.0, 0.5, 0.5, 0.0)
    with pytest.raises(ValidationError):
        UpbAngles(0.5, math.pi / 2, 0.0, 0.5, 0.5, 0.0)
    with pytest.raises(ValidationError):
        UpbAngles(0.5, 0.5, 4.0, 0.5, 0.5, 0.0)


def test_orthogonality_relations(rng):
    for _ in range(5):
        ang = random_angles(rng)
        q = upb_from_angles(ang)
        a = [p.a for p in q]
        b = [p.b for p in q]
        for i in range(5):
            assert abs(np.vdot(a[i], a[(i + 1) % 5])) < 1e-12
            assert abs(np.vdot(b[i], b[(i + 2) % 5])) < 1e-12
        gram = np.array([[np.vdot(p.vec9, r.vec9) for r in q] for p in q])
        assert np.abs(gram - np.eye(5)).max() < 1e-12
        assert general_position(q, "both")


def test_tiles_invariants_and_symbol():
    s = upb_invariants(tiles_angles())
    assert np.abs(s.JA - np.array([-0.5, 2.0, -1.0])).max() < 1e-12
    assert np.abs(s.JB - np.array([2.0, 1.0 / 3.0, 1.5])).max() < 1e-12
    assert symbol(s) == "NPNPpP"
    direct = invariants(tiles_quintuple())
    assert direct.close_to(s, 1e-10)


def test_family_symbol_and_closed_form(rng):
    for _ in range(10):
        ang = random_angles(rng)
        closed = upb_invariants(ang)
        direct = invariants(upb_from_angles(ang))
        assert direct.close_to(closed, 1e-10)
        assert symbol(direct) == "NPNPpP"


def test_phi_independence():
    base = dict(gamma_A=0.6, theta_A=0.7, gamma_B=0.9, theta_B=0.4)
    ref = None
    for phi in (0.001, math.pi / 3, math.pi):
        ang = UpbAngles(base["gamma_A"], base["theta_A"], phi,
                        base["gamma_B"], base["theta_B"], phi / 2)
        s = invariants(upb_from_angles(ang))
        if ref is None:
            ref = s
        else:
            assert s.close_to(ref, 1e-10)


def test_symbol_rejects_complex_and_borderline():
    s = InvariantSextet([-0.5 + 0.5j, 2.0, -1.0 / (-0.5 + 0.5j) / 2.0], [2.0, 1 / 3, 1.5])
    assert symbol(s) is None
    with pytest.raises(BorderlineError):
        symbol(InvariantSextet([1 + 5e-8, 2.0, 1 / (2 + 1e-7)], [2.0, 1 / 3, 1.5]))


def test_table_lookup():
    assert table1_lookup("NPNPpP") == (0, 1, 2, 3, 4)
    assert table1_lookup("pNNPpp") == (1, 0, 2, 3, 4)
    assert table1_lookup("NNNNNN") is None


def test_pnnppp_example_and_repair():
    # real quintuple with symbol pNNPpp built from two 3x5 coefficient stacks
    a_, b_, c_, d_ = 1.0, 2.0, 3.0, 4.0  # 0 < a < b, c, d > 1
    u = np.array([[1, 0, 0, 1, 1], [0, 1, 0, 1, -a_], [0, 0, 1, 1, -b_]], dtype=float)
    v = np.array([[1, 0, 0, 1, 1], [0, 1, 0, 1, c_], [0, 0, 1, 1, 1 / d_]], dtype=float)
    q = [ProductVector(u[:, k], v[:, k]) for k in range(5)]
    s = invariants(q)
    expected = np.array([a_ / b_, -b_, -1 / a_, c_ * d_, 1 / d_, 1 / c_])
    assert np.abs(s.values - expected).max() < 1e-10
    assert symbol(s) == "pNNPpp"
    sigma = table1_lookup("pNNPpp")
    repaired = invariants(apply_permutation(q, sigma))
    expected2 = np.array([-1 / b_, b_ / a_, -a_, d_, 1 / (c_ * d_), c_])
    assert np.abs(repaired.values - expected2).max() < 1e-10
    assert symbol(repaired) == "NPNPpP"


def test_symbol_closure_all_twelve(rng):
    ang = random_angles(rng)
    q = upb_from_angles(ang)
    sextet = q + [sixth_state(q)]
    scan = sextet_symbol_scan(sextet)
    assert sum(scan.values()) == 720
    assert sorted(scan) == sorted(UPB_SYMBOL_TABLE)
    # each symbol's permutation renormalises a representative quintuple
    import itertools

    seen = set()
    for perm in itertools.permutations(range(6), 5):
        quint = [sextet[i] for i in perm]
        sym = symbol(invariants(quint))
        if sym in seen:
            continue
        seen.add(sym)
        sigma = table1_lookup(sym)
        assert sigma is not None
        assert symbol(invariants(apply_permutation(quint, sigma))) == "NPNPpP"
        if len(seen) == 12:
            break


def test_is_upb_type():
    q = tiles_quintuple()
    sextet = q + [sixth_state(q)]
    assert is_upb_type(sextet)
    # separable kernel sextet: not in general position, never UPB type
    e = np.eye(3)
    sep = []
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        sep.append(ProductVector(e[i], e[j] - e[k]))
        sep.append(ProductVector(e[j] - e[k], e[i]))
    assert not is_upb_type(sep)
    # a real sextet whose symbols are not in the table
    q2 = canonical_quintuple([1.0, 2.0, 4.0], [1.0, 3.0, 9.0])
    sextet2 = q2 + [sixth_state(q2)]
    assert not is_upb_type(sextet2)
    # a repeated point keeps the span 5-dimensional but kills general position
    assert not is_upb_type(sextet[:5] + [sextet[0]])
    with pytest.raises(ValidationError):
        is_upb_type([sextet[0]] * 6)  # span dimension != 5


def test_angles_from_invariants_tiles_and_roundtrip(rng):
    s = InvariantSextet([-0.5, 2.0, -1.0], [2.0, 1 / 3, 1.5])
    rec = angles_from_invariants(s)
    for name in ("gamma_A", "theta_A", "gamma_B", "theta_B"):
        assert getattr(rec, name) == pytest.approx(math.pi / 4, abs=1e-12)
    assert rec.phi_A == 0.0 and rec.phi_B == 0.0
    for _ in range(20):
        ang = random_angles(rng)
        s = upb_invariants(ang)
        rec = angles_from_invariants(s)
        assert rec.gamma_A == pytest.approx(ang.gamma_A, abs=1e-9)
        assert rec.theta_A == pytest.approx(ang.theta_A, abs=1e-9)
        assert rec.gamma_B == pytest.approx(ang.gamma_B, abs=1e-9)
        assert rec.theta_B == pytest.approx(ang.theta_B, abs=1e-9)
        # the two equations not used by the solver hold automatically
        back = upb_invariants(rec)
        assert abs(back.JA[0] - s.JA[0]) < 1e-9
        assert abs(back.JB[1] - s.JB[1]) < 1e-9
    with pytest.raises(ValidationError):
        angles_from_invariants(invariants(canonical_quintuple([1, 2, 4], [1, 3, 9])))


def test_real_family():
    fam = real_family(1.0, 1.0, 1.0, 1.0)
    s = real_family_invariants(1.0, 1.0, 1.0, 1.0)
    assert np.abs(s.values - np.array([-1.0, 2.0, -0.5, 2.0, 0.25, 2.0])).max() < 1e-12
    direct = invariants(fam[:5])
    assert direct.close_to(s, 1e-10)
    assert symbol(direct) == "NPNPpP"
    gram = np.array([[np.vdot(p.vec9, r.vec9) for r in fam[:5]] for p in fam[:5]])
    off = gram - np.diag(np.diag(gram))
    assert np.abs(off).max() < 1e-12
    assert sixth_state(fam[:5]).same_point(fam[5])
    with pytest.raises(ValidationError):
        real_family(0.0, 1.0, 1.0, 1.0)


def test_real_family_random_parameters(rng):
    for _ in range(5):
        al, be, ga, de = rng.uniform(0.3, 2.5, 4)
        fam = real_family(al, be, ga, de)
        s = invariants(fam[:5])
        assert s.close_to(real_family_invariants(al, be, ga, de), 1e-8)
        assert symbol(s) == "NPNPpP"
        assert sixth_state(fam[:5]).same_point(fam[5])


def test_real_family_column_selection_invariants():
    al, be, ga, de = 1.3, 0.8, 1.7, 0.6
    a2, b2, g2, d2 = al**2, be**2, ga**2, de**2
    fam = real_family(al, be, ga, de)
    quint = [fam[i] for i in (2, 5, 1, 0, 4)]
    s = invariants(quint)
    big = (1 + a2) * (1 + g2 + d2) + b2 * (g2 + d2)
    expected = np.array(
        [
            (1 + a2 + g2) * (1 + g2 + d2) / ((1 + g2) * big),
            (1 + g2) / (1 + g2 + d2),
            big / (1 + a2 + g2),
            -b2 * (g2 + d2) * (1 + a2 + g2) / (a2 * g2 * big),
            -a2 * (1 + a2 + b2) / b2,
            g2 * big / ((g2 + d2) * (1 + a2 + b2) * (1 + a2 + g2)),
        ]
    )
    assert np.abs(s.values - expected).max() < 1e-10
    assert symbol(s) == "ppPNNp"


def test_verify_upb_images_unitary(rng):
    ang = random_angles(rng)
    q = upb_from_angles(ang)
    u = haar_unitary(rng)
    v = haar_unitary(rng)
    q2 = [ProductVector(u @ p.a, v @ p.b) for p in q]
    assert verify_upb_images_unitary(q, q2, u, v)
    assert verify_upb_images_unitary(q, q2, 3.0 * u, v / 3.0)
    with pytest.raises(ValidationError):
        verify_upb_images_unitary(q, q2, np.diag([1.0, 1.0, 2.0]), v)
    # recovered maps between local-unitary scrambles of the same UPB are unitary
    from qutrit_pptes.invariants import bp_equivalent

    pair = bp_equivalent(q, q2)
    assert pair is not None
    assert verify_upb_images_unitary(q, q2, pair[0], pair[1])


def test_pyramid_sextet_structure():
    sextet = pyramid_sextet()
    assert len(sextet) == 6
    assert general_position(sextet, "both")
    stack = np.array([p.vec9 for p in sextet])
    assert np.linalg.matrix_rank(stack) == 5
    assert is_upb_type(sextet)
