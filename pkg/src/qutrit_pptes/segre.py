"""Product vectors of two qutrits and projective canonicalisation.

A product vector is stored as a pair of unit C^3 factors with the phase
gauge "first significant entry real positive", so each projective point
has a unique representative and deduplication is a plain overlap test.
The canonical form sends a general-position quadruple to
(e0, e1, e2, (1,1,1)); all quintuple invariants downstream are computed
in these coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeneralPositionError, ValidationError
from .linalg import DEFAULT_TOL, Tolerances, kron

__all__ = [
    "ProductVector",
    "phase_gauge",
    "projectively_equal",
    "rank_one_factor",
    "general_position_side",
    "general_position",
    "canonical_transform",
    "four_point_map",
]


def phase_gauge(v, zero_cut: float = 1e-9) -> np.ndarray:
    """Unit-normalise and rotate the phase so the first non-negligible entry is real > 0."""
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(v)
    if n == 0.0 or not np.isfinite(n):
        raise ValidationError("cannot gauge-fix a zero or non-finite vector")
    v = v / n
    idx = int(np.argmax(np.abs(v) > zero_cut))
    ph = v[idx] / abs(v[idx])
    return v * ph.conj()


def projectively_equal(u, v, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Same projective point: 1 - |<u|v>| <= eq_rel on unit representatives."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValidationError("projective comparison of a zero vector")
    return 1.0 - abs(np.vdot(u, v)) / (nu * nv) <= tol.eq_rel


@dataclass(frozen=True)
class ProductVector:
    """A point of the Segre variety: |a,b> with gauge-fixed unit factors."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", phase_gauge(self.a))
        object.__setattr__(self, "b", phase_gauge(self.b))
        self.a.setflags(write=False)
        self.b.setflags(write=False)

    @property
    def vec9(self) -> np.ndarray:
        return kron(self.a, self.b)

    @property
    def mat(self) -> np.ndarray:
        return np.outer(self.a, self.b)

    def same_point(self, other: "ProductVector", tol: Tolerances = DEFAULT_TOL) -> bool:
        return projectively_equal(self.a, other.a, tol) and projectively_equal(self.b, other.b, tol)

    def sort_key(self) -> tuple:
        """Deterministic ordering key (rounded gauge coordinates)."""
        parts = []
        for v in (self.a, self.b):
            for z in v:
                parts.extend((round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0))
        return tuple(parts)


def rank_one_factor(m, tol: Tolerances = DEFAULT_TOL) -> ProductVector | None:
    """Factor a 3x3 matrix as a b^T if it is rank 1 within tolerance, else None."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3):
        raise ValidationError("rank_one_factor expects a 3x3 matrix")
    u, s, vh = np.linalg.svd(m)
    if s[0] == 0.0:
        raise ValidationError("rank_one_factor of the zero matrix")
    if s[1] > tol.eq_rel * s[0]:
        return None
    return ProductVector(u[:, 0], vh[0])


def general_position_side(vectors, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff all pairs are projectively distinct and all triples are non-coplanar.

    The triple test is |det| > eq_rel scaled by the product of the column
    norms, so it is invariant under rescaling of any vector.
    """
    vs = [np.asarray(v, dtype=complex) for v in vectors]
    if not 2 <= len(vs) <= 6:
        raise ValidationError("general position is defined for tuples of length 2..6")
    norms = [np.linalg.norm(v) for v in vs]
    if any(n == 0.0 for n in norms):
        return False
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            ov = abs(np.vdot(vs[i], vs[j])) / (norms[i] * norms[j])
            if 1.0 - ov <= tol.eq_rel:
                return False
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            for k in range(j + 1, len(vs)):
                d = np.linalg.det(np.column_stack([vs[i], vs[j], vs[k]]))
                if abs(d) <= tol.eq_rel * norms[i] * norms[j] * norms[k]:
                    return False
    return True


def general_position(pvs, side: str = "both", tol: Tolerances = DEFAULT_TOL) -> bool:
    """General position of a tuple of ProductVectors on side 'A', 'B' or 'both'."""
    if side not in ("A", "B", "both"):
        raise ValidationError("side must be 'A', 'B' or 'both'")
    ok = True
    if side in ("A", "both"):
        ok = ok and general_position_side([p.a for p in pvs], tol)
    if side in ("B", "both"):
        ok = ok and general_position_side([p.b for p in pvs], tol)
    return ok


def canonical_transform(quad, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Invertible map sending a general-position quadruple to (e0, e1, e2, (1,1,1)).

    With X = [v0 v1 v2] and D = diag(X^-1 v3) the map is D^-1 X^-1.
    """
    vs = [np.asarray(v, dtype=complex) for v in quad]
    if len(vs) != 4:
        raise ValidationError("canonical_transform expects exactly four vectors")
    if not general_position_side(vs, tol):
        raise GeneralPositionError("quadruple is not in general position")
    x = np.column_stack(vs[:3])
    coeffs = np.linalg.solve(x, vs[3])
    return np.diag(1.0 / coeffs) @ np.linalg.inv(x)


def _unit_det(a: np.ndarray) -> np.ndarray:
    d = np.linalg.det(a)
    if d == 0.0:
        raise ValidationError("singular matrix cannot be det-normalised")
    return a / np.exp(np.log(complex(d)) / 3.0)


def four_point_map(quad_src, quad_dst, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The map (unique up to scale, here det = 1) sending one quadruple onto another."""
    a_src = canonical_transform(quad_src, tol)
    a_dst = canonical_transform(quad_dst, tol)
    return _unit_det(np.linalg.solve(a_dst, a_src))
