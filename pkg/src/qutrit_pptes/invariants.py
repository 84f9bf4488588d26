"""Projective invariants of product-vector quintuples.

A quintuple in general position carries three invariants per side,
(J1, J2, J3) with J1 J2 J3 = 1, built from ratios of 3x3 determinants:

    J1 = D(2,0,4) D(0,1,3) / [D(2,0,3) D(0,1,4)]
    J2 = D(0,1,4) D(1,2,3) / [D(0,1,3) D(1,2,4)]
    J3 = D(1,2,4) D(2,0,3) / [D(1,2,3) D(2,0,4)]

where D(i,j,k) is the determinant of the three factors as columns.  Two
quintuples are equivalent under one-sided invertible maps iff the J's
agree, and under pairs of maps iff both sides agree.  The production
path canonicalises the first four points (numerically better behaved);
the raw determinant ratios are kept as a cross-check.

The span of a quintuple contains infinitely many / no / exactly one
additional product state according to how many of five polynomial
relations between the J's hold (two or more / exactly one / none), and
in the generic case the extra state has closed-form coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import (
    BorderlineError,
    DegenerateQuintupleError,
    GeneralPositionError,
    ValidationError,
)
from .linalg import DEFAULT_TOL, Tolerances, kron
from .segre import (
    ProductVector,
    canonical_transform,
    four_point_map,
    general_position,
    general_position_side,
    projectively_equal,
)

__all__ = [
    "InvariantSextet",
    "QuintupleClass",
    "invariants",
    "side_invariants",
    "raw_side_invariants",
    "sextet_invariant_table",
    "quintuple_invariants_from_tables",
    "p_equivalent",
    "bp_equivalent",
    "classify_quintuple",
    "sixth_state",
    "replaced_invariants",
    "permuted_invariants",
]

# Relative tolerance for deciding the five classification equations; the
# borderline band is ten times wider and is refused rather than guessed.
EQUATION_TOL = 1e-7


@dataclass(frozen=True)
class InvariantSextet:
    """(J1,J2,J3) for the A side and the B side, stored as complex triples."""

    JA: np.ndarray
    JB: np.ndarray

    def __post_init__(self) -> None:
        ja = np.asarray(self.JA, dtype=complex).reshape(3)
        jb = np.asarray(self.JB, dtype=complex).reshape(3)
        if not (np.all(np.isfinite(ja.view(float))) and np.all(np.isfinite(jb.view(float)))):
            raise ValidationError("invariants must be finite")
        object.__setattr__(self, "JA", ja)
        object.__setattr__(self, "JB", jb)
        self.JA.setflags(write=False)
        self.JB.setflags(write=False)

    @property
    def values(self) -> np.ndarray:
        """All six invariants in the order J1A, J2A, J3A, J1B, J2B, J3B."""
        return np.concatenate([self.JA, self.JB])

    def product_defect(self) -> float:
        return float(max(abs(self.JA.prod() - 1.0), abs(self.JB.prod() - 1.0)))

    def close_to(self, other: "InvariantSextet", rel: float = 1e-8) -> bool:
        d = np.abs(self.values - other.values) / (1.0 + np.abs(self.values))
        return bool(d.max() <= rel)


@dataclass(frozen=True)
class QuintupleClass:
    """Outcome of the span trichotomy.

    kind 'infinite'     the span contains a continuum of product states
    kind 'double_point' no extra product state; ``double_index`` is the
                        member (0..4) carrying intersection multiplicity 2
    kind 'regular'      exactly one extra product state, in ``sixth``
    """

    kind: Literal["infinite", "double_point", "regular"]
    double_index: Optional[int] = None
    sixth: Optional[ProductVector] = None


def _check_nondegenerate(j: np.ndarray, tol: Tolerances) -> None:
    for z in j:
        if abs(z) <= tol.eq_rel or abs(z - 1.0) <= tol.eq_rel:
            raise DegenerateQuintupleError(
                "invariant too close to the excluded values 0 or 1"
            )


def side_invariants(factors: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Invariants of five C^3 vectors, via canonical coordinates of the first four.

    In canonical coordinates the fifth vector is (v0, v1, v2) and
    (J1, J2, J3) = (v1/v2, v2/v0, v0/v1).
    """
    vs = [np.asarray(v, dtype=complex) for v in factors]
    if len(vs) != 5:
        raise ValidationError("side_invariants expects five vectors")
    if not general_position_side(vs, tol):
        raise GeneralPositionError("quintuple side is not in general position")
    a = canonical_transform(vs[:4], tol)
    v = a @ vs[4]
    return np.array([v[1] / v[2], v[2] / v[0], v[0] / v[1]])


def raw_side_invariants(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Invariants straight from the determinant-ratio definition (cross-check path)."""
    vs = [np.asarray(v, dtype=complex) for v in factors]

    def det(i: int, j: int, k: int) -> complex:
        return complex(np.linalg.det(np.column_stack([vs[i], vs[j], vs[k]])))

    j1 = det(2, 0, 4) * det(0, 1, 3) / (det(2, 0, 3) * det(0, 1, 4))
    j2 = det(0, 1, 4) * det(1, 2, 3) / (det(0, 1, 3) * det(1, 2, 4))
    j3 = det(1, 2, 4) * det(2, 0, 3) / (det(1, 2, 3) * det(2, 0, 4))
    return np.array([j1, j2, j3])


def invariants(quintuple: Sequence[ProductVector], tol: Tolerances = DEFAULT_TOL) -> InvariantSextet:
    """Invariant sextet of a quintuple of product vectors in general position."""
    if len(quintuple) != 5:
        raise ValidationError("invariants expects a quintuple")
    ja = side_invariants([p.a for p in quintuple], tol)
    jb = side_invariants([p.b for p in quintuple], tol)
    _check_nondegenerate(ja, tol)
    _check_nondegenerate(jb, tol)
    return InvariantSextet(ja, jb)


def sextet_invariant_table(factors: np.ndarray) -> np.ndarray:
    """dets[i, j, k] = det of the factor columns i, j, k of a 3xN stack.

    Precomputing the full determinant cube makes scanning the N!/(N-5)!
    quintuples of a sextet a cheap index lookup.
    """
    cols = np.asarray(factors, dtype=complex).T
    n = cols.shape[0]
    m = np.empty((n, n, n, 3, 3), dtype=complex)
    m[..., :, 0] = cols[:, None, None, :]
    m[..., :, 1] = cols[None, :, None, :]
    m[..., :, 2] = cols[None, None, :, :]
    return np.linalg.det(m)


def quintuple_invariants_from_tables(
    da: np.ndarray, db: np.ndarray, idx: Sequence[int]
) -> np.ndarray:
    """All six invariants of the quintuple at the given sextet indices."""
    t0, t1, t2, t3, t4 = idx

    def side(d: np.ndarray) -> list[complex]:
        j1 = d[t2, t0, t4] * d[t0, t1, t3] / (d[t2, t0, t3] * d[t0, t1, t4])
        j2 = d[t0, t1, t4] * d[t1, t2, t3] / (d[t0, t1, t3] * d[t1, t2, t4])
        j3 = d[t1, t2, t4] * d[t2, t0, t3] / (d[t1, t2, t3] * d[t2, t0, t4])
        return [j1, j2, j3]

    return np.array(side(da) + side(db))


def p_equivalent(
    side1: Sequence[np.ndarray], side2: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL
) -> np.ndarray | None:
    """Map carrying one side-quintuple onto another, or None when invariants differ.

    The map is built from the first four points and verified on the fifth.
    """
    j1 = side_invariants(side1, tol)
    j2 = side_invariants(side2, tol)
    if np.max(np.abs(j1 - j2) / (1.0 + np.abs(j1))) > tol.eq_rel:
        return None
    a = four_point_map(list(side1)[:4], list(side2)[:4], tol)
    if not projectively_equal(a @ np.asarray(side1[4], dtype=complex), side2[4],
                              Tolerances(tol.rank_rel, max(tol.eq_rel, 1e-6), tol.psd_slack)):
        return None
    return a


def bp_equivalent(
    q1: Sequence[ProductVector], q2: Sequence[ProductVector], tol: Tolerances = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray] | None:
    """Pair of one-sided maps carrying q1 onto q2 elementwise, or None."""
    a = p_equivalent([p.a for p in q1], [p.a for p in q2], tol)
    if a is None:
        return None
    b = p_equivalent([p.b for p in q1], [p.b for p in q2], tol)
    if b is None:
        return None
    check = Tolerances(tol.rank_rel, max(tol.eq_rel, 1e-6), tol.psd_slack)
    for p, q in zip(q1, q2):
        if not projectively_equal(kron(a @ p.a, b @ p.b), q.vec9, check):
            return None
    return a, b


def _equation_residuals(s: InvariantSextet) -> np.ndarray:
    """Relative residuals of the five classification equations.

    Equations 0..2 equate J_i between sides; 3 and 4 are the two cubic
    relations that govern degeneration at the fourth and fifth point.
    """
    ja, jb = s.JA, s.JB
    pairs = [
        (ja[0], jb[0]),
        (ja[1], jb[1]),
        (ja[2], jb[2]),
        (ja[1] * (1 - ja[0]) * (1 - jb[1]), jb[1] * (1 - jb[0]) * (1 - ja[1])),
        (ja[0] * (1 - ja[1]) * (1 - jb[0]), jb[0] * (1 - jb[1]) * (1 - ja[0])),
    ]
    res = np.empty(5)
    for i, (lhs, rhs) in enumerate(pairs):
        scale = max(abs(lhs), abs(rhs), 1e-300)
        res[i] = abs(lhs - rhs) / scale
    return res


def classify_quintuple(
    quintuple: Sequence[ProductVector],
    tol: Tolerances = DEFAULT_TOL,
    equation_tol: float = EQUATION_TOL,
) -> QuintupleClass:
    """Decide how many extra product states the quintuple's span contains.

    Residuals inside (equation_tol, 10*equation_tol] are refused with
    :class:`BorderlineError`: the exact trichotomy has no numerical
    analogue there.
    """
    s = invariants(quintuple, tol)
    res = _equation_residuals(s)
    if np.any((res > equation_tol) & (res <= 10 * equation_tol)):
        raise BorderlineError(
            "classification equations fall inside the numerical ambiguity band"
        )
    holds = res <= equation_tol
    n = int(holds.sum())
    if n >= 2:
        return QuintupleClass(kind="infinite")
    if n == 1:
        # Equation i in {0,1,2} doubles member i (J_{i+1} matching doubles
        # the point one slot earlier in 1-based labelling); equations 3
        # and 4 double members 3 and 4.  The index therefore equals the
        # equation number in every case.
        return QuintupleClass(kind="double_point", double_index=int(np.argmax(holds)))
    return QuintupleClass(kind="regular", sixth=sixth_state(quintuple, tol, _pre=s))


def sixth_state(
    quintuple: Sequence[ProductVector],
    tol: Tolerances = DEFAULT_TOL,
    _pre: InvariantSextet | None = None,
) -> ProductVector:
    """The unique additional product state in the span of a regular quintuple."""
    s = _pre if _pre is not None else invariants(quintuple, tol)
    ja, jb = s.JA, s.JB
    for i in range(3):
        if abs(jb[i] - ja[i]) <= tol.eq_rel * (1.0 + abs(ja[i])):
            raise DegenerateQuintupleError(
                "sixth-state formulas degenerate: matching side invariants"
            )
    a = canonical_transform([p.a for p in quintuple][:4], tol)
    b = canonical_transform([p.b for p in quintuple][:4], tol)
    c_canon = np.array(
        [
            (1 - jb[0]) / (jb[0] - ja[0]),
            ja[1] * (1 - jb[1]) / (jb[1] - ja[1]),
            (1 - jb[2]) / (ja[0] * (jb[2] - ja[2])),
        ]
    )
    z_canon = np.array(
        [
            (1 - ja[0]) / (jb[0] - ja[0]),
            jb[1] * (1 - ja[1]) / (jb[1] - ja[1]),
            (1 - ja[2]) / (jb[0] * (jb[2] - ja[2])),
        ]
    )
    return ProductVector(np.linalg.solve(a, c_canon), np.linalg.solve(b, z_canon))


def replaced_invariants(s: InvariantSextet, tol: Tolerances = DEFAULT_TOL) -> InvariantSextet:
    """Invariants after swapping the fifth member for the extra product state.

    Closed forms in the old invariants; denominators vanish exactly in the
    non-regular cases, which are rejected.
    """
    ja, jb = s.JA, s.JB
    d = [jb[i] - ja[i] for i in range(3)]
    for i, di in enumerate(d):
        if abs(di) <= tol.eq_rel * (1.0 + abs(ja[i])):
            raise DegenerateQuintupleError("replacement formulas need J_i^A != J_i^B")
    new_ja = np.array(
        [
            (1 - jb[1]) * d[2] / (ja[2] * (1 - jb[2]) * d[1]),
            (1 - jb[2]) * d[0] / (ja[0] * (1 - jb[0]) * d[2]),
            (1 - jb[0]) * d[1] / (ja[1] * (1 - jb[1]) * d[0]),
        ]
    )
    new_jb = np.array(
        [
            (1 - ja[1]) * d[2] / (jb[2] * (1 - ja[2]) * d[1]),
            (1 - ja[2]) * d[0] / (jb[0] * (1 - ja[0]) * d[2]),
            (1 - ja[0]) * d[1] / (jb[1] * (1 - ja[1]) * d[0]),
        ]
    )
    return InvariantSextet(new_ja, new_jb)


def permuted_invariants(s: InvariantSextet, transposition: tuple[int, int]) -> InvariantSextet:
    """Invariants after transposing members (2,3) or (3,4) of the quintuple."""

    def swap23(j: np.ndarray) -> np.ndarray:
        return np.array(
            [1 - j[0], j[1] / (j[1] - 1), (j[1] - 1) / (j[1] * (1 - j[0]))]
        )

    t = tuple(transposition)
    if t == (2, 3):
        return InvariantSextet(swap23(s.JA), swap23(s.JB))
    if t == (3, 4):
        return InvariantSextet(1.0 / s.JA, 1.0 / s.JB)
    raise ValidationError("supported transpositions are (2,3) and (3,4)")
