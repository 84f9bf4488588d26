"""Unextendible product bases of two qutrits and their interval symbols.

Every orthonormal UPB quintuple is locally-unitarily equivalent to a
member of a 6-angle family (gamma, theta, phi per side) with the cyclic
orthogonality pattern <a_i|a_{i+1}> = <b_i|b_{i+2}> = 0 (indices mod 5).
Its invariants are real, phi-free closed forms:

    J1A = -tan^2(gA) cos^2(tA)   J2A = 1/cos^2(tA)   J3A = -cot^2(gA)
    J1B = 1/sin^2(tB)            J2B = sin^2(tB)/s   J3B = s,
    s   = 1 + cos^2(tB) tan^2(gB)

Replacing each real invariant by the interval it lies in, N=(-inf,0),
p=(0,1), P=(1,inf), gives a 6-letter symbol; exactly twelve symbols
occur among the quintuples drawn from a UPB span and each comes with a
repair permutation returning the symbol to NPNPpP (the family symbol).
That table drives the recognition of UPB-type subspaces.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BorderlineError, GeneralPositionError, ValidationError
from .invariants import (
    InvariantSextet,
    invariants,
    quintuple_invariants_from_tables,
    sextet_invariant_table,
    sixth_state,
)
from .linalg import DEFAULT_TOL, Tolerances
from .segre import ProductVector, general_position, projectively_equal

__all__ = [
    "UpbAngles",
    "UPB_SYMBOL_TABLE",
    "upb_from_angles",
    "upb_invariants",
    "symbol",
    "symbol_of_values",
    "table1_lookup",
    "apply_permutation",
    "is_upb_type",
    "sextet_symbol_scan",
    "angles_from_invariants",
    "real_family",
    "real_family_invariants",
    "verify_upb_images_unitary",
    "tiles_angles",
    "tiles_quintuple",
    "pyramid_sextet",
]


@dataclass(frozen=True)
class UpbAngles:
    """Angles (radians) of the orthonormal UPB family; gamma/theta in (0, pi/2) open."""

    gamma_A: float
    theta_A: float
    phi_A: float
    gamma_B: float
    theta_B: float
    phi_B: float

    def __post_init__(self) -> None:
        half_pi = math.pi / 2
        for name in ("gamma_A", "theta_A", "gamma_B", "theta_B"):
            v = getattr(self, name)
            if not (0.0 < v < half_pi):
                raise ValidationError(f"{name} must lie in the open interval (0, pi/2)")
        for name in ("phi_A", "phi_B"):
            v = getattr(self, name)
            if not (-math.pi < v <= math.pi):
                raise ValidationError(f"{name} must lie in (-pi, pi]")


# The twelve admissible symbols and their repair permutations, as index
# maps sigma with (new quintuple)_k = (old quintuple)_{sigma[k]}.
UPB_SYMBOL_TABLE: dict[str, tuple[int, ...]] = {
    "NNPPPp": (0, 2, 1, 4, 3),  # (12)(34)
    "NNpppP": (0, 2, 1, 3, 4),  # (12)
    "NPNPpP": (0, 1, 2, 3, 4),  # id
    "NpNpPp": (0, 1, 2, 4, 3),  # (34)
    "PNNpPP": (1, 0, 2, 4, 3),  # (01)(34)
    "PPpNNP": (0, 1, 3, 2, 4),  # (23)
    "PpPNPN": (0, 2, 4, 1, 3),  # (1243)
    "PpppNN": (2, 4, 0, 3, 1),  # (02)(14)
    "pNNPpp": (1, 0, 2, 3, 4),  # (01)
    "pPPPNN": (0, 3, 2, 1, 4),  # (13)
    "pPpNpN": (3, 1, 4, 0, 2),  # (03)(24)
    "ppPNNp": (1, 0, 3, 2, 4),  # (01)(23)
}


def upb_from_angles(angles: UpbAngles) -> list[ProductVector]:
    """The orthonormal UPB quintuple at the given angles."""
    ga, ta, pa = angles.gamma_A, angles.theta_A, angles.phi_A
    gb, tb, pb = angles.gamma_B, angles.theta_B, angles.phi_B
    na = math.sqrt(math.cos(ga) ** 2 + math.sin(ga) ** 2 * math.cos(ta) ** 2)
    nb = math.sqrt(math.cos(gb) ** 2 + math.sin(gb) ** 2 * math.cos(tb) ** 2)
    ea, eb = np.exp(1j * pa), np.exp(1j * pb)

    a = [
        np.array([1.0, 0.0, 0.0], dtype=complex),
        np.array([0.0, 1.0, 0.0], dtype=complex),
        np.array([math.cos(ta), 0.0, math.sin(ta)], dtype=complex),
        np.array(
            [math.sin(ga) * math.sin(ta), math.cos(ga) * ea, -math.sin(ga) * math.cos(ta)]
        ),
        np.array([0.0, math.sin(ga) * math.cos(ta) * ea, math.cos(ga)]) / na,
    ]
    b = [
        np.array([0.0, 1.0, 0.0], dtype=complex),
        np.array(
            [math.sin(gb) * math.sin(tb), math.cos(gb) * eb, -math.sin(gb) * math.cos(tb)]
        ),
        np.array([1.0, 0.0, 0.0], dtype=complex),
        np.array([math.cos(tb), 0.0, math.sin(tb)], dtype=complex),
        np.array([0.0, math.sin(gb) * math.cos(tb) * eb, math.cos(gb)]) / nb,
    ]
    return [ProductVector(a[k], b[k]) for k in range(5)]


def upb_invariants(angles: UpbAngles) -> InvariantSextet:
    """Closed-form invariants of the family member; independent of both phi angles."""
    ga, ta = angles.gamma_A, angles.theta_A
    gb, tb = angles.gamma_B, angles.theta_B
    s = 1.0 + math.cos(tb) ** 2 * math.tan(gb) ** 2
    ja = np.array(
        [
            -math.tan(ga) ** 2 * math.cos(ta) ** 2,
            1.0 / math.cos(ta) ** 2,
            -1.0 / math.tan(ga) ** 2,
        ],
        dtype=complex,
    )
    jb = np.array([1.0 / math.sin(tb) ** 2, math.sin(tb) ** 2 / s, s], dtype=complex)
    return InvariantSextet(ja, jb)


def _letter(x: float) -> str:
    if x < 0.0:
        return "N"
    return "p" if x < 1.0 else "P"


def symbol_of_values(values: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> Optional[str]:
    """Interval symbol of six invariant values; None if clearly complex.

    Values inside the ambiguity band (imaginary part, or distance to the
    excluded points 0 and 1, between eq_rel and 10*eq_rel scaled) raise
    :class:`BorderlineError` instead of being rounded into a letter.
    """
    letters = []
    for z in np.asarray(values, dtype=complex):
        scale = 1.0 + abs(z)
        im = abs(z.imag)
        if im > 10 * tol.eq_rel * scale:
            return None
        if im > tol.eq_rel * scale:
            raise BorderlineError("invariant is marginally complex")
        x = z.real
        if min(abs(x), abs(x - 1.0)) <= 10 * tol.eq_rel * scale:
            raise BorderlineError("invariant too close to an interval boundary")
        letters.append(_letter(x))
    return "".join(letters)


def symbol(s: InvariantSextet, tol: Tolerances = DEFAULT_TOL) -> Optional[str]:
    """Interval symbol of a real invariant sextet; None if clearly complex."""
    return symbol_of_values(s.values, tol)


def table1_lookup(sym: str) -> Optional[tuple[int, ...]]:
    """Repair permutation for a UPB symbol, or None for non-UPB symbols."""
    return UPB_SYMBOL_TABLE.get(sym)


def apply_permutation(quintuple: Sequence[ProductVector], sigma: Sequence[int]) -> list[ProductVector]:
    """Reorder so that member k of the result is member sigma[k] of the input."""
    return [quintuple[i] for i in sigma]


def is_upb_type(sextet: Sequence[ProductVector], tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether a six-product-state spanning set is equivalent to a UPB span.

    Requires the sextet to span a 5-dimensional subspace; sextets not in
    general position are never of UPB type.
    """
    if len(sextet) != 6:
        raise ValidationError("is_upb_type expects six product vectors")
    stack = np.array([p.vec9 for p in sextet])
    svals = np.linalg.svd(stack, compute_uv=False)
    dim = int(np.count_nonzero(svals > tol.rank_rel * svals[0]))
    if dim != 5:
        raise ValidationError(f"sextet spans a {dim}-dimensional subspace, expected 5")
    if not general_position(sextet, "both", tol):
        return False
    try:
        s = invariants(sextet[:5], tol)
        sym = symbol(s, tol)
    except GeneralPositionError:
        return False
    return sym is not None and sym in UPB_SYMBOL_TABLE


def sextet_symbol_scan(
    sextet: Sequence[ProductVector], tol: Tolerances = DEFAULT_TOL
) -> dict[str, int]:
    """Symbols of all 720 ordered quintuples drawn from a six-point sextet.

    For a UPB-type span the result holds exactly the twelve admissible
    symbols; the counts are returned for reporting.
    """
    if len(sextet) != 6:
        raise ValidationError("symbol scan expects six product vectors")
    da = sextet_invariant_table(np.column_stack([p.a for p in sextet]))
    db = sextet_invariant_table(np.column_stack([p.b for p in sextet]))
    counts: dict[str, int] = {}
    for perm in itertools.permutations(range(6), 5):
        values = quintuple_invariants_from_tables(da, db, perm)
        sym = symbol_of_values(values, tol)
        key = sym if sym is not None else "<complex>"
        counts[key] = counts.get(key, 0) + 1
    return counts


def angles_from_invariants(s: InvariantSextet, tol: Tolerances = DEFAULT_TOL) -> UpbAngles:
    """Solve the family equations for the four non-trivial angles (phi set to 0).

    Requires symbol NPNPpP.  Only J2A, J3A, J1B, J3B are used; the two
    remaining equations then hold automatically via J1 J2 J3 = 1.
    """
    sym = symbol(s, tol)
    if sym != "NPNPpP":
        raise ValidationError(f"angles solvable only for symbol NPNPpP, got {sym!r}")
    j2a, j3a = s.JA[1].real, s.JA[2].real
    j1b, j3b = s.JB[0].real, s.JB[2].real
    theta_a = math.acos(1.0 / math.sqrt(j2a))
    gamma_a = math.atan(1.0 / math.sqrt(-j3a))
    theta_b = math.asin(1.0 / math.sqrt(j1b))
    gamma_b = math.atan(math.sqrt(j3b - 1.0) / math.cos(theta_b))
    return UpbAngles(gamma_a, theta_a, 0.0, gamma_b, theta_b, 0.0)


def real_family(alpha: float, beta: float, gamma: float, delta: float) -> list[ProductVector]:
    """Real 4-parameter non-normalised UPB sextet (five columns + closure state).

    The first five tensor-column pairs are mutually orthogonal and carry
    the symbol NPNPpP for all nonzero parameters; the sixth column is the
    unique extra product state of their span, via its closed form.
    """
    if any(abs(x) == 0.0 for x in (alpha, beta, gamma, delta)):
        raise ValidationError("real_family parameters must be nonzero")
    a, b, g, d = float(alpha), float(beta), float(gamma), float(delta)
    a2, b2, g2, d2 = a * a, b * b, g * g, d * d
    u6 = np.array(
        [
            a * ((1 + a2) * (1 + g2 + d2) + b2 * (g2 + d2)) / (b * (1 + a2 + g2)),
            a * (1 + g2 + d2) * (d2 + (a2 + b2) * (g2 + d2))
            / (a2 * g2 + (g2 + d2) * (b2 + g2 * (a2 + b2))),
            1.0,
        ]
    )
    v6 = np.array(
        [
            g * (a2 * (1 + a2 + b2) * (1 + g2 + d2) + b2 * (1 + g2))
            / (b2 * d * (1 + a2 + g2)),
            g * (a2 + b2) * ((1 + a2) * (1 + g2 + d2) + b2 * (g2 + d2))
            / (b2 * (d2 + (a2 + b2) * (g2 + d2))),
            1.0,
        ]
    )
    u = np.array(
        [
            [1, 0, a, b, 0, u6[0]],
            [0, 1, 0, 1, a, u6[1]],
            [0, 0, b, -a, 1, u6[2]],
        ],
        dtype=float,
    )
    v = np.array(
        [
            [1, d, 0, 0, g, v6[0]],
            [0, 1, 1, g, 0, v6[1]],
            [0, -g, 0, 1, d, v6[2]],
        ],
        dtype=float,
    )
    return [ProductVector(u[:, k], v[:, k]) for k in range(6)]


def real_family_invariants(alpha: float, beta: float, gamma: float, delta: float) -> InvariantSextet:
    """Closed-form invariants of the real-family quintuple."""
    a2, b2, g2, d2 = alpha**2, beta**2, gamma**2, delta**2
    ja = np.array([-a2, (a2 + b2) / a2, -1.0 / (a2 + b2)], dtype=complex)
    jb = np.array(
        [1 + g2, d2 / ((1 + g2) * (g2 + d2)), (g2 + d2) / d2], dtype=complex
    )
    return InvariantSextet(ja, jb)


def verify_upb_images_unitary(
    q1: Sequence[ProductVector],
    q2: Sequence[ProductVector],
    a: np.ndarray,
    b: np.ndarray,
    tol: float = 1e-8,
) -> bool:
    """Check that a map pair carrying one orthonormal UPB onto another is unitary up to scale."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    for p, q in zip(q1, q2):
        if not (projectively_equal(a @ p.a, q.a) and projectively_equal(b @ p.b, q.b)):
            raise ValidationError("map pair does not carry the first quintuple onto the second")
    for m in (a, b):
        gram = m.conj().T @ m
        c = gram.trace().real / 3.0
        if np.abs(gram - c * np.eye(3)).max() > tol * c:
            return False
    return True


def tiles_angles() -> UpbAngles:
    """Angles of the Tiles UPB (LU-reduced into the family domain)."""
    q = math.pi / 4
    return UpbAngles(q, q, math.pi, q, q, math.pi)


def tiles_quintuple() -> list[ProductVector]:
    return upb_from_angles(tiles_angles())


def pyramid_sextet() -> list[ProductVector]:
    """Six product states of a span SLOCC-equivalent to the Pyramid UPB.

    |00> together with the five rank-1 matrices built from the fifth
    roots of unity.
    """
    out = [ProductVector(np.array([1.0, 0, 0]), np.array([1.0, 0, 0]))]
    for k in range(5):
        xi = np.exp(2j * np.pi * k / 5)
        out.append(ProductVector(np.array([1.0, xi**3, xi**2]), np.array([1.0, xi**4, xi])))
    return out
