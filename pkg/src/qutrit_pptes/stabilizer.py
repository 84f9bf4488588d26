"""Stabilizer of a rank-4 PPT entangled state inside PGL3 x PGL3.

A pair of invertible one-sided maps fixing the state (up to scale)
permutes the six product states of its kernel, and the permutation
determines the pair up to scalars, so the stabilizer embeds into the
symmetric group on six letters.  Membership is decided by matching
quintuple invariants: the permuted quintuple (first five points) must
carry the same invariants as the reference one, and the sixth point
then follows automatically because it is the only remaining product
state in the preserved span.  Each member is realised explicitly by
one-sided maps and verified on all six points.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import MathInconsistencyError, ValidationError
from .invariants import quintuple_invariants_from_tables, sextet_invariant_table
from .linalg import DEFAULT_TOL, Tolerances
from .segre import ProductVector, four_point_map, general_position, projectively_equal
from .upb import is_upb_type

__all__ = [
    "StabilizerGroup",
    "stabilizer",
    "verify_symmetry_commutes",
    "cycle_notation",
    "permutation_order",
]

Permutation = tuple[int, ...]


def cycle_notation(perm: Permutation) -> str:
    """One-line cycle string, e.g. (03)(25); identity prints as 'id'."""
    seen = [False] * len(perm)
    parts = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        parts.append("(" + "".join(str(i) for i in cyc) + ")")
    return "".join(parts) if parts else "id"


def permutation_order(perm: Permutation) -> int:
    order = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        nxt = start
        while not seen[nxt]:
            seen[nxt] = True
            nxt = perm[nxt]
            length += 1
        order = order * length // gcd(order, length)
    return order


def _compose(p: Permutation, q: Permutation) -> Permutation:
    return tuple(p[q[i]] for i in range(len(q)))


def _inverse(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


@dataclass(frozen=True)
class StabilizerGroup:
    """Permutation group on the six kernel points with one realisation per element."""

    elements: tuple[Permutation, ...]
    realizations: dict[Permutation, tuple[np.ndarray, np.ndarray]]

    @property
    def order(self) -> int:
        return len(self.elements)

    def order_census(self) -> dict[int, int]:
        """Histogram of element orders (a cheap isomorphism-type fingerprint)."""
        return dict(Counter(permutation_order(p) for p in self.elements))

    def is_transitive(self) -> bool:
        reached = {0}
        for p in self.elements:
            reached.update(p[i] for i in list(reached))
        return len(reached) == 6


def stabilizer(
    sextet: list[ProductVector],
    tol: Tolerances = DEFAULT_TOL,
    match_tol: float = 1e-8,
    margin_factor: float = 1e3,
) -> StabilizerGroup:
    """Stabilizer of the state whose kernel products are the given sextet.

    A permutation belongs to the group iff the invariants of its first
    five images equal the reference invariants within ``match_tol``.
    The gap between members and the best non-member must exceed
    ``margin_factor`` times the tolerance, otherwise the decision is
    declared unreliable.
    """
    if len(sextet) != 6:
        raise ValidationError("stabilizer expects a sextet of product vectors")
    if not general_position(sextet, "both", tol):
        raise ValidationError("sextet is not in general position")
    if not is_upb_type(sextet, tol):
        raise ValidationError("sextet does not span a UPB-type subspace")

    fa = np.column_stack([p.a for p in sextet])
    fb = np.column_stack([p.b for p in sextet])
    da = sextet_invariant_table(fa)
    db = sextet_invariant_table(fb)
    ref = quintuple_invariants_from_tables(da, db, (0, 1, 2, 3, 4))
    scale = 1.0 + np.abs(ref)

    members: list[Permutation] = []
    best_miss = np.inf
    for perm in itertools.permutations(range(6)):
        j = quintuple_invariants_from_tables(da, db, perm[:5])
        dist = float((np.abs(j - ref) / scale).max())
        if dist <= match_tol:
            members.append(perm)
        else:
            best_miss = min(best_miss, dist)
    if members and np.isfinite(best_miss) and best_miss < margin_factor * match_tol:
        raise MathInconsistencyError(
            f"stabilizer decision margin too thin: nearest non-member at {best_miss:.2e}"
        )

    member_set = set(members)
    if tuple(range(6)) not in member_set:
        raise MathInconsistencyError("stabilizer does not contain the identity")
    for p in members:
        if _inverse(p) not in member_set:
            raise MathInconsistencyError("stabilizer not closed under inversion")
        for q in members:
            if _compose(p, q) not in member_set:
                raise MathInconsistencyError("stabilizer not closed under composition")

    realizations: dict[Permutation, tuple[np.ndarray, np.ndarray]] = {}
    check = Tolerances(tol.rank_rel, max(tol.eq_rel, 1e-6), tol.psd_slack)
    for perm in members:
        a = four_point_map([sextet[k].a for k in range(4)], [sextet[perm[k]].a for k in range(4)], tol)
        b = four_point_map([sextet[k].b for k in range(4)], [sextet[perm[k]].b for k in range(4)], tol)
        for k in range(6):
            if not (
                projectively_equal(a @ sextet[k].a, sextet[perm[k]].a, check)
                and projectively_equal(b @ sextet[k].b, sextet[perm[k]].b, check)
            ):
                raise MathInconsistencyError(
                    f"realisation of {cycle_notation(perm)} fails on point {k}"
                )
        realizations[perm] = (a, b)

    members.sort()
    return StabilizerGroup(elements=tuple(members), realizations=realizations)


def verify_symmetry_commutes(rho, a, b, rel_tol: float = 1e-8) -> bool:
    """Whether (a x b) rho (a x b)^dag equals rho up to a positive scalar."""
    rho = np.asarray(rho, dtype=complex)
    n = np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    image = n @ rho @ n.conj().T
    denom = float(np.vdot(rho, rho).real)
    if denom == 0.0:
        raise ValidationError("zero state")
    c = np.vdot(rho, image).real / denom
    if c <= 0.0:
        return False
    return bool(np.linalg.norm(image - c * rho) <= rel_tol * np.linalg.norm(rho))
