"""Rank-4 PPT entangled states of two qutrits.

Every rank-4 state factors as rho = C^dag C with C = [C0 C1 C2] built
from three 4x3 blocks, rho = sum_{ij} |i><j| (x) Ci^dag Cj.  A concrete
4-parameter block family (real a != 0, positive b, c, d) produces states
invariant under partial transposition whose kernels contain exactly six
product states: |00>, |11>, |22> and three states psi(z_i) built from
the roots of an explicit real cubic.  Conversely every rank-4 PPT
entangled state is, up to normalisation, an invertible local image of
the projector complementary to a UPB, and the reconstruction pipeline
recovers that presentation: kernel products -> quintuple invariants ->
symbol -> repair permutation -> family angles -> one-sided maps ->
rebuilt state, accepted only if the rebuild matches to high precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    KernelCountError,
    MathInconsistencyError,
    ReconstructionResidualError,
    SextetPositionError,
    SymbolError,
    ValidationError,
)
from .invariants import invariants, p_equivalent
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    is_hermitian,
    is_psd,
    kernel_basis,
    numeric_rank,
    partial_transpose,
    range_basis,
)
from .segre import ProductVector, general_position, rank_one_factor
from .subspace import DEFAULT_SEARCH, SearchConfig, product_states_in_subspace, range_has_product_state
from .upb import angles_from_invariants, apply_permutation, symbol, table1_lookup, upb_from_angles

__all__ = [
    "BlockState",
    "CanonicalParams",
    "ReconstructionResult",
    "state_from_blocks",
    "canonical_blocks",
    "cubic_roots",
    "kernel_product_matrix",
    "kernel_sextet",
    "projector_state",
    "is_pptes_rank4",
    "pt_rank",
    "is_symmetric_range",
    "kernel_products",
    "state_from_kernel_quintuple",
    "reconstruct",
    "tiles_state",
    "pyramid_state",
]


@dataclass(frozen=True)
class BlockState:
    """Three 4x3 blocks presenting a rank <= 4 two-qutrit state."""

    c0: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self) -> None:
        for name in ("c0", "c1", "c2"):
            m = np.asarray(getattr(self, name), dtype=complex)
            if m.shape != (4, 3):
                raise ValidationError(f"block {name} must be 4x3")
            object.__setattr__(self, name, m)

    @property
    def stacked(self) -> np.ndarray:
        return np.hstack([self.c0, self.c1, self.c2])


@dataclass(frozen=True)
class CanonicalParams:
    """Parameters of the transpose-invariant block family; a real nonzero, b,c,d > 0."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        if self.a == 0.0:
            raise ValidationError("parameter a must be nonzero")
        if min(self.b, self.c, self.d) <= 0.0:
            raise ValidationError("parameters b, c, d must be positive")


@dataclass(frozen=True)
class ReconstructionResult:
    upb: list[ProductVector]
    a: np.ndarray
    b: np.ndarray
    residual: float


def state_from_blocks(blocks: BlockState) -> np.ndarray:
    c = blocks.stacked
    return c.conj().T @ c


def canonical_blocks(p: CanonicalParams) -> BlockState:
    a, b, c, d = p.a, p.b, p.c, p.d
    c0 = np.array([[0, a, b], [0, 0, 1], [0, 0, 0], [0, 0, 0]], dtype=complex)
    c1 = np.array([[0, 0, 0], [0, 0, c], [0, 0, 1], [1, 0, -1 / d]], dtype=complex)
    c2 = np.array([[0, -1 / b, 0], [0, 1, 0], [1, -c, 0], [d, 0, 0]], dtype=complex)
    return BlockState(c0, c1, c2)


def cubic_roots(p: CanonicalParams) -> tuple[float, float, float]:
    """The three real roots of the kernel cubic, ordered by the bracket layout.

    z1 lies in (0, c/(1+c^2)), z2 in (c/(1+c^2), (1+d^2)/c); z3 is
    negative for a > 0 and exceeds (1+d^2)/c for a < 0.
    """
    a, b, c, d = p.a, p.b, p.c, p.d
    b2, c2, d2 = b * b, c * c, d * d
    k3 = -a * b * c * (1 + c2)
    k2 = a * b * (c2 + (1 + d2) * (1 + c2)) - d * c * (1 + b2 + b2 * c2)
    k1 = -a * b * c * (1 + d2) + d * (b2 * c2 + 1 + b2 + b2 * c2)
    k0 = -d * b2 * c
    roots = np.roots([k3, k2, k1, k0])
    if np.abs(roots.imag).max() > 1e-8 * max(1.0, np.abs(roots).max()):
        raise MathInconsistencyError("kernel cubic produced non-real roots")
    r = np.sort(roots.real)
    lo, hi = c / (1 + c2), (1 + d2) / c
    z1 = [z for z in r if 0 < z < lo]
    z2 = [z for z in r if lo < z < hi]
    z3 = [z for z in r if z < 0 or z > hi]
    if len(z1) != 1 or len(z2) != 1 or len(z3) != 1:
        raise MathInconsistencyError("kernel cubic roots escaped their brackets")
    return z1[0], z2[0], z3[0]


def kernel_product_matrix(p: CanonicalParams, z: float) -> np.ndarray:
    """The rank-1 kernel matrix attached to a root z of the cubic."""
    a, b, c, d = p.a, p.b, p.c, p.d
    t = (1 + b * b + b * b * c * c) * z - b * b * c
    return np.array(
        [
            [t / (a * b * z), t / (a * b), c - (1 + c * c) * z],
            [(c * z - 1 - d * d) / d, z * (c * z - 1 - d * d) / d, c * z - 1],
            [1, z, d * (c * z - 1) / (c * z - 1 - d * d)],
        ],
        dtype=complex,
    )


def kernel_sextet(p: CanonicalParams, tol: Tolerances = DEFAULT_TOL) -> list[ProductVector]:
    """The six kernel product states of the canonical-family state.

    Ordered as |00>, |11>, |22>, psi(z1), psi(z2), psi(z3).
    """
    e = np.eye(3, dtype=complex)
    out = [ProductVector(e[i], e[i]) for i in range(3)]
    for z in cubic_roots(p):
        m = kernel_product_matrix(p, z)
        pv = rank_one_factor(m, tol)
        if pv is None:
            raise MathInconsistencyError("kernel matrix at a cubic root is not rank 1")
        out.append(pv)
    return out


def projector_state(quintuple: list[ProductVector], tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Trace-1 projector complementary to an orthonormal UPB quintuple."""
    vs = np.array([p.vec9 for p in quintuple])
    gram = vs.conj() @ vs.T
    if np.abs(gram - np.eye(len(quintuple))).max() > tol.eq_rel:
        raise ValidationError("projector_state expects an orthonormal quintuple")
    return (np.eye(9) - vs.T @ vs.conj()) / 4.0


def pt_rank(rho, tol: Tolerances = DEFAULT_TOL) -> int:
    return numeric_rank(partial_transpose(rho), tol)


def is_symmetric_range(rho, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the range lies inside the symmetric (exchange-invariant) subspace."""
    rho = np.asarray(rho, dtype=complex)
    sym = []
    for i in range(3):
        v = np.zeros(9, dtype=complex)
        v[4 * i] = 1.0
        sym.append(v)
    for i in range(3):
        for j in range(i + 1, 3):
            v = np.zeros(9, dtype=complex)
            v[3 * i + j] = v[3 * j + i] = 1.0 / np.sqrt(2)
            sym.append(v)
    s = np.array(sym)
    proj = s.T @ s.conj()
    basis = range_basis(rho, tol)
    resid = basis - basis @ proj.T
    return float(np.abs(resid).max()) <= tol.eq_rel


def is_pptes_rank4(
    rho,
    cfg: SearchConfig = DEFAULT_SEARCH,
    tol: Tolerances = DEFAULT_TOL,
) -> bool:
    """PPT-entanglement test for rank-4 states: PPT and product-free range."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (9, 9) or not is_hermitian(rho, tol) or not is_psd(rho, tol):
        raise ValidationError("expected a Hermitian PSD 9x9 state")
    if numeric_rank(rho, tol) != 4:
        return False
    if not is_psd(partial_transpose(rho), tol):
        return False
    return not range_has_product_state(rho, cfg, tol)


def kernel_products(
    rho,
    cfg: SearchConfig = DEFAULT_SEARCH,
    tol: Tolerances = DEFAULT_TOL,
) -> list[ProductVector]:
    """Product states in the kernel of a state (deterministic gauge order)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (9, 9):
        raise ValidationError("expected a 9x9 state")
    basis = kernel_basis(rho, tol)
    return product_states_in_subspace(basis, cfg, tol)


def state_from_kernel_quintuple(
    quintuple: list[ProductVector],
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[np.ndarray, ReconstructionResult]:
    """The unique PPT entangled state whose kernel holds the given quintuple.

    The quintuple must be five of the six product states of a UPB-type
    5-dimensional span.  Returns the trace-1 state together with the
    recovered UPB and the one-sided maps carrying it onto the input.
    """
    s = invariants(quintuple, tol)
    sym = symbol(s, tol)
    if sym is None:
        raise SymbolError("kernel quintuple invariants are not real")
    sigma = table1_lookup(sym)
    if sigma is None:
        raise SymbolError(f"kernel quintuple symbol {sym!r} is not of UPB type")
    ordered = apply_permutation(quintuple, sigma)
    angles = angles_from_invariants(invariants(ordered, tol), tol)
    upb = upb_from_angles(angles)
    a = p_equivalent([p.a for p in upb], [p.a for p in ordered], tol)
    b = p_equivalent([p.b for p in upb], [p.b for p in ordered], tol)
    if a is None or b is None:
        raise MathInconsistencyError(
            "angle solution failed to map onto the kernel quintuple"
        )
    pi = projector_state(upb, tol)
    n = np.kron(a, b)
    n_inv = np.linalg.inv(n)
    sigma_state = n_inv.conj().T @ pi @ n_inv
    sigma_state = (sigma_state + sigma_state.conj().T) / 2
    sigma_state /= sigma_state.trace().real
    return sigma_state, ReconstructionResult(upb=upb, a=a, b=b, residual=0.0)


def _pick_quintuple(points: list[ProductVector], tol: Tolerances) -> list[ProductVector]:
    """Deterministic quintuple choice from the kernel sextet.

    Any five of the six points work; when one of the leave-one-out
    choices is mutually orthogonal it is the image of an orthonormal
    UPB under local unitaries, so preferring it makes the recovered
    maps unitary up to scale.  Otherwise the first five (in gauge
    order) are used.
    """
    for drop in range(5, -1, -1):
        quintuple = [p for i, p in enumerate(points) if i != drop]
        vs = np.array([p.vec9 for p in quintuple])
        if np.abs(vs.conj() @ vs.T - np.eye(5)).max() <= 1e3 * tol.eq_rel:
            return quintuple
    return points[:5]


def reconstruct(
    rho,
    cfg: SearchConfig = DEFAULT_SEARCH,
    tol: Tolerances = DEFAULT_TOL,
    residual_tol: float = 1e-6,
) -> ReconstructionResult:
    """Present a rank-4 PPT entangled state as a local image of a UPB projector.

    Raises a distinct error at each stage when the input is not of that
    kind: wrong kernel product count, products not in general position,
    non-UPB symbol, or a rebuild residual past tolerance (the latter
    contradicts same-range uniqueness and indicates an inconsistency).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (9, 9) or not is_hermitian(rho, tol) or not is_psd(rho, tol):
        raise ValidationError("expected a Hermitian PSD 9x9 state")
    if numeric_rank(rho, tol) != 4:
        raise ValidationError("reconstruction requires a rank-4 state")
    points = kernel_products(rho, cfg, tol)
    if len(points) != 6:
        raise KernelCountError(
            f"kernel contains {len(points)} product states, expected 6"
        )
    if not general_position(points, "both", tol):
        raise SextetPositionError("kernel product states are not in general position")
    sigma_state, result = state_from_kernel_quintuple(_pick_quintuple(points, tol), tol)
    rho_n = rho / rho.trace().real
    residual = float(np.linalg.norm(sigma_state - rho_n))
    if residual > residual_tol:
        raise ReconstructionResidualError(
            f"rebuilt state differs from the input by {residual:.3e}"
        )
    return ReconstructionResult(
        upb=result.upb, a=result.a, b=result.b, residual=residual
    )


def tiles_state() -> np.ndarray:
    """The symmetric realisation of the Tiles state (trace 1), cube-root-of-3 blocks."""
    t = 3.0 ** (1.0 / 3.0)
    c0 = np.array([[t, 0, 0], [0, 0, 1], [0, 0, 0], [0, t * t, 0]], dtype=complex)
    c1 = np.array([[0, 0, t], [t * t, 0, 0], [0, 1, 0], [0, 0, 0]], dtype=complex)
    c2 = np.array([[0, t, 0], [0, 0, 0], [0, 0, t * t], [1, 0, 0]], dtype=complex)
    rho = state_from_blocks(BlockState(c0, c1, c2))
    return rho / rho.trace().real


def tiles_realization_sextet() -> list[ProductVector]:
    """Six kernel product states of the symmetric Tiles realisation."""
    t = 3.0 ** (1.0 / 3.0)
    u = np.array(
        [
            [t, 0, 1, t, 0, -1],
            [1, t, 0, -1, t, 0],
            [0, 1, t, 0, -1, t],
        ],
        dtype=complex,
    )
    v = np.array(
        [
            [-1, 0, t, 1, 0, t],
            [0, t, -1, 0, t, 1],
            [t, -1, 0, t, 1, 0],
        ],
        dtype=complex,
    )
    return [ProductVector(u[:, k], v[:, k]) for k in range(6)]


def pyramid_state(tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The PPT entangled state whose kernel is the Pyramid-equivalent span."""
    from .upb import pyramid_sextet

    sextet = pyramid_sextet()
    state, _ = state_from_kernel_quintuple(sextet[:5], tol)
    return state
