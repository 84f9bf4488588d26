"""Product states inside small subspaces of the two-qutrit space.

A product vector |a,b> lies in a subspace V iff <w|a,b> = 0 for every w
in a basis of the orthogonal complement.  Writing each w as a 3x3 matrix
W and M = conj(W), the constraints read a^T M_i b = 0; for fixed a they
stack into a matrix K(a) (one row per constraint) and a nonzero b exists
iff rank K(a) <= 2, i.e. iff all 3x3 minors of K(a) vanish.  The minors
are homogeneous cubics in a, so the search is a small polynomial system
on the projective plane, solved in three stages:

1. exploration: multi-start damped Gauss-Newton over the affine charts
   a_c = 1 (c = 0, 1, 2), with the minors held as exact bivariate cubic
   coefficient tables (interpolated once on a roots-of-unity grid, so
   values and derivatives are exact polynomial algebra);
2. refinement: candidates are grouped coarsely and re-solved by damped
   Newton; where the Jacobian is rank-deficient the point is a multiple
   intersection point whose residual is flat (~ distance^multiplicity),
   so plain iteration scatters approximations along a curve instead of
   localising the centre.  Those clusters are collapsed by following the
   flat directions and reading the root offset from the leading Taylor
   coefficients of the exact polynomial system;
3. reporting: alternating null-vector polish of the bilinear residual,
   projective deduplication, deterministic ordering.

For a 5-dimensional subspace a finite intersection has at most six
points; more than six distinct clusters therefore raises
:class:`BezoutViolationError` (the subspace meets the product-state
variety in a curve).  Points with a rank-deficient root Jacobian, and
clusters closer than 100x the dedupe radius, are flagged with
:class:`MultiplicityWarning`.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BezoutViolationError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    orthonormal_complement,
    orthonormalize_rows,
    range_basis,
)
from .segre import ProductVector

__all__ = [
    "SearchConfig",
    "MultiplicityWarning",
    "product_states_in_subspace",
    "range_has_product_state",
]


class MultiplicityWarning(UserWarning):
    """A reported point is probably a multiple intersection point."""


@dataclass(frozen=True)
class SearchConfig:
    grid_per_chart: int = 24
    newton_iters: int = 60
    residual_tol: float = 1e-10
    dedupe_tol: float = 1e-6
    restarts: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.grid_per_chart, self.newton_iters, self.restarts) <= 0:
            raise ValidationError("search configuration counts must be positive")
        if min(self.residual_tol, self.dedupe_tol) <= 0:
            raise ValidationError("search tolerances must be positive")


DEFAULT_SEARCH = SearchConfig()

_DFT_NODES = np.array([1.0, 1.0j, -1.0, -1.0j])
_DFT_INV = np.array(
    [[w ** (-k) for w in _DFT_NODES] for k in range(4)], dtype=complex
) / 4.0  # row k recovers the coefficient of t^k


def _det3(rows: np.ndarray) -> np.ndarray:
    a, b, c = rows[..., 0, :], rows[..., 1, :], rows[..., 2, :]
    return (
        a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
        - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
        + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0])
    )


def _chart_point(chart: int, u: np.ndarray) -> np.ndarray:
    """Projective representative with coordinate ``chart`` pinned to 1."""
    out = np.empty(u.shape[:-1] + (3,), dtype=complex)
    others = [i for i in range(3) if i != chart]
    out[..., chart] = 1.0
    out[..., others[0]] = u[..., 0]
    out[..., others[1]] = u[..., 1]
    return out


def _chart_cubics(m_stack: np.ndarray, chart: int) -> np.ndarray:
    """Exact coefficient tables (nm, 4, 4) of the minors on one chart.

    Interpolation on the 4x4 roots-of-unity grid is exact for total
    degree 3; each minor is scaled to unit maximal coefficient so that
    residuals are comparable across problems.  Identically vanishing
    minors come out as all-zero rows.
    """
    nc = m_stack.shape[0]
    triples = list(itertools.combinations(range(nc), 3))
    g0, g1 = np.meshgrid(_DFT_NODES, _DFT_NODES, indexing="ij")
    u_grid = np.stack([g0.ravel(), g1.ravel()], axis=-1)
    a = _chart_point(chart, u_grid)
    k = np.einsum("nj,ijk->nik", a, m_stack)
    vals = np.stack([_det3(k[:, t, :]) for t in triples], axis=0).reshape(len(triples), 4, 4)
    coeffs = np.einsum("ki,lj,mij->mkl", _DFT_INV, _DFT_INV, vals)
    norms = np.abs(coeffs).max(axis=(1, 2))
    top = norms.max() if norms.size else 0.0
    keep = norms > 1e-12 * max(top, 1e-300)
    out = np.zeros_like(coeffs)
    out[keep] = coeffs[keep] / norms[keep, None, None]
    return out


class _PolyMap:
    """A polynomial map C^k -> C^n stored as dense coefficient tables.

    ``tables`` has shape (n_out, d_1, ..., d_k): entry [m, e_1, ..., e_k]
    multiplies x_1^{e_1} ... x_k^{e_k} in component m.  Differentiation
    is a coefficient shift, so Newton iterates on exact data.
    """

    def __init__(self, tables: np.ndarray):
        self.tables = tables
        self.n_out = tables.shape[0]
        self.dims = tables.shape[1:]
        self.n_in = len(self.dims)
        self._shifted: dict[int, "_PolyMap"] = {}

    def __call__(self, x: np.ndarray) -> np.ndarray:
        t = self.tables
        for i, d in enumerate(self.dims):
            t = np.tensordot(t, x[i] ** np.arange(d), axes=([1], [0]))
        return t

    def shift(self, axis: int) -> "_PolyMap":
        pm = self._shifted.get(axis)
        if pm is None:
            t = np.moveaxis(self.tables, axis + 1, -1)
            d = t.shape[-1]
            nt = np.zeros_like(t)
            nt[..., : d - 1] = t[..., 1:] * np.arange(1, d)
            pm = _PolyMap(np.moveaxis(nt, -1, axis + 1))
            self._shifted[axis] = pm
        return pm

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return np.stack([self.shift(i)(x) for i in range(self.n_in)], axis=-1)


def _gn_batch(pm_tables: np.ndarray, u0: np.ndarray, iters: int) -> np.ndarray:
    """Batched damped Gauss-Newton on one chart's cubic tables."""

    def powers(u: np.ndarray) -> np.ndarray:
        p = np.empty(u.shape[:-1] + (2, 4), dtype=complex)
        p[..., 0] = 1.0
        p[..., 1] = u
        p[..., 2] = u * u
        p[..., 3] = p[..., 2] * u
        return p

    def shifted(c: np.ndarray, axis: int) -> np.ndarray:
        d = np.zeros_like(c)
        deg = np.arange(1, 4)
        if axis == 0:
            d[:, :3, :] = c[:, 1:, :] * deg[None, :, None]
        else:
            d[:, :, :3] = c[:, :, 1:] * deg[None, None, :]
        return d

    c = pm_tables
    c0, c1 = shifted(c, 0), shifted(c, 1)

    def val(tabs: np.ndarray, u: np.ndarray) -> np.ndarray:
        p = powers(u)
        return np.einsum("mij,ni,nj->nm", tabs, p[:, 0, :], p[:, 1, :])

    u = u0.copy()
    best = np.abs(val(c, u)).max(axis=1) / (1.0 + np.abs(u).max(axis=1)) ** 3
    alive = np.ones(u.shape[0], dtype=bool)
    eye2 = np.eye(2)
    for _ in range(iters):
        if not alive.any():
            break
        f = val(c, u)
        jac = np.stack([val(c0, u), val(c1, u)], axis=-1)
        h = np.einsum("nmi,nmj->nij", jac.conj(), jac)
        g = -np.einsum("nmi,nm->ni", jac.conj(), f)
        lam = 1e-14 * np.maximum(np.abs(h[:, 0, 0]), np.abs(h[:, 1, 1])) + 1e-300
        h = h + lam[:, None, None] * eye2
        det = h[:, 0, 0] * h[:, 1, 1] - h[:, 0, 1] * h[:, 1, 0]
        step = np.empty_like(u)
        step[:, 0] = (h[:, 1, 1] * g[:, 0] - h[:, 0, 1] * g[:, 1]) / det
        step[:, 1] = (h[:, 0, 0] * g[:, 1] - h[:, 1, 0] * g[:, 0]) / det
        step[~alive] = 0.0
        factor = np.ones(u.shape[0])
        accepted = np.zeros(u.shape[0], dtype=bool)
        trial = u.copy()
        cur = best.copy()
        for _half in range(9):
            cand = u + factor[:, None] * step
            res_c = np.abs(val(c, cand)).max(axis=1) / (1.0 + np.abs(cand).max(axis=1)) ** 3
            better = alive & ~accepted & (res_c < cur)
            trial[better] = cand[better]
            best[better] = res_c[better]
            accepted |= better
            factor[~accepted] *= 0.5
            if accepted[alive].all():
                break
        u = trial
        alive &= accepted & (np.abs(u).max(axis=1) < 1e8)
        alive &= best > 1e-15
    return u


def _gn_poly(pm: _PolyMap, x0: np.ndarray, iters: int) -> np.ndarray:
    """Damped Gauss-Newton on a polynomial map, one start."""
    x = x0.copy()
    fx = pm(x)
    best = float(np.abs(fx).max())
    for _ in range(iters):
        jac = pm.jacobian(x)
        step, *_ = np.linalg.lstsq(jac, -fx, rcond=None)
        improved = False
        factor = 1.0
        for _half in range(10):
            cand = x + factor * step
            fc = pm(cand)
            res = float(np.abs(fc).max())
            if res < best:
                x, fx, best = cand, fc, res
                improved = True
                break
            factor *= 0.5
        if not improved or best < 1e-15:
            break
    return x


def _taylor_root_shift(samples: np.ndarray, radius: float) -> complex | None:
    """Centre offset of a multiple root from circle samples of an analytic map.

    With psi(s) ~ c (s - s*)^mu near the centre and |s*| << radius, the
    scaled Taylor coefficients g_k = c_k radius^k peak sharply at k = mu,
    and s* = -radius g_{mu-1} / (mu g_mu).  Returns None when the circle
    centre value dominates (no root nearby) or everything is noise.
    """
    n = samples.size
    scaled = np.fft.fft(samples) / n  # g_k = c_k * radius^k, aliased above n/2
    mag = np.abs(scaled[: n // 2])
    floor = 1e-12 * max(np.abs(samples).max(), 1e-300)
    mu = int(np.argmax(mag[1:])) + 1
    if mag[mu] <= floor:
        return None
    if mag[0] > mag[mu]:
        return None
    return -radius * scaled[mu - 1] / (mu * scaled[mu])


def _collapse_chain(pm: _PolyMap, x: np.ndarray, rng: np.random.Generator,
                    radius: float = 0.1, nodes: int = 32, rounds: int = 10) -> np.ndarray:
    """Locate the centre of a breadth-1 multiple root (rank-1 Jacobian).

    The solution cluster sits on a curve along the weak direction where
    the residual is flat (~ distance^multiplicity); plain Newton cannot
    localise the centre.  We follow the curve by a 1-D Newton correction
    along the strong direction, expand a generic residual combination in
    the curve parameter, and recentre on the multiple root.
    """
    r = rng.standard_normal(pm.n_out) + 1j * rng.standard_normal(pm.n_out)
    r /= np.linalg.norm(r)

    def track(p0: np.ndarray, strong_in: np.ndarray, strong_out: np.ndarray) -> np.ndarray:
        p = p0.copy()
        for _ in range(30):
            g = strong_out.conj() @ pm(p)
            if abs(g) < 1e-15:
                break
            slope = strong_out.conj() @ pm.jacobian(p) @ strong_in
            if abs(slope) < 1e-12:
                break
            p = p - (g / slope) * strong_in
        return p

    for _ in range(rounds):
        jac = pm.jacobian(x)
        u_svd, s, vh = np.linalg.svd(jac)
        if s[0] == 0.0 or s[1] > 1e-4 * max(s[0], 1.0):
            break
        strong_in, weak_in = vh[0].conj(), vh[1].conj()
        strong_out = u_svd[:, 0]
        ws = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
        samples = np.array(
            [r.conj() @ pm(track(x + sk * weak_in, strong_in, strong_out)) for sk in ws]
        )
        shift = _taylor_root_shift(samples, radius)
        if shift is None:
            break
        if abs(shift) > 0.7 * radius and radius < 0.5:
            # the root sits near or outside the sampling circle: widen it
            radius = min(2 * radius, 0.5)
        if abs(shift) > radius:
            shift *= radius / abs(shift)
        x = track(x + shift * weak_in, strong_in, strong_out)
        if abs(shift) < 1e-13:
            break
    return x


def _collapse_fat(pm: _PolyMap, x: np.ndarray, rng: np.random.Generator,
                  radius: float = 0.1, nodes: int = 32, rounds: int = 10) -> np.ndarray:
    """Locate the centre of a rank-0-Jacobian (breadth-2) multiple root.

    Both directions are flat, so two independent 1-D Taylor expansions
    of a generic residual combination recover the offset per coordinate.
    """
    r = rng.standard_normal(pm.n_out) + 1j * rng.standard_normal(pm.n_out)
    r /= np.linalg.norm(r)
    for _ in range(rounds):
        moved = 0.0
        ws = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
        for axis in (0, 1):
            direction = np.zeros(2, dtype=complex)
            direction[axis] = 1.0
            samples = np.array([r.conj() @ pm(x + sk * direction) for sk in ws])
            shift = _taylor_root_shift(samples, radius)
            if shift is None:
                continue
            if abs(shift) > 0.7 * radius and radius < 0.5:
                radius = min(2 * radius, 0.5)
            if abs(shift) > radius:
                shift *= radius / abs(shift)
            x = x + shift * direction
            moved = max(moved, abs(shift))
        if moved < 1e-13:
            break
    return x


def _sharpen(tables: np.ndarray, u0: np.ndarray, rng: np.random.Generator,
             iters: int = 40) -> tuple[np.ndarray, bool]:
    """Refine a candidate root; returns the chart point and a multiplicity flag.

    Regular roots are finished by damped Gauss-Newton; rank-deficient
    Jacobians indicate a multiple intersection point whose centre is
    recovered by the matching collapse routine.
    """
    pm = _PolyMap(tables)
    x = _gn_poly(pm, u0.astype(complex), iters)
    jac = pm.jacobian(x)
    s = np.linalg.svd(jac, compute_uv=False)
    if s[0] == 0.0:
        return _collapse_fat(pm, x, rng), True
    if s[1] > 1e-4 * max(s[0], 1.0):
        return x, False
    if s[0] > 1e-4:
        return _collapse_chain(pm, x, rng), True
    return _collapse_fat(pm, x, rng), True


def _start_points(cfg: SearchConfig) -> np.ndarray:
    """Deterministic grid plus seeded random restarts (shared by every chart)."""
    grid_rng = np.random.default_rng(178000979)
    rng = np.random.default_rng(cfg.seed)
    pts = [np.zeros(2, dtype=complex)]
    for _ in range(cfg.grid_per_chart - 1):
        r = np.exp(grid_rng.normal(0.0, 1.2, 2))
        ph = grid_rng.uniform(0, 2 * np.pi, 2)
        pts.append(r * np.exp(1j * ph))
    for _ in range(cfg.restarts):
        r = np.exp(rng.normal(0.0, 1.5, 2))
        ph = rng.uniform(0, 2 * np.pi, 2)
        pts.append(r * np.exp(1j * ph))
    return np.array(pts)


def _null_vector(m: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(m)
    return vh[-1].conj()


def _pair_polish(m_stack: np.ndarray, a: np.ndarray, iters: int = 60) -> tuple[np.ndarray, np.ndarray, float]:
    """Alternating null-vector refinement of the bilinear residual."""
    a = a / np.linalg.norm(a)
    b = _null_vector(np.einsum("j,ijk->ik", a, m_stack))
    best_res = np.inf
    best = (a, b)
    flat = 0
    for _ in range(iters):
        k = np.einsum("j,ijk->ik", a, m_stack)
        b = _null_vector(k)
        l = np.einsum("ijk,k->ij", m_stack, b)
        a = _null_vector(l)
        res = float(np.abs(np.einsum("j,ijk,k->i", a, m_stack, b)).max())
        if res < best_res:
            best_res, best = res, (a, b)
            flat = 0
        else:
            flat += 1
        if best_res < 1e-16 or flat >= 3:
            break
    return best[0], best[1], best_res


def _projective_distance(p: ProductVector, q: ProductVector) -> float:
    da = 1.0 - abs(np.vdot(p.a, q.a))
    db = 1.0 - abs(np.vdot(p.b, q.b))
    return max(da, db)


def product_states_in_subspace(
    basis,
    cfg: SearchConfig = DEFAULT_SEARCH,
    tol: Tolerances = DEFAULT_TOL,
) -> list[ProductVector]:
    """All product states (up to scale) in the span of the given 9-vectors.

    ``basis`` holds the spanning vectors (rows or list of 9-vectors); its
    dimension d must leave at least four orthogonality constraints
    (9 - d >= 4).  Points are reported once per projective cluster in a
    deterministic gauge order; every reported point satisfies
    max_i |<w_i|a,b>| <= cfg.residual_tol on unit vectors.
    """
    rows = orthonormalize_rows(np.atleast_2d(np.asarray(basis, dtype=complex)), tol)
    d = rows.shape[0]
    if rows.shape[1] != 9:
        raise ValidationError("basis vectors must live in C^9")
    if 9 - d < 4:
        raise ValidationError("subspace leaves fewer than four constraints")
    comp = orthonormal_complement(rows, tol)
    m_stack = comp.conj().reshape(-1, 3, 3)

    chart_tables = [_chart_cubics(m_stack, c) for c in range(3)]
    if all(np.abs(t).max() == 0.0 for t in chart_tables):
        # rank K(a) <= 2 identically: a product state through every a
        if d == 5:
            raise BezoutViolationError(
                "the minor system vanishes identically: the subspace meets the "
                "product-state variety in a positive-dimensional set"
            )
        a = np.array([1.0, 0.3, 0.7], dtype=complex)
        a /= np.linalg.norm(a)
        b = _null_vector(np.einsum("j,ijk->ik", a, m_stack))
        return [ProductVector(a, b)]

    starts = _start_points(cfg)
    rng = np.random.default_rng(cfg.seed + 1)

    # exploration on the three affine charts
    cand_a: list[np.ndarray] = []
    for c in range(3):
        u = _gn_batch(chart_tables[c], starts, cfg.newton_iters)
        res = np.abs(
            np.einsum(
                "mij,ni,nj->nm",
                chart_tables[c],
                np.power(u[:, :1], np.arange(4)[None, :]),
                np.power(u[:, 1:], np.arange(4)[None, :]),
            )
        ).max(axis=1) / (1.0 + np.abs(u).max(axis=1)) ** 3
        keep = (res < 1e-6) & (np.abs(u).max(axis=1) < 1e6)
        a = _chart_point(c, u[keep])
        if a.size:
            cand_a.append(a / np.linalg.norm(a, axis=1)[:, None])
    if not cand_a:
        return []
    cand = np.vstack(cand_a)

    # drop machine-identical duplicates, then cap the refinement workload
    # by farthest-point selection: every root cluster keeps at least one
    # representative even when all the roots huddle in a small patch
    # (a badly conditioned local map packs the six points together)
    distinct: list[np.ndarray] = []
    for a in cand:
        if all(1.0 - abs(np.vdot(a, b)) > 1e-9 for b in distinct):
            distinct.append(a)
    budget = 48
    if len(distinct) > budget:
        stack = np.array(distinct)
        chosen = [0]
        dist = 1.0 - np.abs(stack.conj() @ stack[0])
        while len(chosen) < budget:
            nxt = int(np.argmax(dist))
            chosen.append(nxt)
            dist = np.minimum(dist, 1.0 - np.abs(stack.conj() @ stack[nxt]))
        distinct = [stack[i] for i in chosen]

    # multiplicity-aware refinement in the chart of the largest coordinate
    refined: list[tuple[np.ndarray, bool]] = []
    for a in distinct:
        c = int(np.argmax(np.abs(a)))
        others = [i for i in range(3) if i != c]
        u0 = np.array([a[others[0]] / a[c], a[others[1]] / a[c]])
        u_ref, multiple = _sharpen(chart_tables[c], u0, rng)
        a_ref = _chart_point(c, u_ref)
        n = np.linalg.norm(a_ref)
        if np.isfinite(n) and n > 0.0:
            refined.append((a_ref / n, multiple))

    # bilinear polish, residual filter, projective dedupe
    found: list[tuple[ProductVector, float, bool]] = []
    for a, multiple in refined:
        a_p, b_p, r = _pair_polish(m_stack, a)
        if r > cfg.residual_tol:
            continue
        pv = ProductVector(a_p, b_p)
        for i, (other, r_other, m_other) in enumerate(found):
            if _projective_distance(pv, other) <= cfg.dedupe_tol:
                if r < r_other:
                    found[i] = (pv, r, m_other or multiple)
                else:
                    found[i] = (other, r_other, m_other or multiple)
                break
        else:
            found.append((pv, r, multiple))

    # Around a multiplicity-mu point the bilinear residual only grows as
    # distance^mu, so low-residual stragglers can survive at visible
    # distances from the collapsed centre.  Two nearby clusters are the
    # same geometric root iff the flat set connects them: the polished
    # midpoint then remains a low-residual point sitting between them,
    # whereas between genuinely distinct roots it falls onto one of them.
    def _same_flat_root(p1: ProductVector, p2: ProductVector) -> bool:
        sep = _projective_distance(p1, p2)
        if sep <= cfg.dedupe_tol:
            return True
        a2 = p2.a * np.exp(1j * np.angle(np.vdot(p2.a, p1.a)))
        mid = p1.a + a2
        n = np.linalg.norm(mid)
        if n == 0.0:
            return False
        am, bm, rm = _pair_polish(m_stack, mid / n)
        if rm > cfg.residual_tol:
            return False
        pm = ProductVector(am, bm)
        return (
            _projective_distance(pm, p1) > sep / 8
            and _projective_distance(pm, p2) > sep / 8
        )

    absorb = 1e-2
    survivors: list[tuple[ProductVector, float, bool]] = []
    for pv, r, multiple in sorted(found, key=lambda t: (not t[2], t[1])):
        host = None
        for other, _, m_other in survivors:
            if (multiple or m_other) and _projective_distance(pv, other) <= absorb:
                if _same_flat_root(pv, other):
                    host = other
                    break
        if host is None:
            survivors.append((pv, r, multiple))
    found = survivors

    order = sorted(range(len(found)), key=lambda i: found[i][0].sort_key())
    points = [found[i][0] for i in order]
    for idx, i in enumerate(order):
        if found[i][2]:
            warnings.warn(
                f"point {idx} has a rank-deficient root Jacobian: probable "
                "intersection multiplicity >= 2",
                MultiplicityWarning,
                stacklevel=2,
            )
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            gap = _projective_distance(points[i], points[j])
            if gap < 100 * cfg.dedupe_tol:
                warnings.warn(
                    f"clusters {i} and {j} are only {gap:.2e} apart: "
                    "probable multiplicity-2 intersection point",
                    MultiplicityWarning,
                    stacklevel=2,
                )
    if d == 5 and len(points) > 6:
        raise BezoutViolationError(
            f"{len(points)} product-state clusters in a 5-dimensional subspace "
            "(the degree bound allows at most 6); the subspace probably meets "
            "the product-state variety in a curve"
        )
    return points


def range_has_product_state(
    rho,
    cfg: SearchConfig = DEFAULT_SEARCH,
    tol: Tolerances = DEFAULT_TOL,
) -> bool:
    """Whether the range of a rank-4 state contains any product state."""
    rho = np.asarray(rho, dtype=complex)
    basis = range_basis(rho, tol)
    if basis.shape[0] != 4:
        raise ValidationError(f"expected a rank-4 state, got rank {basis.shape[0]}")
    return len(product_states_in_subspace(basis, cfg, tol)) > 0
