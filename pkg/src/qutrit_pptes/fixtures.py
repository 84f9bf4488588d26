"""Reference 5-dimensional subspaces with known product-state counts.

Eleven rank-4 states realise every partition of 6 as the intersection
pattern of their kernel with the product-state variety; stored here as
the four range states (3x3 matrix form), the expected number of kernel
product states, and the expected points themselves.  Two further
fixtures give 5-dimensional kernels with exactly three / two product
states and a product-free orthogonal range.

Intersection multiplicities are not computed here (they require
symbolic local-ring machinery); only the geometric point counts are
verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import MathInconsistencyError
from .linalg import DEFAULT_TOL, Tolerances, orthonormal_complement
from .segre import ProductVector, rank_one_factor
from .subspace import DEFAULT_SEARCH, SearchConfig, product_states_in_subspace

__all__ = [
    "SubspaceFixture",
    "section3_fixtures",
    "lemma_fixtures",
    "fixture_to_json",
    "fixture_from_json",
    "verify_intersection_counts",
]


@dataclass(frozen=True)
class SubspaceFixture:
    name: str
    basis: tuple[np.ndarray, ...]  # 4 range states or 5 kernel states, 3x3 each
    expected_count: int
    expected_points: Optional[tuple[np.ndarray, ...]] = None
    range_product_free: bool = False

    @property
    def kernel_mode(self) -> bool:
        """True when ``basis`` spans the kernel itself (5 vectors)."""
        return len(self.basis) == 5

    def kernel_vectors(self) -> np.ndarray:
        """Rows spanning the 5-dimensional kernel."""
        flat = np.array([m.reshape(9) for m in self.basis])
        if self.kernel_mode:
            return flat
        return orthonormal_complement(flat)


def _m(rows) -> np.ndarray:
    return np.array(rows, dtype=complex)


def _ket(i: int, j: int) -> np.ndarray:
    m = np.zeros((3, 3), dtype=complex)
    m[i, j] = 1.0
    return m


def section3_fixtures() -> list[SubspaceFixture]:
    """The eleven intersection-pattern examples, ordered by point count."""
    zeta = np.exp(2j * np.pi / 3)
    xi = np.exp(2j * np.pi / 5)
    f = []

    f.append(
        SubspaceFixture(
            name="count1",
            basis=(
                _ket(1, 2),
                _ket(2, 1),
                _ket(0, 1) - _ket(1, 0) - _ket(2, 2),
                _ket(0, 2) + _ket(1, 1) - _ket(2, 0),
            ),
            expected_count=1,
            expected_points=(_ket(0, 0),),
        )
    )
    f.append(
        SubspaceFixture(
            name="count2_a",
            basis=(
                _ket(1, 2),
                _ket(0, 1) - _ket(2, 0),
                _ket(0, 2) - _ket(2, 1),
                _ket(1, 0) - _ket(2, 2),
            ),
            expected_count=2,
            expected_points=(_ket(0, 0), _ket(1, 1)),
        )
    )
    f.append(
        SubspaceFixture(
            name="count2_b",
            basis=(
                _ket(0, 1) - _ket(1, 2),
                _ket(1, 0) - _ket(2, 1),
                _ket(0, 2) - _ket(2, 0),
                _ket(2, 2),
            ),
            expected_count=2,
            expected_points=(_ket(0, 0), _ket(1, 1)),
        )
    )
    f.append(
        SubspaceFixture(
            name="count2_c",
            basis=(
                _ket(0, 2),
                _ket(0, 1) - _ket(1, 0),
                _ket(1, 1) - _ket(2, 0),
                _ket(1, 2) - _ket(2, 1),
            ),
            expected_count=2,
            expected_points=(_ket(0, 0), _ket(2, 2)),
        )
    )
    f.append(
        SubspaceFixture(
            name="count3_a",
            basis=(
                _ket(0, 2),
                _ket(2, 0),
                _ket(0, 1) - _ket(1, 2),
                _ket(1, 0) - _ket(2, 1),
            ),
            expected_count=3,
            expected_points=(_ket(0, 0), _ket(1, 1), _ket(2, 2)),
        )
    )
    f.append(
        SubspaceFixture(
            name="count3_b",
            basis=(
                _ket(2, 0),
                _ket(0, 1) - _ket(2, 2),
                _ket(0, 2) - _ket(1, 2),
                _ket(1, 0) - _ket(2, 1),
            ),
            expected_count=3,
            expected_points=(_ket(0, 0), _ket(1, 1), _ket(0, 2) + _ket(1, 2)),
        )
    )
    f.append(
        SubspaceFixture(
            name="count3_c",
            basis=(
                _ket(1, 1),
                _ket(0, 2) - _ket(1, 2),
                _ket(2, 0) - _ket(2, 1),
                _ket(0, 1) + _ket(1, 0) + _ket(2, 2),
            ),
            expected_count=3,
            expected_points=(_ket(0, 0), _ket(0, 2) + _ket(1, 2), _ket(2, 0) + _ket(2, 1)),
        )
    )
    f.append(
        SubspaceFixture(
            name="count4_a",
            basis=(
                _ket(0, 1),
                _ket(0, 2) - _ket(1, 1) + _ket(2, 0),
                _ket(1, 0) - _ket(2, 2),
                _ket(1, 2) - _ket(2, 1),
            ),
            expected_count=4,
            expected_points=(_ket(0, 0),)
            + tuple(
                _m([[0, 0, 0], [1, z, z**2], [z, z**2, 1]]) for z in (1, zeta, zeta**2)
            ),
        )
    )
    f.append(
        SubspaceFixture(
            name="count4_b",
            basis=(
                _ket(1, 0),
                _ket(0, 1) - _ket(2, 2),
                _ket(0, 2) - _ket(1, 2),
                _ket(2, 0) - _ket(2, 1),
            ),
            expected_count=4,
            expected_points=(
                _ket(0, 0),
                _ket(1, 1),
                _ket(0, 2) + _ket(1, 2),
                _ket(2, 0) + _ket(2, 1),
            ),
        )
    )
    f.append(
        SubspaceFixture(
            name="count5",
            basis=(
                _ket(0, 1) - _ket(2, 0),
                _ket(0, 2) - _ket(1, 1),
                _ket(1, 0) - _ket(2, 2),
                _ket(1, 2) - _ket(2, 1),
            ),
            expected_count=5,
            expected_points=(
                _ket(0, 0),
                _m([[1, 1, 1], [1, 1, 1], [1, 1, 1]]),
                _m([[1, 1, -1], [-1, -1, 1], [1, 1, -1]]),
                _m([[1j, -1j, 1], [-1, 1, 1j], [-1j, 1j, -1]]),
                _m([[-1j, 1j, 1], [-1, 1, -1j], [1j, -1j, -1]]),
            ),
        )
    )
    f.append(
        SubspaceFixture(
            name="count6",
            basis=(
                _ket(0, 1) - _ket(1, 2),
                _ket(0, 2) - _ket(2, 1),
                _ket(1, 0) - _ket(2, 2),
                _ket(1, 1) - _ket(2, 0),
            ),
            expected_count=6,
            expected_points=(_ket(0, 0),)
            + tuple(
                _m(
                    [
                        [1, x**4, x],
                        [x**3, x**2, x**4],
                        [x**2, x, x**3],
                    ]
                )
                for x in (xi**k for k in range(5))
            ),
        )
    )
    return f


def lemma_fixtures() -> list[SubspaceFixture]:
    """Kernels with 3 / 2 product states and product-free orthogonal range."""
    # three products, parameters a=1, b=0
    a, b = 1.0, 0.0
    three = SubspaceFixture(
        name="three_products_range_free",
        basis=(
            _ket(0, 0),
            _ket(1, 1),
            _ket(2, 2),
            _m([[0, 0, 1], [0, 0, 1], [1, 1, 0]]),
            _m([[0, a, b], [a, 0, -1 + b], [1, 0, 0]]),
        ),
        expected_count=3,
        expected_points=(_ket(0, 0), _ket(1, 1), _ket(2, 2)),
        range_product_free=True,
    )
    # two products, parameter c=1
    c = 1.0
    two = SubspaceFixture(
        name="two_products_range_free",
        basis=(
            _ket(0, 0),
            _ket(1, 1),
            _m([[0, 1, 1], [0, 0, 1], [0, 0, 1]]),
            _m([[0, 1, 1], [0, 0, 0], [1, -2 - c, -1 - c]]),
            _m([[0, c - 8 / (2 + c), c], [1, 0, 0], [0, 4 * c / (2 + c), c]]),
        ),
        expected_count=2,
        expected_points=(_ket(0, 0), _ket(1, 1)),
        range_product_free=True,
    )
    return [three, two]


def fixture_to_json(fx: SubspaceFixture) -> dict:
    """Wire form: basis as 9-vectors of [re, im] pairs, points optional."""
    from .serialize import encode_vector

    data = {
        "name": fx.name,
        "basis": [encode_vector(m.reshape(9)) for m in fx.basis],
        "expected_count": fx.expected_count,
    }
    if fx.expected_points is not None:
        data["expected_points"] = [encode_vector(m.reshape(9)) for m in fx.expected_points]
    if fx.range_product_free:
        data["range_product_free"] = True
    return data


def fixture_from_json(data: dict) -> SubspaceFixture:
    from .serialize import decode_vector

    basis = tuple(decode_vector(v, 9).reshape(3, 3) for v in data["basis"])
    if len(basis) not in (4, 5):
        raise MathInconsistencyError("fixture basis must hold 4 or 5 vectors")
    points = data.get("expected_points")
    return SubspaceFixture(
        name=str(data["name"]),
        basis=basis,
        expected_count=int(data["expected_count"]),
        expected_points=tuple(decode_vector(v, 9).reshape(3, 3) for v in points)
        if points is not None
        else None,
        range_product_free=bool(data.get("range_product_free", False)),
    )


def _match_points(
    found: Sequence[ProductVector],
    expected: Sequence[np.ndarray],
    tol: float,
) -> bool:
    """Gauge-free one-to-one matching of found points against expected matrices."""
    if len(found) != len(expected):
        return False
    used = set()
    for m in expected:
        pv = rank_one_factor(m)
        if pv is None:
            raise MathInconsistencyError("expected fixture point is not rank 1")
        hit = None
        for i, q in enumerate(found):
            if i in used:
                continue
            if pv.same_point(q, Tolerances(eq_rel=tol)):
                hit = i
                break
        if hit is None:
            return False
        used.add(hit)
    return True


def verify_intersection_counts(
    cfg: SearchConfig = DEFAULT_SEARCH,
    tol: Tolerances = DEFAULT_TOL,
    point_tol: float = 1e-8,
) -> dict:
    """Run the product-state search on every fixture and report pass/fail."""
    report = {"fixtures": [], "all_passed": True}
    for fx in section3_fixtures() + lemma_fixtures():
        kernel = fx.kernel_vectors()
        points = product_states_in_subspace(kernel, cfg, tol)
        entry = {
            "name": fx.name,
            "expected_count": fx.expected_count,
            "found_count": len(points),
            "count_ok": len(points) == fx.expected_count,
        }
        if fx.expected_points is not None:
            entry["points_ok"] = _match_points(points, fx.expected_points, point_tol)
        if fx.range_product_free:
            rng_basis = orthonormal_complement(kernel)
            rng_points = product_states_in_subspace(rng_basis, cfg, tol)
            entry["range_product_free_ok"] = len(rng_points) == 0
        entry["passed"] = all(v for k, v in entry.items() if k.endswith("_ok"))
        report["all_passed"] &= entry["passed"]
        report["fixtures"].append(entry)
    return report
