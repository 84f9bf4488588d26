"""JSON wire formats.

Complex numbers travel as two-element [re, im] arrays; matrices as
row-major nested lists of those pairs.  Deserialisers validate shapes
and raise :class:`ValidationError` on malformed input so service and
CLI layers can map failures onto their error contracts.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .invariants import InvariantSextet
from .segre import ProductVector
from .stabilizer import StabilizerGroup, cycle_notation
from .upb import UpbAngles
from .witness import Witness

__all__ = [
    "complex_to_pair",
    "pair_to_complex",
    "encode_vector",
    "decode_vector",
    "encode_matrix",
    "decode_matrix",
    "encode_product_vector",
    "decode_product_vector",
    "encode_sextet",
    "encode_angles",
    "decode_angles",
    "encode_stabilizer",
    "encode_witness",
]


def complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def pair_to_complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValidationError("complex values must be [re, im] pairs")
    try:
        return complex(float(pair[0]), float(pair[1]))
    except (TypeError, ValueError) as exc:
        raise ValidationError("complex entries must be numbers") from exc


def encode_vector(v) -> list[list[float]]:
    return [complex_to_pair(z) for z in np.asarray(v, dtype=complex)]


def decode_vector(data, length: int) -> np.ndarray:
    if not isinstance(data, (list, tuple)) or len(data) != length:
        raise ValidationError(f"expected a vector of {length} complex pairs")
    return np.array([pair_to_complex(p) for p in data])


def encode_matrix(m) -> list[list[list[float]]]:
    return [encode_vector(row) for row in np.asarray(m, dtype=complex)]


def decode_matrix(data, shape: tuple[int, int]) -> np.ndarray:
    if not isinstance(data, (list, tuple)) or len(data) != shape[0]:
        raise ValidationError(f"expected a matrix with {shape[0]} rows")
    return np.array([decode_vector(row, shape[1]) for row in data])


def encode_product_vector(pv: ProductVector) -> dict:
    return {"a": encode_vector(pv.a), "b": encode_vector(pv.b)}


def decode_product_vector(data) -> ProductVector:
    if not isinstance(data, dict) or "a" not in data or "b" not in data:
        raise ValidationError('product vectors must be {"a": ..., "b": ...} objects')
    return ProductVector(decode_vector(data["a"], 3), decode_vector(data["b"], 3))


def encode_sextet(s: InvariantSextet) -> dict:
    return {"JA": encode_vector(s.JA), "JB": encode_vector(s.JB)}


def encode_angles(a: UpbAngles) -> dict:
    return {
        "gamma_A": a.gamma_A,
        "theta_A": a.theta_A,
        "phi_A": a.phi_A,
        "gamma_B": a.gamma_B,
        "theta_B": a.theta_B,
        "phi_B": a.phi_B,
    }


def decode_angles(data) -> UpbAngles:
    if not isinstance(data, dict):
        raise ValidationError("angles must be a JSON object")
    keys = ("gamma_A", "theta_A", "phi_A", "gamma_B", "theta_B", "phi_B")
    missing = [k for k in keys if k not in data]
    if missing:
        raise ValidationError(f"angles object is missing keys: {missing}")
    try:
        vals = [float(data[k]) for k in keys]
    except (TypeError, ValueError) as exc:
        raise ValidationError("angles must be numbers (radians)") from exc
    return UpbAngles(*vals)


def encode_stabilizer(g: StabilizerGroup) -> dict:
    return {
        "order": g.order,
        "elements": [cycle_notation(p) for p in g.elements],
        "realizations": {
            cycle_notation(p): {"A": encode_matrix(a), "B": encode_matrix(b)}
            for p, (a, b) in sorted(g.realizations.items())
        },
    }


def encode_witness(w: Witness) -> dict:
    return {
        "P": encode_matrix(w.p),
        "epsilon": w.epsilon,
        "certificate": encode_product_vector(w.certificate),
    }
