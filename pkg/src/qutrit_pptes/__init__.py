"""Rank-4 PPT entangled states of two qutrits.

Core objects: product vectors on the Segre variety, quintuple
invariants and symbols, a 6-angle UPB family, rank-4 state
construction and reconstruction, kernel product-state search,
stabilizer groups and entanglement witnesses.
"""

from .errors import (
    BezoutViolationError,
    BorderlineError,
    DegenerateQuintupleError,
    DegenerateWitnessError,
    GeneralPositionError,
    KernelCountError,
    MathInconsistencyError,
    QutritPptesError,
    ReconstructionError,
    ReconstructionResidualError,
    SextetPositionError,
    SymbolError,
    ValidationError,
)
from .invariants import (
    InvariantSextet,
    QuintupleClass,
    bp_equivalent,
    classify_quintuple,
    invariants,
    p_equivalent,
    permuted_invariants,
    replaced_invariants,
    sixth_state,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    is_psd,
    kernel_basis,
    kron,
    numeric_rank,
    partial_transpose,
    range_basis,
    vec_to_mat,
)
from .pptes import (
    BlockState,
    CanonicalParams,
    ReconstructionResult,
    canonical_blocks,
    cubic_roots,
    is_pptes_rank4,
    is_symmetric_range,
    kernel_products,
    kernel_sextet,
    projector_state,
    pt_rank,
    reconstruct,
    state_from_blocks,
    tiles_state,
)
from .segre import ProductVector, canonical_transform, four_point_map, general_position, rank_one_factor
from .subspace import SearchConfig, product_states_in_subspace, range_has_product_state
from .upb import (
    UPB_SYMBOL_TABLE,
    UpbAngles,
    angles_from_invariants,
    is_upb_type,
    pyramid_sextet,
    real_family,
    symbol,
    table1_lookup,
    tiles_quintuple,
    upb_from_angles,
    upb_invariants,
)
from .stabilizer import StabilizerGroup, stabilizer, verify_symmetry_commutes
from .witness import Witness, build_witness, epsilon, witness_value

__version__ = "0.1.0"
