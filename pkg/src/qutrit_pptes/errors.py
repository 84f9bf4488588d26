"""Exception hierarchy.

Two top-level branches matter for callers: ``ValidationError`` means the
input violated a precondition (CLI exit code 1), ``MathInconsistencyError``
means a computation produced something the underlying theory forbids, which
is a regression alarm rather than an input problem (CLI exit code 2).
"""


class QutritPptesError(Exception):
    """Base class for all package errors."""


class ValidationError(QutritPptesError):
    """Input fails a precondition (shape, domain, orthogonality, ...)."""


class GeneralPositionError(ValidationError):
    """A tuple of vectors is not in general position."""


class DegenerateQuintupleError(ValidationError):
    """Quintuple invariants fall on (or too close to) the excluded values 0, 1."""


class DegenerateWitnessError(ValidationError):
    """Witness optimisation hit epsilon ~ 0: the complement contains a product state."""


class ReconstructionError(ValidationError):
    """The state fed to the reconstruction pipeline is not a rank-4 PPT entangled state."""


class KernelCountError(ReconstructionError):
    """Kernel does not contain exactly six product states."""


class SextetPositionError(ReconstructionError):
    """Kernel product states are not in general position."""


class SymbolError(ReconstructionError):
    """Quintuple invariants are not real with an admissible UPB symbol."""


class BorderlineError(QutritPptesError):
    """A trichotomy/interval decision fell inside the numerical ambiguity band.

    The exact theory decides these cases sharply; floating point cannot, so
    we refuse to guess instead of returning a possibly wrong tag.
    """


class MathInconsistencyError(QutritPptesError):
    """A result that contradicts a theorem (e.g. a Bezout-bound violation)."""


class BezoutViolationError(MathInconsistencyError):
    """More than six product-state clusters found in a 5-dimensional subspace."""


class ReconstructionResidualError(MathInconsistencyError):
    """Rebuilt state disagrees with the input beyond tolerance despite a valid pipeline."""
