"""State-vector toolkit for entangled pairs, the eight-element operator group and BB84 variants."""

from .linalg import (
    DegenerateInputError,
    DimensionError,
    NormalizationError,
    OperatorMatrix,
    PhaseMatch,
    StateVector,
    apply,
    equal_up_to_global_phase,
    fidelity,
    inner,
    is_unitary,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateInputError",
    "DimensionError",
    "NormalizationError",
    "OperatorMatrix",
    "PhaseMatch",
    "StateVector",
    "apply",
    "equal_up_to_global_phase",
    "fidelity",
    "inner",
    "is_unitary",
    "tensor",
    "__version__",
]
