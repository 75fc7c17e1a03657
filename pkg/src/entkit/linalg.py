"""Small-dimension complex linear algebra for qubits, qutrits and qubit pairs.

States and operators are thin immutable wrappers around numpy arrays. Only
dimensions 2, 3 and 4 are supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOL = 1e-12
ACCUM_ATOL = 1e-9
DIMS = (2, 3, 4)


class DimensionError(ValueError):
    """Raised on a dimension mismatch or an unsupported dimension."""


class NormalizationError(ValueError):
    """Raised when a state is expected to be normalized and is not."""


class DegenerateInputError(ValueError):
    """Raised when a phase comparison is asked of two all-zero arrays."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    if not np.all(np.isfinite(arr)):
        raise ValueError("amplitudes must be finite")
    arr.setflags(write=False)
    return arr


class StateVector:
    """Complex amplitude vector of dimension 2, 3 or 4.

    Construction checks normalization to `ATOL` unless ``check=False``; the
    unchecked path exists so that non-unitary operators can be applied and
    the result inspected.
    """

    __slots__ = ("amps",)

    def __init__(self, amps, *, check: bool = True):
        amps = _frozen(np.ravel(amps))
        if amps.shape[0] not in DIMS:
            raise DimensionError(f"unsupported state dimension {amps.shape[0]}")
        if check and abs(np.vdot(amps, amps).real - 1.0) > ATOL:
            raise NormalizationError(f"state norm² is {np.vdot(amps, amps).real!r}, expected 1")
        object.__setattr__(self, "amps", amps)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @classmethod
    def normalized(cls, amps) -> StateVector:
        """Build a state from unnormalized amplitudes, rescaling to unit norm."""
        amps = np.asarray(amps, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(amps / norm)

    @classmethod
    def basis(cls, index: int, dim: int = 2) -> StateVector:
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = ATOL) -> bool:
        return abs(self.norm**2 - 1.0) <= tol

    def __array__(self, dtype=None, copy=None):
        return self.amps if dtype is None else self.amps.astype(dtype)

    def __mul__(self, scalar) -> StateVector:
        return StateVector(self.amps * scalar, check=False)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"StateVector({np.array2string(self.amps, precision=6)})"


class OperatorMatrix:
    """Square complex matrix of dimension 2, 3 or 4.

    Unitarity is deliberately not enforced; use :func:`is_unitary`.
    ``op @ other`` multiplies matrices or applies ``op`` to a state.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = _frozen(np.atleast_2d(entries))
        n, m = entries.shape
        if n != m or n not in DIMS:
            raise DimensionError(f"unsupported operator shape {entries.shape}")
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("OperatorMatrix is immutable")

    @classmethod
    def identity(cls, dim: int = 2) -> OperatorMatrix:
        return cls(np.eye(dim))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def dagger(self) -> OperatorMatrix:
        return OperatorMatrix(self.entries.conj().T)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return apply(self, other)
        if isinstance(other, OperatorMatrix):
            if other.dim != self.dim:
                raise DimensionError(f"cannot multiply {self.dim}x{self.dim} by {other.dim}x{other.dim}")
            return OperatorMatrix(self.entries @ other.entries)
        return NotImplemented

    def __mul__(self, scalar) -> OperatorMatrix:
        return OperatorMatrix(self.entries * scalar)

    __rmul__ = __mul__

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self) -> str:
        return f"OperatorMatrix(\n{np.array2string(self.entries, precision=6)})"


@dataclass(frozen=True)
class PhaseMatch:
    matched: bool
    phase: complex


def kron(a, b) -> np.ndarray:
    """Raw Kronecker product of two amplitude vectors or matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product of two states; the result dimension must not exceed 4."""
    if a.dim * b.dim > 4:
        raise DimensionError(f"tensor of dims {a.dim} and {b.dim} exceeds dimension 4")
    return StateVector(kron(a.amps, b.amps))


def tensor_op(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    if a.dim * b.dim > 4:
        raise DimensionError(f"tensor of dims {a.dim} and {b.dim} exceeds dimension 4")
    return OperatorMatrix(kron(a.entries, b.entries))


def apply(op: OperatorMatrix, s: StateVector) -> StateVector:
    """Matrix-vector product. The result is not renormalized."""
    if op.dim != s.dim:
        raise DimensionError(f"operator dim {op.dim} does not match state dim {s.dim}")
    return StateVector(op.entries @ s.amps, check=False)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugating the first argument."""
    if a.dim != b.dim:
        raise DimensionError(f"inner product of dims {a.dim} and {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    return abs(inner(a, b)) ** 2


def unitarity_residual(op: OperatorMatrix) -> float:
    """Largest entry of |op^dagger op - 1|."""
    m = op.entries
    return float(np.max(np.abs(m.conj().T @ m - np.eye(op.dim))))


def is_unitary(op: OperatorMatrix, tol: float = ATOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return unitarity_residual(op) <= tol


def equal_up_to_global_phase(a, b, tol: float = ATOL) -> PhaseMatch:
    """Test whether ``a == phase * b`` for some unit-modulus ``phase``.

    Works on states or operators. The phase is read off the entry of ``b``
    with the largest modulus (first such entry on ties), so the result is
    deterministic and never divides by a near-zero entry.

    Raises
    ------
    DimensionError
        If the shapes differ.
    DegenerateInputError
        If both arguments are all zero.
    """
    x = np.asarray(a, dtype=complex)
    y = np.asarray(b, dtype=complex)
    if x.shape != y.shape:
        raise DimensionError(f"shapes {x.shape} and {y.shape} differ")
    xmax = np.max(np.abs(x))
    ymax = np.max(np.abs(y))
    if xmax == 0 and ymax == 0:
        raise DegenerateInputError("both arguments are all zero")
    if xmax == 0 or ymax == 0:
        return PhaseMatch(False, 1 + 0j)
    k = np.unravel_index(np.argmax(np.abs(y)), y.shape)
    ratio = x[k] / y[k]
    if ratio == 0:
        return PhaseMatch(False, 1 + 0j)
    phase = complex(ratio / abs(ratio))
    residual = float(np.max(np.abs(x - phase * y)))
    if residual <= tol:
        return PhaseMatch(True, phase)
    return PhaseMatch(False, phase)
