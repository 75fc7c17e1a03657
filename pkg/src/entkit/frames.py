"""Qubit sphere coordinates, the general single-qubit rotation, and qutrit frames."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .linalg import ATOL, NormalizationError, OperatorMatrix, StateVector, equal_up_to_global_phase, inner

_S = 1 / math.sqrt(2)


class NotADirectionError(ValueError):
    """Raised when a qutrit state is not one of the nine listed directions."""


@dataclass(frozen=True)
class QubitPoint:
    """Point on the qubit sphere: ``alpha|0> + beta e^{i theta}|1>``."""

    alpha: float
    beta: float
    theta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if abs(self.alpha**2 + self.beta**2 - 1.0) > ATOL:
            raise NormalizationError(f"alpha² + beta² = {self.alpha**2 + self.beta**2!r}")


@dataclass(frozen=True)
class RotationParams:
    alpha: float
    beta: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if abs(self.alpha**2 + self.beta**2 - 1.0) > ATOL:
            raise NormalizationError(f"alpha² + beta² = {self.alpha**2 + self.beta**2!r}")


@dataclass(frozen=True)
class Frame:
    """Two orthonormal qutrit vectors spanning one coordinate plane."""

    label: str
    vectors: tuple[StateVector, StateVector]
    plane: str

    def __post_init__(self):
        if len(self.vectors) != 2:
            raise ValueError("a frame holds exactly two vectors")
        if abs(inner(*self.vectors)) > ATOL:
            raise ValueError(f"frame {self.label} vectors are not orthogonal")

    def complement(self) -> StateVector:
        """Unit vector orthogonal to both frame vectors (phase fixed by the cross product)."""
        u, v = (s.amps for s in self.vectors)
        w = np.cross(u.conj(), v.conj())
        return StateVector.normalized(w)


def qubit_point_to_state(p: QubitPoint) -> StateVector:
    return StateVector([p.alpha, p.beta * np.exp(1j * p.theta)])


def general_rotation(p: RotationParams) -> OperatorMatrix:
    """Single-qubit rotation taking |0> to ``alpha e^{i t1}|0> + beta e^{i t2}|1>``."""
    a, b = p.alpha, p.beta
    e1, e2 = np.exp(1j * p.theta1), np.exp(1j * p.theta2)
    return OperatorMatrix([[a * e1, b / e2], [b * e2, -a / e1]])


@lru_cache(maxsize=None)
def nine_directions() -> tuple[StateVector, ...]:
    """|0>, |1>, |2>, then (|0>±|1>), (|0>±|2>), (|1>±|2>), normalized."""
    return (
        StateVector([1, 0, 0]),
        StateVector([0, 1, 0]),
        StateVector([0, 0, 1]),
        StateVector([_S, _S, 0]),
        StateVector([_S, -_S, 0]),
        StateVector([_S, 0, _S]),
        StateVector([_S, 0, -_S]),
        StateVector([0, _S, _S]),
        StateVector([0, _S, -_S]),
    )


DIRECTION_NAMES = ("0", "1", "2", "0+1", "0-1", "0+2", "0-2", "1+2", "1-2")

# plane -> (axes spanned); frames follow in computational/superposition pairs
_PLANES = (("XY", 0, 1), ("XZ", 0, 2), ("YZ", 1, 2))


@lru_cache(maxsize=None)
def six_frames() -> tuple[Frame, ...]:
    d = nine_directions()
    index = {name: i for i, name in enumerate(DIRECTION_NAMES)}
    frames = []
    for plane, lo, hi in _PLANES:
        frames.append(Frame(f"{plane}-computational", (d[lo], d[hi]), plane))
        frames.append(
            Frame(
                f"{plane}-superposition",
                (d[index[f"{lo}+{hi}"]], d[index[f"{lo}-{hi}"]]),
                plane,
            )
        )
    return tuple(frames)


def direction_index(s: StateVector, tol: float = ATOL) -> int:
    """Index of ``s`` among the nine directions, up to global phase."""
    if s.dim != 3:
        raise NotADirectionError(f"expected a qutrit state, got dimension {s.dim}")
    for i, d in enumerate(nine_directions()):
        if equal_up_to_global_phase(s, d, tol).matched:
            return i
    raise NotADirectionError(f"{s!r} is not one of the nine directions")


def frame_membership(s: StateVector) -> list[str]:
    """Labels of the frames containing ``s`` (up to global phase)."""
    direction_index(s)
    labels = []
    for frame in six_frames():
        if any(equal_up_to_global_phase(s, v).matched for v in frame.vectors):
            labels.append(frame.label)
    return labels
