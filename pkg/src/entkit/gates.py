"""Gate catalog and the eight-element operator group.

Group products are taken with the row label as the left matrix factor:
``multiply_mod_phase(x, y)`` computes ``x.matrix @ y.matrix``. Under that
convention every entry of the reference table is reproduced up to a global
phase in {1, -1, i, -i}; 24 of the 64 entries carry a phase other than 1.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .linalg import ATOL, OperatorMatrix, equal_up_to_global_phase, kron

_S = 1 / math.sqrt(2)

LABELS = ("I", "A", "B", "C", "D", "E", "F", "G")

_MATRICES = {
    "I": [[1, 0], [0, 1]],
    "A": [[0, 1], [1, 0]],
    "B": [[1, 0], [0, -1]],
    "C": [[0, 1], [-1, 0]],
    "D": [[1, 0], [0, 1j]],
    "E": [[0, 1], [1j, 0]],
    "F": [[1, 0], [0, -1j]],
    "G": [[0, 1], [-1j, 0]],
}

# Reference multiplication table; row label is the left factor.
_TABLE1_ROWS = {
    "I": "I A B C D E F G",
    "A": "A I C B G F E D",
    "B": "B C I A F G D E",
    "C": "C B A I E D G F",
    "D": "D E F G B C I A",
    "E": "E D G F A I C B",
    "F": "F G D E I A B C",
    "G": "G F E D C B A I",
}
TABLE1 = {row: dict(zip(LABELS, line.split())) for row, line in _TABLE1_ROWS.items()}

_PHASE_LABELS = {1: "1", -1: "-1", 1j: "i", -1j: "-i"}


class ClosureError(ArithmeticError):
    """A product of group elements matched no element up to phase."""


def entangler() -> OperatorMatrix:
    """Two-qubit gate taking |00> to (|00> + |11>)/sqrt(2)."""
    return imperfect_entangler(0.0, 0.0)


def imperfect_entangler(theta1: float, theta2: float) -> OperatorMatrix:
    """The entangler with phase errors ``e^{i theta1}``, ``e^{i theta2}`` on its diagonal.

    The errors sit at (0,0), (3,3) for ``theta1`` and (1,1), (2,2) for
    ``theta2``. The result is not unitary unless both angles are multiples
    of pi: columns 0/3 overlap by ``-i sin(theta1)`` and columns 1/2 by
    ``-i sin(theta2)``. Its action on |00> is still a unit vector.
    """
    p1, p2 = np.exp(1j * theta1), np.exp(1j * theta2)
    return OperatorMatrix(
        _S
        * np.array(
            [
                [p1, 0, 0, 1],
                [0, p2, 1, 0],
                [0, 1, -p2, 0],
                [1, 0, 0, -p1],
            ]
        )
    )


def hadamard2() -> OperatorMatrix:
    return OperatorMatrix(_S * np.array([[1, 1], [1, -1]]))


def hadamard4() -> OperatorMatrix:
    return OperatorMatrix(
        0.5
        * np.array(
            [
                [1, 1, 1, 1],
                [1, -1, 1, -1],
                [1, 1, -1, -1],
                [1, -1, -1, 1],
            ]
        )
    )


def i_distinguisher() -> OperatorMatrix:
    """Maps (|0> + i|1>)/sqrt(2) to |0> and (|0> - i|1>)/sqrt(2) to i|1>."""
    return OperatorMatrix(_S * np.array([[1, -1j], [1j, -1]]))


@dataclass(frozen=True)
class GroupElement:
    label: str
    matrix: OperatorMatrix


@dataclass(frozen=True)
class TableVerdict:
    row: str
    col: str
    expected: str
    computed: str
    phase: complex

    @property
    def exact(self) -> bool:
        return self.phase == 1

    @property
    def agrees(self) -> bool:
        return self.expected == self.computed

    @property
    def phase_label(self) -> str:
        return phase_label(self.phase)


def phase_label(phase: complex) -> str:
    return _PHASE_LABELS.get(_snap(phase), f"{phase.real:+.6f}{phase.imag:+.6f}j")


def _snap(phase: complex) -> complex:
    """Round a phase onto {1, -1, i, -i} when it lies within ATOL of one."""
    for p in _PHASE_LABELS:
        if abs(phase - p) <= ATOL:
            return p
    return phase


def group_element(label: str) -> GroupElement:
    try:
        return GroupElement(label, OperatorMatrix(_MATRICES[label]))
    except KeyError:
        raise KeyError(f"unknown group element {label!r}; expected one of {LABELS}") from None


def identify(op: OperatorMatrix) -> tuple[str, complex] | None:
    """Find the group element equal to ``op`` up to phase, as (label, phase)."""
    for label in LABELS:
        m = equal_up_to_global_phase(op, group_element(label).matrix)
        if m.matched:
            return label, _snap(m.phase)
    return None


def multiply_mod_phase(x: GroupElement, y: GroupElement) -> TableVerdict:
    product = x.matrix @ y.matrix
    found = identify(product)
    if found is None:
        raise ClosureError(f"{x.label}·{y.label} = {product.entries.tolist()} matches no group element")
    label, phase = found
    return TableVerdict(x.label, y.label, TABLE1[x.label][y.label], label, phase)


def verify_table1() -> list[TableVerdict]:
    """All 64 products, row-major over ``LABELS``."""
    elements = [group_element(label) for label in LABELS]
    return [multiply_mod_phase(x, y) for x in elements for y in elements]


def subgroup_check(labels) -> bool:
    """True iff ``labels`` contains I and is closed under multiplication up to phase."""
    labels = set(labels)
    unknown = labels - set(LABELS)
    if unknown:
        raise KeyError(f"unknown group elements {sorted(unknown)}")
    if "I" not in labels:
        return False
    for x in labels:
        for y in labels:
            if multiply_mod_phase(group_element(x), group_element(y)).computed not in labels:
                return False
    return True


def catalog() -> dict[str, OperatorMatrix]:
    """Named operators that are expected to be unitary."""
    ops = {
        "U": entangler(),
        "H2": hadamard2(),
        "H4": hadamard4(),
        "M": i_distinguisher(),
        "H2xH2": OperatorMatrix(kron(hadamard2().entries, hadamard2().entries)),
    }
    ops.update({label: group_element(label).matrix for label in LABELS})
    return ops
