"""Entangled pairs: construction, quantification, dense coding and mixedness.

Dense-coding message assignment (left operator acts on the first qubit of
Phi+)::

    message   standard   i-basis
    00        I -> Phi+  D -> |00> + i|11>
    01        B -> Phi-  F -> |00> - i|11>
    10        A -> Psi+  E -> |01> + i|10>
    11        C -> Psi-  G -> |01> - i|10>
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .gates import group_element, hadamard2, hadamard4, imperfect_entangler
from .linalg import (
    ACCUM_ATOL,
    ATOL,
    DimensionError,
    OperatorMatrix,
    StateVector,
    apply,
    fidelity,
    inner,
    kron,
)

_S = 1 / math.sqrt(2)

MESSAGES = ("00", "01", "10", "11")
FLAVORS = ("standard", "i-basis")
ENCODERS = {
    "standard": dict(zip(MESSAGES, "IBAC")),
    "i-basis": dict(zip(MESSAGES, "DFEG")),
}
BELL_LABELS = ("Phi+", "Phi-", "Psi+", "Psi-")
I_BELL_LABELS = ("Phi+i", "Phi-i", "Psi+i", "Psi-i")
OUTCOMES = ("00", "01", "10", "11")


class InvalidStateError(ValueError):
    """Raised when a state has no overlap with the decoding basis."""


def ket(bits: str) -> StateVector:
    """Computational basis state for a bit string such as ``"01"``."""
    return StateVector.basis(int(bits, 2), 2 ** len(bits))


def _pair(first: str, second: str, weight: complex) -> StateVector:
    return StateVector(_S * (ket(first).amps + weight * ket(second).amps))


def bell_basis() -> dict[str, StateVector]:
    return {
        "Phi+": _pair("00", "11", 1),
        "Phi-": _pair("00", "11", -1),
        "Psi+": _pair("01", "10", 1),
        "Psi-": _pair("01", "10", -1),
    }


def i_bell_basis() -> dict[str, StateVector]:
    return {
        "Phi+i": _pair("00", "11", 1j),
        "Phi-i": _pair("00", "11", -1j),
        "Psi+i": _pair("01", "10", 1j),
        "Psi-i": _pair("01", "10", -1j),
    }


def extended_bell_set() -> dict[str, StateVector]:
    """The four Bell states followed by their four ``±i`` counterparts."""
    return {**bell_basis(), **i_bell_basis()}


def flavor_basis(flavor: str) -> dict[str, StateVector]:
    if flavor == "standard":
        return bell_basis()
    if flavor == "i-basis":
        return i_bell_basis()
    raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")


PHI_PLUS = bell_basis()["Phi+"]


@dataclass(frozen=True)
class EntangledFamily:
    """States ``(|00> + k|11>)`` for a complex weight ``k``."""

    k: complex

    def state(self) -> StateVector:
        return family_state(self.k)


def family_state(k: complex) -> StateVector:
    k = complex(k)
    if not (math.isfinite(k.real) and math.isfinite(k.imag)):
        raise ValueError("k must be finite")
    return StateVector(np.array([1, 0, 0, k]) / math.sqrt(1 + abs(k) ** 2))


def concurrence(s: StateVector) -> float:
    """Pure-state concurrence ``2|ad - bc|`` of a two-qubit state."""
    if s.dim != 4:
        raise DimensionError(f"concurrence needs a two-qubit state, got dim {s.dim}")
    a, b, c, d = s.amps
    return float(2 * abs(a * d - b * c))


def bell_from_entangler(theta1: float = 0.0, theta2: float = 0.0) -> StateVector:
    return apply(imperfect_entangler(theta1, theta2), ket("00"))


def entangler_fidelity(theta1: float, theta2: float = 0.0) -> float:
    """Fidelity with Phi+ of the imperfect entangler's output on |00>; equals cos²(theta1/2)."""
    return fidelity(bell_from_entangler(theta1, theta2), PHI_PLUS)


def born_probabilities(s: StateVector) -> np.ndarray:
    return np.abs(s.amps) ** 2


def hadamard_diagnostic(s: StateVector) -> dict[str, float]:
    """Computational-basis outcome distribution after applying H⊗H to ``s``."""
    if s.dim != 4:
        raise DimensionError(f"diagnostic needs a two-qubit state, got dim {s.dim}")
    probs = born_probabilities(apply(hadamard4(), s))
    return dict(zip(OUTCOMES, probs.tolist()))


def error_signal(distribution: dict[str, float]) -> float:
    """Weight on the odd-parity outcomes, zero for a correctly prepared Phi+."""
    return distribution["01"] + distribution["10"]


def detection_probability(theta1: float, theta2: float = 0.0) -> float:
    return error_signal(hadamard_diagnostic(bell_from_entangler(theta1, theta2)))


def extended_encode(msg: str, flavor: str = "standard") -> StateVector:
    g = group_element(ENCODERS[flavor][msg]).matrix
    op = OperatorMatrix(kron(g.entries, np.eye(2)))
    return apply(op, PHI_PLUS)


def decode_distribution(s: StateVector, flavor: str = "standard") -> dict[str, float]:
    """Outcome probabilities of a projective measurement in the flavor's quadruple."""
    basis = flavor_basis(flavor)
    probs = [abs(inner(b, s)) ** 2 for b in basis.values()]
    if sum(probs) <= ATOL:
        raise InvalidStateError(f"state is orthogonal to every {flavor} basis state")
    return dict(zip(MESSAGES, probs))


def extended_decode(s: StateVector, flavor: str = "standard", rng: np.random.Generator | None = None) -> str:
    """Measure ``s`` in the flavor's basis and return the 2-bit message.

    A certain outcome is returned without consuming randomness; otherwise
    ``rng`` is required to sample the Born distribution.
    """
    dist = decode_distribution(s, flavor)
    probs = np.array(list(dist.values()))
    best = int(np.argmax(probs))
    if probs[best] >= 1 - ACCUM_ATOL:
        return MESSAGES[best]
    if rng is None:
        raise ValueError("outcome is not deterministic; pass an rng to sample it")
    return MESSAGES[rng.choice(4, p=probs / probs.sum())]


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > ATOL:
            raise ValueError(f"density matrix trace is {np.trace(m)!r}")
        if np.min(np.linalg.eigvalsh(m)) < -ACCUM_ATOL:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(\n{np.array2string(self.entries, precision=6)})"


def density_from_ensemble(members) -> DensityMatrix:
    """``sum_i w_i |psi_i><psi_i|`` over ``(state, weight)`` pairs."""
    members = list(members)
    if not members:
        raise ValueError("ensemble is empty")
    weights = np.array([w for _, w in members], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1) > ACCUM_ATOL:
        raise ValueError(f"weights must be non-negative and sum to 1, got {weights.tolist()}")
    dims = {s.dim for s, _ in members}
    if len(dims) != 1:
        raise DimensionError(f"ensemble mixes dimensions {sorted(dims)}")
    rho = sum(w * np.outer(s.amps, s.amps.conj()) for s, w in members)
    # weights are only checked to 1e-9; renormalize so the trace check at 1e-12 holds
    return DensityMatrix(rho / np.trace(rho).real)


def purity(rho: DensityMatrix) -> float:
    m = rho.entries
    return float(np.trace(m @ m).real)


SOURCES = ("pure_bell", "classical_mixture")


def source_density(source: str) -> DensityMatrix:
    if source == "pure_bell":
        return density_from_ensemble([(PHI_PLUS, 1.0)])
    if source == "classical_mixture":
        return density_from_ensemble([(ket("00"), 0.5), (ket("11"), 0.5)])
    raise ValueError(f"unknown source {source!r}; expected one of {SOURCES}")


def rotated_basis_distribution(rho: DensityMatrix) -> np.ndarray:
    """Joint outcome probabilities when both qubits are measured in the (|0>±|1>) basis."""
    h = kron(hadamard2().entries, hadamard2().entries)
    probs = np.diag(h @ rho.entries @ h.conj().T).real
    return np.clip(probs, 0, None) / np.clip(probs, 0, None).sum()


def correlation_experiment(source: str, shots: int | None, seed=None) -> float:
    """Empirical ``E[(-1)^(a xor b)]`` in the rotated basis.

    ``shots=None`` returns the exact expectation: 1 for the Bell state,
    0 for the classical 00/11 mixture.
    """
    probs = rotated_basis_distribution(source_density(source))
    parity = np.array([1, -1, -1, 1])
    if shots is None:
        return float(parity @ probs)
    if shots < 1:
        raise ValueError("shots must be at least 1")
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    return float(parity @ counts / shots)


@dataclass(frozen=True)
class SourceModel:
    """Bernoulli pair source. ``double_pair_prob`` is the part of ``pair_prob`` that emits two pairs."""

    pair_prob: float = 1e-4
    double_pair_prob: float = 1e-8

    def __post_init__(self):
        if not (0 <= self.double_pair_prob <= self.pair_prob <= 1):
            raise ValueError("need 0 <= double_pair_prob <= pair_prob <= 1")


@dataclass(frozen=True)
class SourceYield:
    trials: int
    expected: float
    sigma: float
    post_selected: int
    double_pairs: int


def source_throughput(source: SourceModel, trials: int, seed=None) -> SourceYield:
    """Expected and simulated number of post-selected (emitting) trials."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    p, d = source.pair_prob, source.double_pair_prob
    none, single, double = np.random.default_rng(seed).multinomial(trials, [1 - p, p - d, d])
    return SourceYield(
        trials=trials,
        expected=trials * p,
        sigma=math.sqrt(trials * p * (1 - p)),
        post_selected=int(single + double),
        double_pairs=int(double),
    )
