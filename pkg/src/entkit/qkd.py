"""Seeded BB84-style key distribution over three state alphabets.

Variants
--------
standard_zx
    |0>, |1> (Z) and (|0>±|1>)/sqrt(2) (X).
superposition_xy
    (|0>±|1>)/sqrt(2) (X) and (|0>±i|1>)/sqrt(2) (Y); every state is a superposition.
qutrit_nine
    The nine qutrit directions; Bob measures in one of the six frames.

Round mechanics: Alice draws a state uniformly, Bob draws a frame uniformly,
an optional intercept-resend eavesdropper measures in a frame of her own and
forwards the collapsed state, and channel noise flips Bob's in-frame outcome
with probability ``flip_prob``. A round is kept when Alice's state is one of
the two vectors of Bob's frame and Bob's outcome lies in that frame; the bit
is the position (0 or 1) of the vector within the frame.

For qubit variants this is ordinary basis matching. For the qutrit variant a
computational direction lies in two frames, so Alice confirms membership of
her direction in Bob's announced frame rather than announcing one frame
herself. The expected sift rate is then 2/9.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import cached_property
import itertools
import json
import math

import numpy as np

from .frames import six_frames, nine_directions
from .linalg import ATOL, StateVector, equal_up_to_global_phase

_S = 1 / math.sqrt(2)

VARIANTS = ("standard_zx", "superposition_xy", "qutrit_nine")
OUTCOME_NAMES = ("first", "second", "out_of_frame")
# squared rounding residue of an exactly-zero overlap lands near 1e-33
_ZERO_PROB = 1e-15

_ZERO, _ONE = StateVector([1, 0]), StateVector([0, 1])
_PLUS, _MINUS = StateVector([_S, _S]), StateVector([_S, -_S])
_PLUS_I, _MINUS_I = StateVector([_S, 1j * _S]), StateVector([_S, -1j * _S])

# 0/90 degrees is the Z frame; -45/+45 degrees is the X frame.
POLARIZATION_STATES = {"-45": _MINUS, "0": _ZERO, "+45": _PLUS, "+90": _ONE}


class MeasurementError(ArithmeticError):
    """Born probabilities failed the normalization audit."""


@dataclass(frozen=True)
class MeasurementFrame:
    label: str
    vectors: tuple[StateVector, StateVector]


def _qubit_frames(kind: str) -> tuple[MeasurementFrame, ...]:
    if kind == "standard_zx":
        return (MeasurementFrame("Z", (_ZERO, _ONE)), MeasurementFrame("X", (_PLUS, _MINUS)))
    return (MeasurementFrame("X", (_PLUS, _MINUS)), MeasurementFrame("Y", (_PLUS_I, _MINUS_I)))


def complement_basis(vectors) -> list[np.ndarray]:
    """Orthonormal basis of the orthogonal complement of span(vectors)."""
    m = np.array([v.amps for v in vectors])
    _, sv, vh = np.linalg.svd(m)
    rank = int(np.sum(sv > ATOL))
    return [row.conj() for row in vh[rank:]]


def measurement_probabilities(s: StateVector, vectors) -> np.ndarray:
    """Born probabilities for (first, second, out_of_frame).

    The out-of-frame outcome is the projector onto the complement of the
    frame's span; for qubit frames it always has probability 0.
    """
    probs = [abs(np.vdot(v.amps, s.amps)) ** 2 for v in vectors]
    probs.append(sum(abs(np.vdot(w, s.amps)) ** 2 for w in complement_basis(vectors)))
    probs = np.array(probs)
    if abs(probs.sum() - 1) > ATOL:
        raise MeasurementError(f"Born probabilities sum to {probs.sum()!r}")
    probs[probs < _ZERO_PROB] = 0.0
    return probs


def collapse(s: StateVector, vectors, outcome: int) -> StateVector:
    """Post-measurement state for ``outcome`` (0, 1 or 2 = out of frame)."""
    if outcome < 2:
        return vectors[outcome]
    proj = sum(np.vdot(w, s.amps) * w for w in complement_basis(vectors))
    return StateVector.normalized(proj)


def _sample(probs, u: float) -> int:
    acc = 0.0
    for k, p in enumerate(probs):
        acc += p
        if u < acc:
            return k
    # u landed in rounding slack past the last nonzero bin
    return max(k for k, p in enumerate(probs) if p > 0)


def qutrit_measure(s: StateVector, frame, seed=None) -> str:
    """Three-outcome measurement of a qutrit in ``frame``; returns an OUTCOME_NAMES entry."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    probs = measurement_probabilities(s, frame.vectors)
    return OUTCOME_NAMES[_sample(probs, rng.random())]


def eve_intercept_resend(s: StateVector, frame, rng: np.random.Generator) -> tuple[int, StateVector]:
    """Measure ``s`` in ``frame`` and return (outcome, forwarded collapsed state)."""
    outcome = _sample(measurement_probabilities(s, frame.vectors), rng.random())
    return outcome, collapse(s, frame.vectors, outcome)


@dataclass(frozen=True)
class ProtocolVariant:
    kind: str

    def __post_init__(self):
        if self.kind not in VARIANTS:
            raise ValueError(f"unknown variant {self.kind!r}; expected one of {VARIANTS}")

    @cached_property
    def frames(self) -> tuple[MeasurementFrame, ...]:
        if self.kind == "qutrit_nine":
            return tuple(MeasurementFrame(f.label, f.vectors) for f in six_frames())
        return _qubit_frames(self.kind)

    @cached_property
    def states(self) -> tuple[StateVector, ...]:
        if self.kind == "qutrit_nine":
            return nine_directions()
        return tuple(v for f in self.frames for v in f.vectors)

    @cached_property
    def positions(self) -> tuple[tuple[int | None, ...], ...]:
        """positions[s][f]: bit of state ``s`` in frame ``f``, or None if not a member."""
        table = []
        for s in self.states:
            row = []
            for f in self.frames:
                hits = [k for k, v in enumerate(f.vectors) if equal_up_to_global_phase(s, v).matched]
                row.append(hits[0] if hits else None)
            table.append(tuple(row))
        return tuple(table)

    def home_frame(self, state_index: int) -> int:
        """First frame containing the state."""
        return next(f for f, pos in enumerate(self.positions[state_index]) if pos is not None)


class UniformEve:
    """Intercept-resend attacker choosing her frame uniformly each round."""

    name = "uniform"

    def choose_frame(self, variant: ProtocolVariant, rng: np.random.Generator) -> int:
        return int(rng.integers(len(variant.frames)))

    def frame_weights(self, variant: ProtocolVariant) -> np.ndarray:
        n = len(variant.frames)
        return np.full(n, 1 / n)


class FixedFrameEve:
    """Attacker that always measures in one frame."""

    def __init__(self, frame_index: int):
        self.frame_index = frame_index
        self.name = f"fixed-{frame_index}"

    def choose_frame(self, variant, rng) -> int:
        return self.frame_index

    def frame_weights(self, variant) -> np.ndarray:
        w = np.zeros(len(variant.frames))
        w[self.frame_index] = 1.0
        return w


@dataclass(frozen=True)
class ChannelModel:
    flip_prob: float = 0.0
    eve: UniformEve | FixedFrameEve | None = None

    def __post_init__(self):
        if not 0 <= self.flip_prob <= 1:
            raise ValueError("flip_prob must lie in [0, 1]")


@dataclass(frozen=True)
class RoundRecord:
    alice_state_index: int
    alice_basis_index: int
    bob_basis_index: int
    bob_outcome: int
    kept: bool
    alice_bit: int | None = None
    bob_bit: int | None = None
    eve_basis_index: int | None = None
    eve_outcome: int | None = None


@dataclass
class ProtocolTranscript:
    variant: str
    seed: int | None
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        sent = len(self.rounds)
        kept = [r for r in self.rounds if r.kept]
        errors = sum(r.alice_bit != r.bob_bit for r in kept)
        return {
            "sent": sent,
            "sifted": len(kept),
            "errors": errors,
            "qber": errors / len(kept) if kept else 0.0,
            "sift_rate": len(kept) / sent if sent else 0.0,
        }

    def to_jsonl(self) -> str:
        """One JSON object per round, newline-terminated."""
        return "".join(json.dumps(asdict(r), sort_keys=True) + "\n" for r in self.rounds)

    def summary_json(self) -> str:
        return json.dumps({"variant": self.variant, "seed": self.seed, **self.summary}, sort_keys=True)


def keep_round(variant: ProtocolVariant, state_index: int, bob_frame: int, bob_outcome: int):
    """Sifting decision as (kept, alice_bit, bob_bit)."""
    pos = variant.positions[state_index][bob_frame]
    if pos is None or bob_outcome == 2:
        return False, None, None
    return True, pos, bob_outcome


class _Tables:
    """Precomputed Born probabilities over the finite pool of states a round can carry."""

    def __init__(self, variant: ProtocolVariant):
        pool = list(variant.states)

        def pool_index(s):
            for i, p in enumerate(pool):
                if equal_up_to_global_phase(s, p).matched:
                    return i
            pool.append(s)
            return len(pool) - 1

        self.after = {}
        frontier = list(range(len(pool)))
        self.probs = {}
        while frontier:
            nxt = []
            for i in frontier:
                for f, frame in enumerate(variant.frames):
                    pr = measurement_probabilities(pool[i], frame.vectors)
                    self.probs[i, f] = pr
                    for k in range(3):
                        if pr[k] > 0 and (i, f, k) not in self.after:
                            before = len(pool)
                            self.after[i, f, k] = pool_index(collapse(pool[i], frame.vectors, k))
                            if len(pool) > before:
                                nxt.append(len(pool) - 1)
            frontier = nxt
        self.pool = pool


def run_session(variant, n_rounds: int, channel: ChannelModel | None = None, seed=None) -> ProtocolTranscript:
    """Simulate ``n_rounds`` rounds; identical arguments give an identical transcript."""
    if isinstance(variant, str):
        variant = ProtocolVariant(variant)
    if n_rounds < 1:
        raise ValueError("n_rounds must be at least 1")
    channel = channel or ChannelModel()
    tables = _Tables(variant)
    rng = np.random.default_rng(seed)
    n_states, n_frames = len(variant.states), len(variant.frames)
    transcript = ProtocolTranscript(variant.kind, seed)
    for _ in range(n_rounds):
        a = int(rng.integers(n_states))
        b = int(rng.integers(n_frames))
        carried = a
        eve_frame = eve_outcome = None
        if channel.eve is not None:
            eve_frame = channel.eve.choose_frame(variant, rng)
            eve_outcome = _sample(tables.probs[carried, eve_frame], rng.random())
            carried = tables.after[carried, eve_frame, eve_outcome]
        outcome = _sample(tables.probs[carried, b], rng.random())
        if channel.flip_prob > 0 and outcome < 2 and rng.random() < channel.flip_prob:
            outcome = 1 - outcome
        kept, abit, bbit = keep_round(variant, a, b, outcome)
        alice_basis = b if variant.positions[a][b] is not None else variant.home_frame(a)
        transcript.rounds.append(
            RoundRecord(a, alice_basis, b, outcome, kept, abit, bbit, eve_frame, eve_outcome)
        )
    return transcript


def sift(transcript: ProtocolTranscript) -> list[tuple[int, int]]:
    """(alice_bit, bob_bit) for every kept round, in round order."""
    return [(r.alice_bit, r.bob_bit) for r in transcript.rounds if r.kept]


def exact_statistics(variant, channel: ChannelModel | None = None) -> dict:
    """Exact sift rate and QBER by enumerating every branch of a round."""
    if isinstance(variant, str):
        variant = ProtocolVariant(variant)
    channel = channel or ChannelModel()
    ns, nf = len(variant.states), len(variant.frames)
    p_keep = p_err = 0.0
    for a, b in itertools.product(range(ns), range(nf)):
        weight = 1 / (ns * nf)
        if channel.eve is None:
            arrivals = [(1.0, variant.states[a])]
        else:
            arrivals = []
            for e, we in enumerate(channel.eve.frame_weights(variant)):
                if we == 0:
                    continue
                frame = variant.frames[e]
                pr = measurement_probabilities(variant.states[a], frame.vectors)
                arrivals += [
                    (we * pr[k], collapse(variant.states[a], frame.vectors, k)) for k in range(3) if pr[k] > 0
                ]
        for w_arr, s in arrivals:
            pr = measurement_probabilities(s, variant.frames[b].vectors)
            q = channel.flip_prob
            for k, pk in enumerate(pr):
                branches = [(pk, k)] if k == 2 else [(pk * (1 - q), k), (pk * q, 1 - k)]
                for p_branch, outcome in branches:
                    kept, abit, bbit = keep_round(variant, a, b, outcome)
                    if kept:
                        p = weight * w_arr * p_branch
                        p_keep += p
                        p_err += p * (abit != bbit)
    return {"sift_rate": float(p_keep), "qber": float(p_err / p_keep) if p_keep else 0.0}
