import itertools
import json
import math

import numpy as np
import pytest

from entkit.frames import six_frames
from entkit.linalg import StateVector
from entkit.qkd import (
    VARIANTS,
    ChannelModel,
    FixedFrameEve,
    MeasurementFrame,
    ProtocolVariant,
    UniformEve,
    eve_intercept_resend,
    exact_statistics,
    keep_round,
    measurement_probabilities,
    qutrit_measure,
    run_session,
    sift,
)

S = 1 / math.sqrt(2)

# --- independent enumeration oracle -----------------------------------------

QUBIT_FRAMES = {
    "standard_zx": [np.array([[1, 0], [0, 1]]), np.array([[S, S], [S, -S]])],
    "superposition_xy": [np.array([[S, S], [S, -S]]), np.array([[S, 1j * S], [S, -1j * S]])],
}


def _qutrit_frames():
    e = np.eye(3)
    frames = []
    for lo, hi in ((0, 1), (0, 2), (1, 2)):
        frames.append(np.array([e[lo], e[hi]]))
        frames.append(np.array([(e[lo] + e[hi]) * S, (e[lo] - e[hi]) * S]))
    return frames


def _oracle_setup(kind):
    frames = _qutrit_frames() if kind == "qutrit_nine" else QUBIT_FRAMES[kind]
    if kind == "qutrit_nine":
        e = np.eye(3)
        states = [e[0], e[1], e[2]] + [(e[a] + sgn * e[b]) * S for a, b in ((0, 1), (0, 2), (1, 2)) for sgn in (1, -1)]
    else:
        states = [v for f in frames for v in f]
    return [np.asarray(s, complex) for s in states], [np.asarray(f, complex) for f in frames]


def _outcomes(state, frame):
    """(probability, post-state, index) via projectors P_k and 1 - P_0 - P_1."""
    out = []
    proj_sum = np.zeros((len(state), len(state)), complex)
    for k, v in enumerate(frame):
        p = np.outer(v, v.conj())
        proj_sum += p
        prob = np.real(state.conj() @ p @ state)
        if prob > 1e-14:
            out.append((prob, v, k))
    rest = (np.eye(len(state)) - proj_sum) @ state
    prob = np.real(rest.conj() @ rest)
    if prob > 1e-14:
        out.append((prob, rest / np.sqrt(prob), 2))
    return out


def oracle(kind, eve=False, flip=0.0):
    states, frames = _oracle_setup(kind)
    keep = err = 0.0
    for a, state in enumerate(states):
        for b, frame in enumerate(frames):
            w = 1 / (len(states) * len(frames))
            pos = [k for k, v in enumerate(frame) if abs(abs(np.vdot(v, state)) - 1) < 1e-12]
            if not pos:
                continue
            arrivals = [(1.0, state)]
            if eve:
                arrivals = [(p / len(frames), post) for ef in frames for p, post, _ in _outcomes(state, ef)]
            for pa, s in arrivals:
                for p, _, k in _outcomes(s, frame):
                    if k == 2:
                        continue
                    keep += w * pa * p
                    err += w * pa * p * ((k != pos[0]) * (1 - flip) + (k == pos[0]) * flip)
    return keep, err / keep


# --- tests --------------------------------------------------------------------


@pytest.mark.parametrize("kind, sift_rate", [("standard_zx", 0.5), ("superposition_xy", 0.5), ("qutrit_nine", 2 / 9)])
def test_oracle_sift_rates(kind, sift_rate):
    keep, qber = oracle(kind)
    assert keep == pytest.approx(sift_rate, abs=1e-12)
    assert qber == 0


@pytest.mark.parametrize("kind", VARIANTS)
@pytest.mark.parametrize("eve, flip", [(False, 0.0), (True, 0.0), (False, 0.1), (True, 0.05)])
def test_exact_statistics_matches_oracle(kind, eve, flip):
    keep, qber = oracle(kind, eve, flip)
    got = exact_statistics(kind, ChannelModel(flip, UniformEve() if eve else None))
    assert got["sift_rate"] == pytest.approx(keep, abs=1e-12)
    assert got["qber"] == pytest.approx(qber, abs=1e-12)


def test_intercept_resend_quarter_error_for_qubit_variants():
    for kind in ("standard_zx", "superposition_xy"):
        assert oracle(kind, eve=True)[1] == pytest.approx(0.25, abs=1e-12)


def test_noiseless_qber_exactly_zero_exhaustive():
    for kind in VARIANTS:
        v = ProtocolVariant(kind)
        assert exact_statistics(kind)["qber"] == 0.0
        for a, b in itertools.product(range(len(v.states)), range(len(v.frames))):
            probs = measurement_probabilities(v.states[a], v.frames[b].vectors)
            for outcome, p in enumerate(probs):
                if p == 0:
                    continue
                kept, abit, bbit = keep_round(v, a, b, outcome)
                if kept:
                    assert abit == bbit


@pytest.mark.parametrize("kind", VARIANTS)
def test_born_probabilities_sum_to_one(kind):
    v = ProtocolVariant(kind)
    for s in v.states:
        for f in v.frames:
            assert measurement_probabilities(s, f.vectors).sum() == pytest.approx(1, abs=1e-12)


def test_qutrit_measure_examples():
    xy = six_frames()[0]
    assert {qutrit_measure(StateVector([1, 0, 0]), xy, seed=s) for s in range(20)} == {"first"}
    assert {qutrit_measure(StateVector([0, 0, 1]), xy, seed=s) for s in range(20)} == {"out_of_frame"}
    plus = StateVector([S, S, 0])
    np.testing.assert_allclose(measurement_probabilities(plus, xy.vectors), [0.5, 0.5, 0], atol=1e-12)
    rng = np.random.default_rng(0)
    seen = [qutrit_measure(plus, xy, seed=rng) for _ in range(2000)]
    assert set(seen) == {"first", "second"}
    assert abs(seen.count("first") / 2000 - 0.5) <= 3 * 0.5 / math.sqrt(2000)


def test_eve_in_alice_basis_is_harmless():
    z = MeasurementFrame("Z", (StateVector([1, 0]), StateVector([0, 1])))
    rng = np.random.default_rng(1)
    for _ in range(50):
        outcome, fwd = eve_intercept_resend(StateVector([0, 1]), z, rng)
        assert outcome == 1
        np.testing.assert_allclose(fwd.amps, [0, 1])


def test_eve_wrong_basis_randomizes():
    x = MeasurementFrame("X", (StateVector([S, S]), StateVector([S, -S])))
    z_frame = [StateVector([1, 0]), StateVector([0, 1])]
    # X then Z on |0>: P(bob reads 1) = 1/2 exactly
    _, fwd_plus = eve_intercept_resend(StateVector([1, 0]), x, np.random.default_rng(0))
    assert measurement_probabilities(fwd_plus, z_frame)[1] == pytest.approx(0.5, abs=1e-12)


def test_eve_qutrit_out_of_frame_forwards_complement():
    xy = six_frames()[0]
    outcome, fwd = eve_intercept_resend(StateVector([0, 0, 1]), xy, np.random.default_rng(0))
    assert outcome == 2
    assert abs(abs(fwd.amps[2]) - 1) < 1e-12


def test_noiseless_sessions_zero_qber():
    for kind in VARIANTS:
        t = run_session(kind, 5000, seed=3)
        assert t.summary["qber"] == 0.0
        assert all(a == b for a, b in sift(t))


@pytest.mark.parametrize("kind", VARIANTS)
def test_sift_rate_within_3_sigma(kind):
    n = 40_000
    p = exact_statistics(kind)["sift_rate"]
    rate = run_session(kind, n, seed=17).summary["sift_rate"]
    assert abs(rate - p) <= 3 * math.sqrt(p * (1 - p) / n)


@pytest.mark.parametrize("kind", VARIANTS)
def test_eve_qber_within_3_sigma(kind):
    n = 40_000
    channel = ChannelModel(eve=UniformEve())
    keep, qber = oracle(kind, eve=True)
    t = run_session(kind, n, channel, seed=23)
    m = t.summary["sifted"]
    assert abs(t.summary["qber"] - qber) <= 3 * math.sqrt(qber * (1 - qber) / m)
    assert abs(t.summary["sift_rate"] - keep) <= 3 * math.sqrt(keep * (1 - keep) / n)


def test_flip_noise_qber():
    n = 40_000
    t = run_session("standard_zx", n, ChannelModel(flip_prob=0.1), seed=5)
    m = t.summary["sifted"]
    assert abs(t.summary["qber"] - 0.1) <= 3 * math.sqrt(0.09 / m)


def test_fixed_eve_in_z_only_hurts_x_rounds():
    t = run_session("standard_zx", 20_000, ChannelModel(eve=FixedFrameEve(0)), seed=2)
    for r in t.rounds:
        if r.kept and r.bob_basis_index == 0:
            assert r.alice_bit == r.bob_bit
    assert exact_statistics("standard_zx", ChannelModel(eve=FixedFrameEve(0)))["qber"] == pytest.approx(0.25)


def test_determinism():
    ch = ChannelModel(flip_prob=0.05, eve=UniformEve())
    a = run_session("qutrit_nine", 3000, ch, seed=99)
    b = run_session("qutrit_nine", 3000, ch, seed=99)
    assert a.to_jsonl() == b.to_jsonl()
    assert a.rounds == b.rounds
    assert run_session("qutrit_nine", 3000, ch, seed=100).to_jsonl() != a.to_jsonl()


def test_transcript_records():
    t = run_session("qutrit_nine", 2000, seed=4)
    s = t.summary
    assert s["sent"] == 2000
    assert s["sift_rate"] == s["sifted"] / s["sent"]
    for r in t.rounds:
        assert r.kept == (r.alice_bit is not None and r.bob_bit is not None)
        if r.kept:
            assert r.alice_basis_index == r.bob_basis_index
    lines = t.to_jsonl().splitlines()
    assert len(lines) == 2000
    assert set(json.loads(lines[0])) >= {"alice_state_index", "bob_basis_index", "kept", "alice_bit"}
    assert json.loads(t.summary_json())["sent"] == 2000


def test_qubit_alice_basis_follows_state():
    t = run_session("standard_zx", 500, seed=1)
    for r in t.rounds:
        assert r.alice_basis_index == r.alice_state_index // 2
        assert r.kept == (r.alice_basis_index == r.bob_basis_index)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        ProtocolVariant("bb92")
    with pytest.raises(ValueError):
        run_session("standard_zx", 0)
    with pytest.raises(ValueError):
        ChannelModel(flip_prob=1.5)
