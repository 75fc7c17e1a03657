import itertools
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from entkit.frames import (
    Frame,
    NotADirectionError,
    QubitPoint,
    RotationParams,
    frame_membership,
    general_rotation,
    nine_directions,
    qubit_point_to_state,
    six_frames,
)
from entkit.gates import hadamard2
from entkit.linalg import NormalizationError, StateVector, apply, equal_up_to_global_phase, inner, is_unitary

S = 1 / math.sqrt(2)


@pytest.mark.parametrize(
    "point, expected",
    [
        ((0, 1, math.pi / 2), [0, 1j]),  # A
        ((S, S, math.pi / 2), [S, 1j * S]),  # B
        ((S, S, 0), [S, S]),  # C
    ],
)
def test_figure_points(point, expected):
    np.testing.assert_allclose(qubit_point_to_state(QubitPoint(*point)).amps, expected, atol=1e-12)


def test_qubit_point_validation():
    with pytest.raises(NormalizationError):
        QubitPoint(0.5, 0.5, 0)
    with pytest.raises(ValueError):
        QubitPoint(-1, 0, 0)


def test_general_rotation_examples():
    np.testing.assert_allclose(general_rotation(RotationParams(1, 0, 0, 0)).entries, np.diag([1, -1]))
    np.testing.assert_allclose(general_rotation(RotationParams(S, S, 0, 0)).entries, hadamard2().entries, atol=1e-12)
    assert is_unitary(general_rotation(RotationParams(0.6, 0.8, 0.4, 1.1)), 1e-12)


def test_general_rotation_unitary_symbolically():
    phi, t1, t2 = sp.symbols("phi t1 t2", real=True)
    a, b = sp.cos(phi), sp.sin(phi)
    m = sp.Matrix(
        [[a * sp.exp(sp.I * t1), b * sp.exp(-sp.I * t2)], [b * sp.exp(sp.I * t2), -a * sp.exp(-sp.I * t1)]]
    )
    residual = (m.H * m - sp.eye(2)).applyfunc(lambda e: sp.simplify(sp.expand_complex(e)))
    assert residual == sp.zeros(2, 2)


angles = st.floats(-10, 10, allow_nan=False)


@given(st.floats(0, math.pi / 2), angles, angles)
def test_rotation_properties(phi, t1, t2):
    p = RotationParams(math.cos(phi), math.sin(phi), t1, t2)
    u = general_rotation(p)
    assert is_unitary(u, 1e-12)
    out = apply(u, StateVector([1, 0]))
    expected = [p.alpha * np.exp(1j * t1), p.beta * np.exp(1j * t2)]
    np.testing.assert_allclose(out.amps, expected, atol=1e-12)


@given(st.floats(0, math.pi / 2), st.floats(0, 2 * math.pi, exclude_max=True))
def test_qubit_point_normalized(phi, theta):
    s = qubit_point_to_state(QubitPoint(math.cos(phi), math.sin(phi), theta))
    assert s.dim == 2 and s.is_normalized(1e-12)


def test_nine_directions():
    d = nine_directions()
    assert len(d) == 9
    np.testing.assert_allclose(d[2].amps, [0, 0, 1])
    np.testing.assert_allclose(d[3].amps, [S, S, 0])
    # zero: 3 comp-comp, 6 comp-sup, 3 same-plane sup; 1/2: comp in a sup; 1/4: sups sharing one axis
    overlaps = [round(abs(inner(a, b)) ** 2, 12) for a, b in itertools.combinations(d, 2)]
    assert len(overlaps) == 36
    assert {x: overlaps.count(x) for x in set(overlaps)} == {0.0: 12, 0.25: 12, 0.5: 12}


def test_six_frames_cover_nine_directions():
    frames = six_frames()
    assert len(frames) == 6
    assert [f.plane for f in frames] == ["XY", "XY", "XZ", "XZ", "YZ", "YZ"]
    vecs = [v for f in frames for v in f.vectors]
    distinct = []
    for v in vecs:
        if not any(equal_up_to_global_phase(v, u).matched for u in distinct):
            distinct.append(v)
    assert len(distinct) == 9
    for v in distinct:
        assert any(equal_up_to_global_phase(v, d).matched for d in nine_directions())
    for f in frames:
        a, b = f.vectors
        assert abs(inner(a, b)) <= 1e-12
        assert a.is_normalized() and b.is_normalized()


def test_frames_mutually_unbiased_per_plane():
    frames = six_frames()
    for comp, sup in zip(frames[::2], frames[1::2]):
        assert comp.plane == sup.plane
        for u in comp.vectors:
            for v in sup.vectors:
                assert abs(inner(u, v)) ** 2 == pytest.approx(0.5, abs=1e-12)


def test_frame_membership():
    d = nine_directions()
    assert frame_membership(d[0]) == ["XY-computational", "XZ-computational"]
    assert frame_membership(d[7]) == ["YZ-superposition"]
    assert frame_membership(StateVector([0, 0, 1j])) == ["XZ-computational", "YZ-computational"]
    counts = [len(frame_membership(s)) for s in d]
    assert counts == [2, 2, 2, 1, 1, 1, 1, 1, 1]
    with pytest.raises(NotADirectionError):
        frame_membership(StateVector([0.6, 0.8, 0]))


def test_frame_rejects_non_orthogonal():
    d = nine_directions()
    with pytest.raises(ValueError):
        Frame("bad", (d[0], d[3]), "XY")


def test_frame_complement():
    for f in six_frames():
        w = f.complement()
        assert all(abs(inner(v, w)) <= 1e-12 for v in f.vectors)
