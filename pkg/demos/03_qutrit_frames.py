"""
Qubit sphere points and qutrit frames
=====================================
"""
import math

from entkit.frames import (
    DIRECTION_NAMES,
    QubitPoint,
    RotationParams,
    frame_membership,
    general_rotation,
    nine_directions,
    qubit_point_to_state,
    six_frames,
)
from entkit.linalg import StateVector, apply, is_unitary

s = 1 / math.sqrt(2)
for name, point in {"A": (0, 1, math.pi / 2), "B": (s, s, math.pi / 2), "C": (s, s, 0)}.items():
    print(name, qubit_point_to_state(QubitPoint(*point)))

rot = general_rotation(RotationParams(0.6, 0.8, 0.4, 1.1))
print("rotation unitary:", is_unitary(rot))
print("rotation |0> ->", apply(rot, StateVector([1, 0])))

###############################################################################
# Nine directions, six frames. Computational directions sit in two frames each.

for name, d in zip(DIRECTION_NAMES, nine_directions()):
    print(f"{name:>4}", ", ".join(frame_membership(d)))
for f in six_frames():
    print(f.label, f.plane)
