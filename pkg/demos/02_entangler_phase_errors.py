"""
Phase errors in the entangling gate
===================================

A phase error theta1 on the diagonal of the entangling gate tilts its output
away from Phi+. Applying H⊗H afterwards moves weight onto the odd-parity
outcomes 01 and 10, which would be zero for a perfect gate.
"""
import numpy as np

from entkit.entanglement import detection_probability, entangler_fidelity
from entkit.gates import imperfect_entangler
from entkit.linalg import unitarity_residual

print(f"{'theta1':>8} {'fidelity':>10} {'detect':>10} {'cos²':>10} {'sin²':>10}")
for theta in np.linspace(0, np.pi, 9):
    f, d = entangler_fidelity(theta), detection_probability(theta)
    print(f"{theta:8.4f} {f:10.6f} {d:10.6f} {np.cos(theta / 2) ** 2:10.6f} {np.sin(theta / 2) ** 2:10.6f}")

###############################################################################
# Small random errors, as a real device would have.

rng = np.random.default_rng(2026)
thetas = rng.uniform(-0.1, 0.1, size=(1000, 2))
det = np.array([detection_probability(t1, t2) for t1, t2 in thetas])
print("mean detection probability:", det.mean())

###############################################################################
# The perturbed matrix itself is not unitary: its unitarity residual grows as
# max(|sin theta1|, |sin theta2|), even though its action on |00> stays normalized.

for t1, t2 in [(0.0, 0.0), (0.05, -0.02), (0.3, 0.7)]:
    print((t1, t2), "residual", round(unitarity_residual(imperfect_entangler(t1, t2)), 6))
