"""
Dense coding with the standard and ±i Bell bases
================================================

Alice applies one of four group elements to her half of Phi+; Bob measures
in the matching quadruple. Measuring in the other quadruple gives a coin flip
between two outcomes.
"""
import numpy as np

from entkit.entanglement import FLAVORS, MESSAGES, decode_distribution, extended_decode, extended_encode

for flavor in FLAVORS:
    other = FLAVORS[1 - FLAVORS.index(flavor)]
    for msg in MESSAGES:
        state = extended_encode(msg, flavor)
        cross = {k: round(v, 3) for k, v in decode_distribution(state, other).items() if v > 1e-12}
        print(f"{flavor:>8} {msg} -> {extended_decode(state, flavor)}   in {other}: {cross}")

rng = np.random.default_rng(1)
state = extended_encode("00", "i-basis")
shots = [extended_decode(state, "standard", rng) for _ in range(10_000)]
print({m: shots.count(m) for m in MESSAGES})
