"""
The eight-element operator group
================================

Multiply every pair of I..G and compare with the reference table. Products
close only up to a global phase, so the phase of each entry is printed too.
"""
from entkit.gates import LABELS, subgroup_check, verify_table1

verdicts = verify_table1()

print("mult " + " ".join(f"{c:>4}" for c in LABELS))
for row in LABELS:
    cells = [v for v in verdicts if v.row == row]
    print(f"{row:>4} " + " ".join(f"{v.computed + ('' if v.exact else '*'):>4}" for v in cells))
print("(* = equal to the table entry only up to a phase)")

print("agreeing:", sum(v.agrees for v in verdicts), "of", len(verdicts))
print("phases:", sorted({v.phase_label for v in verdicts}))

###############################################################################
# Without the ±i elements, the real operators still form a group.

print("{I, A, B, C} closed:", subgroup_check("IABC"))
print("{I, D} closed:", subgroup_check("ID"))
