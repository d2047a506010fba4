"""Multilinear formulas: the tree bridge, Brent balancing, thresholds.

Run:  python demos/04_formulas_and_balancing.py
"""

import numpy as np

from statetrees.builders import build_cluster1d, build_parity
from statetrees.formulas import (Add, Var, balance, build_threshold_formula,
                                 formula_depth, formula_size, formula_to_tree,
                                 formula_truth_values, serialize_formula,
                                 tree_to_formula)
from statetrees.trees import evaluate, fidelity, tree_size, validate

print("=== Tree -> formula: amplitudes become polynomial values ===")
t = build_parity(4, 0)
f = tree_to_formula(t)
print(f"parity-4 tree (size {tree_size(t)}) -> formula with "
      f"{formula_size(f)} leaves")
tv = formula_truth_values(f, 4)
print("max |formula - amplitude| over the 2^4 grid:",
      float(np.max(np.abs(tv - evaluate(t)))))

print()
print("=== ... and back: formula -> tree ===")
t2 = formula_to_tree(f, 4)
print("round-trip fidelity:", round(fidelity(evaluate(t2), evaluate(t)), 14),
      " violations:", validate(t2))

print()
print("=== Brent balancing: left comb of 32 summands ===")
comb = Var(1)
for i in range(2, 33):
    comb = Add(comb, Var(i))
bal = balance(comb)
print(f"depth {formula_depth(comb)} -> {formula_depth(bal)}, "
      f"size {formula_size(comb)} -> {formula_size(bal)}")

print()
print("=== A deep builder state, balanced ===")
f8 = tree_to_formula(build_cluster1d(8))
b8 = balance(f8)
print(f"cluster-8 formula: size {formula_size(f8)}, depth {formula_depth(f8)}"
      f" -> balanced size {formula_size(b8)}, depth {formula_depth(b8)}")

print()
print("=== Threshold formulas by divide and conquer ===")
print(serialize_formula(build_threshold_formula(2, 1)))
for k, h in [(4, 2), (8, 4), (12, 6)]:
    f = build_threshold_formula(k, h)
    tv = formula_truth_values(f, k).real
    counts = np.array([bin(x).count("1") for x in range(1 << k)])
    ok = np.max(np.abs(tv - (counts >= h))) <= 1e-9
    print(f"T_{k}^{h}: {formula_size(f):5d} leaves, truth table exact: {ok}")
