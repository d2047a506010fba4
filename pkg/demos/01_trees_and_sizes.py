"""Tour of state trees: building, evaluating, measuring, classifying.

Run:  python demos/01_trees_and_sizes.py
"""

import numpy as np

from statetrees import classify_tree, evaluate, parse, serialize, tree_size, validate
from statetrees.builders import (build_cat, build_cluster1d, build_hamming,
                                 build_knill_tree, build_parity,
                                 build_parity_fourier)
from statetrees.dsl import format_amplitudes

print("=== A cat state as a tree ===")
cat = build_cat(3)
print(serialize(cat))
print("size:", tree_size(cat), " class:", classify_tree(cat))
print(format_amplitudes(evaluate(cat), skip_zeros=True))

print("=== Parity: the n^2-leaf halving tree vs the 2n-leaf Fourier form ===")
for n in (4, 8, 16):
    t = build_parity(n, 0)
    f = build_parity_fourier(n, 0)
    same = abs(np.vdot(evaluate(t), evaluate(f))) ** 2
    print(f"n={n:3d}  halving size {tree_size(t):4d} ({classify_tree(t)})"
          f"   fourier size {tree_size(f):3d} ({classify_tree(f)}), overlap {same:.12f}")

print()
print("=== The 40-leaf decomposition of the 5-qubit +-1/4 state ===")
knill = build_knill_tree()
print("size:", tree_size(knill), " class:", classify_tree(knill),
      " violations:", validate(knill))
print(format_amplitudes(evaluate(knill), skip_zeros=True))

print("=== 1-D cluster states: general trees of size O(n^4) ===")
for n in (2, 4, 8):
    t = build_cluster1d(n)
    print(f"n={n}: size {tree_size(t):4d}  (n^4 = {n**4})  class {classify_tree(t)}")

print()
print("=== Hamming-weight superpositions (quasipolynomial trees) ===")
for n, k in [(2, 1), (4, 2), (8, 4)]:
    t = build_hamming(n, k)
    print(f"W({n},{k}): size {tree_size(t)}")

print()
print("=== Round-tripping through the DSL ===")
text = serialize(cat)
again = parse(text)
print("re-serialization identical:", serialize(again) == text)
