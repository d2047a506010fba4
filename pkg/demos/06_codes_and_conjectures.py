"""Divisibility states, the concatenated-code matrix, and the
subset-sums-mod-p coverage experiment.

Run:  python demos/06_codes_and_conjectures.py
"""

import numpy as np

from statetrees.builders import build_divisibility_state, build_divisibility_tree
from statetrees.codes import VandermondeParams, build_binary_vandermonde, min_nonzero_image_weight
from statetrees.gf2 import BitMatrix, Coset
from statetrees.rank import (erasure_recoverability_check, subset_sum_coverage,
                             vandermonde_rank_experiment)
from statetrees.trees import evaluate, fidelity, tree_size

print("=== Multiples of p as a sum of np phased product terms ===")
for n, p in [(8, 5), (10, 13)]:
    v = build_divisibility_state(n, p)
    t = build_divisibility_tree(n, p)
    print(f"n={n}, p={p:2d}: tree size {tree_size(t):4d} (= np), "
          f"fidelity {fidelity(evaluate(t), v):.12f}")

print()
print("=== Reed-Solomon x Hadamard: guaranteed image weight ===")
params = VandermondeParams(15, 3, 4, c=8)
vbin = build_binary_vandermonde(params)
w = min_nonzero_image_weight(vbin)
print(f"V is {vbin.k} x {vbin.n}; min nonzero |Vu| = {w} "
      f"(guarantee (n-k) 2^(d-1) = {(params.n - params.k) * 2**(params.d - 1)})")
rep = vandermonde_rank_experiment(params, 2000, seed=7)
print(f"random ({params.k * params.d}+{params.c}) x {params.k * params.d} "
      f"row submatrices full rank: {rep['full_rank_fraction']:.3f} "
      f"(union bound {rep['union_bound']:.3f})")

print()
print("=== Erasure recoverability of a coset, via restriction matrices ===")
sub = Coset(BitMatrix(4, 10, (0b1111100000, 0b0000011111,
                              0b1010101010, 0b1100110011)), 0)
rep = erasure_recoverability_check(sub, l=4, trials=100, seed=11)
for k in ("rank_min", "rank_median", "rank_max", "threshold",
          "prob_rank_ge_threshold", "nonrecoverable_fraction"):
    print(f"  {k}: {rep[k]}")

print()
print("=== Subset sums mod p: how much of Z_p do 2^m sums cover? ===")
for p in (101, 499):
    rep = subset_sum_coverage(24, 12, p, gamma=0.2, trials=200, seed=99)
    print(f"p={p:3d}: coverage median {rep['coverage_median']:.0f} of {p}, "
          f"Pr[coverage >= 1.2 p/2] = {rep['prob_coverage_ge_target']:.2f}")
