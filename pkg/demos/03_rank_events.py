"""The matrix-rank events behind the size lower bounds.

For a random subgroup {x : Ax = 0} and a random balanced partition of
the inputs, whenever the two induced column submatrices are invertible
the partition matrix is a permutation of the identity, hence of full
rank.  The probability of that event approaches the square of
prod_i (1 - 2^-i) ~ 0.2888, and an epsilon-perturbation cannot push the
rank below (1-eps) N.

Run:  python demos/03_rank_events.py
"""

import math

import numpy as np

from statetrees.builders import build_cat
from statetrees.gf2 import invertibility_product
from statetrees.rank import (chi_max, rank_eps_lower_bound,
                             subgroup_rank_experiment)
from statetrees.rng import stream
from statetrees.trees import evaluate

print("=== The invertibility constant ===")
for k in (1, 2, 4, 8, 16, 64):
    print(f"prod_(i<=k) (1 - 2^-i) = {invertibility_product(k):.6f}")

print()
print("=== Subgroup partition matrices, n = 16, 2000 trials ===")
rep = subgroup_rank_experiment(16, 2000, seed=123)
print(f"both submatrices invertible: {rep['both_invertible_fraction']:.4f}"
      f"  (expected {rep['expected_both_invertible']:.4f})")
print(f"full-rank fraction:          {rep['full_rank_fraction']:.4f}")
print(f"permutation matrices confirmed entrywise: {rep['permutation_confirmed']}"
      f"  mismatches: {rep['permutation_mismatch']}")

print()
print("=== Approximate rank lower bound via singular-value tails ===")
n_side = 64
perm = stream(1).permutation(n_side)
m = np.zeros((n_side, n_side))
m[np.arange(n_side), perm] = 1 / math.sqrt(n_side)
for eps in (0.0, 0.25, 0.5, 0.9):
    print(f"rank_eps(perm of I/sqrt({n_side}), eps={eps:4.2f}) >= "
          f"{rank_eps_lower_bound(m, eps):3d}   (= ceil((1-eps)N) = "
          f"{math.ceil((1 - eps) * n_side)})")

print()
print("=== Schmidt rank over all bipartitions ===")
bell = np.zeros(4, dtype=complex)
bell[0] = bell[3] = 2**-0.5
print("chi(cat-6)          =", chi_max(evaluate(build_cat(6))))
print("chi(two Bell pairs) =", chi_max(np.kron(bell, bell)))
print("chi(three Bell pairs) =", chi_max(np.kron(np.kron(bell, bell), bell)))
