"""Compiling orthogonal trees into state-preparation circuits.

Run:  python demos/05_circuits.py
"""

from statetrees.builders import (build_cat, build_coset_fourier_otree,
                                 build_knill_tree, build_parity)
from statetrees.circuits import compile_tree, format_circuit, verify_prepare
from statetrees.gf2 import BitMatrix, Coset
from statetrees.mots import mots_coset
from statetrees.trees import classify_tree, tree_size

print("=== The cat state's circuit, in full ===")
print(format_circuit(compile_tree(build_cat(2))))

print("=== Fidelities and gate counts across the corpus ===")
a = BitMatrix(3, 8, (0b11001010, 0b00111100, 0b01010101))
corpus = [
    ("cat-6", build_cat(6)),
    ("parity-8", build_parity(8, 0)),
    ("coset-fourier-8", build_coset_fourier_otree(Coset(a, 0))),
    ("40-leaf 5-qubit state", build_knill_tree()),
    ("mots witness, parity-8", mots_coset(BitMatrix(1, 8, (255,))).witness),
]
print(f"{'state':24s} {'leaves':>6s} {'class':>22s} {'anc':>4s} "
      f"{'gates':>6s} {'fidelity':>16s}")
for name, t in corpus:
    rep = verify_prepare(t)
    print(f"{name:24s} {tree_size(t):6d} {classify_tree(t):>22s} "
          f"{rep['ancillas']:4d} {rep['gates']:6d} {rep['fidelity']:16.12f}")

print()
print("gate count grows with tree size times qubit count; the OR-controlled")
print("reset lets one ancilla per nesting level be reused across the tree.")
