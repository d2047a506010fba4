"""MOTS solver: recurrence values, witnesses, brute-force oracle agreement."""

from __future__ import annotations

import numpy as np
import pytest

from statetrees.builders import build_coset_sigma1
from statetrees.errors import OversizeError
from statetrees.gf2 import BitMatrix, Coset, enumerate_coset, random_bitmatrix
from statetrees.mots import (mots_bruteforce, mots_coset,
                             mots_random_experiment)
from statetrees.trees import classify_tree, evaluate, fidelity, tree_size, validate


def parity_matrix(n: int) -> BitMatrix:
    return BitMatrix(1, n, ((1 << n) - 1,))


def cat_matrix(n: int) -> BitMatrix:
    rows = tuple(0b11 << (n - 2 - i) for i in range(n - 1))
    return BitMatrix(n - 1, n, rows)


def test_parity_values():
    for conv in ("classical", "free"):
        for n, want in [(2, 4), (4, 16), (8, 64)]:
            assert mots_coset(parity_matrix(n), conv, witness=False,
                              table=False).value == want


def test_cat_matrix_value():
    assert mots_coset(cat_matrix(4), witness=False, table=False).value == 8


def test_base_cases():
    z = BitMatrix(1, 1, (0,))
    assert mots_coset(z, "classical", witness=False).value == 2
    assert mots_coset(z, "free", witness=False).value == 1
    nz = BitMatrix(1, 1, (1,))
    assert mots_coset(nz, "classical", witness=False).value == 1
    assert mots_coset(nz, "free", witness=False).value == 1


def test_table_contents():
    res = mots_coset(parity_matrix(2))
    assert res.table[0b11] == (4, 0b01)
    assert res.table[0b01][0] == 1 and res.table[0b01][1] is None


def test_witness_soundness():
    cases = [(parity_matrix(4), 0), (parity_matrix(3), 1), (cat_matrix(4), 0),
             (BitMatrix(2, 4, (0, 0)), 0), (random_bitmatrix(2, 5, 9), 0)]
    for conv in ("classical", "free"):
        for a, b in cases:
            res = mots_coset(a, conv, b=b)
            w = res.witness
            assert validate(w) == []
            assert classify_tree(w) == "manifestly-orthogonal"
            assert tree_size(w) == res.value
            elems = enumerate_coset(Coset(a, b))
            expect = np.zeros(1 << a.n, dtype=complex)
            expect[elems] = len(elems) ** -0.5
            assert fidelity(evaluate(w), expect) > 1 - 1e-9


def test_classical_witness_uses_classical_leaves():
    from statetrees.trees import Leaf, Tensor

    def leaves(node):
        if isinstance(node, Leaf):
            yield node
        elif isinstance(node, Tensor):
            for ch in node.children:
                yield from leaves(ch)
        else:
            for _, ch in node.children:
                yield from leaves(ch)

    res = mots_coset(BitMatrix(2, 4, (0, 0)), "classical")
    for lf in leaves(res.witness.root):
        assert (lf.alpha, lf.beta) in ((1.0, 0.0), (0.0, 1.0))


def test_bruteforce_examples():
    assert mots_bruteforce({0, 1}, 1, "free") == 1
    assert mots_bruteforce({0, 1}, 1, "classical") == 2
    assert mots_bruteforce({0b00, 0b11}, 2, "classical") == 4
    assert mots_bruteforce({0b00, 0b11}, 2, "free") == 4
    assert mots_bruteforce({0, 1, 2, 3}, 2, "free") == 2
    assert mots_bruteforce({0, 1, 2, 3}, 2, "classical") == 4


def test_bruteforce_guards():
    with pytest.raises(OversizeError):
        mots_bruteforce({0}, 5)
    with pytest.raises(ValueError):
        mots_bruteforce(set(), 2)


def test_oracle_equivalence_sample():
    for conv in ("classical", "free"):
        for trial in range(30):
            n = 2 + trial % 3
            k = 1 + trial % n
            a = random_bitmatrix(k, n, 1000, trial)
            b = a.mul_vec(trial % (1 << n))
            got = mots_coset(a, conv, b=b, witness=False, table=False).value
            want = mots_bruteforce(enumerate_coset(Coset(a, b)), n, conv)
            assert got == want, (conv, trial)


def test_column_duplication_monotone():
    for trial in range(15):
        n = 3 + trial % 6
        k = 1 + trial % 3
        a = random_bitmatrix(k, n, 2000, trial)
        base = mots_coset(a, witness=False, table=False).value
        dup_col = trial % n
        rows = tuple((r << 1) | ((r >> (n - 1 - dup_col)) & 1) for r in a.rows)
        a2 = BitMatrix(k, n + 1, rows)
        assert mots_coset(a2, witness=False, table=False).value >= base


def test_upper_bound_vs_sigma1():
    for trial in range(10):
        n = 3 + trial % 5
        k = 1 + trial % 3
        a = random_bitmatrix(k, n, 3000, trial)
        c = Coset(a, 0)
        value = mots_coset(a, witness=False, table=False).value
        assert value <= tree_size(build_coset_sigma1(c))


def test_random_experiment_edges():
    rep = mots_random_experiment(6, 0, 4, 3)
    assert rep["min"] == rep["max"] == 12  # classical free state: 2n
    rep = mots_random_experiment(6, 0, 4, 3, convention="free")
    assert rep["min"] == rep["max"] == 6
    rep = mots_random_experiment(5, 5, 12, 4)
    assert rep["min"] == 5  # some invertible draw pins a single point
    rep2 = mots_random_experiment(5, 5, 12, 4)
    assert rep == rep2


def test_oversize_guard():
    with pytest.raises(OversizeError):
        mots_coset(BitMatrix(1, 23, (0,)), witness=False, table=False)
