"""Multilinear formulas: evaluation, expansion, conversions, balancing."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_multilinear_formula, random_tree
from statetrees.builders import (build_cat, build_cluster1d, build_hamming,
                                 build_knill_tree, build_parity,
                                 build_parity_fourier)
from statetrees.errors import NonMultilinearError
from statetrees.formulas import (Add, Const, Mul, Var, balance,
                                 build_threshold_formula, expand_polynomial,
                                 formula_depth, formula_eval, formula_size,
                                 formula_to_tree, formula_truth_values,
                                 formula_vars, function_to_state, is_multilinear,
                                 is_syntactic, make_syntactic, parse_formula,
                                 polys_close, serialize_formula,
                                 state_to_function, tree_to_formula)
from statetrees.rng import stream
from statetrees.trees import evaluate, fidelity, tree_size, validate


def one_minus(g):
    return Add(Const(1), Mul(Const(-1), g))


def test_eval_and_size():
    assert formula_eval(Var(1), {1: 1}) == 1
    f = Add(Mul(one_minus(Var(1)), one_minus(Var(2))), Mul(Var(1), Var(2)))
    for x1 in (0, 1):
        for x2 in (0, 1):
            want = 1 if x1 == x2 else 0
            assert formula_eval(f, {1: x1, 2: x2}) == pytest.approx(want)
    assert formula_size(Add(Mul(Var(1), Var(2)), Mul(Const(2.5), Var(3)))) == 4


def test_expand_polynomial():
    f = Mul(Add(Var(1), Const(2)), Var(2))
    assert polys_close(expand_polynomial(f), {0b11: 1, 0b10: 2})
    with pytest.raises(NonMultilinearError):
        expand_polynomial(Mul(Var(1), Var(1)))
    assert not is_multilinear(Mul(Var(1), Add(Var(1), Const(1))))


def test_truth_values_match_pointwise_eval():
    rng = stream(21)
    for trial in range(15):
        f = random_multilinear_formula(rng, list(range(1, 6)), 40)
        tv = formula_truth_values(f, 5)
        for x in range(32):
            point = {i: (x >> (5 - i)) & 1 for i in range(1, 6)}
            assert tv[x] == pytest.approx(formula_eval(f, point), abs=1e-9)


def test_make_syntactic_spec_case():
    f = Mul(Var(1), Add(Var(2), Mul(Const(0), Var(1))))
    assert not is_syntactic(f)
    g = make_syntactic(f)
    assert is_syntactic(g)
    assert formula_size(g) <= formula_size(f)
    assert polys_close(expand_polynomial(g), {0b11: 1})


def test_make_syntactic_keeps_already_syntactic():
    f = Mul(Var(1), Var(2))
    assert make_syntactic(f) == f


def test_make_syntactic_random():
    rng = stream(22)
    done = 0
    while done < 50:
        base = random_multilinear_formula(rng, list(range(1, 8)), 48)
        used = sorted(formula_vars(base))
        if not used:
            continue
        # graft a degree-0 mention of a used variable into a product:
        # multilinear but not syntactic
        x = int(rng.choice(used))
        c = float(rng.integers(1, 4))
        f = Mul(Add(Const(c), Mul(Const(0), Var(x))), base)
        assert not is_syntactic(f)
        g = make_syntactic(f)
        assert is_syntactic(g)
        assert formula_size(g) <= formula_size(f)
        assert polys_close(expand_polynomial(g), expand_polynomial(f), 1e-9)
        done += 1


def test_make_syntactic_rejects_nonmultilinear():
    with pytest.raises(NonMultilinearError):
        make_syntactic(Mul(Var(1), Add(Var(1), Const(1))))


def test_tree_to_formula_leaf():
    f = tree_to_formula(random_tree(50, 1))
    t = random_tree(50, 1)
    v = evaluate(t)
    f = tree_to_formula(t)
    assert formula_eval(f, {1: 0}) == pytest.approx(complex(v[0]), abs=1e-12)
    assert formula_eval(f, {1: 1}) == pytest.approx(complex(v[1]), abs=1e-12)


@pytest.mark.parametrize("make", [
    lambda: build_cat(3),
    lambda: build_parity(4, 0),
    lambda: build_cluster1d(4),
    lambda: build_knill_tree(),
    lambda: build_hamming(4, 2),
])
def test_tree_to_formula_pointwise(make):
    t = make()
    f = tree_to_formula(t)
    assert is_multilinear(f)
    v = evaluate(t)
    tv = formula_truth_values(f, t.n)
    assert np.allclose(tv, v, atol=1e-9)


def test_tree_to_formula_pointwise_random_grid():
    for trial in range(10):
        n = 2 + trial % 5
        t = random_tree(60, n, trial)
        tv = formula_truth_values(tree_to_formula(t), n)
        assert np.allclose(tv, evaluate(t), atol=1e-9)
    # full 2^10 grid on a bigger structured state
    t = build_parity(10, 1)
    tv = formula_truth_values(tree_to_formula(t), 10)
    assert np.max(np.abs(tv - evaluate(t))) <= 1e-9


def test_formula_to_tree_basics():
    t = formula_to_tree(Mul(Var(1), Var(2)), 2)
    assert np.allclose(evaluate(t), [0, 0, 0, 1])
    with pytest.raises(ValueError):
        formula_to_tree(Const(0), 2)
    with pytest.raises(NonMultilinearError):
        formula_to_tree(Mul(Var(1), Var(1)), 1)


def test_formula_roundtrip_on_builders():
    cases = [build_cat(3), build_parity(4, 1), build_parity_fourier(5, 0),
             build_cluster1d(4), build_knill_tree(), build_hamming(5, 2)]
    for t in cases:
        f = tree_to_formula(t)
        t2 = formula_to_tree(f, t.n)
        assert validate(t2) == []
        assert fidelity(evaluate(t2), evaluate(t)) > 1 - 1e-9
        assert tree_size(t2) <= 3 * (formula_size(f) + t.n)


def test_formula_to_tree_normalizes():
    # f = x1 + (1-x1) has values (1,1); the state is the uniform one
    f = Add(Var(1), one_minus(Var(1)))
    t = formula_to_tree(f, 2)
    assert np.allclose(evaluate(t), [0.5, 0.5, 0.5, 0.5])


def test_balance_comb():
    f = Var(1)
    for i in range(2, 33):
        f = Add(f, Var(i))
    assert formula_depth(f) == 31
    b = balance(f)
    assert formula_depth(b) <= 28
    assert polys_close(expand_polynomial(b, max_vars=32),
                       expand_polynomial(f, max_vars=32))


def test_balance_leaf_and_random():
    assert balance(Var(1)) == Var(1)
    rng = stream(23)
    from conftest import DYADIC_POOL
    for trial in range(50):
        # dyadic constants keep the expansions exact, so the 1e-9
        # coefficient comparison is about structure, not float noise
        f = random_multilinear_formula(rng, list(range(1, 11)),
                                       int(rng.integers(4, 257)),
                                       const_pool=DYADIC_POOL)
        sz = formula_size(f)
        b = balance(f)
        assert polys_close(expand_polynomial(b), expand_polynomial(f), 1e-9)
        assert formula_depth(b) <= 4 * math.log2(max(sz, 2)) + 8


def test_balance_rejects_nonmultilinear():
    with pytest.raises(NonMultilinearError):
        balance(Mul(Var(1), Var(1)))


def test_threshold_bases():
    assert build_threshold_formula(1, 1) == Var(1)
    assert build_threshold_formula(3, 0) == Const(1)
    t21 = formula_truth_values(build_threshold_formula(2, 1), 2).real
    assert np.allclose(t21, [0, 1, 1, 1], atol=1e-9)


@pytest.mark.parametrize("k", range(1, 9))
def test_threshold_counting_oracle(k):
    for h in range(k + 1):
        f = build_threshold_formula(k, h)
        assert is_multilinear(f)
        tv = formula_truth_values(f, k).real
        for x in range(1 << k):
            assert tv[x] == pytest.approx(1.0 if bin(x).count("1") >= h else 0.0,
                                          abs=1e-9)


def test_majority_8():
    f = build_threshold_formula(8, 4)
    tv = formula_truth_values(f, 8).real
    cnt = np.array([bin(x).count("1") for x in range(256)])
    assert np.allclose(tv, (cnt >= 4).astype(float), atol=1e-9)


def test_state_function_roundtrip():
    cat = evaluate(build_cat(3))
    table = state_to_function(cat)
    assert np.allclose(function_to_state(table), cat)
    rng = stream(24)
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    v /= np.linalg.norm(v)
    assert np.allclose(function_to_state(state_to_function(v)), v)
    # unnormalized tables are normalized
    assert np.allclose(function_to_state(np.ones(4)), np.full(4, 0.5))
    with pytest.raises(ValueError):
        function_to_state(np.zeros(4))


def test_formula_dsl_roundtrip():
    rng = stream(25)
    for trial in range(30):
        f = random_multilinear_formula(rng, list(range(1, 7)), 30,
                                       complex_consts=True)
        text = serialize_formula(f)
        f2 = parse_formula(text)
        assert serialize_formula(f2) == text
        assert polys_close(expand_polynomial(f2), expand_polynomial(f), 1e-12)
