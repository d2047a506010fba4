"""Circuit compiler and dense simulator."""

from __future__ import annotations

import numpy as np
import pytest

from conftest import random_unitary
from statetrees.builders import (build_cat, build_coset_fourier_otree,
                                 build_knill_tree, build_parity,
                                 build_parity_fourier)
from statetrees.circuits import (Circuit, ControlledSub, OrNot, Prep,
                                 PrepStateError, Unitary, compile_tree,
                                 format_circuit, gate_count, invert,
                                 parse_circuit, simulate, verify_prepare)
from statetrees.errors import NonOrthogonalError, OversizeError
from statetrees.gf2 import BitMatrix, Coset
from statetrees.rng import stream
from statetrees.trees import Leaf, StateTree, Tensor


def test_product_tree_compiles_to_preps():
    t = StateTree(3, Tensor((Leaf(1, 1, 0), Leaf(2, 0.6, 0.8),
                             Leaf(3, 2**-0.5, 2**-0.5))))
    c = compile_tree(t)
    assert c.n_ancilla == 0
    assert gate_count(c) == 3
    assert all(isinstance(g, Prep) for g in c.gates)
    assert verify_prepare(t)["fidelity"] > 1 - 1e-9


def test_cat2():
    rep = verify_prepare(build_cat(2))
    assert rep["ancillas"] == 1
    assert rep["fidelity"] > 1 - 1e-9


def test_ornot_semantics():
    v = simulate(Circuit(2, 0, [OrNot(0, (1,))]))
    assert v[0b00] == pytest.approx(1)  # register |0>: unchanged
    v = simulate(Circuit(2, 0, [Prep(1, 0, 1), OrNot(0, (1,))]))
    assert v[0b11] == pytest.approx(1)  # register |1>: target flipped


def test_controlled_sub_polarity():
    body = Circuit(2, 0, [Prep(1, 0, 1)])
    v = simulate(Circuit(2, 0, [ControlledSub(0, 0, body)]))
    assert v[0b01] == pytest.approx(1)
    v = simulate(Circuit(2, 0, [ControlledSub(0, 1, body)]))
    assert v[0b00] == pytest.approx(1)  # control not satisfied


def test_prep_on_nonzero_raises():
    with pytest.raises(PrepStateError):
        simulate(Circuit(1, 0, [Prep(0, 0, 1), Prep(0, 1, 0)]))


def test_invert_undoes_random_circuits():
    rng = stream(31)
    for trial in range(20):
        gates = []
        for _ in range(6):
            kind = int(rng.integers(0, 3))
            if kind == 0:
                gates.append(Unitary((int(rng.integers(0, 4)),), random_unitary(rng, 2)))
            elif kind == 1:
                a, b = sorted(int(x) for x in rng.permutation(4)[:2])
                gates.append(Unitary((a, b), random_unitary(rng, 4)))
            else:
                ws = [int(x) for x in rng.permutation(4)[:3]]
                gates.append(OrNot(ws[0], tuple(ws[1:])))
        c = Circuit(4, 0, gates)
        v = simulate(Circuit(4, 0, c.gates + invert(c).gates))
        assert abs(v[0] - 1) < 1e-9


def test_invert_involution_matrices():
    c = compile_tree(build_cat(3))
    cc = invert(invert(c))

    def matrices(circ):
        for g in circ.gates:
            if isinstance(g, Prep):
                yield g.matrix()
            elif isinstance(g, Unitary):
                yield np.asarray(g.matrix)
            elif isinstance(g, ControlledSub):
                yield from matrices(g.body)

    for m1, m2 in zip(matrices(c), matrices(cc)):
        assert np.max(np.abs(m1 - m2)) < 1e-12


def test_compile_rejects_general_trees():
    from statetrees.trees import Plus
    t = StateTree(1, Plus(((0.6, Leaf(1, 1, 0)), (0.8, Leaf(1, 0, 1)))))
    # |0> and |1> are orthogonal, this compiles; a repeated-leaf sum must not
    r2 = 2**-0.5
    bad = StateTree(1, Plus(((r2, Leaf(1, r2, r2)), (r2, Leaf(1, r2, r2)))))
    with pytest.raises(NonOrthogonalError):
        compile_tree(bad)
    assert verify_prepare(t)["fidelity"] > 1 - 1e-9


def test_corpus_fidelities():
    a = BitMatrix(3, 8, (0b11001010, 0b00111100, 0b01010101))
    corpus = [
        build_cat(2), build_cat(6),
        build_parity(4, 0), build_parity(8, 1),
        build_parity_fourier(6, 0),
        build_knill_tree(),
        build_coset_fourier_otree(Coset(a, a.mul_vec(0b10110001))),
    ]
    for t in corpus:
        rep = verify_prepare(t)
        assert rep["fidelity"] > 1 - 1e-9, rep
        assert rep["n"] + rep["ancillas"] <= 12


def test_simulate_oversize():
    with pytest.raises(OversizeError):
        simulate(Circuit(21, 0, []))


def test_circuit_text_roundtrip():
    c = compile_tree(build_parity(4, 0))
    text = format_circuit(c)
    c2 = parse_circuit(text)
    assert format_circuit(c2) == text
    assert np.allclose(simulate(c2), simulate(c), atol=1e-12)


def test_circuit_parse_errors():
    from statetrees.errors import ParseError
    with pytest.raises(ParseError):
        parse_circuit("nonsense\n")
    with pytest.raises(ParseError):
        parse_circuit("qubits 2 0\nprep 0 1 0\n")  # wrong arity
    with pytest.raises(ParseError):
        parse_circuit("qubits 2 0\ncsub 0 1 {\nprep 1 1 0 0 0\n")  # unterminated
