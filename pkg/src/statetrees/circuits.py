"""Compile orthogonal state trees into state-preparation circuits.

The recursion: a tensor vertex concatenates the child circuits on their
disjoint wires; a two-child sum alpha |psi1> + beta |psi2> preps a fresh
ancilla to alpha|0> + beta|1>, applies U^-1 V to the register under
ancilla control (U, V the child circuits), resets the ancilla with a
NOT conditioned on the OR of the register, and finishes by applying U.
The reset works because U^-1 V |0..0> has no overlap with |0..0>
exactly when the children are orthogonal.  One ancilla per nesting
level of sum vertices; the pool is reused across siblings.

Wire layout: data qubit q sits on wire q-1, ancillas follow; wire 0 is
the most significant bit of the simulator index, so a simulated vector
equals evaluate(tree) tensor |0..0> on the ancillas when all is well.

The OR register of a sum vertex covers the child circuits' ancilla
wires as well as their data wires: the child blocks restore their own
ancillas only on the intended input track, so the reset must watch the
whole section the conditioned block may touch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .dsl import fmt_float
from .errors import NonOrthogonalError, OversizeError, ParseError, StateTreesError
from .trees import (Leaf, Node, Plus, StateTree, Tensor, TOLERANCE,
                    classify_tree, evaluate, mask_qubits, qubit_mask)


class PrepStateError(StateTreesError):
    """A prep gate hit a qubit that was not in |0>."""

    code = "prep-nonzero"


@dataclass(frozen=True)
class Prep:
    qubit: int
    alpha: complex
    beta: complex

    def matrix(self) -> np.ndarray:
        a, b = complex(self.alpha), complex(self.beta)
        return np.array([[a, -b.conjugate()], [b, a.conjugate()]])


@dataclass(frozen=True, eq=False)
class Unitary:
    qubits: tuple[int, ...]
    matrix: np.ndarray


@dataclass(frozen=True)
class OrNot:
    target: int
    register: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class ControlledSub:
    control: int
    polarity: int
    body: "Circuit"


Gate = Union[Prep, Unitary, OrNot, ControlledSub]


@dataclass(eq=False)
class Circuit:
    n_data: int
    n_ancilla: int
    gates: list[Gate] = field(default_factory=list)

    @property
    def width(self) -> int:
        return self.n_data + self.n_ancilla


def gate_count(c: Circuit) -> int:
    """Number of elementary gates, controlled bodies counted through."""
    total = 0
    for g in c.gates:
        total += gate_count(g.body) if isinstance(g, ControlledSub) else 1
    return total


# ---------------------------------------------------------------------------
# compilation


def _binarize(children: tuple[tuple[complex, Node], ...]) -> tuple[complex, Node, complex, Node | None]:
    """(alpha, T1, beta, T2) for a balanced two-way split of a sum vertex.

    Halving keeps the internal fan-in-2 nesting (and so the ancilla
    pool) logarithmic in the original fan-in.
    """

    def side(part: tuple[tuple[complex, Node], ...]) -> tuple[complex, Node | None]:
        w = math.sqrt(sum(abs(c) ** 2 for c, _ in part))
        if w == 0.0:
            return 0.0, None
        if len(part) == 1:
            return part[0]
        return w, Plus(tuple((c / w, t) for c, t in part))

    half = (len(children) + 1) // 2
    a, t1 = side(children[:half])
    b, t2 = side(children[half:])
    if t1 is None:  # all weight sits in the back half
        return b, t2, 0.0, None
    return a, t1, b, t2


def _invert_gates(gates: list[Gate]) -> list[Gate]:
    out: list[Gate] = []
    for g in reversed(gates):
        if isinstance(g, Prep):
            out.append(Unitary((g.qubit,), g.matrix().conj().T))
        elif isinstance(g, Unitary):
            out.append(Unitary(g.qubits, g.matrix.conj().T))
        elif isinstance(g, OrNot):
            out.append(g)
        else:
            out.append(ControlledSub(g.control, g.polarity, invert(g.body)))
    return out


def invert(c: Circuit) -> Circuit:
    """Reverse the gates and conjugate-transpose each one."""
    return Circuit(c.n_data, c.n_ancilla, _invert_gates(c.gates))


def _as_unitary_gates(gates: list[Gate]) -> list[Gate]:
    """Preps relaxed to their unitary extensions (recursively).

    Needed when a preparation block is replayed on a register that is no
    longer |0..0>, where it must act as the unitary it extends to rather
    than assert its usual precondition.
    """
    out: list[Gate] = []
    for g in gates:
        if isinstance(g, Prep):
            out.append(Unitary((g.qubit,), g.matrix()))
        elif isinstance(g, ControlledSub):
            out.append(ControlledSub(g.control, g.polarity,
                                     Circuit(g.body.n_data, g.body.n_ancilla,
                                             _as_unitary_gates(g.body.gates))))
        else:
            out.append(g)
    return out


def compile_tree(tree: StateTree, max_qubits: int = 20) -> Circuit:
    """Circuit preparing evaluate(tree) from |0..0>, per the sum recursion.

    Requires the tree to classify as orthogonal or manifestly
    orthogonal; the ancilla count equals the deepest nesting of sum
    vertices (with fan-in folded to 2).
    """
    label = classify_tree(tree, max_qubits=max_qubits)
    if label == "general":
        raise NonOrthogonalError("the sum recursion needs orthogonal children")
    n = tree.n

    def rec(node: Node, depth: int) -> tuple[list[Gate], int]:
        """Returns (gates, ancilla levels used below this node)."""
        if isinstance(node, Leaf):
            return [Prep(node.qubit - 1, node.alpha, node.beta)], 0
        if isinstance(node, Tensor):
            gates: list[Gate] = []
            used = 0
            for ch in node.children:
                g, u = rec(ch, depth)
                gates += g
                used = max(used, u)
            return gates, used
        alpha, t1, beta, t2 = _binarize(node.children)
        if t2 is None:
            gates, used = rec(t1, depth)
            if alpha != 1:
                w = mask_qubits(qubit_mask(t1))[0] - 1
                gates.append(Unitary((w,), np.array([[alpha, 0], [0, alpha]])))
            return gates, used
        aw = n + depth
        u_gates, u_used = rec(t1, depth + 1)
        v_gates, v_used = rec(t2, depth + 1)
        used = 1 + max(u_used, v_used)
        data_wires = [q - 1 for q in mask_qubits(qubit_mask(node))]
        anc_wires = [n + depth + 1 + i for i in range(max(u_used, v_used))]
        body = Circuit(n, 0, v_gates + _invert_gates(u_gates))
        gates = [
            Prep(aw, alpha, beta),
            ControlledSub(aw, 1, body),
            OrNot(aw, tuple(data_wires + anc_wires)),
        ]
        # replaying U on the superposition: preps act as plain unitaries
        gates += _as_unitary_gates(u_gates)
        return gates, used

    gates, used = rec(tree.root, 0)
    return Circuit(n, used, gates)


# ---------------------------------------------------------------------------
# dense simulation


def _bit(total: int, wire: int) -> int:
    return 1 << (total - 1 - wire)


def _control_mask(idx: np.ndarray, total: int, controls: list[tuple[int, int]]) -> np.ndarray:
    ok = np.ones(len(idx), dtype=bool)
    for w, pol in controls:
        bit = (idx & _bit(total, w)) != 0
        ok &= bit if pol else ~bit
    return ok


def _apply_gates(vec: np.ndarray, total: int, gates: list[Gate],
                 controls: list[tuple[int, int]], tol: float) -> None:
    idx = np.arange(len(vec))
    for g in gates:
        if isinstance(g, ControlledSub):
            _apply_gates(vec, total, g.body.gates, controls + [(g.control, g.polarity)], tol)
            continue
        if isinstance(g, OrNot):
            ok = _control_mask(idx, total, controls)
            reg = 0
            for w in g.register:
                reg |= _bit(total, w)
            flip = ok & ((idx & reg) != 0)
            src = np.where(flip, idx ^ _bit(total, g.target), idx)
            vec[:] = vec[src]
            continue
        if isinstance(g, Prep):
            wires = (g.qubit,)
            mat = g.matrix()
            ok = _control_mask(idx, total, controls)
            in_slice = float(np.sum(np.abs(vec[ok]) ** 2))
            bad = ok & ((idx & _bit(total, g.qubit)) != 0)
            leaked = float(np.sum(np.abs(vec[bad]) ** 2))
            if leaked > tol * max(in_slice, 1e-300):
                raise PrepStateError(
                    f"prep on wire {g.qubit}: |1> mass {leaked:.3e} of {in_slice:.3e}")
        else:
            wires = g.qubits
            mat = np.asarray(g.matrix, dtype=complex)
            if len(wires) > 3:
                raise OversizeError("unitary gates are capped at 3 wires")
        if len(set(wires)) != len(wires):
            raise ValueError("gate wires repeat")
        if set(wires) & {w for w, _ in controls}:
            raise ValueError("gate acts on one of its control wires")
        k = len(wires)
        bits = [_bit(total, w) for w in wires]
        free = _control_mask(idx, total, controls)
        for b in bits:
            free &= (idx & b) == 0
        base = idx[free]
        offsets = []
        for z in range(1 << k):
            off = 0
            for j in range(k):
                if (z >> (k - 1 - j)) & 1:
                    off |= bits[j]
            offsets.append(off)
        block = np.stack([vec[base + off] for off in offsets])
        block = mat @ block
        for z, off in enumerate(offsets):
            vec[base + off] = block[z]


def simulate(c: Circuit, max_width: int = 20, tol: float = TOLERANCE) -> np.ndarray:
    """Dense state vector after running the circuit on |0..0>."""
    total = c.width
    if total > max_width:
        raise OversizeError(f"{total} wires exceed the dense cap {max_width}")
    vec = np.zeros(1 << total, dtype=complex)
    vec[0] = 1.0
    _apply_gates(vec, total, c.gates, [], tol)
    return vec


def verify_prepare(tree: StateTree, max_width: int = 20) -> dict:
    """Compile, simulate, and compare against the tree's own evaluation."""
    circ = compile_tree(tree)
    sim = simulate(circ, max_width=max_width)
    target = np.zeros(1 << circ.width, dtype=complex)
    target[np.arange(1 << tree.n) << circ.n_ancilla] = evaluate(tree)
    fid = float(abs(np.vdot(sim, target)) ** 2)
    return {
        "n": tree.n,
        "ancillas": circ.n_ancilla,
        "gates": gate_count(circ),
        "fidelity": fid,
    }


# ---------------------------------------------------------------------------
# text format


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_data} {c.n_ancilla}"]

    def emit(gates: list[Gate], indent: int) -> None:
        pad = "  " * indent
        for g in gates:
            if isinstance(g, Prep):
                a, b = complex(g.alpha), complex(g.beta)
                lines.append(f"{pad}prep {g.qubit} {fmt_float(a.real)} {fmt_float(a.imag)} "
                             f"{fmt_float(b.real)} {fmt_float(b.imag)}")
            elif isinstance(g, Unitary):
                k = len(g.qubits)
                nums = []
                for row in np.asarray(g.matrix):
                    for z in row:
                        z = complex(z)
                        nums += [fmt_float(z.real), fmt_float(z.imag)]
                qs = " ".join(str(q) for q in g.qubits)
                lines.append(f"{pad}u {k} {qs} " + " ".join(nums))
            elif isinstance(g, OrNot):
                qs = " ".join(str(q) for q in g.register)
                lines.append(f"{pad}ornot {g.target} {qs}")
            else:
                lines.append(f"{pad}csub {g.control} {g.polarity} {{")
                emit(g.body.gates, indent + 1)
                lines.append(f"{pad}}}")

    emit(c.gates, 0)
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    raw = [ln.split(";")[0].strip() for ln in text.splitlines()]
    rows = [(i + 1, ln) for i, ln in enumerate(raw) if ln]
    if not rows:
        raise ParseError("empty circuit text")
    ln_no, head = rows[0]
    parts = head.split()
    if len(parts) != 3 or parts[0] != "qubits":
        raise ParseError(f"expected 'qubits D A', got {head!r}", ln_no, 1)
    try:
        n_data, n_anc = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError(f"bad qubit counts in {head!r}", ln_no, 1) from None

    pos = 1

    def parse_gates(n_data: int) -> list[Gate]:
        nonlocal pos
        gates: list[Gate] = []
        while pos < len(rows):
            ln_no, ln = rows[pos]
            if ln == "}":
                return gates
            pos += 1
            toks = ln.split()
            try:
                if toks[0] == "prep" and len(toks) == 6:
                    q = int(toks[1])
                    nums = [float(t) for t in toks[2:]]
                    gates.append(Prep(q, complex(nums[0], nums[1]), complex(nums[2], nums[3])))
                elif toks[0] == "u":
                    k = int(toks[1])
                    qs = tuple(int(t) for t in toks[2:2 + k])
                    nums = [float(t) for t in toks[2 + k:]]
                    dim = 1 << k
                    if len(nums) != 2 * dim * dim:
                        raise ValueError("matrix entry count")
                    mat = np.array([complex(nums[2 * i], nums[2 * i + 1])
                                    for i in range(dim * dim)]).reshape(dim, dim)
                    gates.append(Unitary(qs, mat))
                elif toks[0] == "ornot" and len(toks) >= 3:
                    gates.append(OrNot(int(toks[1]), tuple(int(t) for t in toks[2:])))
                elif toks[0] == "csub" and len(toks) == 4 and toks[3] == "{":
                    control, pol = int(toks[1]), int(toks[2])
                    body_gates = parse_gates(n_data)
                    if pos >= len(rows) or rows[pos][1] != "}":
                        raise ParseError("unterminated csub block", ln_no, 1)
                    pos += 1
                    gates.append(ControlledSub(control, pol, Circuit(n_data, 0, body_gates)))
                else:
                    raise ValueError("unknown gate")
            except ParseError:
                raise
            except (ValueError, IndexError):
                raise ParseError(f"bad gate line {ln!r}", ln_no, 1) from None
        return gates

    gates = parse_gates(n_data)
    if pos != len(rows):
        ln_no, ln = rows[pos]
        raise ParseError(f"unexpected {ln!r}", ln_no, 1)
    return Circuit(n_data, n_anc, gates)


__all__ = [
    "Circuit", "ControlledSub", "Gate", "OrNot", "Prep", "PrepStateError",
    "Unitary", "compile_tree", "format_circuit", "gate_count", "invert",
    "parse_circuit", "simulate", "verify_prepare",
]
