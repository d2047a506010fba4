"""Quantum state trees: leaves, superposition (+) and tensor-product gates.

A tree node is one of

* ``Leaf(qubit, alpha, beta)``   -- the 1-qubit state alpha|0> + beta|1>,
* ``Plus(children)``             -- weighted sum; children share a qubit set,
  one complex coefficient per edge,
* ``Tensor(children)``          -- product; children on disjoint qubit sets.

Every vertex of a valid tree represents a normalized state of the qubits
it covers.  Basis convention, used by every module in this package:
qubit 1 is the most significant bit, so the amplitude of |x1 x2 .. xn>
sits at index sum_i x_i 2^(n-i) of the amplitude vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import InvalidTreeError, NonUnitaryError, OversizeError

TOLERANCE = 1e-9
MAX_QUBITS = 20


@dataclass(frozen=True)
class Leaf:
    qubit: int
    alpha: complex
    beta: complex


@dataclass(frozen=True)
class Plus:
    children: tuple[tuple[complex, "Node"], ...]


@dataclass(frozen=True)
class Tensor:
    children: tuple["Node", ...]


Node = Union[Leaf, Plus, Tensor]


@dataclass(frozen=True)
class StateTree:
    n: int
    root: Node


def plus(*weighted: tuple[complex, Node]) -> Plus:
    return Plus(tuple((complex(c), ch) for c, ch in weighted))


def tensor(*children: Node) -> Tensor:
    return Tensor(tuple(children))


def qubit_mask(node: Node) -> int:
    """Bitmask of the qubits under a node (bit q-1 for qubit q)."""
    if isinstance(node, Leaf):
        return 1 << (node.qubit - 1)
    if isinstance(node, Tensor):
        m = 0
        for ch in node.children:
            m |= qubit_mask(ch)
        return m
    m = 0
    for _, ch in node.children:
        m |= qubit_mask(ch)
    return m


def mask_qubits(mask: int) -> list[int]:
    return [q + 1 for q in range(mask.bit_length()) if (mask >> q) & 1]


def tree_size(tree: StateTree | Node) -> int:
    """Number of leaf vertices."""
    node = tree.root if isinstance(tree, StateTree) else tree
    if isinstance(node, Leaf):
        return 1
    if isinstance(node, Tensor):
        return sum(tree_size(ch) for ch in node.children)
    return sum(tree_size(ch) for _, ch in node.children)


def depth(tree: StateTree | Node) -> int:
    """Maximum number of edges from the root down to a leaf."""
    node = tree.root if isinstance(tree, StateTree) else tree
    if isinstance(node, Leaf):
        return 0
    if isinstance(node, Tensor):
        return 1 + max(depth(ch) for ch in node.children)
    return 1 + max(depth(ch) for _, ch in node.children)


# ---------------------------------------------------------------------------
# vector engine


def _tensor_vector(masks: list[int], vecs: list[np.ndarray]) -> tuple[int, np.ndarray]:
    """Kron the per-child vectors, then reorder axes into sorted qubit order."""
    full = 0
    for m in masks:
        full |= m
    concat: list[int] = []
    out = np.ones(1, dtype=complex)
    for m, v in zip(masks, vecs):
        concat += mask_qubits(m)
        out = np.kron(out, v)
    target = mask_qubits(full)
    if concat != target:
        perm = [concat.index(q) for q in target]
        out = out.reshape([2] * len(concat)).transpose(perm).reshape(-1)
    return full, out


def _node_vector(node: Node) -> tuple[int, np.ndarray]:
    """(qubit mask, amplitude vector over the masked qubits, sorted order)."""
    if isinstance(node, Leaf):
        return 1 << (node.qubit - 1), np.array([node.alpha, node.beta], dtype=complex)
    if isinstance(node, Tensor):
        if not node.children:
            raise InvalidTreeError("tensor vertex with no children")
        masks, vecs = [], []
        seen = 0
        for ch in node.children:
            m, v = _node_vector(ch)
            if m & seen:
                raise InvalidTreeError("tensor children overlap on qubits")
            seen |= m
            masks.append(m)
            vecs.append(v)
        return _tensor_vector(masks, vecs)
    if not node.children:
        raise InvalidTreeError("plus vertex with no children")
    mask0 = qubit_mask(node.children[0][1])
    acc = np.zeros(1 << bin(mask0).count("1"), dtype=complex)
    for coeff, ch in node.children:
        m, v = _node_vector(ch)
        if m != mask0:
            raise InvalidTreeError("plus children cover different qubit sets")
        acc += coeff * v
    return mask0, acc


def evaluate(tree: StateTree, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Dense amplitude vector of length 2^n.

    Checks structural invariants (qubit sets, ranges) but not per-vertex
    normalization, so it also evaluates the unnormalized trees produced
    by :func:`restrict`.
    """
    if tree.n > max_qubits:
        raise OversizeError(f"n={tree.n} exceeds max_qubits={max_qubits}")
    full = (1 << tree.n) - 1
    mask = qubit_mask(tree.root)
    if mask & ~full:
        raise InvalidTreeError("tree uses qubits outside 1..n")
    m, v = _node_vector(tree.root)
    if m != full:
        raise InvalidTreeError("root does not cover all qubits 1..n")
    return v


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    path: tuple[int, ...]
    rule: str
    measured: str


def validate(tree: StateTree, max_qubits: int = MAX_QUBITS, tol: float = TOLERANCE) -> list[Violation]:
    """Check all structural and normalization invariants.

    Violations come back as data; an empty list means the tree is valid.
    """
    if tree.n > max_qubits:
        raise OversizeError(f"n={tree.n} exceeds max_qubits={max_qubits}")
    out: list[Violation] = []
    full = (1 << tree.n) - 1

    def walk(node: Node, path: tuple[int, ...]) -> tuple[int, np.ndarray | None]:
        """Returns (mask, vector or None when the subtree is broken)."""
        if isinstance(node, Leaf):
            if not 1 <= node.qubit <= tree.n:
                out.append(Violation(path, "leaf-qubit-range", f"qubit {node.qubit}"))
                return 0, None
            m, v = _node_vector(node)
            nrm = float(np.linalg.norm(v))
            if abs(nrm - 1.0) > tol:
                out.append(Violation(path, "vertex-not-normalized", f"norm {nrm!r}"))
            return m, v
        if isinstance(node, Tensor):
            if not node.children:
                out.append(Violation(path, "empty-children", "tensor with 0 children"))
                return 0, None
            masks, vecs, seen, ok = [], [], 0, True
            for i, ch in enumerate(node.children):
                m, v = walk(ch, path + (i,))
                if v is None:
                    ok = False
                if m & seen:
                    out.append(Violation(path, "tensor-children-overlap", f"child {i}"))
                    ok = False
                seen |= m
                masks.append(m)
                vecs.append(v)
            if not ok:
                return seen, None
            m, v = _tensor_vector(masks, vecs)  # norm = product of child norms
            return m, v
        if not node.children:
            out.append(Violation(path, "empty-children", "plus with 0 children"))
            return 0, None
        results = []
        ok = True
        for i, (_, ch) in enumerate(node.children):
            m, v = walk(ch, path + (i,))
            if v is None:
                ok = False
            results.append((m, v))
        mask0 = results[0][0]
        for i, (m, _) in enumerate(results):
            if m != mask0:
                out.append(Violation(path, "plus-children-qubitset-mismatch", f"child {i}"))
                ok = False
        if not ok:
            union = 0
            for m, _ in results:
                union |= m
            return union, None
        acc = np.zeros_like(results[0][1])
        for (coeff, _), (_, v) in zip(node.children, results):
            acc = acc + coeff * v
        nrm = float(np.linalg.norm(acc))
        if abs(nrm - 1.0) > tol:
            out.append(Violation(path, "vertex-not-normalized", f"norm {nrm!r}"))
        return mask0, acc

    mask, _ = walk(tree.root, ())
    if mask != full:
        out.append(Violation((), "root-qubitset-incomplete",
                             f"covers {sorted(mask_qubits(mask))}, n={tree.n}"))
    return out


def classify_tree(tree: StateTree, max_qubits: int = MAX_QUBITS, tol: float = TOLERANCE) -> str:
    """'manifestly-orthogonal', 'orthogonal' or 'general' (strongest wins).

    A tree is manifestly orthogonal when every + vertex combines children
    with disjoint basis supports, orthogonal when the children are merely
    pairwise orthogonal.  Only structural validity is required, so
    unnormalized trees can be classified too.
    """
    if tree.n > max_qubits:
        raise OversizeError(f"n={tree.n} exceeds max_qubits={max_qubits}")
    state = {"manifest": True, "orthogonal": True}

    def walk(node: Node) -> np.ndarray:
        if isinstance(node, Leaf):
            return _node_vector(node)[1]
        if isinstance(node, Tensor):
            masks = [qubit_mask(ch) for ch in node.children]
            vecs = [walk(ch) for ch in node.children]
            return _tensor_vector(masks, vecs)[1]
        vecs = [walk(ch) for _, ch in node.children]
        if len(vecs) > 1:
            stacked = np.stack(vecs)
            support = np.abs(stacked) > tol
            if np.any(support.sum(axis=0) > 1):
                state["manifest"] = False
            gram = stacked @ stacked.conj().T
            off = gram - np.diag(np.diag(gram))
            if np.max(np.abs(off)) > tol:
                state["orthogonal"] = False
        acc = np.zeros_like(vecs[0])
        for (coeff, _), v in zip(node.children, vecs):
            acc = acc + coeff * v
        return acc

    walk(tree.root)
    if not state["orthogonal"]:
        return "general"
    if not state["manifest"]:
        return "orthogonal"
    return "manifestly-orthogonal"


# ---------------------------------------------------------------------------
# metrics


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for same-length amplitude vectors."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)) ** 2)


def l2_distance2(a: np.ndarray, b: np.ndarray) -> float:
    """sum_x |a_x - b_x|^2."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    d = a - b
    return float(np.vdot(d, d).real)


def eps_to_delta(eps: float) -> float:
    """Fidelity loss eps mapped to l2 budget: 2 - 2 sqrt(1 - eps)."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    return 2.0 - 2.0 * math.sqrt(1.0 - eps)


# ---------------------------------------------------------------------------
# restriction and local operations


def _restrict_node(node: Node, assign: dict[int, int]) -> tuple[complex, Node | None]:
    """Fix some qubits to bits; scalar * eval(result) equals the slice."""
    if isinstance(node, Leaf):
        if node.qubit in assign:
            return (node.beta if assign[node.qubit] else node.alpha), None
        return 1.0 + 0.0j, node
    if isinstance(node, Tensor):
        scalar = 1.0 + 0.0j
        kept = []
        for ch in node.children:
            s, c = _restrict_node(ch, assign)
            scalar *= s
            if c is not None:
                kept.append(c)
        if not kept:
            return scalar, None
        if len(kept) == 1:
            return scalar, kept[0]
        return scalar, Tensor(tuple(kept))
    terms = []
    for coeff, ch in node.children:
        s, c = _restrict_node(ch, assign)
        terms.append((coeff * s, c))
    if all(c is None for _, c in terms):
        return sum(w for w, _ in terms), None
    kept = [(w, c) for w, c in terms if c is not None and w != 0]
    if not kept:
        return 0.0j, None
    if len(kept) == 1:
        return kept[0]
    return 1.0 + 0.0j, Plus(tuple(kept))


def _relabel(node: Node, mapping: dict[int, int]) -> Node:
    if isinstance(node, Leaf):
        return Leaf(mapping[node.qubit], node.alpha, node.beta)
    if isinstance(node, Tensor):
        return Tensor(tuple(_relabel(ch, mapping) for ch in node.children))
    return Plus(tuple((c, _relabel(ch, mapping)) for c, ch in node.children))


def restrict(tree: StateTree, assignment: dict[int, int]) -> tuple[complex, StateTree | None]:
    """Slice the tree along a partial computational-basis assignment.

    Returns (scalar, subtree) with the surviving qubits renumbered 1..n'
    in their original order; scalar * evaluate(subtree) reproduces the
    corresponding slice of evaluate(tree).  The subtree is generally not
    normalized vertex-by-vertex.
    """
    for q, b in assignment.items():
        if not 1 <= q <= tree.n:
            raise ValueError(f"assigned qubit {q} outside 1..{tree.n}")
        if b not in (0, 1):
            raise ValueError(f"assigned value for qubit {q} must be 0 or 1")
    scalar, node = _restrict_node(tree.root, assignment)
    if node is None:
        return scalar, None
    remaining = [q for q in range(1, tree.n + 1) if q not in assignment]
    mapping = {q: i + 1 for i, q in enumerate(remaining)}
    return scalar, StateTree(len(remaining), _relabel(node, mapping))


def normalize_node(node: Node) -> tuple[complex, Node]:
    """Rescale every vertex to a unit-norm state.

    Returns (scalar, node') with scalar * eval(node') == eval(node); the
    scalar is real positive.  Raises on an exactly-zero subtree.
    """
    if isinstance(node, Leaf):
        s = math.hypot(abs(node.alpha), abs(node.beta))
        if s == 0:
            raise InvalidTreeError("leaf with zero amplitude pair")
        return s, Leaf(node.qubit, node.alpha / s, node.beta / s)
    if isinstance(node, Tensor):
        scalar = 1.0 + 0.0j
        kids = []
        for ch in node.children:
            s, c = normalize_node(ch)
            scalar *= s
            kids.append(c)
        return scalar, Tensor(tuple(kids))
    coeffs, kids = [], []
    for coeff, ch in node.children:
        s, c = normalize_node(ch)
        coeffs.append(coeff * s)
        kids.append(c)
    cand = Plus(tuple(zip(coeffs, kids)))
    _, v = _node_vector(cand)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise InvalidTreeError("plus vertex sums to the zero vector")
    return nrm, Plus(tuple((c / nrm, ch) for c, ch in zip(coeffs, kids)))


def _check_unitary(u: np.ndarray, tol: float = TOLERANCE) -> None:
    d = u.shape[0]
    if u.shape != (d, d):
        raise NonUnitaryError(f"matrix is {u.shape}, expected square")
    if not np.allclose(u @ u.conj().T, np.eye(d), rtol=0.0, atol=tol):
        raise NonUnitaryError("matrix is not unitary within tolerance")


def basis_product(qubits: list[int], bits: int) -> Node:
    """|bits> as a product of classical leaves on the given qubits."""
    k = len(qubits)
    leaves = []
    for j, q in enumerate(qubits):
        b = (bits >> (k - 1 - j)) & 1
        leaves.append(Leaf(q, 0.0 if b else 1.0, 1.0 if b else 0.0))
    if k == 1:
        return leaves[0]
    return Tensor(tuple(leaves))


def _column_tree(qubits: list[int], col: np.ndarray) -> Node:
    """Tree for the k-qubit state with amplitudes `col` on `qubits`."""
    k = len(qubits)
    if k == 1:
        return Leaf(qubits[0], complex(col[0]), complex(col[1]))
    terms = [(complex(col[z]), basis_product(qubits, z))
             for z in range(1 << k) if col[z] != 0]
    if len(terms) == 1 and abs(abs(terms[0][0]) - 1.0) < 1e-12:
        # a pure basis column: fold the phase into one leaf
        phase, prod = terms[0]
        first = prod if isinstance(prod, Leaf) else prod.children[0]
        scaled = Leaf(first.qubit, phase * first.alpha, phase * first.beta)
        if isinstance(prod, Leaf):
            return scaled
        return Tensor((scaled,) + prod.children[1:])
    return Plus(tuple(terms))


def apply_local_unitary(tree: StateTree, u: np.ndarray, qubits: list[int],
                        max_qubits: int = MAX_QUBITS) -> StateTree:
    """Apply a k-qubit unitary (k <= 4) and return a tree for the result.

    The output is assembled as sum_y U|y> (x) T_y from the restrictions
    T_y of the input, so its size grows by at most k 4^k.
    """
    k = len(qubits)
    if k == 0 or k > 4:
        raise ValueError("qubit list must have 1..4 entries")
    if len(set(qubits)) != k:
        raise ValueError("qubit list has repeats")
    for q in qubits:
        if not 1 <= q <= tree.n:
            raise ValueError(f"qubit {q} outside 1..{tree.n}")
    u = np.asarray(u, dtype=complex)
    if u.shape != (1 << k, 1 << k):
        raise NonUnitaryError(f"matrix is {u.shape}, expected {(1 << k, 1 << k)}")
    _check_unitary(u)
    if tree.n > max_qubits:
        raise OversizeError(f"n={tree.n} exceeds max_qubits={max_qubits}")

    terms: list[tuple[complex, Node]] = []
    for y in range(1 << k):
        assign = {q: (y >> (k - 1 - j)) & 1 for j, q in enumerate(qubits)}
        s, rest = _restrict_node(tree.root, assign)
        col = u[:, y]
        if rest is None:
            if s == 0:
                continue
            terms.append((complex(s), _column_tree(qubits, col)))
            continue
        if s == 0:
            continue
        mu, rest_n = normalize_node(rest)
        amp = complex(s) * complex(mu)
        if amp == 0:
            continue
        terms.append((amp, Tensor((_column_tree(qubits, col), rest_n))))
    if not terms:
        raise InvalidTreeError("all restrictions vanished; input had zero norm")
    if len(terms) == 1 and terms[0][0] == 1:
        root = terms[0][1]
    else:
        root = Plus(tuple(terms))
    return StateTree(tree.n, root)


def local_basis_change(tree: StateTree, gates: list[np.ndarray]) -> StateTree:
    """Apply one 2x2 unitary per qubit (gates[q-1] to qubit q).

    Leaves are rewritten in place, so the size never grows.
    """
    if len(gates) != tree.n:
        raise ValueError(f"need {tree.n} gates, got {len(gates)}")
    mats = []
    for g in gates:
        g = np.asarray(g, dtype=complex)
        if g.shape != (2, 2):
            raise NonUnitaryError("per-qubit gates must be 2x2")
        _check_unitary(g)
        mats.append(g)

    def walk(node: Node) -> Node:
        if isinstance(node, Leaf):
            g = mats[node.qubit - 1]
            a = g[0, 0] * node.alpha + g[0, 1] * node.beta
            b = g[1, 0] * node.alpha + g[1, 1] * node.beta
            return Leaf(node.qubit, complex(a), complex(b))
        if isinstance(node, Tensor):
            return Tensor(tuple(walk(ch) for ch in node.children))
        return Plus(tuple((c, walk(ch)) for c, ch in node.children))

    return StateTree(tree.n, walk(tree.root))


def amplitude_index(bits: Iterable[int]) -> int:
    """Index of |x1 x2 ... xn> under the qubit-1-is-MSB convention."""
    v = 0
    for b in bits:
        v = (v << 1) | (b & 1)
    return v


__all__ = [
    "Leaf", "Plus", "Tensor", "Node", "StateTree", "Violation",
    "TOLERANCE", "MAX_QUBITS",
    "amplitude_index", "apply_local_unitary", "basis_product", "classify_tree", "depth",
    "eps_to_delta", "evaluate", "fidelity", "l2_distance2",
    "local_basis_change", "mask_qubits", "normalize_node", "plus",
    "qubit_mask", "restrict", "tensor", "tree_size", "validate",
]
