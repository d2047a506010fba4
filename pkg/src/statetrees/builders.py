"""Constructors for the named state families, as explicit trees.

Every builder returns a tree that passes validate() and whose
evaluation matches a direct enumeration of the intended state; the
tests pin both.  Cat and parity trees are manifestly orthogonal, the
Fourier-basis constructions are orthogonal but not manifestly so, and
the 1-D cluster recursion produces a general tree.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from .errors import OversizeError
from .gf2 import COSET_CAP, Coset, enumerate_coset, rank_gf2, row_space_basis, solve
from .trees import Leaf, Node, Plus, StateTree, Tensor, basis_product, local_basis_change

_R2 = 1.0 / math.sqrt(2.0)


def build_cat(n: int) -> StateTree:
    """(|0...0> + |1...1>)/sqrt(2); 2n leaves for n >= 2."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return StateTree(1, Leaf(1, _R2, _R2))
    zeros = Tensor(tuple(Leaf(q, 1.0, 0.0) for q in range(1, n + 1)))
    ones = Tensor(tuple(Leaf(q, 0.0, 1.0) for q in range(1, n + 1)))
    return StateTree(n, Plus(((_R2, zeros), (_R2, ones))))


def _parity_node(qubits: tuple[int, ...], j: int) -> Node:
    m = len(qubits)
    if m == 1:
        return Leaf(qubits[0], 1.0 - j, float(j))
    if m & (m - 1) == 0:
        left, right = qubits[: m // 2], qubits[m // 2:]
        even = Tensor((_parity_node(left, 0), _parity_node(right, j)))
        odd = Tensor((_parity_node(left, 1), _parity_node(right, j ^ 1)))
        return Plus(((_R2, even), (_R2, odd)))
    head, rest = qubits[0], qubits[1:]
    lo = Tensor((Leaf(head, 1.0, 0.0), _parity_node(rest, j)))
    hi = Tensor((Leaf(head, 0.0, 1.0), _parity_node(rest, j ^ 1)))
    return Plus(((_R2, lo), (_R2, hi)))


def build_parity(n: int, j: int) -> StateTree:
    """Uniform superposition over n-bit strings of parity j.

    Halving recursion when n is a power of two (size exactly n^2),
    peeling one qubit otherwise.
    """
    if j not in (0, 1):
        raise ValueError("parity j must be 0 or 1")
    if n < 1:
        raise ValueError("n must be positive")
    return StateTree(n, _parity_node(tuple(range(1, n + 1)), j))


def build_parity_fourier(n: int, j: int) -> StateTree:
    """The same parity state as a 2-term sum of Hadamard products (size 2n)."""
    if j not in (0, 1):
        raise ValueError("parity j must be 0 or 1")
    if n < 1:
        raise ValueError("n must be positive")
    plus_prod = Tensor(tuple(Leaf(q, _R2, _R2) for q in range(1, n + 1)))
    minus_prod = Tensor(tuple(Leaf(q, _R2, -_R2) for q in range(1, n + 1)))
    sign = -1.0 if j else 1.0
    return StateTree(n, Plus(((_R2, plus_prod), (sign * _R2, minus_prod))))


@lru_cache(maxsize=None)
def _segment_counts(m: int) -> dict[tuple[int, int, int], int]:
    """#(strings of length m with first bit i, last bit k, pair-product parity j)."""
    if m == 1:
        return {(i, 0, i): 1 for i in (0, 1)}
    half = _segment_counts(m // 2)
    out: dict[tuple[int, int, int], int] = {}
    for (i, j1, mid_l), c1 in half.items():
        for (mid_r, j2, k), c2 in half.items():
            j = j1 ^ j2 ^ (mid_l & mid_r)
            key = (i, j, k)
            out[key] = out.get(key, 0) + c1 * c2
    return out


def _cluster_segment(qubits: tuple[int, ...], i: int, j: int, k: int) -> Node | None:
    m = len(qubits)
    counts = _segment_counts(m)
    total = counts.get((i, j, k), 0)
    if total == 0:
        return None
    if m == 1:
        return Leaf(qubits[0], 1.0 - i, float(i))
    half = _segment_counts(m // 2)
    left_q, right_q = qubits[: m // 2], qubits[m // 2:]
    terms = []
    for mid_l in (0, 1):
        for mid_r in (0, 1):
            for j1 in (0, 1):
                j2 = j ^ j1 ^ (mid_l & mid_r)
                c1 = half.get((i, j1, mid_l), 0)
                c2 = half.get((mid_r, j2, k), 0)
                if c1 == 0 or c2 == 0:
                    continue
                left = _cluster_segment(left_q, i, j1, mid_l)
                right = _cluster_segment(right_q, mid_r, j2, k)
                coeff = math.sqrt(c1 * c2 / total)
                terms.append((coeff, Tensor((left, right))))
    if len(terms) == 1 and terms[0][0] == 1.0:
        return terms[0][1]
    return Plus(tuple(terms))


def build_cluster1d(n: int) -> StateTree:
    """1-D cluster state 2^{-n/2} sum_x (-1)^{x1 x2 + ... + x_{n-1} x_n} |x>.

    Assembled as the uniform superposition minus twice the odd-phase
    part; the odd part splits over the four (first bit, last bit)
    sectors, each built by a halving recursion with edge coefficients
    computed from exact sector cardinalities.
    """
    if n < 2 or n & (n - 1):
        raise ValueError("n must be a power of 2, n >= 2")
    qubits = tuple(range(1, n + 1))
    uniform = Tensor(tuple(Leaf(q, _R2, _R2) for q in qubits))
    counts = _segment_counts(n)
    terms: list[tuple[complex, Node]] = [(1.0, uniform)]
    scale = 2.0 ** (1.0 - n / 2.0)
    for i in (0, 1):
        for k in (0, 1):
            cnt = counts.get((i, 1, k), 0)
            if cnt == 0:
                continue
            node = _cluster_segment(qubits, i, 1, k)
            terms.append((-scale * math.sqrt(cnt), node))
    return StateTree(n, Plus(tuple(terms)))


def _hamming_node(qubits: tuple[int, ...], k: int) -> Node:
    m = len(qubits)
    if m == 1:
        return Leaf(qubits[0], 1.0 - k, float(k))
    total = math.comb(m, k)
    if m & (m - 1) == 0:
        half = m // 2
        left_q, right_q = qubits[:half], qubits[half:]
        terms = []
        for j in range(max(0, k - half), min(half, k) + 1):
            ways = math.comb(half, j) * math.comb(half, k - j)
            if ways == 0:
                continue
            coeff = math.sqrt(ways / total)
            terms.append((coeff, Tensor((_hamming_node(left_q, j),
                                         _hamming_node(right_q, k - j)))))
        if len(terms) == 1 and terms[0][0] == 1.0:
            return terms[0][1]
        return Plus(tuple(terms))
    head, rest = qubits[0], qubits[1:]
    terms = []
    if k <= m - 1:
        coeff = math.sqrt(math.comb(m - 1, k) / total)
        terms.append((coeff, Tensor((Leaf(head, 1.0, 0.0), _hamming_node(rest, k)))))
    if k >= 1:
        coeff = math.sqrt(math.comb(m - 1, k - 1) / total)
        terms.append((coeff, Tensor((Leaf(head, 0.0, 1.0), _hamming_node(rest, k - 1)))))
    if len(terms) == 1 and terms[0][0] == 1.0:
        return terms[0][1]
    return Plus(tuple(terms))


def build_hamming(n: int, k: int) -> StateTree:
    """Uniform superposition over n-bit strings of Hamming weight k."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return StateTree(n, _hamming_node(tuple(range(1, n + 1)), k))


def build_coset_sigma1(c: Coset, cap: int = COSET_CAP) -> StateTree:
    """|C| classical product terms with coefficients 1/sqrt(|C|)."""
    elems = enumerate_coset(c, cap)
    n = c.n
    qubits = list(range(1, n + 1))
    r = 1.0 / math.sqrt(len(elems))
    if len(elems) == 1:
        return StateTree(n, basis_product(qubits, elems[0]))
    return StateTree(n, Plus(tuple((r, basis_product(qubits, x)) for x in elems)))


def build_coset_fourier_otree(c: Coset, cap: int = COSET_CAP) -> StateTree:
    """Orthogonal tree for |C> over the 2^rank(A) Fourier-support strings.

    The coset state in the Hadamard basis is supported on the row space
    of A with signs (-1)^{u.x0}; build that sparse superposition with
    classical leaves, then change every leaf back with a Hadamard.
    """
    r = rank_gf2(c.a)
    if (1 << r) > cap:
        raise OversizeError(f"dual support 2^{r} exceeds cap {cap}")
    n = c.n
    x0 = solve(c.a, c.b)
    assert x0 is not None
    basis = row_space_basis(c.a)
    supp = [0]
    for v in basis:
        supp += [u ^ v for u in supp]
    supp.sort()
    amp = 2.0 ** (-r / 2.0)
    qubits = list(range(1, n + 1))
    terms = []
    for u in supp:
        sign = -1.0 if (bin(u & x0).count("1") & 1) else 1.0
        terms.append((sign * amp, basis_product(qubits, u)))
    node: Node = terms[0][1] if len(terms) == 1 else Plus(tuple(terms))
    dual = StateTree(n, node)
    h = np.array([[_R2, _R2], [_R2, -_R2]], dtype=complex)
    return local_basis_change(dual, [h] * n)


def build_divisibility_state(n: int, p: int) -> np.ndarray:
    """Uniform superposition over multiples of p among n-bit integers."""
    if p < 2:
        raise ValueError("p must be at least 2")
    if 2 * p > (1 << n):
        raise ValueError("need 2p <= 2^n so the state is nondegenerate")
    v = np.zeros(1 << n, dtype=complex)
    idx = np.arange(0, 1 << n, p)
    v[idx] = 1.0 / math.sqrt(len(idx))
    return v


def build_divisibility_tree(n: int, p: int) -> StateTree:
    """Sum of p phased product terms; evaluates to the divisibility state.

    Term h is a product of leaves (|0> + e^{2 pi i h 2^j / p} |1>)/sqrt(2)
    over the bit place values 2^j, so the term evaluates to the geometric
    character x -> w^{hx}; averaging the p characters leaves exactly the
    multiples of p.  Size n p.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if 2 * p > (1 << n):
        raise ValueError("need 2p <= 2^n so the state is nondegenerate")
    m = (((1 << n) - 1) // p) + 1
    coeff = (2.0 ** (n / 2.0)) / (p * math.sqrt(m))
    terms = []
    for h in range(p):
        leaves = []
        for q in range(1, n + 1):
            j = n - q  # place value of qubit q
            phase = cmath.exp(2j * cmath.pi * h * pow(2, j, p) / p)
            leaves.append(Leaf(q, _R2, phase * _R2))
        terms.append((coeff, Tensor(tuple(leaves))))
    return StateTree(n, Plus(tuple(terms)))


def _pm(qubits: tuple[int, ...], bits_a: int, bits_b: int, sign: float) -> Node:
    """(|a> + sign |b>)/sqrt(2) over the given qubits."""
    return Plus(((_R2, basis_product(list(qubits), bits_a)),
                 (sign * _R2, basis_product(list(qubits), bits_b))))


def build_knill_tree() -> StateTree:
    """The 5-qubit, 16-term, +-1/4 state with a 40-leaf decomposition.

    Four disjoint-support terms, each a 2-qubit Bell-type factor tensor
    a 3-qubit 2-term factor: 4 * (4 + 6) = 40 leaves.
    """
    q12 = (1, 2)
    q345 = (3, 4, 5)
    t1 = Tensor((_pm(q12, 0b01, 0b10, +1.0), _pm(q345, 0b010, 0b111, -1.0)))
    t2 = Tensor((_pm(q12, 0b01, 0b10, -1.0), _pm(q345, 0b001, 0b100, -1.0)))
    t3 = Tensor((_pm(q12, 0b00, 0b11, +1.0), _pm(q345, 0b011, 0b110, +1.0)))
    t4 = Tensor((_pm(q12, 0b00, 0b11, -1.0), _pm(q345, 0b000, 0b101, +1.0)))
    root = Plus(((0.5, t1), (0.5, t2), (-0.5, t3), (0.5, t4)))
    return StateTree(5, root)


__all__ = [
    "build_cat", "build_cluster1d", "build_coset_fourier_otree",
    "build_coset_sigma1", "build_divisibility_state", "build_divisibility_tree",
    "build_hamming", "build_knill_tree", "build_parity", "build_parity_fourier",
]
