"""Shared generators for the test suite.

Everything is seeded through the package's own Philox streams so the
suite is bit-reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from statetrees.formulas import Add, Const, Mul, Var
from statetrees.rng import stream
from statetrees.trees import Leaf, Plus, StateTree, Tensor, normalize_node


def random_unitary(rng, d: int) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_tree_node(rng, qubits: list[int], allow_plus: bool = True):
    """A random valid tree node over the given qubits."""
    if len(qubits) == 1:
        a = complex(rng.normal(), rng.normal())
        b = complex(rng.normal(), rng.normal())
        s = math.hypot(abs(a), abs(b))
        return Leaf(qubits[0], a / s, b / s)
    if allow_plus and rng.random() < 0.5:
        k = int(rng.integers(2, 4))
        kids = [random_tree_node(rng, qubits, allow_plus=False) for _ in range(k)]
        coeffs = rng.normal(size=k) + 1j * rng.normal(size=k)
        _, node = normalize_node(Plus(tuple(zip(map(complex, coeffs), kids))))
        return node
    cut = int(rng.integers(1, len(qubits)))
    idx = list(rng.permutation(len(qubits)))
    left = sorted(qubits[i] for i in idx[:cut])
    right = sorted(qubits[i] for i in idx[cut:])
    return Tensor((random_tree_node(rng, left), random_tree_node(rng, right)))


def random_tree(seed: int, n: int, index: int = 0) -> StateTree:
    rng = stream(seed, index)
    return StateTree(n, random_tree_node(rng, list(range(1, n + 1))))


DYADIC_POOL = (0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0)


def random_multilinear_formula(rng, variables: list[int], budget: int,
                               complex_consts: bool = False,
                               const_pool: tuple[float, ...] | None = None):
    """Syntactic multilinear by construction.

    With const_pool=DYADIC_POOL every constant is a power of two, so
    sparse expansion arithmetic is exact and reassociation-safe.
    """

    def const():
        if const_pool is not None:
            return Const(complex(float(rng.choice(const_pool))))
        if complex_consts:
            return Const(complex(round(rng.normal(), 3), round(rng.normal(), 3)))
        return Const(complex(round(rng.normal(), 3)))

    def rec(avail, b):
        if b <= 1 or not avail or (b <= 2 and rng.random() < 0.5):
            if not avail or rng.random() < 0.25:
                return const()
            return Var(int(rng.choice(avail)))
        if rng.random() < 0.5 or len(avail) < 2:
            bl = int(rng.integers(1, b))
            return Add(rec(avail, bl), rec(avail, b - bl))
        perm = list(rng.permutation(avail))
        cut = int(rng.integers(1, len(perm)))
        bl = int(rng.integers(1, b))
        return Mul(rec(perm[:cut], bl), rec(perm[cut:], b - bl))

    return rec(variables, budget)
