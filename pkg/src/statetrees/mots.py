"""Exact manifestly-orthogonal tree size of coset states.

For the uniform superposition over {x : Ax = b}, the minimum leaf count
over manifestly orthogonal trees depends only on A and obeys

    M(A) = min over column splits (I, J) of
           2^(rank A_I + rank A_J - rank A) * (M(A_I) + M(A_J)),

with single-column base 2 for a zero column and 1 otherwise under the
default 'classical' leaf convention (leaves restricted to |0>/|1>).
Because a free leaf may hold (|0>+|1>)/sqrt(2) directly, the 'free'
convention uses base 1 for zero columns instead; both are implemented.

The solver runs the recurrence as a dynamic program over column-subset
bitmasks (about n 3^n rank lookups), reconstructs a witness tree by
grouping coset elements, and `mots_bruteforce` independently minimizes
over all manifestly orthogonal trees for tiny explicit supports so the
recurrence can be cross-checked.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .errors import OversizeError
from .gf2 import BitMatrix, COSET_CAP, Coset, enumerate_coset, rank_gf2, random_bitmatrix
from .rng import stream
from .trees import Leaf, Node, Plus, StateTree, Tensor

_R2 = 2.0 ** -0.5

CONVENTIONS = ("classical", "free")


def _leaf_base(convention: str, zero_column: bool) -> int:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    return (2 if convention == "classical" else 1) if zero_column else 1


@dataclass
class MotsResult:
    value: int
    convention: str
    witness: StateTree | None
    table: dict[int, tuple[int, int | None]] | None


def _subset_ranks(cols: list[int]) -> list[int]:
    """GF(2) rank of every column subset, by incremental basis insertion."""
    n = len(cols)
    size = 1 << n
    rank = [0] * size
    bases: list[tuple[int, ...]] = [()] * size
    for mask in range(1, size):
        low = mask & -mask
        prev = mask ^ low
        v = cols[low.bit_length() - 1]
        for b in bases[prev]:
            if (v ^ b) < v:
                v ^= b
        if v:
            rank[mask] = rank[prev] + 1
            bases[mask] = bases[prev] + (v,)
        else:
            rank[mask] = rank[prev]
            bases[mask] = bases[prev]
    return rank


def mots_coset(a: BitMatrix, convention: str = "classical", b: int = 0,
               witness: bool = True, table: bool = True,
               max_n: int = 22, cap: int = COSET_CAP) -> MotsResult:
    """M(A) by subset dynamic programming, with an optional witness tree.

    The witness represents the coset state for (A, b) (b = 0: the
    subgroup state), is manifestly orthogonal, and has exactly M(A)
    leaves under the chosen convention.
    """
    n = a.n
    if n > max_n:
        raise OversizeError(f"n={n} exceeds the 3^n subset budget (max {max_n})")
    cols = a.columns()
    rank = _subset_ranks(cols)
    size = 1 << n
    val = [0] * size
    arg: list[int | None] = [None] * size
    for mask in range(1, size):
        low = mask & -mask
        rest = mask ^ low
        if rest == 0:
            val[mask] = _leaf_base(convention, cols[low.bit_length() - 1] == 0)
            continue
        rmask = rank[mask]
        best = None
        best_i = -1
        s = (rest - 1) & rest  # largest proper submask; I always keeps the low bit
        while True:
            i_mask = low | s
            j_mask = mask ^ i_mask
            v = (val[i_mask] + val[j_mask]) << (rank[i_mask] + rank[j_mask] - rmask)
            if best is None or v < best or (v == best and i_mask < best_i):
                best, best_i = v, i_mask
            if s == 0:
                break
            s = (s - 1) & rest
        val[mask] = best
        arg[mask] = best_i
    full = size - 1
    result_table = {m: (val[m], arg[m]) for m in range(1, size)} if table else None
    wit = _build_witness(a, b, val, arg, convention, cap) if witness else None
    return MotsResult(val[full], convention, wit, result_table)


def _column_qubit_bit(n: int, j: int) -> int:
    """Bit of column j (variable j+1) inside an n-bit string int."""
    return 1 << (n - 1 - j)


def _build_witness(a: BitMatrix, b: int, val: list[int], arg: list[int | None],
                   convention: str, cap: int) -> StateTree:
    n = a.n
    elems = enumerate_coset(Coset(a, b), cap)

    def mask_bits(col_mask: int) -> int:
        out = 0
        for j in range(n):
            if (col_mask >> j) & 1:
                out |= _column_qubit_bit(n, j)
        return out

    def build(col_mask: int, group: list[int]) -> Node:
        if col_mask & (col_mask - 1) == 0:
            j = col_mask.bit_length() - 1
            q = j + 1
            bit = _column_qubit_bit(n, j)
            vals = {1 if (x & bit) else 0 for x in group}
            if len(vals) == 1:
                v = vals.pop()
                return Leaf(q, 1.0 - v, float(v))
            if convention == "free":
                return Leaf(q, _R2, _R2)
            return Plus(((_R2, Leaf(q, 1.0, 0.0)), (_R2, Leaf(q, 0.0, 1.0))))
        i_mask = arg[col_mask]
        j_mask = col_mask ^ i_mask
        i_bits = mask_bits(i_mask)
        j_bits = mask_bits(j_mask)
        groups: dict[int, list[int]] = {}
        for x in group:
            groups.setdefault(a.mul_vec(x & i_bits), []).append(x)
        parts = []
        for key in sorted(groups):
            sub = groups[key]
            si = sorted({x & i_bits for x in sub})
            sj = sorted({x & j_bits for x in sub})
            assert len(si) * len(sj) == len(sub), "coset projection grouping broke"
            parts.append(Tensor((build(i_mask, si), build(j_mask, sj))))
        if len(parts) == 1:
            return parts[0]
        coeff = (1.0 / len(parts)) ** 0.5
        return Plus(tuple((coeff, p) for p in parts))

    return StateTree(n, build((1 << n) - 1, elems))


# ---------------------------------------------------------------------------
# brute-force oracle over explicit supports


_PROJ_TABLES: dict[tuple[int, int], list[int]] = {}


def _proj_table(m: int, posmask: int) -> list[int]:
    """basis index over m positions (MSB = position 0) -> index over posmask."""
    got = _PROJ_TABLES.get((m, posmask))
    if got is not None:
        return got
    positions = [p for p in range(m) if (posmask >> p) & 1]
    table = []
    for b in range(1 << m):
        out = 0
        for p in positions:
            out = (out << 1) | ((b >> (m - 1 - p)) & 1)
        table.append(out)
    _PROJ_TABLES[(m, posmask)] = table
    return table


def mots_bruteforce(strings: list[int] | set[int], n: int,
                    convention: str = "classical",
                    max_n: int = 4, max_states: int = 16) -> int:
    """Exact minimum leaves over all manifestly orthogonal trees for |S>.

    Exhaustive recursion, independent of the coset recurrence: at each
    level try every split of the support into two nonempty parts (a +
    vertex; the parts automatically have disjoint supports) and every
    nontrivial qubit bipartition along which the support factorizes (a
    tensor vertex).  Supports are bitmasks over the local basis (bit b =
    basis state b present), memoized per qubit set.  Desk-scale only.
    """
    if n > max_n:
        raise OversizeError(f"brute force capped at {max_n} qubits")
    elems = sorted(set(strings))
    if not elems:
        raise ValueError("support must be nonempty")
    if len(elems) > max_states:
        raise OversizeError(f"brute force capped at {max_states} support strings")
    if max(elems) >= (1 << n):
        raise ValueError("support string exceeds n bits")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    pair_base = 1 if convention == "free" else 2
    tables: dict[tuple[int, ...], list[int]] = {}

    def rec(qubits: tuple[int, ...], support: int) -> int:
        m = len(qubits)
        if m == 1:
            return pair_base if support == 0b11 else 1
        tab = tables.get(qubits)
        if tab is None:
            tab = [0] * (1 << (1 << m))
            tables[qubits] = tab
        got = tab[support]
        if got:
            return got
        best = 0
        # + splits: any partition of the support into two nonempty parts;
        # the part s1 keeps the lowest set bit, so each split shows up once
        low = support & -support
        rest = support ^ low
        if rest:
            s = (rest - 1) & rest
            while True:
                s1 = low | s
                s2 = support ^ s1
                c1 = tab[s1] or rec(qubits, s1)
                c2 = tab[s2] or rec(qubits, s2)
                cost = c1 + c2
                if not best or cost < best:
                    best = cost
                if s == 0:
                    break
                s = (s - 1) & rest
        # tensor splits: qubit bipartitions along which S is a product set
        count = support.bit_count()
        members = [b for b in range(1 << m) if (support >> b) & 1]
        for imask in range(1, (1 << m) - 1, 2):  # position 0 stays on the I side
            jmask = ((1 << m) - 1) ^ imask
            ti = _proj_table(m, imask)
            tj = _proj_table(m, jmask)
            pi = 0
            pj = 0
            for b in members:
                pi |= 1 << ti[b]
                pj |= 1 << tj[b]
            if pi.bit_count() * pj.bit_count() != count:
                continue
            qi = tuple(qubits[p] for p in range(m) if (imask >> p) & 1)
            qj = tuple(qubits[p] for p in range(m) if (jmask >> p) & 1)
            cost = rec(qi, pi) + rec(qj, pj)
            if not best or cost < best:
                best = cost
        tab[support] = best
        return best

    support = 0
    for e in elems:
        support |= 1 << e
    return rec(tuple(range(1, n + 1)), support)


# ---------------------------------------------------------------------------
# random-matrix experiment


def mots_random_experiment(n: int, k: int, trials: int, seed: int,
                           convention: str = "classical",
                           max_n: int = 22) -> dict:
    """Distribution of M(A) over uniform k x n matrices; report only.

    Also counts the structural 'bad events' a lower-bound argument cares
    about: an all-zero column, and (when 12k <= n) a sampled k x 12k
    column submatrix of rank at most 2k/3.
    """
    if n > max_n:
        raise OversizeError(f"n={n} exceeds max {max_n}")
    values = []
    zero_cols = 0
    low_rank = 0
    d = 12 * k
    check_low_rank = 0 < d <= n
    for t in range(trials):
        a = random_bitmatrix(k, n, seed, t)
        res = mots_coset(a, convention=convention, witness=False, table=False)
        values.append(res.value)
        cols = a.columns()
        if any(c == 0 for c in cols):
            zero_cols += 1
        if check_low_rank:
            rng = stream(seed, (1 << 32) + t)
            hit = False
            for _ in range(50):
                pick = sorted(int(x) for x in rng.choice(n, size=d, replace=False))
                sub = a.column_submatrix(pick)
                if rank_gf2(sub) * 3 <= 2 * k:
                    hit = True
                    break
            low_rank += hit
    hist: dict[int, int] = {}
    for v in values:
        hist[v] = hist.get(v, 0) + 1
    return {
        "n": n,
        "k": k,
        "trials": trials,
        "seed": seed,
        "convention": convention,
        "min": min(values),
        "median": statistics.median(values),
        "max": max(values),
        "histogram": dict(sorted(hist.items())),
        "zero_column_fraction": zero_cols / trials,
        "low_rank_submatrix_fraction": (low_rank / trials) if check_low_rank else None,
    }


__all__ = [
    "CONVENTIONS", "MotsResult", "mots_bruteforce", "mots_coset",
    "mots_random_experiment",
]
