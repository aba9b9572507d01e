"""Commutation graph and maximal commuting sets.

Vertices are the non-identity elements; vertex ``v`` is element ``v + 1``.
Rows are bit-packed into Python integers so set operations run on whole rows.
"""
from __future__ import annotations

import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .pauli import Case, commutation_block, index_to_exponents

log = logging.getLogger(__name__)

DEFAULT_MAX_K = 8
ROW_BLOCK = 512


class CaseTooLarge(RuntimeError):
    """Requested case exceeds the configured resource cap."""


@dataclass
class CommutationGraph:
    case: Case
    rows: list[int]

    @property
    def n(self) -> int:
        return len(self.rows)

    def adjacent(self, i: int, j: int) -> bool:
        """Adjacency of 1-based element indices."""
        return bool(self.rows[i - 1] >> (j - 1) & 1)

    def degree(self, i: int) -> int:
        return self.rows[i - 1].bit_count()


def _pack_rows(block: np.ndarray) -> list[int]:
    packed = np.packbits(block, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def build_graph(p, max_k: int = DEFAULT_MAX_K, threads: int | None = None) -> CommutationGraph:
    case = p if isinstance(p, Case) else Case(p)
    if case.k > max_k:
        raise CaseTooLarge(f"case too large: k={case.k} exceeds cap {max_k}")
    n = case.n_elements
    cols = np.arange(1, n + 1)

    def block(start):
        stop = min(start + ROW_BLOCK, n)
        adj = commutation_block(np.arange(start + 1, stop + 1), cols, case.d)
        adj[np.arange(stop - start), np.arange(start, stop)] = False
        return _pack_rows(adj)

    starts = range(0, n, ROW_BLOCK)
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            chunks = list(pool.map(block, starts))
    else:
        chunks = [block(s) for s in starts]
    return CommutationGraph(case, [r for chunk in chunks for r in chunk])


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def maximal_cliques(rows: list[int]) -> list[int]:
    """Bron-Kerbosch with Tomita pivoting over bit-rows; returns cliques as bitmasks."""
    found = []

    def expand(r, p, x):
        if not p:
            if not x:
                found.append(r)
            return
        pivot, best = -1, -1
        for u in _bits(p | x):
            c = (p & rows[u]).bit_count()
            if c > best:
                pivot, best = u, c
        for v in _bits(p & ~rows[pivot]):
            bit = 1 << v
            expand(r | bit, p & rows[v], x & rows[v])
            p &= ~bit
            x |= bit

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, len(rows) + 100))
    try:
        expand(0, (1 << len(rows)) - 1, 0)
    finally:
        sys.setrecursionlimit(limit)
    return found


def twin_classes(rows: list[int]) -> list[list[int]]:
    """Group vertices with identical closed neighbourhoods.

    Such vertices are pairwise adjacent and every maximal clique contains all of
    a class or none of it.
    """
    classes: dict[int, list[int]] = {}
    for v, r in enumerate(rows):
        classes.setdefault(r | (1 << v), []).append(v)
    return list(classes.values())


def maximal_cliques_contracted(rows: list[int]) -> list[int]:
    classes = twin_classes(rows)
    reps = [c[0] for c in classes]
    quotient = []
    for a, ra in enumerate(reps):
        row = 0
        for b, rb in enumerate(reps):
            if a != b and rows[ra] >> rb & 1:
                row |= 1 << b
        quotient.append(row)
    masks = [sum(1 << v for v in c) for c in classes]
    out = []
    for clique in maximal_cliques(quotient):
        full = 0
        for b in _bits(clique):
            full |= masks[b]
        out.append(full)
    return out


def enumerate_maximal_sets(g: CommutationGraph, contract_twins: bool = False) -> list[tuple[int, ...]]:
    """All maximal commuting sets, as sorted tuples of 1-based indices, lexicographically sorted."""
    finder = maximal_cliques_contracted if contract_twins else maximal_cliques
    cliques = finder(g.rows)
    sets = sorted(tuple(v + 1 for v in _bits(c)) for c in cliques)
    log.info("k=%d: %d maximal commuting sets, sizes %s", g.case.k, len(sets),
             sorted({len(s) for s in sets}))
    return sets


def predicted_set_count(k: int) -> int:
    """Extrapolated count ``3 * 2^(k+2) - 9``; a conjecture for k >= 6."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return 3 * 2 ** (k + 2) - 9


def to_mask(members) -> int:
    """Bitmask with bit ``i`` set for each 1-based element index ``i``."""
    m = 0
    for i in members:
        m |= 1 << i
    return m


def is_clique(g: CommutationGraph, members) -> bool:
    mask = to_mask(members) >> 1
    return all((g.rows[i - 1] | (1 << (i - 1))) & mask == mask for i in members)


def is_maximal(g: CommutationGraph, members) -> bool:
    """True if no element outside ``members`` commutes with all of them."""
    common = (1 << g.n) - 1
    for i in members:
        common &= g.rows[i - 1]
    return common & ~(to_mask(members) >> 1) == 0


def closes_to_subgroup(members, d: int) -> bool:
    """``members`` plus identity is closed under mod-phase products."""
    members = np.asarray(list(members), dtype=np.int64)
    e = index_to_exponents(members, d)
    mod = np.array([2, 2, d, d])
    prod = (e[:, None, :] + e[None, :, :]) % mod
    idx = d * d * (prod[..., 0] + 2 * prod[..., 1]) + d * prod[..., 3] + prod[..., 2]
    return bool(np.isin(idx, np.append(members, 0)).all())


def set_violations(g: CommutationGraph, sets, check_subgroups: bool = True) -> list[dict]:
    """Structural checks on an enumeration; an empty list means all hold."""
    case = g.case
    out = []
    sizes = sorted({len(s) for s in sets})
    if sizes != [case.set_size]:
        out.append({"stage": "enumerate", "kind": "nonuniform set size",
                    "detail": {"expected": case.set_size, "observed": sizes}})
    if len(set(sets)) != len(sets):
        out.append({"stage": "enumerate", "kind": "duplicate sets", "detail": {}})
    for s in sets:
        if not is_clique(g, s):
            out.append({"stage": "enumerate", "kind": "not a clique", "detail": {"set": list(s)}})
        elif not is_maximal(g, s):
            out.append({"stage": "enumerate", "kind": "not maximal", "detail": {"set": list(s)}})
        elif check_subgroups and not closes_to_subgroup(s, case.d):
            out.append({"stage": "enumerate", "kind": "not a subgroup", "detail": {"set": list(s)}})
    return out
