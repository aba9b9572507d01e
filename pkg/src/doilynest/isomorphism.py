"""Isomorphism of point-line structures by colour refinement and backtracking.

Both structures are refined together on their disjoint union so that colours
are comparable.  Vertices are individualised pairwise until every cell is a
singleton; each complete mapping is checked against collinearity and lines
before it is accepted.
"""
from __future__ import annotations

from collections import Counter

from .geometry import Structure


def _initial_colours(s: Structure) -> list[tuple]:
    on_lines = Counter(p for line in s.lines for p in line)
    return [(len(s.adjacency[p]), on_lines[p]) for p in range(s.n)]


def _refine(adj: list[list[int]], colours: list) -> list[int]:
    """Stable colouring of the union graph, as small integers."""
    palette = {c: i for i, c in enumerate(sorted(set(colours)))}
    cur = [palette[c] for c in colours]
    while True:
        sig = [(cur[v], tuple(sorted(cur[u] for u in adj[v]))) for v in range(len(adj))]
        palette = {c: i for i, c in enumerate(sorted(set(sig)))}
        nxt = [palette[s] for s in sig]
        if len(palette) == len(set(cur)):
            return nxt
        cur = nxt


def _balanced(colours: list[int], n_a: int) -> bool:
    return Counter(colours[:n_a]) == Counter(colours[n_a:])


def verify_witness(a: Structure, b: Structure, mapping: dict[int, int]) -> bool:
    """``mapping`` is a bijection preserving collinearity both ways and lines."""
    if a.n != b.n or sorted(mapping) != list(range(a.n)) or sorted(mapping.values()) != list(range(b.n)):
        return False
    for p in range(a.n):
        if {mapping[q] for q in a.adjacency[p]} != set(b.adjacency[mapping[p]]):
            return False
    image = {tuple(sorted(mapping[p] for p in line)) for line in a.lines}
    return image == {tuple(sorted(line)) for line in b.lines}


def find_isomorphism(a: Structure, b: Structure) -> dict[int, int] | None:
    """A verified isomorphism ``a -> b`` or ``None``."""
    if a.n != b.n or len(a.lines) != len(b.lines):
        return None
    if sorted(len(x) for x in a.adjacency) != sorted(len(x) for x in b.adjacency):
        return None
    n = a.n
    adj = [sorted(x) for x in a.adjacency] + [sorted(q + n for q in x) for x in b.adjacency]
    base = _initial_colours(a) + _initial_colours(b)

    def search(colours):
        colours = _refine(adj, colours)
        if not _balanced(colours, n):
            return None
        cells = Counter(colours[:n])
        target = min((c for c, size in cells.items() if size > 1), key=lambda c: (cells[c], c),
                     default=None)
        if target is None:
            back = {colours[n + v]: v for v in range(n)}
            mapping = {p: back[colours[p]] for p in range(n)}
            return mapping if verify_witness(a, b, mapping) else None
        pick = next(p for p in range(n) if colours[p] == target)
        fresh = max(colours) + 1
        for q in range(n, 2 * n):
            if colours[q] != target:
                continue
            trial = list(colours)
            trial[pick] = trial[q] = fresh
            found = search(trial)
            if found is not None:
                return found
        return None

    return search(base)


def isomorphic(a: Structure, b: Structure) -> tuple[bool, dict[int, int] | None]:
    mapping = find_isomorphism(a, b)
    return mapping is not None, mapping
