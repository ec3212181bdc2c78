"""Brute-force oracles that share no code with the search engine.

They enumerate every subset (or every coloring) outright and are refused
above fixed sizes so they never run unbounded.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

MAX_ORACLE_VERTICES = 20


class OracleTooLarge(ValueError):
    pass


def max_independent_by_enumeration(num_vertices: int,
                                   edges: Sequence[Sequence[int]]) -> tuple[int, tuple[int, ...]]:
    """Largest edge-free subset, checking all ``2**N`` subsets.

    Returns the size and the subset with the smallest bitmask among optima
    (not necessarily the lexicographically least sorted list).
    """
    if num_vertices > MAX_ORACLE_VERTICES:
        raise OracleTooLarge(f"refusing 2^{num_vertices} subsets (limit 2^{MAX_ORACLE_VERTICES})")
    masks = np.arange(1 << num_vertices, dtype=np.int64)
    bad = np.zeros(masks.shape, dtype=bool)
    for e in edges:
        em = 0
        for v in e:
            em |= 1 << v
        bad |= (masks & em) == em
    sizes = np.zeros(masks.shape, dtype=np.int64)
    for v in range(num_vertices):
        sizes += (masks >> v) & 1
    sizes[bad] = -1
    best = int(sizes.max())
    m = int(masks[int(np.argmax(sizes))])
    return best, tuple(v for v in range(num_vertices) if m >> v & 1)


def min_coloring_by_enumeration(num_vertices: int, edges: Sequence[Sequence[int]],
                                max_colors: int) -> int | None:
    """Fewest colors (at most ``max_colors``) with no monochromatic edge.

    Tries every assignment in ``range(C) ** N`` for C = 1, 2, ...; returns
    ``None`` when ``max_colors`` do not suffice.
    """
    if max_colors ** num_vertices > 5_000_000:
        raise OracleTooLarge("too many colorings to enumerate")
    for C in range(1, max_colors + 1):
        for colors in itertools.product(range(C), repeat=num_vertices):
            if all(len({colors[v] for v in e}) > 1 for e in edges):
                return C
    return None
