"""Words over ``[k]^n``, combinatorial lines and line-free extremal solvers.

Symbols are stored 0-based; everything rendered for people is 1-based.
A word's vertex index is its base-k value with the first symbol most
significant, so index order is lexicographic order of words.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .search import (LOWER_BOUND_ONLY, Budget, ColoringResult, ExtremalResult, Hypergraph,
                     coloring_lower_bound)

WILDCARD = -1
WORD_BITS = 64
# above this many words the bitset hypergraph is not built at all
MAX_SEARCH_VERTICES = 2187


@dataclass(frozen=True, order=True)
class Word:
    symbols: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("alphabet size must be positive")
        if any(not 0 <= s < self.k for s in self.symbols):
            raise ValueError(f"symbols {self.symbols} outside 0..{self.k - 1}")

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def index(self) -> int:
        idx = 0
        for s in self.symbols:
            idx = idx * self.k + s
        return idx

    @classmethod
    def from_index(cls, index: int, n: int, k: int) -> "Word":
        if not 0 <= index < k ** n:
            raise ValueError(f"index {index} outside [0, {k}^{n})")
        out = []
        for _ in range(n):
            index, s = divmod(index, k)
            out.append(s)
        return cls(tuple(reversed(out)), k)

    def __str__(self) -> str:
        return "(" + ",".join(str(s + 1) for s in self.symbols) + ")"


@dataclass(frozen=True)
class LineTemplate:
    """A word over symbols plus :data:`WILDCARD`, with at least one wildcard."""

    pattern: tuple[int, ...]
    k: int

    def __post_init__(self):
        if WILDCARD not in self.pattern:
            raise ValueError("a line template needs at least one wildcard")
        if any(s != WILDCARD and not 0 <= s < self.k for s in self.pattern):
            raise ValueError(f"pattern {self.pattern} has symbols outside 0..{self.k - 1}")
        if self.k < 2:
            raise ValueError("lines need k >= 2")

    @property
    def n(self) -> int:
        return len(self.pattern)

    @property
    def wildcard_positions(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.pattern) if s == WILDCARD)

    def sort_key(self) -> tuple[int, ...]:
        return tuple(self.k if s == WILDCARD else s for s in self.pattern)

    def points(self) -> list[Word]:
        return line_points(self)

    def __str__(self) -> str:
        return "".join("*" if s == WILDCARD else str(s + 1) for s in self.pattern)

    @classmethod
    def parse(cls, text: str, k: int) -> "LineTemplate":
        """Parse the 1-based rendering, e.g. ``"1*3"``."""
        return cls(tuple(WILDCARD if ch == "*" else int(ch) - 1 for ch in text), k)


def _check_budget(n: int, k: int, word_bits: int = WORD_BITS) -> None:
    if n < 1 or k < 2:
        raise ValueError(f"need n >= 1 and k >= 2, got n={n}, k={k}")
    need = n * math.ceil(math.log2(k + 1))
    if need > word_bits:
        raise ValueError(f"n={n}, k={k} needs {need} bits per template; limit is {word_bits}")


def enumerate_lines(n: int, k: int, word_bits: int = WORD_BITS) -> list[LineTemplate]:
    """All combinatorial lines of ``[k]^n``, wildcard ordered after every symbol."""
    _check_budget(n, k, word_bits)
    out = []
    for pat in itertools.product(range(k + 1), repeat=n):
        if k in pat:
            out.append(LineTemplate(tuple(WILDCARD if s == k else s for s in pat), k))
    return out


def line_points(t: LineTemplate) -> list[Word]:
    return [Word(tuple(x if s == WILDCARD else s for s in t.pattern), t.k) for x in range(t.k)]


def all_words(n: int, k: int) -> list[Word]:
    return [Word(s, k) for s in itertools.product(range(k), repeat=n)]


def _shape(words: Iterable[Word]) -> tuple[set[int], int | None, int | None]:
    idx = set()
    n = k = None
    for w in words:
        if n is None:
            n, k = w.n, w.k
        elif (w.n, w.k) != (n, k):
            raise ValueError("all words of a set must share (n, k)")
        idx.add(w.index)
    return idx, n, k


def is_line_free(words: Iterable[Word]) -> bool:
    """True iff no combinatorial line has all its points in ``words``."""
    idx, n, k = _shape(words)
    if len(idx) < (k or 0) or not idx:
        return True
    for t in enumerate_lines(n, k):
        if all(w.index in idx for w in line_points(t)):
            return False
    return True


@lru_cache(maxsize=32)
def line_hypergraph(n: int, k: int) -> Hypergraph:
    """Vertices are word indices, edges are combinatorial lines."""
    _check_budget(n, k)
    return Hypergraph(k ** n, ([w.index for w in line_points(t)] for t in enumerate_lines(n, k)))


def _slice_seed(n: int, k: int) -> list[int]:
    # words grouped by symbol counts; a line moves its counts along a
    # simplex, so a union of count classes forming no simplex is line-free
    cells = [c for c in itertools.product(range(n + 1), repeat=k) if sum(c) == n]

    def weight(c):
        w = math.factorial(n)
        for a in c:
            w //= math.factorial(a)
        return w

    chosen: set[tuple[int, ...]] = set()
    for c in sorted(cells, key=lambda c: (-weight(c), c)):
        trial = chosen | {c}
        if not any(_closes_simplex(c, r, trial) for r in range(1, n + 1)):
            chosen.add(c)
    return [w.index for w in all_words(n, k)
            if tuple(w.symbols.count(x) for x in range(k)) in chosen]


def _closes_simplex(c: tuple[int, ...], r: int, cells: set) -> bool:
    for i in range(len(c)):
        if c[i] < r:
            continue
        base = c[:i] + (c[i] - r,) + c[i + 1:]
        if all(base[:j] + (base[j] + r,) + base[j + 1:] in cells for j in range(len(c))):
            return True
    return False


def max_line_free(n: int, k: int, budget: Budget | None = None,
                  forbidden: Iterable[int] = ()) -> ExtremalResult:
    """Largest line-free subset of ``[k]^n`` (the density Hales-Jewett number).

    ``forbidden`` lists word indices removed from the ground set. The witness
    is a tuple of word indices, lexicographically least among optima. Past
    :data:`MAX_SEARCH_VERTICES` words no search runs and the union of
    symbol-count classes over a greedy simplex-free set of counts is
    returned as a lower bound.
    """
    forbidden = tuple(forbidden)
    _check_budget(n, k)
    if k ** n > MAX_SEARCH_VERTICES:
        drop = set(forbidden)
        seed = tuple(v for v in _slice_seed(n, k) if v not in drop)
        return ExtremalResult(len(seed), seed, LOWER_BOUND_ONLY)
    H = line_hypergraph(n, k)
    if forbidden:
        H = Hypergraph(H.n, H.edges + [(v,) for v in forbidden])
    seed = [v for v in _slice_seed(n, k) if v not in set(forbidden)]
    return H.max_independent_set(budget, seed=seed)


def min_line_free_coloring(n: int, k: int, budget: Budget | None = None,
                           alpha: int | None = None) -> ColoringResult:
    """Fewest colors for ``[k]^n`` with no monochromatic combinatorial line.

    When the line-free number ``alpha`` is known it seeds the lower bound
    ``ceil(k^n / alpha)``.
    """
    _check_budget(n, k)
    if k ** n > MAX_SEARCH_VERTICES:
        raise ValueError(f"[{k}]^{n} has {k ** n} words; line colorings are limited to "
                         f"{MAX_SEARCH_VERTICES}")
    H = line_hypergraph(n, k)
    lower = coloring_lower_bound(H.n, alpha) if alpha else 1
    return H.min_coloring(budget, lower=lower)


def witness_document(n: int, k: int, kind: str, data: Sequence[int], proof_status: str) -> dict:
    """JSON form of a line-free set or line coloring (word indices 0-based)."""
    if kind not in ("line_free_set", "line_coloring"):
        raise ValueError(f"unknown witness kind {kind!r}")
    return {"n": n, "k": k, "kind": kind, "data": list(data), "proof_status": proof_status}


def words_from_document(doc: dict) -> list[Word]:
    if doc["kind"] != "line_free_set":
        raise ValueError("document is not a line-free set")
    return [Word.from_index(i, doc["n"], doc["k"]) for i in doc["data"]]
