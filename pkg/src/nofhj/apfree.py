"""Sets of integers without k-term arithmetic progressions.

Covers detection, exact ``r_k(n)``, Behrend's sphere construction and
partitions of ``{0..M-1}`` into AP-free classes.
"""

from __future__ import annotations

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .search import Budget, ExtremalResult, Hypergraph

log = logging.getLogger(__name__)

PRNG_ALGORITHM = "python-random-mt19937"


def has_k_ap(S: Iterable[int], k: int) -> bool:
    """True iff ``S`` contains ``a, a+d, ..., a+(k-1)d`` for some ``d >= 1``."""
    if k < 3:
        raise ValueError("AP length must be at least 3")
    members = sorted(set(S))
    lookup = set(members)
    if len(members) < k:
        return False
    top = members[-1]
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            d = b - a
            if a + (k - 1) * d > top:
                break
            if all(a + j * d in lookup for j in range(2, k)):
                return True
    return False


def find_k_ap(S: Iterable[int], k: int) -> tuple[int, ...] | None:
    """The first k-AP in ``S`` (smallest start, then smallest step)."""
    lookup = set(S)
    for a in sorted(lookup):
        for b in sorted(x for x in lookup if x > a):
            d = b - a
            if all(a + j * d in lookup for j in range(2, k)):
                return tuple(a + j * d for j in range(k))
    return None


def k_aps(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-APs inside ``{0..n-1}``."""
    out = []
    for d in range(1, (n - 1) // (k - 1) + 1 if k > 1 else 1):
        for a in range(n - (k - 1) * d):
            out.append(tuple(a + j * d for j in range(k)))
    return out


@lru_cache(maxsize=64)
def ap_hypergraph(n: int, k: int) -> Hypergraph:
    return Hypergraph(n, k_aps(n, k))


def r_k_exact(n: int, k: int, budget: Budget | None = None) -> ExtremalResult:
    """Largest k-AP-free subset of ``{0..n-1}``; witness is lexicographically least."""
    if n < 1 or k < 3:
        raise ValueError("need n >= 1 and k >= 3")
    return ap_hypergraph(n, k).max_independent_set(budget)


def behrend_params(M: int) -> list[tuple[int, int]]:
    """Candidate (base, dimension) pairs searched for ``behrend_set(M)``."""
    if M < 2:
        return []
    dmax = math.ceil(math.sqrt(math.log(M))) + 2
    out = []
    for d in range(2, dmax + 1):
        b = int(round(M ** (1.0 / d)))
        while b ** d > M:
            b -= 1
        while (b + 1) ** d <= M:
            b += 1
        if b // 2 >= 2:
            out.append((b, d))
    return out


def behrend_shell(M: int, b: int, d: int) -> list[int]:
    """Largest sphere shell of digit vectors in ``{0..b//2-1}^d`` read in base ``b``.

    Digits below ``b/2`` add without carries, and a sphere contains no three
    collinear points, so the shell is 3-AP-free.
    """
    h = b // 2
    vecs = np.indices((h,) * d).reshape(d, -1).T
    norms = (vecs ** 2).sum(axis=1)
    values = vecs @ (b ** np.arange(d))
    counts = Counter(norms.tolist())
    best = max(counts, key=lambda r: (counts[r], -r))
    return sorted(int(v) for v in values[norms == best] if v < M)


def behrend_set(M: int) -> list[int]:
    """A 3-AP-free subset of ``{0..M-1}`` from Behrend's construction.

    Tries each parameter pair from :func:`behrend_params` and keeps the
    biggest shell; small ``M`` fall back to ``{0, 1}`` (or ``{0}``).
    """
    if M < 1:
        raise ValueError("M must be positive")
    best = list(range(min(M, 2)))
    for b, d in behrend_params(M):
        shell = behrend_shell(M, b, d)
        if len(shell) > len(best):
            best = shell
    return best


@dataclass(frozen=True)
class ApFreeColoring:
    M: int
    k: int
    classes: tuple[int, ...]
    strategy: str
    seed: int | None = None

    def __post_init__(self):
        if len(self.classes) != self.M:
            raise ValueError("need one class per point")

    @property
    def num_classes(self) -> int:
        return max(self.classes) + 1 if self.classes else 0

    def class_of(self, x: int) -> int:
        return self.classes[x]

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_classes)]
        for x, c in enumerate(self.classes):
            out[c].append(x)
        return out

    def is_valid(self) -> bool:
        return all(not has_k_ap(cls, self.k) for cls in self.members())

    def to_json(self) -> dict:
        doc = {"M": self.M, "k": self.k, "strategy": self.strategy, "classes": list(self.classes)}
        if self.seed is not None:
            doc["seed"] = self.seed
            doc["prng"] = PRNG_ALGORITHM
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "ApFreeColoring":
        col = cls(doc["M"], doc["k"], tuple(doc["classes"]), doc.get("strategy", "loaded"),
                  doc.get("seed"))
        if not col.is_valid():
            raise ValueError("loaded coloring has a class containing a k-AP")
        return col


def _greedy_class(points: np.ndarray, M: int, k: int) -> np.ndarray:
    # ascending scan; blocked[x] marks x as the top of a k-AP whose other
    # terms are already in the class
    member = np.zeros(M, dtype=bool)
    blocked = np.zeros(M, dtype=bool)
    chosen = []
    for p in points.tolist():
        if blocked[p]:
            continue
        if chosen:
            prev = np.asarray(chosen)
            d = p - prev
            ok = np.ones(len(prev), dtype=bool)
            for j in range(2, k - 1):
                lower = p - j * d
                valid = lower >= 0
                ok &= valid & member[np.where(valid, lower, 0)]
            nxt = p + d[ok]
            blocked[nxt[nxt < M]] = True
        member[p] = True
        chosen.append(p)
    return np.asarray(chosen, dtype=np.int64)


def greedy_extract(M: int, k: int, remaining: Iterable[int] | None = None,
                   first_class: int = 0, classes: list[int] | None = None) -> list[int]:
    classes = [-1] * M if classes is None else classes
    left = np.arange(M) if remaining is None else np.asarray(sorted(remaining), dtype=np.int64)
    c = first_class
    while left.size:
        taken = _greedy_class(left, M, k)
        for x in taken.tolist():
            classes[x] = c
        left = np.setdiff1d(left, taken, assume_unique=True)
        c += 1
    return classes


def ap_free_partition(M: int, k: int, strategy: str = "greedy_extract",
                      seed: int = 0, base: Iterable[int] | None = None,
                      translates: int | None = None, min_gain: int | None = None) -> ApFreeColoring:
    """Partition ``{0..M-1}`` into k-AP-free classes.

    ``greedy_extract`` repeatedly peels off the ascending greedy AP-free
    subset of what is left. ``translate_cover`` drops seeded random
    translates of ``base`` (default: :func:`behrend_set` for k = 3); each
    point joins the first translate covering it and leftovers are peeled
    greedily. ``translates`` caps the number of translates tried
    (default ``4 * ceil(M / |base|)``); a translate is kept only if it covers
    at least ``min_gain`` new points (default half the base).
    """
    if M < 1 or k < 3:
        raise ValueError("need M >= 1 and k >= 3")
    if strategy == "greedy_extract":
        return ApFreeColoring(M, k, tuple(greedy_extract(M, k)), strategy)
    if strategy != "translate_cover":
        raise ValueError(f"unknown strategy {strategy!r}")
    if base is None:
        if k != 3:
            log.warning("translate_cover needs a base set for k=%d; using greedy_extract", k)
            return ApFreeColoring(M, k, tuple(greedy_extract(M, k)), "greedy_extract")
        base = behrend_set(M)
    base = sorted(set(base))
    if not base or has_k_ap(base, k):
        raise ValueError("base set must be non-empty and k-AP-free")
    rng = random.Random(seed)
    classes = [-1] * M
    left = M
    c = 0
    span = base[-1] - base[0]
    tries = translates if translates is not None else 4 * math.ceil(M / len(base))
    gain = min_gain if min_gain is not None else max(1, len(base) // 2)
    for _ in range(tries):
        if not left:
            break
        shift = rng.randrange(-base[0] - span, M - base[0])
        new = [x + shift for x in base if 0 <= x + shift < M and classes[x + shift] < 0]
        if len(new) < gain:
            continue
        for x in new:
            classes[x] = c
        left -= len(new)
        c += 1
    if left:
        greedy_extract(M, k, [x for x in range(M) if classes[x] < 0], c, classes)
    return ApFreeColoring(M, k, tuple(classes), strategy, seed)


def inject_ap(coloring: ApFreeColoring, start: int, step: int) -> ApFreeColoring:
    """Recolor ``start + j*step`` (j >= 1) into the class of ``start``, planting one k-AP."""
    classes = list(coloring.classes)
    for j in range(1, coloring.k):
        classes[start + j * step] = classes[start]
    # drop classes emptied by the move
    relabel: dict[int, int] = {}
    classes = [relabel.setdefault(c, len(relabel)) for c in classes]
    return ApFreeColoring(coloring.M, coloring.k, tuple(classes), coloring.strategy + "+injected",
                          coloring.seed)
