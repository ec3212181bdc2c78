"""The concrete functions Part, Exactly and Part_{m,k,n}, the bijection psi
between partitions and words, the star/line correspondence, Fujimura sets
and sum-preserving maps.

Set tuples are bitmasks over a ground set ``{1..m}``: element ``i`` is bit
``i - 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .nof import NofFunctionSpec, PreconditionError, Star
from .search import Budget, ExtremalResult, Hypergraph
from .words import WILDCARD, LineTemplate, Word


def show_set(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1) + "}" \
        if mask else "∅"


@dataclass(frozen=True)
class SetTuple:
    sets: tuple[int, ...]
    m: int

    def __post_init__(self):
        if any(s < 0 or s >> self.m for s in self.sets):
            raise ValueError(f"sets must be subsets of {{1..{self.m}}}")

    @property
    def k(self) -> int:
        return len(self.sets)

    @classmethod
    def of(cls, m: int, *sets: Sequence[int]) -> "SetTuple":
        """Build from 1-based element lists: ``SetTuple.of(2, [1], [2], [])``."""
        masks = []
        for s in sets:
            mask = 0
            for e in s:
                if not 1 <= e <= m:
                    raise ValueError(f"element {e} outside 1..{m}")
                mask |= 1 << (e - 1)
            masks.append(mask)
        return cls(tuple(masks), m)

    def __str__(self) -> str:
        return "(" + ", ".join(show_set(s) for s in self.sets) + ")"


def _disjoint(sets: Sequence[int]) -> bool:
    seen = 0
    for s in sets:
        if seen & s:
            return False
        seen |= s
    return True


def part(s: SetTuple) -> bool:
    """Sets pairwise disjoint with union the whole ground set."""
    return _disjoint(s.sets) and sum(x.bit_count() for x in s.sets) == s.m


def exactly(x: Sequence[int], n: int) -> bool:
    return sum(x) == n


def part_general(s: SetTuple, n: int) -> bool:
    """Pairwise disjoint with a union of exactly ``n`` elements."""
    if s.m < n:
        raise ValueError(f"ground set size {s.m} is smaller than n={n}")
    return _disjoint(s.sets) and sum(x.bit_count() for x in s.sets) == n


def psi(s: SetTuple) -> Word:
    """Partition of ``[n]`` into ``k`` labelled parts -> word recording the part of each element."""
    if not part(s):
        raise PreconditionError(f"{s} is not a partition of [{s.m}]")
    sym = []
    for i in range(s.m):
        sym.append(next(j for j, S in enumerate(s.sets) if S >> i & 1))
    return Word(tuple(sym), s.k)


def psi_inv(w: Word) -> SetTuple:
    sets = [0] * w.k
    for i, j in enumerate(w.symbols):
        sets[j] |= 1 << i
    return SetTuple(tuple(sets), w.n)


def line_to_star(t: LineTemplate) -> Star:
    """The star in ``Part^{-1}(1)`` whose spokes are the line's points under psi^{-1}.

    The center puts each fixed position in the part named by its symbol and
    leaves wildcard positions uncovered.
    """
    if t.k < 3:
        raise ValueError("the star/line correspondence needs k >= 3")
    center = [0] * t.k
    for i, s in enumerate(t.pattern):
        if s != WILDCARD:
            center[s] |= 1 << i
    spokes = tuple(psi_inv(w).sets for w in t.points())
    return Star(tuple(center), spokes)


def star_to_line(st: Star, n: int) -> LineTemplate:
    k = len(st.center)
    if k < 3:
        raise ValueError("the star/line correspondence needs k >= 3")
    rows = []
    for sp in st.spokes:
        s = SetTuple(tuple(sp), n)
        if not part(s):
            raise PreconditionError(f"spoke {s} is not a partition of [{n}]")
        rows.append(psi(s).symbols)
    covered = 0
    for c in st.center:
        covered |= c
    pattern = tuple(WILDCARD if not covered >> i & 1 else rows[0][i] for i in range(n))
    t = LineTemplate(pattern, k)
    if [w.symbols for w in t.points()] != rows:
        raise PreconditionError("spokes do not form a combinatorial line")
    return t


# --- NOF specs ---------------------------------------------------------------

def _set_render(_i: int, x: int) -> str:
    return show_set(x)


def _int_render(_i: int, x: int) -> str:
    return str(x)


@lru_cache(maxsize=64)
def part_spec(n: int, k: int) -> NofFunctionSpec:
    """``Part_{n,k}`` on ``(2^[n])^k``; coordinate values are bitmasks."""
    full = (1 << n) - 1

    def pred(x):
        seen = 0
        for s in x:
            if seen & s:
                return False
            seen |= s
        return seen == full

    return NofFunctionSpec(k, (1 << n,) * k, pred, name=f"Part_{{{n},{k}}}",
                           params={"function": "part", "n": n, "k": k}, render=_set_render)


@lru_cache(maxsize=64)
def part_general_spec(m: int, k: int, n: int) -> NofFunctionSpec:
    """``Part_{m,k,n}`` on ``(2^[m])^k``."""
    if m < n:
        raise ValueError(f"need m >= n, got m={m}, n={n}")

    def pred(x):
        seen = 0
        for s in x:
            if seen & s:
                return False
            seen |= s
        return seen.bit_count() == n

    return NofFunctionSpec(k, (1 << m,) * k, pred, name=f"Part_{{{m},{k},{n}}}",
                           params={"function": "part_general", "m": m, "n": n, "k": k},
                           render=_set_render)


@lru_cache(maxsize=64)
def exactly_spec(n: int, k: int) -> NofFunctionSpec:
    """``Exactly_{n,k}`` on ``{0..n}^k``; larger values can never sum to n."""
    return NofFunctionSpec(k, (n + 1,) * k, lambda x: sum(x) == n, name=f"Exactly_{{{n},{k}}}",
                           params={"function": "exactly", "n": n, "k": k}, render=_int_render)


# --- Fujimura sets -----------------------------------------------------------

def delta(n: int, k: int) -> list[tuple[int, ...]]:
    """``Δ_{n,k}`` in lexicographic order."""
    return [c for c in itertools.product(range(n + 1), repeat=k) if sum(c) == n]


@dataclass(frozen=True)
class Simplex:
    base: tuple[int, ...]
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("simplex size r must be positive")

    @property
    def points(self) -> tuple[tuple[int, ...], ...]:
        b = self.base
        return tuple(b[:i] + (b[i] + self.r,) + b[i + 1:] for i in range(len(b)))

    def as_star(self) -> Star:
        """The same points seen as a star of ``Exactly`` centered at the base."""
        return Star(self.base, self.points)


def enumerate_simplices(n: int, k: int) -> list[Simplex]:
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    return [Simplex(b, r) for r in range(1, n + 1) for b in delta(n - r, k)]


def enumerate_inverted_simplices(n: int, k: int) -> list[tuple[tuple[int, ...], ...]]:
    """Point sets ``{top - r*e_i}`` inside ``Δ_{n,k}`` with ``sum(top) = n + r``.

    These are the stars of ``Exactly_{n,k}`` whose center sums above ``n``;
    upward simplices are the ones whose center sums below.
    """
    out = []
    for r in range(1, n + 1):
        for top in itertools.product(range(n + 1), repeat=k):
            if sum(top) == n + r and min(top) >= r:
                out.append(tuple(top[:i] + (top[i] - r,) + top[i + 1:] for i in range(k)))
    return out


def is_fujimura(points, n: int, k: int) -> bool:
    P = set(map(tuple, points))
    return not any(all(p in P for p in s.points) for s in enumerate_simplices(n, k))


def fujimura_hypergraph(n: int, k: int, inverted: bool = False
                        ) -> tuple[list[tuple[int, ...]], Hypergraph]:
    cells = delta(n, k)
    pos = {c: i for i, c in enumerate(cells)}
    edges = [[pos[p] for p in s.points] for s in enumerate_simplices(n, k)]
    if inverted:
        edges += [[pos[p] for p in pts] for pts in enumerate_inverted_simplices(n, k)]
    return cells, Hypergraph(len(cells), edges)


def max_fujimura(n: int, k: int, budget: Budget | None = None,
                 inverted: bool = False) -> tuple[ExtremalResult, list]:
    """Largest simplex-free subset of ``Δ_{n,k}``.

    With ``inverted=True`` inverted simplices are forbidden as well, which
    is exactly star-freeness for ``Exactly_{n,k}``. Returns the solver result
    (ids into ``delta(n, k)``) and the witness as k-tuples.
    """
    cells, H = fujimura_hypergraph(n, k, inverted)
    res = H.max_independent_set(budget)
    return res, [cells[i] for i in res.witness]


# --- sum-preserving maps -----------------------------------------------------

@dataclass(frozen=True)
class SumPreservingMap:
    """Coordinate-wise map ``a_i -> subset of [m]`` of size ``a_i``."""

    n: int
    k: int
    rule: str

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("need n, k >= 1")
        if self.rule not in ("interval", "paired"):
            raise ValueError(f"unknown rule {self.rule!r}")

    coordinatewise = True

    @property
    def m(self) -> int:
        if self.rule == "interval":
            return self.k * self.n
        return math.ceil(self.k / 2) * self.n

    def coordinate(self, i: int, a: int) -> int:
        """Image bitmask of value ``a`` in coordinate ``i`` (0-based)."""
        if not 0 <= a <= self.n:
            raise ValueError(f"value {a} outside 0..{self.n}")
        low = (1 << a) - 1
        if self.rule == "interval":
            return low << (i * self.n)
        block = i // 2
        if i % 2 == 0:
            return low << (block * self.n)
        return low << (block * self.n + self.n - a)

    def __call__(self, a: Sequence[int]) -> SetTuple:
        if len(a) != self.k:
            raise ValueError(f"expected {self.k} values")
        return SetTuple(tuple(self.coordinate(i, x) for i, x in enumerate(a)), self.m)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "m": self.m, "rule": self.rule}

    @classmethod
    def from_json(cls, doc: dict) -> "SumPreservingMap":
        g = cls(doc["n"], doc["k"], doc["rule"])
        if "m" in doc and doc["m"] != g.m:
            raise ValueError(f"m={doc['m']} does not match rule {g.rule!r} (m={g.m})")
        return g


def interval_map(n: int, k: int) -> SumPreservingMap:
    return SumPreservingMap(n, k, "interval")


def paired_map(n: int, k: int) -> SumPreservingMap:
    """Adjacent coordinates share a block: odd ones fill it from the bottom,
    even ones from the top, so they meet only when their sum exceeds ``n``."""
    return SumPreservingMap(n, k, "paired")


def check_sum_preserving(g: SumPreservingMap) -> dict:
    """Exhaustive check of both properties over ``{0..n}^k``.

    Also confirms that overlapping images only occur when the sum exceeds n.
    """
    bad_size = bad_disjoint = overlap_small = 0
    for a in itertools.product(range(g.n + 1), repeat=g.k):
        img = g(a)
        if any(s.bit_count() != x for s, x in zip(img.sets, a)):
            bad_size += 1
        disjoint = _disjoint(img.sets)
        if sum(a) == g.n and not disjoint:
            bad_disjoint += 1
        if not disjoint and sum(a) <= g.n:
            overlap_small += 1
    return {"inputs": (g.n + 1) ** g.k, "size_violations": bad_size,
            "disjointness_violations": bad_disjoint, "overlaps_without_excess": overlap_small,
            "ok": bad_size == bad_disjoint == overlap_small == 0}
