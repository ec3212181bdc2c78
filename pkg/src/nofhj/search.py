"""Exact extremal search on finite hypergraphs.

Vertices are ``0..N-1`` and an edge is a set of distinct vertices. A vertex
set is *independent* when it contains no edge entirely, and a coloring is
*proper* when no edge is monochromatic. Every extremal problem in the package
(line-free sets, simplex-free sets, AP-free sets) is an independent set
problem on some hypergraph, so they all share this engine.

Vertex sets are Python ints used as bitsets.
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

OPTIMAL = "optimal"
LOWER_BOUND_ONLY = "lower_bound_only"
UPPER_BOUND_ONLY = "upper_bound_only"


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class Budget:
    """Search limit. ``None`` fields are unlimited."""

    nodes: int | None = None
    seconds: float | None = None

    @classmethod
    def parse(cls, text: str | None) -> "Budget":
        """Parse ``"200000"``, ``"1e6"``, ``"30s"`` or ``"nodes=1e6,seconds=20"``."""
        if text is None or text in ("", "none", "unlimited"):
            return cls()
        nodes = seconds = None
        for part in str(text).split(","):
            part = part.strip()
            m = re.fullmatch(r"(nodes|seconds)=(.+)", part)
            if m:
                key, val = m.groups()
            elif part.endswith("s"):
                key, val = "seconds", part[:-1]
            else:
                key, val = "nodes", part
            if key == "nodes":
                nodes = int(float(val))
            else:
                seconds = float(val)
        return cls(nodes=nodes, seconds=seconds)

    def __str__(self) -> str:
        parts = []
        if self.nodes is not None:
            parts.append(f"nodes={self.nodes}")
        if self.seconds is not None:
            parts.append(f"seconds={self.seconds:g}")
        return ",".join(parts) or "unlimited"


class _Meter:
    def __init__(self, budget: Budget | None):
        budget = budget or Budget()
        self.max_nodes = budget.nodes
        self.deadline = None if budget.seconds is None else time.monotonic() + budget.seconds
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded
        if self.deadline is not None and not self.nodes & 1023 and time.monotonic() > self.deadline:
            raise BudgetExceeded


@dataclass(frozen=True)
class ExtremalResult:
    size: int
    witness: tuple[int, ...]
    proof_status: str
    nodes: int = 0

    @property
    def optimal(self) -> bool:
        return self.proof_status == OPTIMAL


@dataclass(frozen=True)
class Coloring:
    """Total map from vertex ids to color indices ``0..num_colors-1``."""

    colors: tuple[int, ...]

    @property
    def num_colors(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return out


@dataclass(frozen=True)
class ColoringResult:
    num_colors: int
    coloring: Coloring
    proof_status: str
    nodes: int = 0

    @property
    def optimal(self) -> bool:
        return self.proof_status == OPTIMAL


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Hypergraph:
    """A finite hypergraph with bitset incidence lists."""

    def __init__(self, num_vertices: int, edges: Iterable[Sequence[int]]):
        self.n = num_vertices
        seen = set()
        self.edges: list[tuple[int, ...]] = []
        for e in edges:
            t = tuple(sorted(e))
            if len(set(t)) != len(t):
                raise ValueError(f"edge {e!r} repeats a vertex")
            if t and (t[0] < 0 or t[-1] >= num_vertices):
                raise ValueError(f"edge {e!r} out of range")
            if not t:
                raise ValueError("empty edge")
            if t not in seen:
                seen.add(t)
                self.edges.append(t)
        # inc[v] = (mask of the edge's other vertices, len(edge) - 2)
        self._inc: list[list[tuple[int, int]]] = [[] for _ in range(num_vertices)]
        self._loops = 0
        for e in self.edges:
            if len(e) == 1:
                self._loops |= 1 << e[0]
                continue
            m = _mask(e)
            for v in e:
                self._inc[v].append((m ^ (1 << v), len(e) - 2))

    def degree(self, v: int) -> int:
        return len(self._inc[v]) + (self._loops >> v & 1)

    def is_independent(self, vertices: Iterable[int]) -> bool:
        s = _mask(vertices)
        return not any(_mask(e) & ~s == 0 for e in self.edges)

    def _propagate(self, v: int, chosen: int, cand: int) -> int:
        # drop candidates that would complete an edge through v
        for others, need in self._inc[v]:
            hit = others & chosen
            if hit.bit_count() == need:
                cand &= ~(others ^ hit)
        return cand

    def greedy_independent(self, order: Iterable[int] | None = None) -> tuple[int, ...]:
        chosen = 0
        cand = ((1 << self.n) - 1) & ~self._loops
        for v in range(self.n) if order is None else order:
            if cand >> v & 1:
                chosen |= 1 << v
                cand = self._propagate(v, chosen, cand & ~(1 << v))
        return tuple(_bits(chosen))

    def _first_extension(self, chosen, cand, size, target, bound, meter):
        # include-first DFS in ascending vertex order, so the first hit is
        # the lexicographically least target-size set in the subtree
        stack = [(chosen, cand, size)]
        while stack:
            chosen, cand, size = stack.pop()
            if meter is not None:
                meter.tick()
            if size >= target:
                return chosen
            if not cand:
                continue
            low = (cand & -cand).bit_length() - 1
            if size + bound[low] < target or size + cand.bit_count() < target:
                continue
            rest = cand ^ (1 << low)
            stack.append((chosen, rest, size))
            inc = chosen | (1 << low)
            stack.append((inc, self._propagate(low, inc, rest), size + 1))
        return None

    def max_independent_set(self, budget: Budget | None = None,
                            seed: Sequence[int] = ()) -> ExtremalResult:
        """Maximum independent set by Russian-doll search.

        Vertices are processed from the last to the first; ``bound[i]`` is the
        optimum inside the suffix ``{i..N-1}`` and caps every partial search
        whose lowest candidate is ``i``. A final include-first pass returns the
        lexicographically least optimum. On budget exhaustion the best set seen
        (or ``seed``, if larger and independent) is returned as a lower bound.
        """
        N = self.n
        meter = _Meter(budget)
        best: tuple[int, ...] = self.greedy_independent()
        if seed and len(seed) > len(best) and self.is_independent(seed):
            best = tuple(sorted(seed))
        bound = [0] * (N + 1)
        allowed = ((1 << N) - 1) & ~self._loops
        try:
            for i in range(N - 1, -1, -1):
                bound[i] = bound[i + 1]
                if not allowed >> i & 1:
                    continue
                suffix = allowed & ~((1 << (i + 1)) - 1)
                start = 1 << i
                hit = self._first_extension(start, self._propagate(i, start, suffix),
                                            1, bound[i + 1] + 1, bound, meter)
                if hit is not None:
                    bound[i] += 1
                    if bound[i] > len(best):
                        best = tuple(_bits(hit))
        except BudgetExceeded:
            return ExtremalResult(len(best), best, LOWER_BOUND_ONLY, meter.nodes)
        witness = self._first_extension(0, allowed, 0, bound[0], bound, None)
        assert witness is not None
        return ExtremalResult(bound[0], tuple(_bits(witness)), OPTIMAL, meter.nodes)

    def greedy_coloring(self) -> Coloring:
        """First-fit coloring in vertex order."""
        if self._loops:
            raise ValueError("a vertex forming an edge by itself cannot be colored")
        classes: list[int] = []
        colors = []
        for v in range(self.n):
            for c, cls in enumerate(classes):
                if not any(others & cls == others for others, _ in self._inc[v]):
                    break
            else:
                c = len(classes)
                classes.append(0)
            classes[c] |= 1 << v
            colors.append(c)
        return Coloring(tuple(colors))

    def _color_with(self, C: int, meter: _Meter) -> tuple[int, ...] | None:
        # backtracking with forward checking; new colors only in increasing
        # order, so vertex 0 is forced to color 0
        N = self.n
        dom = [(1 << C) - 1] * N
        color = [-1] * N
        cls = [0] * C
        trail: list[tuple[int, int]] = []
        stack = [[dom[0] & 1, 0, -1]]
        while stack:
            frame = stack[-1]
            v = len(stack) - 1
            opts, mark, maxused = frame
            while len(trail) > mark:
                u, old = trail.pop()
                dom[u] = old
            if color[v] >= 0:
                cls[color[v]] &= ~(1 << v)
                color[v] = -1
            if not opts:
                stack.pop()
                continue
            c = (opts & -opts).bit_length() - 1
            frame[0] = opts & ~(1 << c)
            meter.tick()
            color[v] = c
            cls[c] |= 1 << v
            ok = True
            for others, need in self._inc[v]:
                hit = others & cls[c]
                if hit.bit_count() == need:
                    u = (others ^ hit).bit_length() - 1
                    if color[u] < 0 and dom[u] >> c & 1:
                        trail.append((u, dom[u]))
                        dom[u] &= ~(1 << c)
                        if not dom[u]:
                            ok = False
                            break
            if not ok:
                continue
            if v + 1 == N:
                return tuple(color)
            top = max(maxused, c)
            stack.append([dom[v + 1] & ((1 << (top + 2)) - 1), len(trail), top])
        return None

    def min_coloring(self, budget: Budget | None = None, lower: int = 1) -> ColoringResult:
        """Fewest colors with no monochromatic edge, by iterative deepening.

        ``lower`` is a known lower bound (for instance ``ceil(N / alpha)``);
        the search starts there. On budget exhaustion the first-fit coloring
        is returned as an upper bound.
        """
        if self.n == 0:
            return ColoringResult(0, Coloring(()), OPTIMAL)
        greedy = self.greedy_coloring()
        has_edges = any(self._inc[v] for v in range(self.n))
        lo = max(lower, 2 if has_edges else 1)
        meter = _Meter(budget)
        try:
            for C in range(lo, greedy.num_colors):
                found = self._color_with(C, meter)
                if found is not None:
                    return ColoringResult(C, Coloring(found), OPTIMAL, meter.nodes)
        except BudgetExceeded:
            return ColoringResult(greedy.num_colors, greedy, UPPER_BOUND_ONLY, meter.nodes)
        return ColoringResult(greedy.num_colors, greedy, OPTIMAL, meter.nodes)


def coloring_lower_bound(num_vertices: int, alpha: int) -> int:
    """Pigeonhole bound: each class has at most ``alpha`` vertices."""
    if num_vertices == 0:
        return 0
    return math.ceil(num_vertices / alpha)
