"""Finite NOF functions, cylinder intersections and stars.

A point of the input space is a tuple of coordinate indices, one per
player. Player ``i`` sees every coordinate except ``i``.

The exact ``ind``/``chr`` solvers here run on HiGHS (through
``scipy.optimize.milp``) rather than on :mod:`nofhj.search`, so that the
line-side and star-side computations share no solver code.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix

from .search import (LOWER_BOUND_ONLY, OPTIMAL, UPPER_BOUND_ONLY, Budget, Coloring,
                     ColoringResult, ExtremalResult, Hypergraph, coloring_lower_bound)

MAX_PRODUCT_POINTS = 1 << 24
MAX_EXHAUSTIVE_SUBSETS = 1 << 20

Point = tuple[int, ...]


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NofFunctionSpec:
    """A k-party boolean function on a finite product of index domains."""

    k: int
    domain_sizes: tuple[int, ...]
    predicate: Callable[[Point], bool]
    name: str = "f"
    params: dict = field(default_factory=dict)
    render: Callable[[int, int], str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "domain_sizes", tuple(self.domain_sizes))
        if self.k < 1 or len(self.domain_sizes) != self.k:
            raise ValueError("need one domain per player")
        if any(d < 1 for d in self.domain_sizes):
            raise ValueError("domains must be non-empty")
        if self.size > MAX_PRODUCT_POINTS:
            raise ValueError(f"product of {self.size} points exceeds {MAX_PRODUCT_POINTS}")

    @property
    def size(self) -> int:
        out = 1
        for d in self.domain_sizes:
            out *= d
        return out

    def __call__(self, x: Point) -> bool:
        return bool(self.predicate(x))

    def points(self) -> Iterable[Point]:
        return itertools.product(*(range(d) for d in self.domain_sizes))

    def index(self, x: Point) -> int:
        idx = 0
        for xi, d in zip(x, self.domain_sizes):
            idx = idx * d + xi
        return idx

    def point(self, index: int) -> Point:
        out = []
        for d in reversed(self.domain_sizes):
            index, r = divmod(index, d)
            out.append(r)
        return tuple(reversed(out))

    @cached_property
    def ones(self) -> tuple[Point, ...]:
        """``f^{-1}(1)`` in row-major order; position = dense id."""
        return tuple(x for x in self.points() if self.predicate(x))

    @cached_property
    def one_ids(self) -> dict[Point, int]:
        return {x: i for i, x in enumerate(self.ones)}

    def valid(self, x: Point) -> bool:
        return len(x) == self.k and all(0 <= xi < d for xi, d in zip(x, self.domain_sizes))

    def show(self, x: Point) -> str:
        if self.render is None:
            return str(tuple(xi + 1 for xi in x))
        return "(" + ", ".join(self.render(i, xi) for i, xi in enumerate(x)) + ")"

    def to_json(self) -> dict:
        table = 0
        for i, x in enumerate(self.points()):
            if self.predicate(x):
                table |= 1 << i
        return {"k": self.k, "domain_sizes": list(self.domain_sizes),
                "truth_table": hex(table), "name": self.name}

    @classmethod
    def from_json(cls, doc: dict) -> "NofFunctionSpec":
        """Load ``{k, domain_sizes, truth_table}``.

        ``truth_table`` is row-major over the product with coordinate 1
        slowest, given either as a list of 0/1 or as a hex string whose bit
        ``i`` (least significant first) is the value at row-major index ``i``.
        """
        sizes = tuple(doc["domain_sizes"])
        raw = doc["truth_table"]
        total = 1
        for d in sizes:
            total *= d
        if isinstance(raw, str):
            table = int(raw, 16)
            if table >> total:
                raise ValueError("truth table has bits beyond the product size")
        else:
            if len(raw) != total:
                raise ValueError(f"truth table has {len(raw)} entries, expected {total}")
            table = sum(1 << i for i, b in enumerate(raw) if b)
        spec = cls(int(doc["k"]), sizes, lambda x: False, name=doc.get("name", "f"))
        object.__setattr__(spec, "predicate", lambda x: bool(table >> spec.index(x) & 1))
        return spec


@dataclass(frozen=True)
class Star:
    center: Point
    spokes: tuple[Point, ...]

    def __post_init__(self):
        k = len(self.center)
        if len(self.spokes) != k:
            raise ValueError("a star has one spoke per coordinate")
        for i, s in enumerate(self.spokes):
            if len(s) != k:
                raise ValueError("spoke has the wrong arity")
            diff = [j for j in range(k) if s[j] != self.center[j]]
            if diff != [i]:
                raise ValueError(f"spoke {i} must differ from the center exactly in coordinate {i}")


def _buckets(C: Iterable[Point], k: int) -> list[dict[Point, list[Point]]]:
    # by[i][x without coordinate i] -> members of C with that projection
    by: list[dict] = [defaultdict(list) for _ in range(k)]
    for y in sorted(C):
        for i in range(k):
            by[i][y[:i] + y[i + 1:]].append(y)
    return by


def cylinder_closure(C: Iterable[Point], domain_sizes: Sequence[int]) -> set[Point]:
    """``∩_i cl_i(C)``: points whose every one-coordinate-deleted projection
    is a projection of some member of ``C``."""
    C = set(C)
    k = len(domain_sizes)
    proj = [{y[:i] + y[i + 1:] for y in C} for i in range(k)]
    out = set()
    for y in C:
        for a in range(domain_sizes[0]):
            x = (a,) + y[1:]
            if all(x[:i] + x[i + 1:] in proj[i] for i in range(1, k)):
                out.add(x)
    return out


def is_cylinder_intersection(C: Iterable[Point], domain_sizes: Sequence[int]) -> bool:
    C = set(C)
    return cylinder_closure(C, domain_sizes) == C


def _centers(C: set[Point], by, k: int, last_size: int) -> Iterable[Point]:
    # every star's last spoke is (center[:-1], y) with y != center[-1]
    seen = set()
    for y in sorted(C):
        for c in range(last_size):
            if c == y[-1]:
                continue
            x = y[:-1] + (c,)
            if x in seen:
                continue
            seen.add(x)
            if all(any(s[i] != x[i] for s in by[i].get(x[:i] + x[i + 1:], ()))
                   for i in range(k - 1)):
                yield x


def star_center_closed(C: Iterable[Point]) -> bool:
    """True iff every star with all spokes in ``C`` has its center in ``C``.

    Stars are assembled from spokes: spoke 1 fixes the center outside
    coordinate 1, spoke 2 then fixes coordinate 1, and the remaining spokes
    are looked up.
    """
    C = set(C)
    if not C:
        return True
    k = len(next(iter(C)))
    if len(C) < k:
        return True
    by = _buckets(C, k)
    tail: dict[Point, list[Point]] = defaultdict(list)
    for y in C:
        tail[y[2:]].append(y)
    for s1 in C:
        for s2 in tail[s1[2:]]:
            if s2[0] == s1[0] or s2[1] == s1[1]:
                continue
            center = (s2[0],) + s1[1:]
            if center in C:
                continue
            if all(any(s[i] != center[i] for s in by[i].get(center[:i] + center[i + 1:], ()))
                   for i in range(2, k)):
                return False
    return True


def is_weak_graph_function(f: NofFunctionSpec) -> bool:
    """At most one true value of the last coordinate per fixing of the rest."""
    seen = set()
    for x in f.ones:
        if x[:-1] in seen:
            return False
        seen.add(x[:-1])
    return True


def _require_weak_graph(f: NofFunctionSpec) -> None:
    if not is_weak_graph_function(f):
        raise PreconditionError(f"{f.name} is not a weak graph function")


def find_star_in(C: Iterable[Point], f: NofFunctionSpec) -> Star | None:
    """A star with all spokes in ``C``, least center first; ``None`` if star-free.

    Requires ``f`` to be a weak graph function and ``C ⊆ f^{-1}(1)``.
    """
    _require_weak_graph(f)
    C = set(C)
    ones = f.one_ids
    if any(x not in ones for x in C):
        raise PreconditionError("C must lie inside f^{-1}(1)")
    if len(C) < f.k:
        return None
    by = _buckets(C, f.k)
    centers = list(_centers(C, by, f.k, f.domain_sizes[-1]))
    if not centers:
        return None
    x = min(centers)
    spokes = tuple(min(s for s in by[i][x[:i] + x[i + 1:]] if s[i] != x[i]) for i in range(f.k))
    return Star(x, spokes)


def stars_in(points: Iterable[Point], domain_sizes: Sequence[int]) -> list[Star]:
    """Every star whose spokes all lie in ``points``."""
    P = set(points)
    k = len(domain_sizes)
    if len(P) < k:
        return []
    by = _buckets(P, k)
    out = []
    for x in sorted(_centers(P, by, k, domain_sizes[-1])):
        choices = [[s for s in by[i][x[:i] + x[i + 1:]] if s[i] != x[i]] for i in range(k)]
        for spokes in itertools.product(*choices):
            out.append(Star(x, spokes))
    return out


def star_hypergraph(f: NofFunctionSpec) -> Hypergraph:
    """Vertices are dense ids of ``f^{-1}(1)``, edges are its stars."""
    ids = f.one_ids
    return Hypergraph(len(ids), ([ids[s] for s in st.spokes]
                                 for st in stars_in(f.ones, f.domain_sizes)))


def _milp_options(budget: Budget | None) -> dict:
    opts = {"mip_rel_gap": 0.0}
    if budget is not None:
        if budget.seconds is not None:
            opts["time_limit"] = budget.seconds
        if budget.nodes is not None:
            opts["node_limit"] = budget.nodes
    return opts


def _edge_matrix(edges: Sequence[Sequence[int]], n: int) -> csr_matrix:
    rows = [r for r, e in enumerate(edges) for _ in e]
    cols = [v for e in edges for v in e]
    return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(edges), n))


def _max_star_free_ids(num: int, edges: list[tuple[int, ...]],
                       budget: Budget | None) -> ExtremalResult:
    if num == 0:
        return ExtremalResult(0, (), OPTIMAL)
    if not edges:
        return ExtremalResult(num, tuple(range(num)), OPTIMAL)
    A = _edge_matrix(edges, num)
    caps = np.array([len(e) - 1 for e in edges], dtype=float)
    packing = LinearConstraint(A, -np.inf, caps)
    integral = np.ones(num)
    res = milp(-np.ones(num), constraints=packing, integrality=integral,
               bounds=Bounds(0, 1), options=_milp_options(budget))
    if res.status != 0:
        fallback = Hypergraph(num, edges).greedy_independent()
        if res.x is not None:
            found = tuple(int(v) for v in np.flatnonzero(res.x > 0.5))
            if len(found) > len(fallback):
                fallback = found
        return ExtremalResult(len(fallback), fallback, LOWER_BOUND_ONLY)
    size = int(round(-res.fun))
    witness = set(int(v) for v in np.flatnonzero(res.x > 0.5))
    # lexicographically least optimum: fix vertices in order, keeping the
    # latest witness to skip solves that are already known feasible
    lo, hi = np.zeros(num), np.ones(num)
    exact = [packing, LinearConstraint(np.ones((1, num)), size, size)]
    for v in range(num):
        lo[v] = 1
        if v in witness:
            continue
        r = milp(np.zeros(num), constraints=exact, integrality=integral,
                 bounds=Bounds(lo, hi), options={"mip_rel_gap": 0.0})
        if r.status == 0:
            witness = set(int(u) for u in np.flatnonzero(r.x > 0.5))
        else:
            lo[v] = hi[v] = 0
    return ExtremalResult(size, tuple(sorted(witness)), OPTIMAL)


def max_star_free(f: NofFunctionSpec, budget: Budget | None = None) -> ExtremalResult:
    """``ind(f)`` for a weak graph function: the largest star-free subset of
    ``f^{-1}(1)``. The witness lists dense ids into ``f.ones``."""
    _require_weak_graph(f)
    H = star_hypergraph(f)
    return _max_star_free_ids(H.n, H.edges, budget)


def _colorable(num: int, edges, C: int, budget: Budget | None):
    # x[v, c] at column v*C + c
    nv = num * C
    rows, cols, vals = [], [], []
    r = 0
    for v in range(num):
        for c in range(C):
            rows.append(r)
            cols.append(v * C + c)
            vals.append(1.0)
        r += 1
    one_color = csr_matrix((vals, (rows, cols)), shape=(num, nv))
    rows, cols = [], []
    caps = []
    r = 0
    for e in edges:
        for c in range(C):
            for v in e:
                rows.append(r)
                cols.append(v * C + c)
            caps.append(len(e) - 1)
            r += 1
    cons = [LinearConstraint(one_color, 1, 1)]
    if r:
        cons.append(LinearConstraint(csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(r, nv)),
                                     -np.inf, np.array(caps, dtype=float)))
    lo = np.zeros(nv)
    lo[0] = 1  # vertex 0 takes color 0
    res = milp(np.zeros(nv), constraints=cons, integrality=np.ones(nv),
               bounds=Bounds(lo, np.ones(nv)), options=_milp_options(budget))
    if res.status == 0:
        x = res.x.reshape(num, C)
        return tuple(int(np.argmax(row)) for row in x)
    if res.status == 2:
        return None
    return "unknown"


def _canonical(colors: Sequence[int]) -> tuple[int, ...]:
    # relabel classes in order of first appearance
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(c, len(relabel)) for c in colors)


def min_star_free_partition(f: NofFunctionSpec, budget: Budget | None = None,
                            alpha: int | None = None) -> ColoringResult:
    """``chr(f)`` for a weak graph function: fewest star-free classes
    partitioning ``f^{-1}(1)``. Colors are indexed by dense ids."""
    _require_weak_graph(f)
    H = star_hypergraph(f)
    if H.n == 0:
        return ColoringResult(0, Coloring(()), OPTIMAL)
    greedy = H.greedy_coloring()
    lo = 2 if H.edges else 1
    if alpha:
        lo = max(lo, coloring_lower_bound(H.n, alpha))
    for C in range(lo, greedy.num_colors):
        found = _colorable(H.n, H.edges, C, budget)
        if found == "unknown":
            return ColoringResult(greedy.num_colors, greedy, UPPER_BOUND_ONLY)
        if found is not None:
            col = Coloring(_canonical(found))
            return ColoringResult(col.num_colors, col, OPTIMAL)
    return ColoringResult(greedy.num_colors, greedy, OPTIMAL)


def _subsets(points: Sequence[Point], max_subsets: int, samples: int, seed: int):
    n = len(points)
    if n <= max_subsets.bit_length() - 1:
        for mask in range(1 << n):
            yield [points[i] for i in range(n) if mask >> i & 1]
        return
    rng = random.Random(seed)
    for _ in range(samples):
        yield [p for p in points if rng.random() < 0.5]


@dataclass
class LemmaReport:
    lemma: str
    subsets_checked: int
    exhaustive: bool
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "subsets_checked": self.subsets_checked,
                "exhaustive": self.exhaustive, "mismatches": [sorted(m) for m in self.mismatches]}


def check_lemma1(domain_sizes: Sequence[int], max_subsets: int = MAX_EXHAUSTIVE_SUBSETS,
                 samples: int = 4096, seed: int = 0) -> LemmaReport:
    """Closure test vs star-center test on subsets of the whole product."""
    points = list(itertools.product(*(range(d) for d in domain_sizes)))
    exhaustive = len(points) <= max_subsets.bit_length() - 1
    rep = LemmaReport("lemma1", 0, exhaustive)
    for C in _subsets(points, max_subsets, samples, seed):
        rep.subsets_checked += 1
        if is_cylinder_intersection(C, domain_sizes) != star_center_closed(C):
            rep.mismatches.append(C)
    return rep


def check_lemma2(f: NofFunctionSpec, max_subsets: int = MAX_EXHAUSTIVE_SUBSETS,
                 samples: int = 4096, seed: int = 0) -> LemmaReport:
    """On subsets of ``f^{-1}(1)``: closure test, star-center test and
    star-freeness must all agree."""
    _require_weak_graph(f)
    points = list(f.ones)
    exhaustive = len(points) <= max_subsets.bit_length() - 1
    rep = LemmaReport("lemma2", 0, exhaustive)
    for C in _subsets(points, max_subsets, samples, seed):
        rep.subsets_checked += 1
        a = is_cylinder_intersection(C, f.domain_sizes)
        b = star_center_closed(C)
        c = find_star_in(C, f) is None
        if not a == b == c:
            rep.mismatches.append(C)
    return rep
