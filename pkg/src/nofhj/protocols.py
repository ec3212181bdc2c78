"""Deterministic NOF blackboard protocols with exact bit accounting.

A :class:`ProtocolProgram` is a static list of one-bit steps. Each step's
rule gets a :class:`View` of the input that raises on the speaker's own
coordinate, plus the board so far. The output rule sees only the board, so
every player knows the answer once the protocol stops.

Players are 0-based internally and rendered ``P1..Pk``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .apfree import ApFreeColoring
from .nof import NofFunctionSpec, PreconditionError, find_star_in, is_weak_graph_function
from .search import Coloring
from .zoo import SumPreservingMap, exactly_spec, part_general_spec, part_spec

MAX_VERIFY_INPUTS = 1 << 24

Board = tuple[int, ...]


class ViewError(RuntimeError):
    """A rule tried to read its speaker's own coordinate."""


class ProtocolError(RuntimeError):
    pass


class View:
    __slots__ = ("_x", "speaker")

    def __init__(self, x: Sequence[int], speaker: int):
        self._x = x
        self.speaker = speaker

    def __getitem__(self, i: int) -> int:
        if i == self.speaker:
            raise ViewError(f"player {self.speaker + 1} cannot see coordinate {i + 1}")
        return self._x[i]

    def __len__(self) -> int:
        return len(self._x)

    def visible(self) -> dict[int, int]:
        return {i: v for i, v in enumerate(self._x) if i != self.speaker}


class MappedView:
    """View of a coordinate-wise image of the input; hides the same coordinate."""

    __slots__ = ("_view", "_maps")

    def __init__(self, view, maps: Sequence[Callable[[int], int]]):
        self._view = view
        self._maps = maps

    @property
    def speaker(self) -> int:
        return self._view.speaker

    def __getitem__(self, i: int) -> int:
        return self._maps[i](self._view[i])

    def __len__(self) -> int:
        return len(self._view)


@dataclass(frozen=True)
class Step:
    speaker: int
    rule: Callable[[View, Board], int]
    halt: Callable[[Board], bool] | None = None
    group: str = ""


@dataclass(frozen=True)
class Transcript:
    entries: tuple[tuple[int, int, int], ...]  # (step index, speaker, bit)
    groups: tuple[str, ...] = ()

    @property
    def bits(self) -> Board:
        return tuple(b for _, _, b in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def render(self) -> str:
        """``"P3: 1, P3: 01, P1: 1, P2: 1"``; consecutive bits of one step group merge."""
        parts: list[list] = []
        for (idx, sp, b), g in zip(self.entries, self.groups or [""] * len(self.entries)):
            key = (sp, g)
            if parts and parts[-1][0] == key and g:
                parts[-1][1] += str(b)
            else:
                parts.append([key, str(b)])
        return ", ".join(f"P{sp + 1}: {bits}" for (sp, _), bits in parts)


@dataclass(frozen=True)
class ProtocolProgram:
    k: int
    steps: tuple[Step, ...]
    output_rule: Callable[[Board], bool]
    name: str = "protocol"
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        for s in self.steps:
            if not 0 <= s.speaker < self.k:
                raise ValueError(f"speaker {s.speaker} outside 0..{self.k - 1}")

    @property
    def max_cost(self) -> int:
        """Length of the full schedule; the measured worst case can be shorter."""
        return len(self.steps)

    def run(self, x: Sequence[int]) -> tuple[bool, Transcript]:
        if len(x) != self.k:
            raise ProtocolError(f"input has {len(x)} coordinates, expected {self.k}")
        views = [View(x, i) for i in range(self.k)]
        board: list[int] = []
        entries = []
        groups = []
        for idx, step in enumerate(self.steps):
            bit = step.rule(views[step.speaker], tuple(board))
            if bit is True or bit is False:
                bit = int(bit)
            if bit not in (0, 1):
                raise ProtocolError(f"step {idx} of {self.name} wrote {bit!r}, not a bit")
            board.append(bit)
            entries.append((idx, step.speaker, bit))
            groups.append(step.group)
            if step.halt is not None and step.halt(tuple(board)):
                break
        out = self.output_rule(tuple(board))
        return bool(out), Transcript(tuple(entries), tuple(groups))


def run(p: ProtocolProgram, x: Sequence[int]) -> tuple[bool, Transcript]:
    return p.run(x)


def _width(count: int) -> int:
    return math.ceil(math.log2(count)) if count > 1 else 0


def _announce(speaker: int, width: int, value: Callable[[View, Board], int],
              group: str) -> list[Step]:
    # fixed-width big-endian announcement, one step per bit
    return [Step(speaker, lambda v, b, j=j: value(v, b) >> (width - 1 - j) & 1, group=group)
            for j in range(width)]


def _decode(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        out = out << 1 | b
    return out


# --- generic protocols -------------------------------------------------------

def announce_protocol(f: NofFunctionSpec, speaker: int = 0) -> ProtocolProgram:
    """``speaker`` writes ``f``'s value; valid only if ``f`` ignores that coordinate."""
    seen: dict = {}
    for x in f.points():
        key = x[:speaker] + x[speaker + 1:]
        val = f(x)
        if seen.setdefault(key, val) != val:
            raise PreconditionError(f"{f.name} depends on coordinate {speaker + 1}")

    def rule(v, b):
        return int(seen[tuple(v[i] for i in range(f.k) if i != speaker)])

    return ProtocolProgram(f.k, (Step(speaker, rule, group="value"),), lambda b: b[0] == 1,
                           name=f"announce({f.name})", info={"function": f.name})


def brute_protocol(f: NofFunctionSpec) -> ProtocolProgram:
    """P2 writes ``x_1`` in binary, then P1 (who now knows everything) writes ``f``."""
    if f.k < 2:
        raise ValueError("need at least two players")
    w = _width(f.domain_sizes[0])
    steps = _announce(1, w, lambda v, b: v[0], "x1")

    def value(v, b):
        x = (_decode(b[:w]),) + tuple(v[i] for i in range(1, f.k))
        return int(f(x)) if x[0] < f.domain_sizes[0] else 0

    steps.append(Step(0, value, group="value"))
    return ProtocolProgram(f.k, tuple(steps), lambda b: b[-1] == 1, name=f"brute({f.name})",
                           info={"function": f.name})


def reveal_protocol(f: NofFunctionSpec) -> ProtocolProgram:
    """Full revelation: P2 writes ``x_1``, then P1 writes ``x_2..x_k``."""
    widths = [_width(d) for d in f.domain_sizes]
    steps = _announce(1, widths[0], lambda v, b: v[0], "x1")
    for i in range(1, f.k):
        steps += _announce(0, widths[i], lambda v, b, i=i: v[i], f"x{i + 1}")

    def output(b):
        x, pos = [], 0
        for w in widths:
            x.append(_decode(b[pos:pos + w]))
            pos += w
        return f.valid(tuple(x)) and f(tuple(x))

    return ProtocolProgram(f.k, tuple(steps), output, name=f"reveal({f.name})",
                           info={"function": f.name})


# --- the weak-graph coloring protocol ----------------------------------------

def coloring_protocol(f: NofFunctionSpec, coloring: Coloring) -> ProtocolProgram:
    """Protocol from a star-free coloring of ``f^{-1}(1)`` for a weak graph ``f``.

    The last player writes whether the visible prefix has a completion ``y'``
    and, if so, the color ``b`` of that completion. Each other player writes
    1 iff changing its own coordinate can give a true point colored ``b``.
    Cost ``ceil(log2 C) + k``.
    """
    if not is_weak_graph_function(f):
        raise PreconditionError(f"{f.name} is not a weak graph function")
    ones = f.ones
    if len(coloring.colors) != len(ones):
        raise PreconditionError("coloring must assign a color to every point of f^{-1}(1)")
    classes = coloring.classes()
    for c, members in enumerate(classes):
        if find_star_in([ones[i] for i in members], f) is not None:
            raise PreconditionError(f"color class {c} contains a star")
    k = f.k
    C = coloring.num_colors
    width = _width(C)
    completion = {x[:-1]: x for x in ones}
    color_of = {x: coloring.colors[i] for i, x in enumerate(ones)}
    options: list[dict] = [defaultdict(set) for _ in range(k - 1)]
    for x in ones:
        for i in range(k - 1):
            options[i][x[:i] + x[i + 1:]].add(color_of[x])

    def prefix(v):
        return tuple(v[j] for j in range(k - 1))

    def exists(v, b):
        return int(prefix(v) in completion)

    def color(v, b):
        return color_of[completion[prefix(v)]]

    steps = [Step(k - 1, exists, halt=lambda b: b[0] == 0, group="exists")]
    steps += _announce(k - 1, width, color, "color")
    for i in range(k - 1):
        def check(v, b, i=i):
            bcol = _decode(b[1:1 + width])
            key = tuple(v[j] for j in range(k) if j != i)
            return int(bcol in options[i].get(key, ()))
        steps.append(Step(i, check, group=f"check{i + 1}"))

    def output(b):
        return len(b) == len(steps) and all(b[:1]) and all(b[1 + width:])

    return ProtocolProgram(k, tuple(steps), output, name=f"coloring({f.name})",
                           info={"function": f.name, "colors": C, "width": width,
                                 "formula_cost": width + k})


# --- Exactly via AP-free colorings -------------------------------------------

def cfl_universe(n: int, k: int) -> int:
    """Number of weighted sums ``sum_{i<k} i*x_i`` with every ``x_i`` in ``0..n``."""
    return n * k * (k - 1) // 2 + 1


def exactly_protocol_cfl(n: int, k: int, coloring: ApFreeColoring,
                         validate: bool = True) -> ProtocolProgram:
    """Exactly_{n,k} from a k-AP-free coloring of ``{0 .. n*k(k-1)/2}``.

    The last player announces the class of ``w = sum_{i<k} i*x_i``. Player
    ``i`` replaces ``x_i`` by the value that would make the sum ``n`` and
    checks that the resulting weighted sum lands in the announced class. If
    the true sum misses ``n`` by ``d``, the k sums seen form an AP of step
    ``d``, which an AP-free class cannot contain. Cost ``ceil(log2 C) + k - 1``.

    Out-of-range values are tolerated: a player seeing one writes 0, and the
    announcer falls back to class 0 when ``w`` leaves the universe.
    """
    if k < 3:
        raise ValueError("need k >= 3")
    if coloring.M < cfl_universe(n, k):
        raise PreconditionError(f"coloring covers {coloring.M} sums, need {cfl_universe(n, k)}")
    if coloring.k > k:
        raise PreconditionError(f"coloring avoids {coloring.k}-APs; need k={k}")
    if validate and not coloring.is_valid():
        raise PreconditionError("coloring has a class containing a k-AP")
    classes = coloring.classes
    M = coloring.M
    C = coloring.num_classes
    width = _width(C)

    def announced(v, b):
        w = sum((i + 1) * v[i] for i in range(k - 1))
        return classes[w] if 0 <= w < M else 0

    steps = _announce(k - 1, width, announced, "class")
    for i in range(k - 1):
        def check(v, b, i=i):
            rest = [v[j] for j in range(k) if j != i]
            if any(not 0 <= r <= n for r in rest):
                return 0
            guess = n - sum(rest)
            if not 0 <= guess <= n:
                return 0
            w = sum((j + 1) * v[j] for j in range(k - 1) if j != i) + (i + 1) * guess
            return int(classes[w] == _decode(b[:width]))
        steps.append(Step(i, check, group=f"check{i + 1}"))

    return ProtocolProgram(k, tuple(steps), lambda b: all(b[width:]),
                           name=f"cfl(Exactly_{{{n},{k}}})",
                           info={"function": f"Exactly_{{{n},{k}}}", "n": n, "k": k,
                                 "classes": C, "width": width, "universe": M,
                                 "formula_cost": width + k - 1, "domain_robust": True})


def cfl_soundness_witness(n: int, k: int, coloring: ApFreeColoring,
                          x: Sequence[int]) -> tuple[int, ...] | None:
    """For a wrongly accepted input, the monochromatic k-AP it exposes."""
    d = n - sum(x)
    if d == 0:
        return None
    w = sum((i + 1) * x[i] for i in range(k - 1))
    ap = tuple(w + i * d for i in range(k))
    if any(not 0 <= t < coloring.M for t in ap):
        return None
    if len({coloring.classes[t] for t in ap}) == 1:
        return tuple(sorted(ap))
    return None


def default_cfl_coloring(n: int, k: int, strategy: str = "greedy_extract",
                         seed: int = 0) -> ApFreeColoring:
    from .apfree import ap_free_partition
    return ap_free_partition(cfl_universe(n, k), k, strategy, seed=seed)


# --- Part via Exactly --------------------------------------------------------

def _embed(ep: ProtocolProgram, offset: int, maps) -> tuple[list[Step], Callable[[Board], bool]]:
    # run ep on a coordinate-wise image of the input, after ``offset`` bits
    steps = []
    for s in ep.steps:
        rule = s.rule
        halt = s.halt
        steps.append(Step(
            s.speaker,
            lambda v, b, rule=rule: rule(MappedView(v, maps), b[offset:]),
            None if halt is None else (lambda b, halt=halt: halt(b[offset:])),
            s.group))
    return steps, lambda b: ep.output_rule(b[offset:])


def _disjoint(sets) -> bool:
    seen = 0
    for s in sets:
        if seen & s:
            return False
        seen |= s
    return True


def part_general_protocol(m: int, n: int, k: int, ep: ProtocolProgram) -> ProtocolProgram:
    """Part_{m,k,n}: three disjointness bits, then ``ep`` on the set sizes.

    Step 1: P_k checks S_1..S_{k-1}. Step 2: P_1 checks S_2..S_{k-1}
    against S_k. Step 3: P_2 checks S_1 against S_k. Any 0 rejects at once.
    """
    if k < 3:
        raise ValueError("need k >= 3")
    if m < n:
        raise ValueError("need m >= n")
    if ep.k != k:
        raise ValueError("Exactly protocol has the wrong number of players")
    if m > n and not ep.info.get("domain_robust"):
        raise PreconditionError("set sizes may exceed n; the Exactly protocol must tolerate that")
    stop = lambda b: b[-1] == 0  # noqa: E731
    steps = [
        Step(k - 1, lambda v, b: int(_disjoint([v[i] for i in range(k - 1)])), stop, "disjoint"),
        Step(0, lambda v, b: int(all(v[i] & v[k - 1] == 0 for i in range(1, k - 1))), stop,
             "disjoint"),
        Step(1, lambda v, b: int(v[0] & v[k - 1] == 0), stop, "disjoint"),
    ]
    maps = [int.bit_count] * k
    sub, sub_out = _embed(ep, 3, maps)
    steps += sub

    def output(b):
        return len(b) > 3 and all(b[:3]) and sub_out(b)

    name = f"part(Part_{{{n},{k}}})" if m == n else f"part(Part_{{{m},{k},{n}}})"
    return ProtocolProgram(k, tuple(steps), output, name=name,
                           info={"function": name[5:-1], "m": m, "n": n, "k": k,
                                 "exactly": ep.name, "exactly_cost": ep.max_cost,
                                 "formula_cost": 3 + ep.max_cost})


def part_protocol(n: int, k: int, ep: ProtocolProgram) -> ProtocolProgram:
    return part_general_protocol(n, n, k, ep)


def exactly_via_part_reduction(g: SumPreservingMap, pp: ProtocolProgram) -> ProtocolProgram:
    """Exactly_{n,k} by running a Part_{m,k,n} protocol on ``g(a)``.

    ``g`` maps coordinates one at a time, so every player can compute the
    images of all the coordinates it sees.
    """
    if not getattr(g, "coordinatewise", False):
        raise PreconditionError("sum-preserving map must act coordinate by coordinate")
    m = pp.info.get("m")
    if m is not None and m != g.m:
        raise PreconditionError(f"map targets m={g.m} but the Part protocol has m={m}")
    if pp.k != g.k:
        raise PreconditionError("player counts differ")
    maps = [lambda a, i=i: g.coordinate(i, a) for i in range(g.k)]
    steps, out = _embed(pp, 0, maps)
    return ProtocolProgram(g.k, tuple(steps), out, name=f"reduce[{g.rule}]({pp.name})",
                           info={"function": f"Exactly_{{{g.n},{g.k}}}", "n": g.n, "k": g.k,
                                 "m": g.m, "map": g.rule, "part_protocol": pp.name,
                                 "formula_cost": pp.max_cost})


# --- verification ------------------------------------------------------------

@dataclass
class VerificationReport:
    function: str
    params: dict
    inputs: int
    mismatches: list[dict]
    worst_cost: int
    class_count: int
    transcript_classes: int
    star_free_classes: list[bool] | None = None

    @property
    def passed(self) -> bool:
        return not self.mismatches and (self.star_free_classes is None or all(self.star_free_classes))

    def to_json(self) -> dict:
        doc = {"function": self.function, "n": self.params.get("n"), "k": self.params.get("k"),
               "inputs": self.inputs, "mismatches": self.mismatches,
               "worst_cost": self.worst_cost, "class_count": self.class_count}
        if self.star_free_classes is not None:
            doc["star_free_classes"] = all(self.star_free_classes)
        return doc


def verify_exhaustive(p: ProtocolProgram, f: NofFunctionSpec, check_classes: bool = False,
                      max_inputs: int = MAX_VERIFY_INPUTS,
                      max_mismatches: int = 100) -> VerificationReport:
    """Run ``p`` on every input of ``f``.

    ``class_count`` counts distinct transcripts among true inputs and
    ``transcript_classes`` among all inputs. With ``check_classes`` each
    true-input class is tested for stars (weak graph ``f`` only).
    Mismatches are listed in input order, capped at ``max_mismatches``.
    """
    if f.size > max_inputs:
        raise ProtocolError(f"{f.size} inputs exceed the verification budget of {max_inputs}")
    if p.k != f.k:
        raise ProtocolError("protocol and function disagree on the number of players")
    mismatches = []
    worst = 0
    seen = set()
    one_classes: dict[Board, list] = {}
    nbad = 0
    for idx, x in enumerate(f.points()):
        out, t = p.run(x)
        expect = f(x)
        worst = max(worst, len(t))
        bits = t.bits
        seen.add(bits)
        if expect:
            one_classes.setdefault(bits, []).append(x)
        if out != expect:
            nbad += 1
            if len(mismatches) < max_mismatches:
                mismatches.append({"index": idx, "input": list(x), "expected": int(expect),
                                   "got": int(out)})
    star_free = None
    if check_classes:
        star_free = [find_star_in(members, f) is None for members in one_classes.values()]
    rep = VerificationReport(f.name, dict(f.params), f.size, mismatches, worst,
                             len(one_classes), len(seen), star_free)
    rep.params["mismatch_count"] = nbad
    return rep


@dataclass
class TranscriptPartition:
    coloring: Coloring
    class_count: int
    worst_cost: int
    star_free: list[bool] | None

    @property
    def all_star_free(self) -> bool:
        return self.star_free is None or all(self.star_free)


def transcript_partition(p: ProtocolProgram, f: NofFunctionSpec,
                         check_stars: bool | None = None) -> TranscriptPartition:
    """Color ``f^{-1}(1)`` by full transcript (classes numbered by first appearance).

    For a correct protocol each class is a 1-monochromatic cylinder
    intersection, so for weak graph ``f`` every class must be star-free.
    """
    ones = f.ones
    label: dict[Board, int] = {}
    colors = []
    worst = 0
    for x in ones:
        _, t = p.run(x)
        worst = max(worst, len(t))
        colors.append(label.setdefault(t.bits, len(label)))
    col = Coloring(tuple(colors))
    if check_stars is None:
        check_stars = is_weak_graph_function(f)
    star_free = None
    if check_stars:
        star_free = [find_star_in([ones[i] for i in members], f) is None
                     for members in col.classes()]
    return TranscriptPartition(col, len(label), worst, star_free)


def spec_for(subject: str, n: int, k: int, m: int | None = None) -> NofFunctionSpec:
    if subject == "part":
        return part_spec(n, k)
    if subject == "exactly":
        return exactly_spec(n, k)
    if subject == "part_general":
        return part_general_spec(m if m is not None else n, k, n)
    raise ValueError(f"unknown function {subject!r}")
