"""Command-line front end.

Every command builds a :class:`ResultRecord` and prints it as text, JSON or
CSV. Expensive solves are cached on disk; see :mod:`nofhj.cache`.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from .apfree import ApFreeColoring, ap_free_partition, ap_hypergraph, behrend_set, has_k_ap, r_k_exact
from .cache import ResultCache, cache_dir
from .nof import check_lemma1, check_lemma2, max_star_free, min_star_free_partition, stars_in
from .oracles import OracleTooLarge, max_independent_by_enumeration, min_coloring_by_enumeration
from .protocols import (cfl_universe, exactly_protocol_cfl, exactly_via_part_reduction,
                        part_general_protocol, part_protocol, transcript_partition,
                        verify_exhaustive)
from .search import OPTIMAL, Budget
from .words import (enumerate_lines, line_points, max_line_free, min_line_free_coloring,
                    witness_document)
from .zoo import (exactly_spec, fujimura_hypergraph, interval_map, line_to_star, max_fujimura,
                  paired_map, part_general_spec, part_spec, star_to_line)

DEFAULT_BUDGET = "2000000"
EXIT_CHECK_FAILED = 1
EXIT_REFUSED = 2


class Refusal(Exception):
    """A request the tool declines to run (too large, precondition unmet)."""


@dataclass
class ResultRecord:
    command: str
    parameters: dict
    values: dict
    proof_status: str
    provenance: list[str]
    witness: object = None
    checks: dict = field(default_factory=dict)
    seed: int | None = None
    wall_time: float | None = None
    tool_version: str = __version__

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def to_json(self, deterministic: bool = False) -> dict:
        doc = asdict(self)
        if deterministic:
            doc["wall_time"] = None
        return doc


# --- helpers -----------------------------------------------------------------

def _status(optimal: bool) -> str:
    return OPTIMAL if optimal else "bound"


def _cached(args, command: str, params: dict, compute: Callable[[], ResultRecord]) -> ResultRecord:
    """Look ``params`` up in the cache, computing and storing on a miss."""
    cache = ResultCache(None if args.no_cache else cache_dir(args.cache_dir))
    hit = cache.get(command, params)
    if hit is not None:
        return ResultRecord(**hit)
    t0 = time.perf_counter()
    rec = compute()
    rec.wall_time = round(time.perf_counter() - t0, 6)
    cache.put(command, params, asdict(rec))
    return rec


def _oracle_independent(num: int, edges) -> int:
    try:
        return max_independent_by_enumeration(num, edges)[0]
    except OracleTooLarge as exc:
        raise Refusal(f"oracle refused: {exc}") from None


# --- single-value computations (shared by commands and tables) ----------------

def compute_dhj(n: int, k: int, budget: str, oracle: bool) -> ResultRecord:
    res = max_line_free(n, k, Budget.parse(budget))
    rec = ResultRecord("dhj", {"n": n, "k": k, "budget": budget, "oracle": oracle},
                       {"value": res.size, "ratio": res.size / k ** n},
                       _status(res.optimal), ["solver"],
                       witness_document(n, k, "line_free_set", res.witness, res.proof_status))
    if oracle:
        edges = [[w.index for w in line_points(t)] for t in enumerate_lines(n, k)]
        got = _oracle_independent(k ** n, edges)
        rec.values["oracle"] = got
        rec.provenance.append("oracle")
        rec.checks["oracle_equal"] = res.optimal and got == res.size
    return rec


def compute_chr(function: str, n: int, k: int, budget: str, oracle: bool) -> ResultRecord:
    b = Budget.parse(budget)
    params = {"function": function, "n": n, "k": k, "budget": budget, "oracle": oracle}
    if function == "line":
        try:
            res = min_line_free_coloring(n, k, b)
        except ValueError as exc:
            raise Refusal(str(exc)) from None
        witness = witness_document(n, k, "line_coloring", res.coloring.colors, res.proof_status)
        num = k ** n
        edges = [[w.index for w in line_points(t)] for t in enumerate_lines(n, k)]
    else:
        f = part_spec(n, k) if function == "part" else exactly_spec(n, k)
        res = min_star_free_partition(f, b)
        witness = {"function": f.name, "kind": "star_free_partition",
                   "points": [list(x) for x in f.ones], "data": list(res.coloring.colors)}
        num = len(f.ones)
        edges = [[f.one_ids[p] for p in st.spokes] for st in stars_in(f.ones, f.domain_sizes)]
    rec = ResultRecord("chr", params, {"value": res.num_colors}, _status(res.optimal),
                       ["solver"], witness)
    if oracle:
        try:
            got = min_coloring_by_enumeration(num, edges, max(res.num_colors, 1))
        except OracleTooLarge as exc:
            raise Refusal(f"oracle refused: {exc}") from None
        rec.values["oracle"] = got
        rec.provenance.append("oracle")
        rec.checks["oracle_equal"] = res.optimal and got == res.num_colors
    return rec


def compute_ind(function: str, n: int, k: int, budget: str, oracle: bool) -> ResultRecord:
    f = part_spec(n, k) if function == "part" else exactly_spec(n, k)
    res = max_star_free(f, Budget.parse(budget))
    rec = ResultRecord("ind", {"function": function, "n": n, "k": k, "budget": budget,
                               "oracle": oracle},
                       {"value": res.size}, _status(res.optimal), ["solver"],
                       {"function": f.name, "kind": "star_free_set",
                        "data": [list(f.ones[i]) for i in res.witness]})
    if oracle:
        edges = [[f.one_ids[p] for p in st.spokes] for st in stars_in(f.ones, f.domain_sizes)]
        got = _oracle_independent(len(f.ones), edges)
        rec.values["oracle"] = got
        rec.provenance.append("oracle")
        rec.checks["oracle_equal"] = res.optimal and got == res.size
    return rec


def compute_fujimura(n: int, k: int, budget: str, oracle: bool, compare_ind: bool,
                     inverted: bool = False) -> ResultRecord:
    b = Budget.parse(budget)
    res, pts = max_fujimura(n, k, b, inverted=inverted)
    rec = ResultRecord("fujimura", {"n": n, "k": k, "budget": budget, "oracle": oracle,
                                    "compare_ind": compare_ind, "inverted": inverted},
                       {"value": res.size}, _status(res.optimal), ["solver"],
                       [list(p) for p in pts])
    if oracle:
        cells, H = fujimura_hypergraph(n, k, inverted)
        got = _oracle_independent(len(cells), H.edges)
        rec.values["oracle"] = got
        rec.provenance.append("oracle")
        rec.checks["oracle_equal"] = res.optimal and got == res.size
    if compare_ind:
        ind = max_star_free(exactly_spec(n, k), b)
        rec.values["ind_exactly"] = ind.size
        # reported, not asserted: the two quantities can differ
        rec.values["equal"] = ind.size == res.size
        if not ind.optimal:
            rec.proof_status = "bound"
    return rec


def compute_rk(n: int, k: int, budget: str, oracle: bool) -> ResultRecord:
    res = r_k_exact(n, k, Budget.parse(budget))
    rec = ResultRecord("rk", {"n": n, "k": k, "budget": budget, "oracle": oracle},
                       {"value": res.size}, _status(res.optimal), ["solver"], list(res.witness))
    if oracle:
        got = _oracle_independent(n, ap_hypergraph(n, k).edges)
        rec.values["oracle"] = got
        rec.provenance.append("oracle")
        rec.checks["oracle_equal"] = res.optimal and got == res.size
    return rec


def _ap_coloring(args, M: int, k: int) -> ApFreeColoring:
    if getattr(args, "coloring", None):
        col = ApFreeColoring.from_json(json.loads(Path(args.coloring).read_text()))
        if col.M < M:
            raise Refusal(f"loaded coloring covers {col.M} points, need {M}")
        return col
    return ap_free_partition(M, k, args.strategy, seed=args.seed)


def compute_protocol(subject: str, n: int, k: int, args) -> tuple[ResultRecord, dict | None]:
    if k < 3:
        raise Refusal("protocols need k >= 3")
    col = _ap_coloring(args, cfl_universe(n, k), k)
    ep = exactly_protocol_cfl(n, k, col)
    params = {"subject": subject, "n": n, "k": k, "strategy": col.strategy,
              "coloring_file": args.coloring, "verify": args.verify}
    values = {"ap_classes": col.num_classes, "exactly_cost": ep.max_cost}
    checks: dict = {}
    inner = None
    if subject == "exactly":
        p, f = ep, exactly_spec(n, k)
    elif subject == "part":
        p, f = part_protocol(n, k, ep), part_spec(n, k)
    else:
        g = paired_map(n, k) if args.map == "paired" else interval_map(n, k)
        params["map"] = g.rule
        inner = part_general_protocol(g.m, n, k, ep)
        p, f = exactly_via_part_reduction(g, inner), exactly_spec(n, k)
        values["m"] = g.m
        values["part_cost"] = inner.max_cost
        values["reduction_cost"] = p.max_cost
        checks["part_cost_le_exactly_plus_3"] = inner.max_cost <= ep.max_cost + 3
    values["schedule_cost"] = p.max_cost
    values["formula_cost"] = p.info["formula_cost"]
    if args.verify:
        try:
            rep = verify_exhaustive(p, f)
        except Exception as exc:  # input budget
            raise Refusal(str(exc)) from None
        values.update(inputs=rep.inputs, mismatches=rep.params["mismatch_count"],
                      worst_cost=rep.worst_cost, class_count=rep.class_count)
        checks["zero_mismatches"] = rep.passed
        checks["cost_formula"] = rep.worst_cost == p.info["formula_cost"]
        if inner is not None:
            pf = part_general_spec(inner.info["m"], k, n)
            if pf.size <= 1 << 20:
                irep = verify_exhaustive(inner, pf)
                values["part_mismatches"] = irep.params["mismatch_count"]
                checks["part_zero_mismatches"] = irep.passed
    emitted = None
    if args.emit_coloring:
        tp = transcript_partition(p, f)
        emitted = {"function": f.name, "n": n, "k": k, "kind": "transcript_partition",
                   "class_count": tp.class_count, "star_free": tp.all_star_free,
                   "points": [list(x) for x in f.ones], "data": list(tp.coloring.colors)}
        values["transcript_classes"] = tp.class_count
        checks["transcript_classes_star_free"] = tp.all_star_free
    rec = ResultRecord("protocol", params, values, OPTIMAL, ["solver"],
                       {"ap_coloring": col.to_json()} if args.emit_coloring else None,
                       checks, seed=args.seed)
    return rec, emitted


# --- commands ----------------------------------------------------------------

def cmd_dhj(args) -> list[ResultRecord]:
    p = {"n": args.n, "k": args.k, "budget": args.budget, "oracle": args.oracle}
    return [_cached(args, "dhj", p, lambda: compute_dhj(args.n, args.k, args.budget, args.oracle))]


def cmd_chr(args) -> list[ResultRecord]:
    p = {"function": args.function, "n": args.n, "k": args.k, "budget": args.budget,
         "oracle": args.oracle}
    return [_cached(args, "chr", p, lambda: compute_chr(args.function, args.n, args.k,
                                                        args.budget, args.oracle))]


def cmd_ind(args) -> list[ResultRecord]:
    p = {"function": args.function, "n": args.n, "k": args.k, "budget": args.budget,
         "oracle": args.oracle}
    return [_cached(args, "ind", p, lambda: compute_ind(args.function, args.n, args.k,
                                                        args.budget, args.oracle))]


def cmd_fujimura(args) -> list[ResultRecord]:
    p = {"n": args.n, "k": args.k, "budget": args.budget, "oracle": args.oracle,
         "compare_ind": args.compare_ind, "inverted": args.inverted}
    return [_cached(args, "fujimura", p, lambda: compute_fujimura(
        args.n, args.k, args.budget, args.oracle, args.compare_ind, args.inverted))]


def cmd_rk(args) -> list[ResultRecord]:
    p = {"n": args.n, "k": args.k, "budget": args.budget, "oracle": args.oracle}
    return [_cached(args, "rk", p, lambda: compute_rk(args.n, args.k, args.budget, args.oracle))]


def cmd_behrend(args) -> list[ResultRecord]:
    t0 = time.perf_counter()
    S = behrend_set(args.M)
    rec = ResultRecord("behrend", {"M": args.M}, {"value": len(S)}, "bound", ["solver"], S,
                       {"three_ap_free": not has_k_ap(S, 3)})
    rec.wall_time = round(time.perf_counter() - t0, 6)
    return [rec]


def cmd_apfree_partition(args) -> list[ResultRecord]:
    t0 = time.perf_counter()
    base = json.loads(Path(args.base).read_text()) if args.base else None
    col = ap_free_partition(args.M, args.k, args.strategy, seed=args.seed, base=base)
    rec = ResultRecord("apfree-partition",
                       {"M": args.M, "k": args.k, "strategy": args.strategy, "base": args.base},
                       {"classes": col.num_classes}, "bound", ["solver"], col.to_json(),
                       {"ap_free": col.is_valid()}, seed=args.seed)
    rec.wall_time = round(time.perf_counter() - t0, 6)
    return [rec]


def cmd_protocol(args) -> list[ResultRecord]:
    t0 = time.perf_counter()
    rec, emitted = compute_protocol(args.subject, args.n, args.k, args)
    if emitted is not None:
        Path(args.emit_coloring).write_text(json.dumps(emitted, sort_keys=True) + "\n")
        rec.parameters["emit_coloring"] = args.emit_coloring
    rec.wall_time = round(time.perf_counter() - t0, 6)
    return [rec]


def compute_theorem1(n: int, k: int, budget: str, with_chr: bool) -> ResultRecord:
    b = Budget.parse(budget)
    lines = max_line_free(n, k, b)
    f = part_spec(n, k)
    stars = max_star_free(f, b)
    values = {"line_free": lines.size, "star_free": stars.size}
    checks = {"ind_equal": lines.optimal and stars.optimal and lines.size == stars.size}
    templates = enumerate_lines(n, k)
    found = stars_in(f.ones, f.domain_sizes)
    expected = (k + 1) ** n - k ** n
    values.update(lines=len(templates), stars=len(found), expected=expected)
    checks["bijection_counts"] = len(templates) == len(found) == expected
    mapped = {frozenset(line_to_star(t).spokes) for t in templates}
    checks["bijection_image"] = mapped == {frozenset(s.spokes) for s in found}
    checks["round_trip"] = all(star_to_line(line_to_star(t), n) == t for t in templates)
    optimal = lines.optimal and stars.optimal
    if with_chr:
        lc = min_line_free_coloring(n, k, b, alpha=lines.size if lines.optimal else None)
        sc = min_star_free_partition(f, b, alpha=stars.size if stars.optimal else None)
        values.update(chr_lines=lc.num_colors, chr_stars=sc.num_colors)
        checks["chr_equal"] = lc.optimal and sc.optimal and lc.num_colors == sc.num_colors
        optimal = optimal and lc.optimal and sc.optimal
    return ResultRecord("verify-theorem1", {"n": n, "k": k, "budget": budget, "chr": with_chr},
                        values, _status(optimal), ["solver"], None, checks)


def cmd_verify_theorem1(args) -> list[ResultRecord]:
    if args.k < 3:
        raise Refusal("the line/star equality is only claimed for k >= 3")
    p = {"n": args.n, "k": args.k, "budget": args.budget, "chr": args.chr}
    return [_cached(args, "verify-theorem1", p,
                    lambda: compute_theorem1(args.n, args.k, args.budget, args.chr))]


def cmd_lemma_checks(args) -> list[ResultRecord]:
    t0 = time.perf_counter()
    if args.lemma == "lemma1":
        sizes = [int(s) for s in args.domain.split(",")]
        rep = check_lemma1(sizes, samples=args.samples, seed=args.seed)
        params = {"lemma": "lemma1", "domain": sizes}
    else:
        f = part_spec(args.n, args.k) if args.function == "part" else exactly_spec(args.n, args.k)
        rep = check_lemma2(f, samples=args.samples, seed=args.seed)
        params = {"lemma": "lemma2", "function": f.name, "n": args.n, "k": args.k}
    params["samples"] = args.samples
    rec = ResultRecord("lemma-checks", params,
                       {"subsets_checked": rep.subsets_checked, "exhaustive": rep.exhaustive,
                        "mismatches": len(rep.mismatches)},
                       OPTIMAL if rep.exhaustive else "bound", ["solver"],
                       rep.to_json()["mismatches"][:20], {"agree": rep.passed}, seed=args.seed)
    rec.wall_time = round(time.perf_counter() - t0, 6)
    return [rec]


def _table_cell(args, quantity: str, n: int, k: int) -> ResultRecord:
    if quantity == "dhj":
        return _cached(args, "dhj", {"n": n, "k": k, "budget": args.budget, "oracle": args.oracle},
                       lambda: compute_dhj(n, k, args.budget, args.oracle))
    if quantity == "chr":
        p = {"function": "line", "n": n, "k": k, "budget": args.budget, "oracle": args.oracle}
        return _cached(args, "chr", p, lambda: compute_chr("line", n, k, args.budget, args.oracle))
    if quantity == "fujimura":
        p = {"n": n, "k": k, "budget": args.budget, "oracle": args.oracle, "compare_ind": True,
             "inverted": False}
        return _cached(args, "fujimura", p,
                       lambda: compute_fujimura(n, k, args.budget, args.oracle, True))
    if quantity == "rk":
        return _cached(args, "rk", {"n": n, "k": k, "budget": args.budget, "oracle": args.oracle},
                       lambda: compute_rk(n, k, args.budget, args.oracle))
    # protocol-cost: measured cost of the verified Exactly protocol
    ns = argparse.Namespace(coloring=None, strategy=args.strategy, seed=args.seed,
                            verify=True, emit_coloring=None, map="interval")
    p = {"subject": "exactly", "n": n, "k": k, "strategy": args.strategy, "seed": args.seed}
    return _cached(args, "protocol-cost", p, lambda: compute_protocol("exactly", n, k, ns)[0])


def _parse_range(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def cmd_table(args) -> list[ResultRecord]:
    records = []
    for k in sorted(_parse_range(args.k)):
        for n in sorted(_parse_range(args.n)):
            records.append(_table_cell(args, args.quantity, n, k))
    return records


# --- output ------------------------------------------------------------------

_EXTRA_COLUMNS = {
    "dhj": ["ratio", "oracle"],
    "chr": ["oracle"],
    "fujimura": ["ind_exactly", "equal", "oracle"],
    "rk": ["oracle"],
    "protocol-cost": ["ap_classes", "worst_cost", "formula_cost", "mismatches"],
}


def render_csv(records: list[ResultRecord], quantity: str | None, deterministic: bool) -> str:
    extra = _EXTRA_COLUMNS.get(quantity or "", [])
    if quantity is None:
        extra = sorted({key for r in records for key in r.values if key != "value"})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "value", "proof_status", "runtime_ms"] + extra)
    for r in records:
        value = r.values.get("value", r.values.get("worst_cost"))
        ms = "" if deterministic or r.wall_time is None else round(r.wall_time * 1000, 3)
        row = [r.parameters.get("n", r.parameters.get("M")), r.parameters.get("k"), value,
               r.proof_status, ms]
        for col in extra:
            v = r.values.get(col, "")
            row.append(f"{v:.6f}" if isinstance(v, float) else v)
        w.writerow(row)
    return buf.getvalue()


def render_json(records: list[ResultRecord], deterministic: bool, table: bool) -> str:
    docs = [r.to_json(deterministic) for r in records]
    return json.dumps(docs if table else docs[0], indent=2, sort_keys=True) + "\n"


def render_text(records: list[ResultRecord]) -> str:
    lines = []
    for r in records:
        params = " ".join(f"{k}={v}" for k, v in r.parameters.items()
                          if v not in (None, False) and k != "budget")
        vals = " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                        for k, v in r.values.items())
        lines.append(f"{r.command} {params}: {vals} [{r.proof_status}; {'+'.join(r.provenance)}]")
        for name, ok in r.checks.items():
            lines.append(f"  {name}: {'ok' if ok else 'FAILED'}")
    return "\n".join(lines) + "\n"


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON records")
    fmt.add_argument("--csv", action="store_true", help="emit CSV rows")
    common.add_argument("--budget", default=DEFAULT_BUDGET,
                        help="search limit: nodes, '30s', or 'nodes=N,seconds=S' (default %(default)s)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized paths (default 0)")
    common.add_argument("--oracle", action="store_true",
                        help="cross-check against exhaustive enumeration where feasible")
    common.add_argument("--deterministic", action="store_true",
                        help="blank wall times so output is byte-identical across runs")
    common.add_argument("--cache-dir", default=None,
                        help="cache location (default $NOFHJ_CACHE or ./.nofhj-cache)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="nofhj", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def nk(p, k_default=3):
        p.add_argument("-n", type=int, required=True)
        p.add_argument("-k", type=int, default=k_default)

    p = sub.add_parser("dhj", parents=[common], help="largest line-free subset of [k]^n")
    nk(p)
    p.set_defaults(func=cmd_dhj)

    p = sub.add_parser("chr", parents=[common], help="fewest line-free or star-free classes")
    nk(p)
    p.add_argument("--function", choices=["line", "part", "exactly"], default="line")
    p.set_defaults(func=cmd_chr)

    p = sub.add_parser("ind", parents=[common], help="largest star-free subset of f^{-1}(1)")
    nk(p)
    p.add_argument("--function", choices=["part", "exactly"], default="part")
    p.set_defaults(func=cmd_ind)

    p = sub.add_parser("fujimura", parents=[common], help="largest simplex-free subset")
    nk(p)
    p.add_argument("--compare-ind", action="store_true",
                   help="also compute the Exactly star-free number and flag equality")
    p.add_argument("--inverted", action="store_true",
                   help="forbid inverted simplices too")
    p.set_defaults(func=cmd_fujimura)

    p = sub.add_parser("rk", parents=[common], help="largest k-AP-free subset of {0..n-1}")
    nk(p)
    p.set_defaults(func=cmd_rk)

    p = sub.add_parser("behrend", parents=[common], help="Behrend 3-AP-free set in {0..M-1}")
    p.add_argument("-M", type=int, required=True)
    p.set_defaults(func=cmd_behrend)

    p = sub.add_parser("apfree-partition", parents=[common], help="partition {0..M-1} into k-AP-free classes")
    p.add_argument("-M", type=int, required=True)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--strategy", choices=["greedy_extract", "translate_cover"],
                   default="greedy_extract")
    p.add_argument("--base", default=None, help="JSON file with a k-AP-free base set")
    p.set_defaults(func=cmd_apfree_partition)

    p = sub.add_parser("protocol", parents=[common], help="build and optionally verify a protocol")
    p.add_argument("subject", choices=["part", "exactly", "reduction"])
    nk(p)
    p.add_argument("--strategy", choices=["greedy_extract", "translate_cover"],
                   default="greedy_extract")
    p.add_argument("--coloring", default=None, help="load the AP-free coloring from JSON")
    p.add_argument("--map", choices=["interval", "paired"], default="interval")
    p.add_argument("--verify", action="store_true", help="check every input")
    p.add_argument("--emit-coloring", default=None, metavar="FILE",
                   help="write the transcript partition of f^{-1}(1) here")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("verify-theorem1", parents=[common],
                       help="line-free number vs star-free number of Part")
    nk(p)
    p.add_argument("--chr", action="store_true", help="also compare the coloring numbers")
    p.set_defaults(func=cmd_verify_theorem1)

    p = sub.add_parser("lemma-checks", parents=[common],
                       help="cylinder-intersection tests against each other")
    p.add_argument("lemma", choices=["lemma1", "lemma2"])
    p.add_argument("--domain", default="2,2,2", help="domain sizes for lemma1")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--function", choices=["part", "exactly"], default="part")
    p.add_argument("--samples", type=int, default=4096,
                   help="random subsets when exhaustive checking is too large")
    p.set_defaults(func=cmd_lemma_checks)

    p = sub.add_parser("table", parents=[common], help="tabulate a quantity over an (n, k) grid")
    p.add_argument("quantity", choices=["dhj", "chr", "fujimura", "rk", "protocol-cost"])
    p.add_argument("-n", required=True, help="range such as 1..5 or 1,2,4")
    p.add_argument("-k", default="3", help="range of k (default 3)")
    p.add_argument("--strategy", choices=["greedy_extract", "translate_cover"],
                   default="greedy_extract")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        records = args.func(args)
    except Refusal as exc:
        print(f"nofhj {args.command}: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    table = args.command == "table"
    if args.json:
        text = render_json(records, args.deterministic, table)
    elif args.csv or (table and not args.json):
        text = render_csv(records, args.quantity if table else None, args.deterministic)
    else:
        text = render_text(records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.ok for r in records) else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
