"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the status lines are printed
even when output capture is on.
"""

import json
import math

import pytest

from nofhj.apfree import inject_ap, k_aps, r_k_exact
from nofhj.cli import main
from nofhj.nof import check_lemma1, check_lemma2, max_star_free, min_star_free_partition
from nofhj.oracles import max_independent_by_enumeration
from nofhj.protocols import (coloring_protocol, default_cfl_coloring, exactly_protocol_cfl,
                             exactly_via_part_reduction, part_general_protocol, part_protocol,
                             transcript_partition, verify_exhaustive)
from nofhj.search import OPTIMAL
from nofhj.words import enumerate_lines, line_points, max_line_free, min_line_free_coloring
from nofhj.zoo import (check_sum_preserving, delta, enumerate_simplices, exactly_spec,
                       interval_map, max_fujimura, paired_map, part_spec)


def _width(C):
    return math.ceil(math.log2(C)) if C > 1 else 0


@pytest.fixture
def report(capsys):
    def emit(num, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_01_line_free_equals_star_free(report):
    rows = []
    ok = True
    for n in (1, 2, 3, 4):
        lf = max_line_free(n, 3)
        sf = max_star_free(part_spec(n, 3))
        good = lf.proof_status == sf.proof_status == OPTIMAL and lf.size == sf.size
        ok &= good
        rows.append(f"n={n}:{lf.size}/{sf.size}")
    report(1, ok, "max_line_free vs max_star_free(Part) " + " ".join(rows))


def test_criterion_02_chr_equality(report):
    rows = []
    ok = True
    for n in (1, 2, 3):
        lc = min_line_free_coloring(n, 3)
        sc = min_star_free_partition(part_spec(n, 3))
        good = lc.optimal and sc.optimal and lc.num_colors == sc.num_colors
        ok &= good
        rows.append(f"n={n}:{lc.num_colors}/{sc.num_colors}")
    report(2, ok, "line colorings vs star-free partitions " + " ".join(rows))


def test_criterion_03_oracle_equivalence(report):
    fails = []
    for n in (1, 2):
        edges = [[w.index for w in line_points(t)] for t in enumerate_lines(n, 3)]
        res = max_line_free(n, 3)
        if not res.optimal or res.size != max_independent_by_enumeration(3 ** n, edges)[0]:
            fails.append(f"dhj n={n}")
    for n in range(1, 17):
        res = r_k_exact(n, 3)
        if not res.optimal or res.size != max_independent_by_enumeration(n, k_aps(n, 3))[0]:
            fails.append(f"r3 n={n}")
    cells = delta(2, 3)
    pos = {c: i for i, c in enumerate(cells)}
    edges = [[pos[p] for p in s.points] for s in enumerate_simplices(2, 3)]
    fres, _ = max_fujimura(2, 3)
    if not (fres.size == 4 == max_independent_by_enumeration(len(cells), edges)[0]):
        fails.append("fujimura n=2")
    report(3, not fails, "dhj n<=2, r_3 n<=16, fujimura(2,3)=4 vs enumeration"
           + (f"; mismatches: {fails}" if fails else ""))


def test_criterion_04_lemma_checks(report):
    reps = [check_lemma1((2, 2, 2))] + [check_lemma2(part_spec(n, 3)) for n in (1, 2)]
    ok = all(r.exhaustive and r.passed for r in reps)
    counts = [r.subsets_checked for r in reps]
    bad = sum(len(r.mismatches) for r in reps)
    report(4, ok and counts == [256, 8, 512],
           f"subsets checked {counts}, mismatches {bad}")


def test_criterion_05_coloring_protocol(report):
    rows = []
    ok = True
    for n in (1, 2, 3):
        f = part_spec(n, 3)
        chr_ = min_star_free_partition(f)
        rep = verify_exhaustive(coloring_protocol(f, chr_.coloring), f)
        good = chr_.optimal and rep.passed and rep.worst_cost == _width(chr_.num_colors) + 3
        ok &= good
        rows.append(f"n={n}:inputs={rep.inputs},cost={rep.worst_cost}")
    report(5, ok, "coloring protocol exhaustive, cost = ceil(log2 chr) + 3 " + " ".join(rows))


def test_criterion_06_cfl_exactly(report):
    bad = []
    total = 0
    for n in range(1, 61):
        col = default_cfl_coloring(n, 3)
        rep = verify_exhaustive(exactly_protocol_cfl(n, 3, col), exactly_spec(n, 3))
        total += rep.inputs
        if not rep.passed or rep.worst_cost != _width(col.num_classes) + 2:
            bad.append(n)
    # fault injection: one class made to hold the AP 0, 1, 2
    n = 6
    broken = inject_ap(default_cfl_coloring(n, 3), 0, 1)
    frep = verify_exhaustive(exactly_protocol_cfl(n, 3, broken, validate=False), exactly_spec(n, 3))
    caught = frep.params["mismatch_count"] >= 1
    report(6, not bad and caught,
           f"n=1..60 ({total} inputs), failing n: {bad or 'none'}; "
           f"injected AP gives {frep.params['mismatch_count']} mismatches")


def test_criterion_07_part_protocol(report):
    rows = []
    ok = True
    for n in range(1, 7):
        ep = exactly_protocol_cfl(n, 3, default_cfl_coloring(n, 3))
        erep = verify_exhaustive(ep, exactly_spec(n, 3))
        rep = verify_exhaustive(part_protocol(n, 3, ep), part_spec(n, 3))
        good = rep.passed and erep.passed and rep.worst_cost == 3 + erep.worst_cost
        ok &= good
        rows.append(f"n={n}:{rep.worst_cost}=3+{erep.worst_cost}")
    report(7, ok, "part protocol exhaustive up to 2^18 inputs " + " ".join(rows))


def test_criterion_08_lower_bound_pipeline(report):
    rows = []
    ok = True
    for n in (1, 2, 3, 4):
        f = part_spec(n, 3)
        p = part_protocol(n, 3, exactly_protocol_cfl(n, 3, default_cfl_coloring(n, 3)))
        rep = verify_exhaustive(p, f)
        tp = transcript_partition(p, f)
        ind = max_star_free(f)
        good = (rep.passed and tp.all_star_free and tp.class_count <= 2 ** rep.worst_cost
                and ind.optimal and ind.size * tp.class_count >= 3 ** n)
        ok &= good
        rows.append(f"n={n}:ind={ind.size},classes={tp.class_count}")
    report(8, ok, "transcript classes star-free, ind * classes >= 3^n " + " ".join(rows))


def test_criterion_09_fujimura_and_reduction(report):
    notes = []
    eq_ok = True
    for n in range(1, 6):
        fres, _ = max_fujimura(n, 3)
        ind = max_star_free(exactly_spec(n, 3))
        same = fres.optimal and ind.optimal and fres.size == ind.size
        eq_ok &= same
        if not same:
            notes.append(f"fujimura({n},3)={fres.size} but ind(Exactly)={ind.size}")
    maps_ok = all(check_sum_preserving(m(n, k))["ok"]
                  for m in (interval_map, paired_map) for n in range(1, 7) for k in (3, 4))
    red_ok = True
    for n in range(1, 5):
        ep = exactly_protocol_cfl(n, 3, default_cfl_coloring(n, 3))
        for mapper in (interval_map, paired_map):
            g = mapper(n, 3)
            pp = part_general_protocol(g.m, n, 3, ep)
            rep = verify_exhaustive(exactly_via_part_reduction(g, pp), exactly_spec(n, 3))
            red_ok &= rep.passed and pp.max_cost <= ep.max_cost + 3
    if not maps_ok:
        notes.append("sum-preserving map property failed")
    if not red_ok:
        notes.append("reduction failed")
    report(9, eq_ok and maps_ok and red_ok,
           f"fujimura=ind(Exactly) {'ok' if eq_ok else 'FAILED'}, maps {'ok' if maps_ok else 'FAILED'}, "
           f"reduction {'ok' if red_ok else 'FAILED'}" + (f"; {'; '.join(notes)}" if notes else ""))


TABLES = [
    ("dhj", "1..3"),
    ("chr", "1..3"),
    ("fujimura", "1..4"),
    ("rk", "1..12"),
    ("protocol-cost", "1..6"),
]


def test_criterion_10_reproducible_tables(report, capsys, tmp_path):
    diffs = []
    for quantity, rng in TABLES:
        outs = []
        for fmt in ("--json", "--csv"):
            runs = []
            for _ in range(2):
                code = main(["table", quantity, "-n", rng, fmt, "--deterministic", "--seed", "0",
                             "--no-cache"])
                runs.append((code, capsys.readouterr().out))
            outs.append(runs)
            if runs[0] != runs[1]:
                diffs.append(f"{quantity}{fmt}")
        json.loads(outs[0][0][1])
    report(10, not diffs, f"{len(TABLES)} tables x (json, csv) re-run byte-identical"
           + (f"; differing: {diffs}" if diffs else ""))
