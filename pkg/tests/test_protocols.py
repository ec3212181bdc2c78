import math

import pytest

from nofhj.apfree import ap_free_partition, inject_ap
from nofhj.nof import NofFunctionSpec, PreconditionError, max_star_free, min_star_free_partition
from nofhj.protocols import (ProtocolError, ProtocolProgram, Step, ViewError, announce_protocol,
                             brute_protocol, cfl_soundness_witness, cfl_universe,
                             coloring_protocol, default_cfl_coloring, exactly_protocol_cfl,
                             exactly_via_part_reduction, part_general_protocol, part_protocol,
                             reveal_protocol, run, transcript_partition, verify_exhaustive)
from nofhj.search import Coloring
from nofhj.zoo import (SumPreservingMap, exactly_spec, interval_map, paired_map,
                       part_general_spec, part_spec)


def _cfl(n, k=3, **kw):
    return exactly_protocol_cfl(n, k, default_cfl_coloring(n, k, **kw))


def test_view_hides_own_coordinate():
    def peek(v, b):
        return v[v.speaker]

    p = ProtocolProgram(3, (Step(1, peek),), lambda b: True)
    with pytest.raises(ViewError):
        run(p, (0, 0, 0))


def test_every_rule_respects_views():
    # the probe raises if any step ever reads its speaker's coordinate
    for n in (1, 2):
        f = part_spec(n, 3)
        verify_exhaustive(part_protocol(n, 3, _cfl(n)), f)
        col = min_star_free_partition(f).coloring
        verify_exhaustive(coloring_protocol(f, col), f)
        verify_exhaustive(exactly_via_part_reduction(
            paired_map(n, 3), part_general_protocol(paired_map(n, 3).m, n, 3, _cfl(n))),
            exactly_spec(n, 3))


def test_non_bit_output_is_an_error():
    p = ProtocolProgram(2, (Step(0, lambda v, b: 2),), lambda b: True)
    with pytest.raises(ProtocolError):
        run(p, (0, 0))


def test_announce_protocol_cost_one():
    f = NofFunctionSpec(3, (2, 2, 2), lambda x: x[1] == x[2])
    p = announce_protocol(f, 0)
    rep = verify_exhaustive(p, f)
    assert rep.passed and rep.worst_cost == 1
    with pytest.raises(PreconditionError):
        announce_protocol(f, 1)


def test_coloring_protocol_part13():
    f = part_spec(1, 3)
    col = min_star_free_partition(f).coloring
    p = coloring_protocol(f, col)
    out, t = run(p, (1, 0, 0))
    assert out and len(t) == 4
    assert run(p, (1, 0, 0)) == (out, t)
    rep = verify_exhaustive(p, f)
    assert rep.inputs == 8 and rep.passed and rep.worst_cost == 4
    assert t.render().startswith("P3: 1")


def test_coloring_protocol_part23():
    f = part_spec(2, 3)
    res = min_star_free_partition(f)
    p = coloring_protocol(f, res.coloring)
    rep = verify_exhaustive(p, f)
    assert rep.passed and rep.worst_cost == math.ceil(math.log2(res.num_colors)) + 3


def test_coloring_protocol_rejects_star():
    f = part_spec(1, 3)
    with pytest.raises(PreconditionError):
        coloring_protocol(f, Coloring((0, 0, 0)))


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_cfl_exhaustive(n):
    p = _cfl(n)
    rep = verify_exhaustive(p, exactly_spec(n, 3))
    C = p.info["classes"]
    assert rep.passed
    assert rep.worst_cost == p.info["formula_cost"] == (math.ceil(math.log2(C)) if C > 1 else 0) + 2


def test_cfl_completeness_and_universe():
    assert cfl_universe(2, 3) == 7
    p = _cfl(4)
    assert run(p, (1, 1, 2))[0]
    assert not run(p, (1, 1, 1))[0]
    with pytest.raises(PreconditionError):
        exactly_protocol_cfl(4, 3, ap_free_partition(5, 3))


def test_cfl_translate_cover_coloring():
    col = default_cfl_coloring(20, 3, strategy="translate_cover", seed=3)
    rep = verify_exhaustive(exactly_protocol_cfl(20, 3, col), exactly_spec(20, 3))
    assert rep.passed


def test_cfl_k4():
    rep = verify_exhaustive(_cfl(3, 4), exactly_spec(3, 4))
    assert rep.passed


def test_fault_injection_yields_mismatch():
    n = 6
    bad = inject_ap(default_cfl_coloring(n, 3), 0, 1)
    with pytest.raises(PreconditionError):
        exactly_protocol_cfl(n, 3, bad)
    p = exactly_protocol_cfl(n, 3, bad, validate=False)
    rep = verify_exhaustive(p, exactly_spec(n, 3))
    assert rep.mismatches
    x = (0, 0, n - 1)
    assert run(p, x)[0] and sum(x) != n
    assert cfl_soundness_witness(n, 3, bad, x) is not None


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_part_protocol(n):
    ep = _cfl(n)
    p = part_protocol(n, 3, ep)
    rep = verify_exhaustive(p, part_spec(n, 3))
    assert rep.passed
    assert p.max_cost - ep.max_cost == 3
    assert rep.worst_cost == p.info["formula_cost"]


def test_part_protocol_early_halt():
    p = part_protocol(2, 3, _cfl(2))
    _, t = run(p, (1, 1, 2))
    assert len(t) == 1
    _, t = run(p, (1, 0, 1))
    assert len(t) <= 3


def test_part_general_needs_robust_exactly():
    f = exactly_spec(2, 3)
    with pytest.raises(PreconditionError):
        part_general_protocol(4, 2, 3, brute_protocol(f))


def test_reduction_with_brute_part_protocol():
    g = interval_map(2, 3)
    pp = brute_protocol(part_general_spec(6, 3, 2))
    p = exactly_via_part_reduction(g, pp)
    rep = verify_exhaustive(p, exactly_spec(2, 3))
    assert rep.inputs == 27 and rep.passed
    assert p.max_cost == pp.max_cost


@pytest.mark.parametrize("mapper", [interval_map, paired_map])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_reduction_both_maps(mapper, n):
    g = mapper(n, 3)
    ep = _cfl(n)
    pp = part_general_protocol(g.m, n, 3, ep)
    p = exactly_via_part_reduction(g, pp)
    assert verify_exhaustive(p, exactly_spec(n, 3)).passed
    assert p.max_cost == pp.max_cost <= ep.max_cost + 3


def test_reduction_rejects_mismatched_map():
    pp = part_general_protocol(6, 2, 3, _cfl(2))
    with pytest.raises(PreconditionError):
        exactly_via_part_reduction(paired_map(2, 3), pp)

    class Whole(SumPreservingMap):
        coordinatewise = False

    with pytest.raises(PreconditionError):
        exactly_via_part_reduction(Whole(2, 3, "interval"), pp)


def test_corrupted_protocol_is_caught():
    f = part_spec(1, 3)
    p = coloring_protocol(f, min_star_free_partition(f).coloring)
    broken = ProtocolProgram(p.k, p.steps, lambda b: not p.output_rule(b), name="broken")
    assert verify_exhaustive(broken, f).mismatches


def test_verify_refuses_over_budget():
    with pytest.raises(ProtocolError):
        verify_exhaustive(_cfl(10), exactly_spec(10, 3), max_inputs=100)


def test_transcript_partition_classes():
    f = part_spec(1, 3)
    tp = transcript_partition(coloring_protocol(f, min_star_free_partition(f).coloring), f)
    assert tp.class_count <= 2 ** 4 and tp.all_star_free
    tp = transcript_partition(reveal_protocol(f), f)
    assert tp.class_count == len(f.ones) and tp.all_star_free


@pytest.mark.parametrize("n", [1, 2])
def test_transcript_classes_bound_chr(n):
    f = part_spec(n, 3)
    tp = transcript_partition(part_protocol(n, 3, _cfl(n)), f)
    assert tp.class_count >= min_star_free_partition(f).num_colors


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lower_bound_chain(n):
    f = part_spec(n, 3)
    p = part_protocol(n, 3, _cfl(n))
    rep = verify_exhaustive(p, f)
    tp = transcript_partition(p, f)
    assert rep.passed and tp.all_star_free
    assert tp.class_count <= 2 ** rep.worst_cost
    assert max_star_free(f).size * tp.class_count >= 3 ** n
