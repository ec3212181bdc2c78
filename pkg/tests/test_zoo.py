import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nofhj.nof import PreconditionError, Star, max_star_free, stars_in
from nofhj.oracles import max_independent_by_enumeration
from nofhj.search import OPTIMAL
from nofhj.words import LineTemplate, Word, all_words, enumerate_lines
from nofhj.zoo import (SetTuple, SumPreservingMap, check_sum_preserving, delta,
                       enumerate_simplices, exactly, exactly_spec, interval_map, is_fujimura,
                       line_to_star, max_fujimura, paired_map, part, part_general,
                       part_general_spec, part_spec, psi, psi_inv, star_to_line)

# max Fujimura set sizes for k = 3, frozen from the solver and checked by
# subset enumeration of Δ_{n,3} for n <= 4 (at most 15 cells)
FUJIMURA3 = {1: 2, 2: 4, 3: 6, 4: 9, 5: 12}


def test_part_examples():
    assert part(SetTuple.of(2, [1], [2], []))
    assert not part(SetTuple.of(2, [1], [1], [2]))
    assert len(part_spec(3, 3).ones) == 27
    assert len(part_spec(2, 4).ones) == 16


def test_exactly_examples():
    assert exactly((1, 2, 3), 6)
    assert not exactly((0, 0, 0), 1)
    for n in range(1, 6):
        assert len(exactly_spec(n, 3).ones) == len(delta(n, 3)) == comb(n + 2, 2)


def test_part_general_examples():
    assert part_general(SetTuple.of(3, [1], [3], []), 2)
    assert not part_general(SetTuple.of(3, [1, 2], [3], []), 2)
    with pytest.raises(ValueError):
        part_general(SetTuple.of(1, [1], [], []), 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_part_general_agrees_with_part_when_m_equals_n(n):
    f, g = part_spec(n, 3), part_general_spec(n, 3, n)
    assert f.ones == g.ones


def test_part_general_monotone_in_ground_set():
    small, big = part_general_spec(2, 3, 2), part_general_spec(3, 3, 2)
    assert set(small.ones) <= set(big.ones)


def test_psi_examples():
    assert psi(SetTuple.of(3, [1], [2], [3])).symbols == (0, 1, 2)
    assert psi(SetTuple.of(3, [1, 2, 3], [], [])).symbols == (0, 0, 0)
    with pytest.raises(PreconditionError):
        psi(SetTuple.of(2, [1], [1], [2]))


@pytest.mark.parametrize("n", range(1, 6))
def test_psi_bijection(n):
    for w in all_words(n, 3):
        assert psi(psi_inv(w)) == w
    for x in part_spec(n, 3).ones if n <= 4 else []:
        s = SetTuple(x, n)
        assert psi_inv(psi(s)) == s


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(3, 5), st.data())
def test_psi_round_trip_property(n, k, data):
    sym = data.draw(st.tuples(*[st.integers(0, k - 1)] * n))
    w = Word(sym, k)
    assert psi(psi_inv(w)) == w


def test_line_to_star_examples():
    st1 = line_to_star(LineTemplate.parse("*", 3))
    assert st1.center == (0, 0, 0)
    assert st1.spokes == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    st2 = line_to_star(LineTemplate.parse("1*", 3))
    assert st2.center == (0b01, 0, 0)
    assert st2.spokes == ((0b11, 0, 0), (0b01, 0b10, 0), (0b01, 0, 0b10))
    with pytest.raises(ValueError):
        line_to_star(LineTemplate.parse("*", 2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_line_star_bijection(n):
    lines = enumerate_lines(n, 3)
    for t in lines:
        assert star_to_line(line_to_star(t), n) == t
    f = part_spec(n, 3)
    found = stars_in(f.ones, f.domain_sizes)
    assert len(found) == len(lines) == 4 ** n - 3 ** n
    assert {s.spokes for s in found} == {line_to_star(t).spokes for t in lines}
    for s in found:
        assert line_to_star(star_to_line(s, n)) == s


def test_star_to_line_rejects_non_partitions():
    bad = Star((0, 0, 0), ((1, 0, 0), (0, 1, 0), (0, 0, 0b10)))
    with pytest.raises(PreconditionError):
        star_to_line(bad, 2)


def test_simplex_examples():
    assert len(enumerate_simplices(2, 3)) == 4
    assert [(s.base, s.r) for s in enumerate_simplices(1, 3)] == [((0, 0, 0), 1)]
    for n in range(1, 5):
        for s in enumerate_simplices(n, 3):
            assert all(exactly(p, n) for p in s.points)
            assert set(s.as_star().spokes) == set(s.points)


def _fujimura_by_enumeration(n, k):
    cells = delta(n, k)
    pos = {c: i for i, c in enumerate(cells)}
    edges = [[pos[p] for p in s.points] for s in enumerate_simplices(n, k)]
    return max_independent_by_enumeration(len(cells), edges)[0]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fujimura_matches_enumeration(n):
    res, pts = max_fujimura(n, 3)
    assert res.proof_status == OPTIMAL
    assert res.size == _fujimura_by_enumeration(n, 3) == FUJIMURA3[n]
    assert is_fujimura(pts, n, 3)


def test_fujimura_n2_witness():
    assert is_fujimura([(2, 0, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1)], 2, 3)
    assert max_fujimura(2, 3)[0].size == 4
    assert max_fujimura(5, 3)[0].size == FUJIMURA3[5]


def test_exactly_stars_include_inverted_simplices():
    # star-freeness in Exactly also rules out simplices pointing down
    f = exactly_spec(4, 3)
    assert max_fujimura(4, 3, inverted=True)[0].size == 8
    assert max_star_free(f).size == 8


def test_interval_map_examples():
    g = interval_map(2, 3)
    assert g.m == 6
    assert g((1, 0, 2)) == SetTuple.of(6, [1], [], [5, 6])
    assert g((0, 0, 0)) == SetTuple.of(6, [], [], [])


def test_paired_map_examples():
    g = paired_map(3, 3)
    assert g.m == 6
    assert g((1, 1, 1)) == SetTuple.of(6, [1], [3], [4])
    h = paired_map(2, 3)
    assert h.m == 4
    img = h((1, 1, 0))
    assert img == SetTuple.of(4, [1], [2], [])
    assert part_general(img, 2)


@pytest.mark.parametrize("rule", ["interval", "paired"])
@pytest.mark.parametrize("k", [3, 4])
@pytest.mark.parametrize("n", range(1, 7))
def test_sum_preserving_properties(rule, k, n):
    rep = check_sum_preserving(SumPreservingMap(n, k, rule))
    assert rep["ok"], rep


def test_maps_are_coordinatewise():
    g = paired_map(3, 4)
    for a in itertools.product(range(4), repeat=4):
        img = g(a)
        assert all(img.sets[i] == g.coordinate(i, a[i]) for i in range(4))


def test_map_json_round_trip():
    g = paired_map(3, 5)
    assert SumPreservingMap.from_json(g.to_json()) == g
    with pytest.raises(ValueError):
        SumPreservingMap.from_json({"n": 3, "k": 5, "rule": "paired", "m": 8})
