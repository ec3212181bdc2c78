import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nofhj.apfree import (PRNG_ALGORITHM, ApFreeColoring, ap_free_partition, ap_hypergraph,
                          behrend_set, find_k_ap, has_k_ap, inject_ap, k_aps, r_k_exact)
from nofhj.oracles import max_independent_by_enumeration
from nofhj.search import OPTIMAL

# r_3(n), n = 1..20, and r_4(n), n = 1..15: frozen from a plain backtracking
# search and confirmed by 2^n subset enumeration below
R3 = [1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 8, 8, 8, 8, 9]
R4 = [1, 2, 3, 3, 4, 5, 5, 6, 7, 8, 8, 8, 9, 9, 10]


def _brute_has_ap(S, k):
    S = set(S)
    top = max(S, default=0)
    return any(all(a + j * d in S for j in range(k))
               for a in S for d in range(1, top + 1))


def test_has_k_ap_examples():
    assert has_k_ap({0, 1, 2}, 3)
    assert not has_k_ap({0, 1, 3, 4}, 3)
    assert not has_k_ap({5, 9}, 3)
    assert not has_k_ap(set(), 4)


@settings(max_examples=200, deadline=None)
@given(st.sets(st.integers(0, 30), max_size=10), st.integers(3, 5))
def test_has_k_ap_matches_brute_force(S, k):
    assert has_k_ap(S, k) == _brute_has_ap(S, k)
    ap = find_k_ap(S, k)
    assert (ap is not None) == has_k_ap(S, k)
    if ap:
        assert len(set(ap)) == k and set(ap) <= S


def test_k_aps_count():
    # 3-APs in {0..n-1}: sum over d of (n - 2d)
    for n in range(1, 15):
        assert len(k_aps(n, 3)) == sum(max(0, n - 2 * d) for d in range(1, n))


@pytest.mark.parametrize("n", range(1, 17))
def test_r3_matches_enumeration(n):
    res = r_k_exact(n, 3)
    assert res.proof_status == OPTIMAL
    assert res.size == max_independent_by_enumeration(n, k_aps(n, 3))[0] == R3[n - 1]
    assert not has_k_ap(res.witness, 3)


@pytest.mark.parametrize("n", range(1, 13))
def test_r4_matches_enumeration(n):
    res = r_k_exact(n, 4)
    assert res.size == max_independent_by_enumeration(n, k_aps(n, 4))[0] == R4[n - 1]


def test_r_k_examples():
    assert r_k_exact(1, 3).size == 1
    res = r_k_exact(4, 3)
    assert res.size == 3 and res.witness == (0, 1, 3)
    assert [r_k_exact(n, 3).size for n in range(17, 21)] == R3[16:]
    assert [r_k_exact(n, 4).size for n in range(13, 16)] == R4[12:]


def test_r_k_monotone():
    for n in range(1, 15):
        assert R3[n - 1] <= R3[n]
        assert R3[n - 1] <= R4[n - 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 20000))
def test_behrend_is_3ap_free(M):
    S = behrend_set(M)
    assert S and all(0 <= x < M for x in S)
    assert not has_k_ap(S, 3)


def test_behrend_below_exact():
    for M in range(1, 21):
        assert len(behrend_set(M)) <= R3[M - 1]
    assert not has_k_ap(behrend_set(1000), 3)


def test_partition_examples():
    col = ap_free_partition(3, 3)
    assert col.classes == (0, 0, 1)
    assert col.members() == [[0, 1], [2]]
    for k in (3, 4, 5):
        assert ap_free_partition(1, k).num_classes == 1


@pytest.mark.parametrize("M,k", [(10, 3), (100, 3), (1000, 3), (10000, 3), (500, 4), (2000, 5)])
def test_greedy_classes_are_ap_free(M, k):
    col = ap_free_partition(M, k)
    assert col.is_valid()
    assert sorted(set(col.classes)) == list(range(col.num_classes))


def test_translate_cover_is_seeded_and_valid():
    a = ap_free_partition(2000, 3, "translate_cover", seed=7)
    b = ap_free_partition(2000, 3, "translate_cover", seed=7)
    assert a == b and a.is_valid()
    doc = a.to_json()
    assert doc["seed"] == 7 and doc["prng"] == PRNG_ALGORITHM
    assert ApFreeColoring.from_json(doc) == a


def test_translate_cover_without_base_falls_back(caplog):
    col = ap_free_partition(200, 4, "translate_cover")
    assert col.strategy == "greedy_extract" and col.is_valid()
    assert "greedy_extract" in caplog.text


def test_translate_cover_with_base():
    col = ap_free_partition(300, 4, "translate_cover", seed=1, base=[0, 1, 2, 4, 5, 7])
    assert col.is_valid()
    with pytest.raises(ValueError):
        ap_free_partition(30, 3, "translate_cover", base=[0, 1, 2])


def test_inject_ap_breaks_validity():
    col = ap_free_partition(20, 3)
    bad = inject_ap(col, 0, 1)
    assert not bad.is_valid()
    assert bad.classes[0] == bad.classes[1] == bad.classes[2]
    with pytest.raises(ValueError):
        ApFreeColoring.from_json(bad.to_json())


def test_ap_hypergraph_edges():
    H = ap_hypergraph(9, 3)
    assert {tuple(sorted(e)) for e in H.edges} == set(k_aps(9, 3))
    assert all(any(set(e) <= set(c) for e in k_aps(7, 3))
               for c in itertools.combinations(range(7), 5))
