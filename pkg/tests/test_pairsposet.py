import pytest

from siltlab.algebra import make_lambda, make_linear_a
from siltlab.errors import UnknownNode
from siltlab.homotopy import Category
from siltlab.pairsposet import (
    FinitePoset,
    build_pairs_poset,
    covers,
    hasse_dot,
    pair_rank,
    poset_from_dict,
    verify_cw_poset,
    verify_length_two,
    verify_rank_function,
    verify_total_semimodularity,
)
from siltlab.silting import SiltingPair, standard_silting


@pytest.fixture(scope="module")
def a1_poset():
    cat = Category(make_linear_a(1, []))
    M = standard_silting(cat)
    return build_pairs_poset(cat, M, 1)


@pytest.fixture(scope="module")
def a2_poset():
    cat = Category(make_linear_a(2, ["f"]))
    M = standard_silting(cat)
    return build_pairs_poset(cat, M, 1)


@pytest.fixture(scope="module")
def lam_poset():
    cat = Category(make_lambda(1, 2, 0))
    M = standard_silting(cat)
    return build_pairs_poset(cat, M, 1)


def test_a1_poset_is_closed_one_cell(a1_poset):
    P = a1_poset
    assert P.n == 4
    assert sorted(P.ranks) == [0, 1, 1, 2]
    M = P.base
    keys = set(P.keys)
    cat = P.cat
    down = cat.shift_ids(M, -1)
    from siltlab.pairsposet import node_key

    assert node_key(SiltingPair.of(M, M)) in keys
    assert node_key(SiltingPair.of(down, down)) in keys
    assert node_key(SiltingPair.of(M, ())) in keys


def test_a2_poset_shape(a2_poset):
    P = a2_poset
    from collections import Counter

    counts = Counter(P.ranks)
    assert counts == Counter({0: 1, 1: 5, 2: 5, 3: 1})


def test_tautological_chain_nodes(a2_poset):
    P = a2_poset
    from siltlab.pairsposet import node_key
    from siltlab.silting import pair_leq

    for i in range(1, P.n):
        pair = P.nodes[i]
        low = SiltingPair.of(pair.ambient, pair.ambient)
        if node_key(low) in P.index:
            assert P.leq(P.node_of(node_key(low)), i)


def test_rank_function(a1_poset, a2_poset, lam_poset):
    for P in (a1_poset, a2_poset, lam_poset):
        assert verify_rank_function(P)["pass"]
        for i in range(P.n):
            assert pair_rank(P, P.keys[i]) == P.ranks[i]
        top = max(range(P.n), key=lambda i: P.ranks[i])
        nM = len(P.base)
        assert P.ranks[top] == nM + 1
        for i in range(1, P.n):
            if P.ranks[i] == 1:
                pass
        with pytest.raises(UnknownNode):
            P.node_of("nonsense")


def test_bottom_covered_by_vertices(a2_poset):
    P = a2_poset
    for a, b in covers(P):
        if a == 0:
            assert P.ranks[b] == 1


def test_covers_transitive_closure(a2_poset, lam_poset):
    for P in (a2_poset, lam_poset):
        reach = [1 << i for i in range(P.n)]
        # closure of cover edges
        changed = True
        while changed:
            changed = False
            for i in range(P.n):
                m = reach[i]
                j = 0
                mm = P.cover_up[i]
                while mm:
                    if mm & 1:
                        new = m | reach[j]
                        if new != m:
                            m = new
                    mm >>= 1
                    j += 1
                acc = m
                mm = m
                j = 0
                while mm:
                    if mm & 1:
                        acc |= reach[j]
                    mm >>= 1
                    j += 1
                if acc != reach[i]:
                    reach[i] = acc
                    changed = True
        for i in range(P.n):
            assert reach[i] == P.up[i]


def test_length_two_and_semimodularity(a1_poset, a2_poset, lam_poset):
    for P in (a1_poset, a2_poset, lam_poset):
        assert verify_length_two(P)["pass"]
        assert verify_total_semimodularity(P)["pass"]


def test_maximal_chain_length(a2_poset):
    P = a2_poset
    dist = P.longest_chain_from(0)
    top = max(range(P.n), key=lambda i: P.ranks[i])
    assert dist[top] == len(P.base) + 1


def test_subset_inclusion_reverses(a2_poset):
    P = a2_poset
    from siltlab.pairsposet import node_key
    from siltlab.silting import pair_leq

    cat = P.cat
    for i in range(1, P.n):
        N, sub = P.nodes[i]
        for j in range(1, P.n):
            N2, sub2 = P.nodes[j]
            if N2 == N and set(sub2) < set(sub):
                assert pair_leq(cat, P.nodes[i], P.nodes[j])


def test_verify_cw_poset_pass(a2_poset):
    rep = verify_cw_poset(a2_poset)
    assert rep["pass"]
    assert {r["check"] for r in rep["reports"]} == {
        "rank-function",
        "length-two-intervals",
        "total-semimodularity",
        "interval-spheres",
    }


def test_corrupted_poset_fails(a2_poset):
    P = a2_poset
    # drop a rank-one node: the relation is no longer a graded CW poset
    keep = [i for i in range(P.n) if not (P.ranks[i] == 1)]
    keep = [i for i in range(P.n)]
    drop = next(i for i in range(P.n) if P.ranks[i] == 1)
    keep = [i for i in range(P.n) if i != drop]
    remap = {i: k for k, i in enumerate(keep)}
    up = []
    for i in keep:
        mask = 0
        for j in P.members(P.up[i]):
            if j in remap:
                mask |= 1 << remap[j]
        up.append(mask)
    broken = FinitePoset([P.keys[i] for i in keep], up, [P.ranks[i] for i in keep])
    rep = verify_cw_poset(broken)
    assert not rep["pass"]
    bad = [r for r in rep["reports"] if not r["pass"]]
    assert bad


def test_k2_poset_verifies(a2_poset):
    cat = a2_poset.cat
    P2 = build_pairs_poset(cat, a2_poset.base, 2)
    assert P2.n == 34
    rep = verify_cw_poset(P2)
    assert rep["pass"]


def test_lambda_230_poset_verifies():
    cat = Category(make_lambda(2, 3, 0))
    P = build_pairs_poset(cat, standard_silting(cat), 1)
    assert verify_cw_poset(P)["pass"]


def test_round_trip_and_dot(a2_poset):
    data = a2_poset.to_dict()
    again = poset_from_dict(data)
    assert again.keys == a2_poset.keys
    assert again.up == a2_poset.up
    assert again.ranks == a2_poset.ranks
    assert verify_cw_poset(again, sphere_checks=False)["pass"]
    dot = hasse_dot(a2_poset)
    assert dot.startswith("digraph")
    assert dot.count("->") == len(a2_poset.covers)
