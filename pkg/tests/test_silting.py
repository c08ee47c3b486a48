import itertools

import pytest

from siltlab.algebra import make_lambda, make_linear_a
from siltlab.errors import NotSilting, NotTwoTerm
from siltlab.homotopy import Category, projective_complex
from siltlab.silting import (
    SiltingPair,
    bongartz_left,
    bongartz_right,
    bounding_interval,
    enumerate_interval,
    irreducible_mutations,
    is_presilting,
    is_silting,
    left_mutation,
    pair_leq,
    pair_leq_bongartz,
    right_mutation,
    silting_leq,
    standard_silting,
    torsion_simple_labels,
    two_term_membership,
)


@pytest.fixture(scope="module")
def ka2():
    alg = make_linear_a(2, ["f"])
    cat = Category(alg)
    return cat, standard_silting(cat)


@pytest.fixture(scope="module")
def ka3():
    alg = make_linear_a(3, ["f", "f"])
    cat = Category(alg)
    return cat, standard_silting(cat)


@pytest.fixture(scope="module")
def ka1():
    alg = make_linear_a(1, [])
    cat = Category(alg)
    return cat, standard_silting(cat)


def test_presilting_basics(ka2):
    cat, M = ka2
    single = (M[0],)
    assert is_presilting(cat, single)
    x = M[0]
    pair = tuple(sorted((x, cat.shift_id(x, -1))))
    assert not is_presilting(cat, pair)


def test_presilting_appendix(ka3):
    cat, M = ka3
    p3 = cat.intern(projective_complex(cat.algebra, 3))
    nonstd = tuple(sorted([M[0], M[1], cat.shift_id(p3, -1)]))
    assert set(nonstd) != set(M)
    assert is_presilting(cat, nonstd)
    assert is_silting(cat, nonstd)


def test_is_silting(ka3):
    cat, M = ka3
    assert is_silting(cat, M)
    assert is_silting(cat, M, check_generation=True)
    assert not is_silting(cat, M[:2])
    assert not is_silting(cat, M + (cat.shift_id(M[0], -1),))


def test_silting_leq_chain(ka3):
    cat, M = ka3
    assert silting_leq(cat, M, M)
    pair = SiltingPair.of(M, M[:2])
    mu = right_mutation(cat, pair)
    lam = left_mutation(cat, pair)
    down = cat.shift_ids(M, -1)
    up = cat.shift_ids(M, 1)
    assert silting_leq(cat, down, mu)
    assert silting_leq(cat, mu, M)
    assert silting_leq(cat, M, lam)
    assert silting_leq(cat, lam, up)


def test_leq_antisymmetry_on_interval(ka2):
    cat, M = ka2
    interval = enumerate_interval(cat, M, 1)
    for A in interval:
        for B in interval:
            if silting_leq(cat, A, B) and silting_leq(cat, B, A):
                assert A == B


def test_mutation_examples(ka3):
    cat, M = ka3
    assert right_mutation(cat, SiltingPair.of(M, M)) == M
    assert right_mutation(cat, SiltingPair.of(M, ())) == cat.shift_ids(M, -1)
    p3 = cat.intern(projective_complex(cat.algebra, 3))
    pair = SiltingPair.of(M, tuple(sorted((M[0], M[1]))))
    mu = right_mutation(cat, pair)
    assert mu == tuple(sorted((M[0], M[1], cat.shift_id(p3, -1))))


def test_mutation_requires_silting(ka3):
    cat, M = ka3
    with pytest.raises(NotSilting):
        right_mutation(cat, SiltingPair.of(M[:2], M[:1]))


def test_irreducible_mutations(ka1, ka2):
    cat1, M1 = ka1
    muts = irreducible_mutations(cat1, M1, "right")
    assert len(muts) == 1
    assert muts[0][1] == cat1.shift_ids(M1, -1)
    lefts = irreducible_mutations(cat1, M1, "left")
    assert lefts[0][1] == cat1.shift_ids(M1, 1)
    cat2, M2 = ka2
    muts2 = irreducible_mutations(cat2, M2, "right")
    assert len(muts2) == 2
    for pair, result in muts2:
        assert is_silting(cat2, result)
        assert left_mutation(cat2, SiltingPair.of(result, pair.sub)) == M2


def test_intersection_law(ka2, ka3):
    for cat, M in (ka2, ka3):
        for N in enumerate_interval(cat, M, 1):
            for r in range(len(N) + 1):
                for sub in itertools.combinations(N, r):
                    pair = SiltingPair.of(N, sub)
                    mu = right_mutation(cat, pair)
                    assert tuple(sorted(set(N) & set(mu))) == pair.sub


def test_mutation_order_compatibility(ka2):
    cat, M = ka2
    interval = enumerate_interval(cat, M, 1)
    for A in interval:
        for B in interval:
            if not silting_leq(cat, A, B):
                continue
            shared = tuple(sorted(set(A) & set(B)))
            for r in range(len(shared) + 1):
                for K in itertools.combinations(shared, r):
                    mua = right_mutation(cat, SiltingPair.of(A, K))
                    mub = right_mutation(cat, SiltingPair.of(B, K))
                    assert silting_leq(cat, mua, mub)


def test_bongartz_trivial_completions(ka3):
    cat, M = ka3
    for r in range(len(M) + 1):
        for sub in itertools.combinations(M, r):
            assert bongartz_left(cat, sub, M) == M
            assert bongartz_right(cat, sub, M) == right_mutation(
                cat, SiltingPair.of(M, sub)
            )


def test_all_poset_mutations_are_silting(ka2):
    cat, M = ka2
    for N in enumerate_interval(cat, M, 1):
        for r in range(len(N) + 1):
            for sub in itertools.combinations(N, r):
                assert is_silting(cat, right_mutation(cat, SiltingPair.of(N, sub)))
                assert is_silting(cat, left_mutation(cat, SiltingPair.of(N, sub)))


def test_bongartz_completes_partial_objects(ka2):
    # complete single two-term summands that are not part of the base
    cat, M = ka2
    for N in enumerate_interval(cat, M, 1):
        for x in N:
            done = bongartz_left(cat, (x,), M)
            assert is_silting(cat, done)
            assert x in done
            assert two_term_membership(cat, done, M)
            done_r = bongartz_right(cat, (x,), M)
            assert is_silting(cat, done_r)
            assert x in done_r
            assert two_term_membership(cat, done_r, M)
            # left completion dominates right completion
            assert silting_leq(cat, done_r, done)


def test_bongartz_full_silting_input(ka2):
    cat, M = ka2
    for N in enumerate_interval(cat, M, 1):
        assert bongartz_left(cat, N, M) == N
        assert bongartz_right(cat, N, M) == N


def test_bongartz_rejects_bad_input(ka2):
    cat, M = ka2
    bad = (M[0], cat.shift_id(M[0], -1))
    with pytest.raises(NotTwoTerm):
        bongartz_left(cat, bad, M)
    too_deep = (cat.shift_id(M[0], -2),)
    with pytest.raises(NotTwoTerm):
        bongartz_left(cat, too_deep, M)


def test_two_term_membership(ka2):
    cat, M = ka2
    assert two_term_membership(cat, M, M)
    assert two_term_membership(cat, cat.shift_ids(M, -1), M)
    assert not two_term_membership(cat, cat.shift_ids(M, 1), M)


def test_enumerate_interval_a1(ka1):
    cat, M = ka1
    assert set(enumerate_interval(cat, M, 1)) == {M, cat.shift_ids(M, -1)}
    assert len(enumerate_interval(cat, M, 2)) == 3


def test_enumerate_interval_counts(ka2, ka3):
    cat2, M2 = ka2
    assert len(enumerate_interval(cat2, M2, 1)) == 5
    cat3, M3 = ka3
    assert len(enumerate_interval(cat3, M3, 1)) == 14
    lam = make_lambda(1, 2, 0)
    catL = Category(lam)
    ML = standard_silting(catL)
    assert len(enumerate_interval(catL, ML, 1)) == 6


def test_interval_sandwich(ka2):
    cat, M = ka2
    for N in enumerate_interval(cat, M, 1):
        assert two_term_membership(cat, N, M)


def test_pair_order_tautological_chain(ka3):
    cat, M = ka3
    mid = SiltingPair.of(M, M[:1])
    assert pair_leq(cat, SiltingPair.of(M, M), mid)
    assert pair_leq(cat, mid, SiltingPair.of(M, ()))
    assert pair_leq(cat, mid, mid)
    assert pair_leq_bongartz(cat, SiltingPair.of(M, M), mid)
    assert pair_leq_bongartz(cat, mid, SiltingPair.of(M, ()))
    assert pair_leq_bongartz(cat, mid, mid)


def test_torsion_labels(ka3):
    cat, M = ka3
    assert torsion_simple_labels(SiltingPair.of(M, M)) == ()
    assert torsion_simple_labels(SiltingPair.of(M, ())) == (0, 1, 2)
    for j in range(3):
        sub = tuple(x for k, x in enumerate(M) if k != j)
        assert torsion_simple_labels(SiltingPair.of(M, sub)) == (j,)


def test_bounding_interval(ka2):
    cat, M = ka2
    a, b = bounding_interval(cat, [M], M)
    assert a <= 0 <= b
    a, b = bounding_interval(cat, [cat.shift_ids(M, -1)], M)
    assert a <= -1 <= b
    Ns = enumerate_interval(cat, M, 1)
    a, b = bounding_interval(cat, Ns, M)
    for N in Ns:
        assert silting_leq(cat, cat.shift_ids(M, a), N)
        assert silting_leq(cat, N, cat.shift_ids(M, b))
    assert (a, b) == (-1, 0)


def test_deeper_intervals_match_cluster_counts(ka1, ka2, ka3):
    # counts of [S^-2 M, M] siltings for linear A_n agree with the number
    # of 2-clusters (Fuss-Catalan product over exponents)
    cat1, M1 = ka1
    assert len(enumerate_interval(cat1, M1, 2)) == 3
    cat2, M2 = ka2
    assert len(enumerate_interval(cat2, M2, 2)) == 12
    cat3, M3 = ka3
    assert len(enumerate_interval(cat3, M3, 2)) == 55


def test_two_term_count_is_orientation_independent():
    counts = set()
    for orient in (["f", "f"], ["f", "b"], ["b", "f"], ["b", "b"]):
        cat = Category(make_linear_a(3, orient))
        counts.add(len(enumerate_interval(cat, standard_silting(cat), 1)))
    assert counts == {14}


def test_upper_bound_corollary(ka2, ka3):
    # pairs (K, K'_i) over a fixed K: if M <= mu_{K'_i}(K) for all i then
    # M <= mu at the intersection of the K'_i
    for cat, M in (ka2, ka3):
        interval = enumerate_interval(cat, M, 1)
        for K in interval:
            subs = [
                sub
                for r in range(len(K) + 1)
                for sub in itertools.combinations(K, r)
            ]
            for s1, s2 in itertools.combinations(subs, 2):
                inter = tuple(sorted(set(s1) & set(s2)))
                mu1 = right_mutation(cat, SiltingPair.of(K, s1))
                mu2 = right_mutation(cat, SiltingPair.of(K, s2))
                mui = right_mutation(cat, SiltingPair.of(K, inter))
                for N in interval:
                    if silting_leq(cat, N, mu1) and silting_leq(cat, N, mu2):
                        assert silting_leq(cat, N, mui)
