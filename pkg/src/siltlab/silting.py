"""Silting objects, their partial orders, mutation and Bongartz completion.

A silting object is handled as a sorted tuple of registry ids inside a
Category; a silting pair is an object together with a subset of its
summands.  The order is M <= N iff Hom(M, S^i N) = 0 for all i > 0, so
S^{-1} M <= M <= S M and right mutation moves objects down.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import BudgetExceeded, NotSilting, NotTwoTerm
from .homotopy import (
    Category,
    cone,
    minimal_left_approximation,
    minimal_right_approximation,
    shift,
)
from . import linalg


class SiltingPair(NamedTuple):
    ambient: tuple
    sub: tuple

    @staticmethod
    def of(ambient, sub) -> "SiltingPair":
        ambient = tuple(sorted(ambient))
        sub = tuple(sorted(sub))
        if not set(sub) <= set(ambient):
            raise NotSilting("pair subset is not contained in the ambient object")
        return SiltingPair(ambient, sub)


def _as_ids(cat: Category, M):
    if isinstance(M, tuple):
        return M
    return tuple(sorted(M))


def is_presilting(cat: Category, ids) -> bool:
    """Hom(M, S^i M) = 0 for every i > 0, over the finite hom window."""
    ids = _as_ids(cat, ids)
    memo = cat.cache("presilting")
    key = ids
    if key in memo:
        return memo[key]
    ok = all(cat.pos_homs_vanish(a, b) for a in ids for b in ids)
    memo[key] = ok
    return ok


def k0_matrix(cat: Category, ids):
    """Columns are the K-theory classes of the summands."""
    vecs = [cat.k0_id(i) for i in ids]
    return [list(col) for col in zip(*vecs)] if vecs else []


def is_silting(cat: Category, ids, check_generation: bool = False) -> bool:
    """Presilting, full rank, and unimodular matrix of K-theory classes.

    Completeness of this criterion is what makes enumeration feasible;
    the optional ``check_generation`` flag additionally runs a bounded
    cone-closure search witnessing thick generation.
    """
    ids = _as_ids(cat, ids)
    n = len(cat.algebra.vertices)
    if len(set(ids)) != len(ids) or len(ids) != n:
        return False
    if not is_presilting(cat, ids):
        return False
    det = linalg.det_int(k0_matrix(cat, ids))
    if det not in (1, -1):
        return False
    if check_generation and not _generates_projectives(cat, ids):
        return False
    return True


def _generates_projectives(cat: Category, ids, budget: int = 4000) -> bool:
    """Bounded search: close add(M) under shifts and cones until the
    projective stalks appear.  A True answer is a certificate."""
    from .homotopy import hom_basis, hom_window

    want = set(cat.projective_ids())
    have = set()
    for i in ids:
        for k in range(-n_shift_bound(cat, ids), n_shift_bound(cat, ids) + 1):
            have.add(cat.shift_id(i, k))
    frontier = sorted(have)
    steps = 0
    while frontier and not want <= have:
        new = []
        for a in sorted(have):
            for b in frontier:
                A, B = cat.complex_of(a), cat.complex_of(b)
                lo, hi = hom_window(A, B)
                if 0 < lo or 0 > hi:
                    continue
                steps += 1
                if steps > budget:
                    return want <= have
                for f in hom_basis(A, B, 0).basis:
                    for part in _cone_ids(cat, f):
                        if part not in have:
                            have.add(part)
                            new.append(part)
                if want <= have:
                    return True
        frontier = new
    return want <= have


def n_shift_bound(cat: Category, ids) -> int:
    spans = [cat.complex_of(i).support() for i in ids]
    width = max(hi for _, hi in spans) - min(lo for lo, _ in spans)
    return width + 1


def _cone_ids(cat: Category, f):
    return cat.register(cone(f))


def silting_leq(cat: Category, M, N) -> bool:
    """M <= N iff Hom(M, S^i N) vanishes for all i > 0."""
    M, N = _as_ids(cat, M), _as_ids(cat, N)
    memo = cat.cache("silting_leq")
    key = (M, N)
    if key in memo:
        return memo[key]
    ok = all(cat.pos_homs_vanish(a, b) for a in M for b in N)
    memo[key] = ok
    return ok


def right_mutation(cat: Category, pair: SiltingPair):
    """Exchange the summands outside pair.sub along minimal right
    approximations; the new object is silting again."""
    pair = SiltingPair.of(pair.ambient, pair.sub)
    memo = cat.cache("right_mutation")
    if pair in memo:
        return memo[pair]
    if not is_silting(cat, pair.ambient):
        raise NotSilting("right mutation needs a silting ambient object")
    sub_objects = [cat.complex_of(i) for i in pair.sub]
    out = set(pair.sub)
    for m in pair.ambient:
        if m in pair.sub:
            continue
        approx = minimal_right_approximation(sub_objects, cat.complex_of(m))
        out.update(cat.register(shift(cone(approx), -1)))
    result = tuple(sorted(out))
    memo[pair] = result
    return result


def left_mutation(cat: Category, pair: SiltingPair):
    pair = SiltingPair.of(pair.ambient, pair.sub)
    memo = cat.cache("left_mutation")
    if pair in memo:
        return memo[pair]
    if not is_silting(cat, pair.ambient):
        raise NotSilting("left mutation needs a silting ambient object")
    sub_objects = [cat.complex_of(i) for i in pair.sub]
    out = set(pair.sub)
    for m in pair.ambient:
        if m in pair.sub:
            continue
        approx = minimal_left_approximation(sub_objects, cat.complex_of(m))
        out.update(cat.register(cone(approx)))
    result = tuple(sorted(out))
    memo[pair] = result
    return result


def irreducible_mutations(cat: Category, M, direction: str = "right"):
    """All corank-one mutations of M, one per summand."""
    M = _as_ids(cat, M)
    fn = right_mutation if direction == "right" else left_mutation
    out = []
    for m in M:
        pair = SiltingPair.of(M, tuple(x for x in M if x != m))
        out.append((pair, fn(cat, pair)))
    return out


def object_two_term(cat: Category, x: int, M) -> bool:
    """Whether a single object lies in S^{-1}M * M, by Hom vanishing.

    Needs Hom(M, S^i x) = 0 for i >= 2 and Hom(x, S^i M) = 0 for i >= 1;
    over a silting M these conditions characterise the two-term window.
    """
    from .homotopy import hom_window

    M = _as_ids(cat, M)
    X = cat.complex_of(x)
    for m in M:
        Mo = cat.complex_of(m)
        lo, hi = hom_window(Mo, X)
        for i in range(max(2, lo), hi + 1):
            if cat.hom_dim_ids(m, x, i):
                return False
        if not cat.pos_homs_vanish(x, m):
            return False
    return True


def two_term_membership(cat: Category, N, M) -> bool:
    """N subset of S^{-1}M * M iff S^{-1}M <= N <= M."""
    N, M = _as_ids(cat, N), _as_ids(cat, M)
    return silting_leq(cat, cat.shift_ids(M, -1), N) and silting_leq(cat, N, M)


def bongartz_left(cat: Category, Nprime, M):
    """Left Bongartz completion of a two-term partial silting object."""
    Nprime, M = _as_ids(cat, Nprime), _as_ids(cat, M)
    _require_two_term_presilting(cat, Nprime, M)
    memo = cat.cache("bongartz_left")
    key = (Nprime, M)
    if key in memo:
        return memo[key]
    objs = [cat.complex_of(i) for i in Nprime]
    out = set(Nprime)
    for m in M:
        approx = minimal_left_approximation(objs, shift(cat.complex_of(m), -1))
        out.update(cat.register(cone(approx)))
    result = tuple(sorted(out))
    memo[key] = result
    return result


def bongartz_right(cat: Category, Nprime, M):
    """Right Bongartz completion; with Nprime inside M this is the
    right mutation at Nprime."""
    Nprime, M = _as_ids(cat, Nprime), _as_ids(cat, M)
    _require_two_term_presilting(cat, Nprime, M)
    memo = cat.cache("bongartz_right")
    key = (Nprime, M)
    if key in memo:
        return memo[key]
    objs = [cat.complex_of(i) for i in Nprime]
    out = set(Nprime)
    for m in M:
        approx = minimal_right_approximation(objs, cat.complex_of(m))
        out.update(cat.register(shift(cone(approx), -1)))
    result = tuple(sorted(out))
    memo[key] = result
    return result


def _require_two_term_presilting(cat, Nprime, M):
    if not is_presilting(cat, Nprime):
        raise NotTwoTerm("completion input is not presilting")
    for x in Nprime:
        if not object_two_term(cat, x, M):
            raise NotTwoTerm(f"summand {x} is not two-term with respect to the base")


def enumerate_interval(cat: Category, M, k: int, node_cap: int = 200000):
    """All silting N with S^{-k}M <= N <= M, by breadth-first search over
    irreducible right mutations pruned at the lower bound."""
    M = _as_ids(cat, M)
    if not is_silting(cat, M):
        raise NotSilting("interval base must be silting")
    bottom = cat.shift_ids(M, -k)
    seen = {M}
    frontier = [M]
    while frontier:
        nxt = []
        for N in frontier:
            for m in N:
                pair = SiltingPair.of(N, tuple(x for x in N if x != m))
                cand = right_mutation(cat, pair)
                if cand in seen:
                    continue
                if silting_leq(cat, bottom, cand):
                    seen.add(cand)
                    nxt.append(cand)
                    if len(seen) > node_cap:
                        raise BudgetExceeded("interval enumeration exceeded node cap")
        frontier = nxt
    return sorted(seen)


def pair_leq(cat: Category, q: SiltingPair, p: SiltingPair) -> bool:
    """(N,N') <= (M,M') iff mu_{M'}(M) <= mu_{N'}(N) <= N <= M."""
    memo = cat.cache("pair_leq")
    key = (q, p)
    if key in memo:
        return memo[key]
    mu_p = right_mutation(cat, p)
    mu_q = right_mutation(cat, q)
    ok = (
        silting_leq(cat, mu_p, mu_q)
        and silting_leq(cat, mu_q, q.ambient)
        and silting_leq(cat, q.ambient, p.ambient)
    )
    memo[key] = ok
    return ok


def pair_leq_bongartz(cat: Category, q: SiltingPair, p: SiltingPair) -> bool:
    """Bongartz form of the pair order: M' inside N', N' two-term for M,
    and the left completion of N' over M recovers N."""
    memo = cat.cache("pair_leq_bongartz")
    key = (q, p)
    if key in memo:
        return memo[key]
    ok = set(p.sub) <= set(q.sub)
    if ok:
        for x in q.sub:
            if not object_two_term(cat, x, p.ambient):
                ok = False
                break
    if ok:
        try:
            ok = bongartz_left(cat, q.sub, p.ambient) == q.ambient
        except NotTwoTerm:
            ok = False
    memo[key] = ok
    return ok


def torsion_simple_labels(pair: SiltingPair):
    """Indices of heart simples generating the mutation torsion class:
    positions whose summand is missing from the subset."""
    return tuple(
        j for j, m in enumerate(sorted(pair.ambient)) if m not in set(pair.sub)
    )


def bounding_interval(cat: Category, Ns, M, cap: int = 64):
    """Integers (a, b) with S^a M <= N <= S^b M for every N given."""
    M = _as_ids(cat, M)
    Ns = [_as_ids(cat, N) for N in Ns]
    a = 0
    while not all(silting_leq(cat, cat.shift_ids(M, a), N) for N in Ns):
        a -= 1
        if -a > cap:
            raise BudgetExceeded("no lower shift bound found")
    b = 0
    while not all(silting_leq(cat, N, cat.shift_ids(M, b)) for N in Ns):
        b += 1
        if b > cap:
            raise BudgetExceeded("no upper shift bound found")
    return a, b


def standard_silting(cat: Category):
    """The projective generator as a silting object."""
    return tuple(sorted(cat.projective_ids()))
