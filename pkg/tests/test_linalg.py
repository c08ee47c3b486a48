import random
from fractions import Fraction

import sympy

from siltlab import linalg


def _random_matrix(rng, rows, cols, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def test_rank_against_sympy():
    rng = random.Random(101)
    for _ in range(40):
        m = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert linalg.rank(m) == sympy.Matrix(m).rank()


def test_rank_handles_fractions():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1, 1)]]
    assert linalg.rank(m) == sympy.Matrix([[sympy.Rational(1, 2), sympy.Rational(1, 3)],
                                           [sympy.Rational(3, 2), 1]]).rank()


def test_nullspace_is_kernel():
    rng = random.Random(7)
    for _ in range(25):
        rows, cols = rng.randint(1, 5), rng.randint(1, 6)
        m = _random_matrix(rng, rows, cols)
        basis = linalg.nullspace(m, cols)
        for v in basis:
            for row in m:
                assert sum(a * b for a, b in zip(row, v)) == 0
        assert len(basis) == cols - linalg.rank(m)


def test_solve_and_invert():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(1, 5)
        m = _random_matrix(rng, n, n)
        if linalg.det_int(m) == 0:
            assert linalg.invert(m) is None
            continue
        inv = linalg.invert(m)
        prod = linalg.matmul(m, inv)
        assert prod == [
            [Fraction(int(i == j)) for j in range(n)] for i in range(n)
        ]
        x = [rng.randint(-4, 4) for _ in range(n)]
        rhs = [sum(r * c for r, c in zip(row, x)) for row in m]
        sol = linalg.solve(m, rhs)
        assert sol == [Fraction(v) for v in x]


def test_det_against_sympy():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 5)
        m = _random_matrix(rng, n, n)
        assert linalg.det_int(m) == sympy.Matrix(m).det()


def test_snf_against_sympy():
    from sympy.matrices.normalforms import smith_normal_form

    rng = random.Random(13)
    for _ in range(30):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = _random_matrix(rng, rows, cols, -4, 4)
        entries = {
            (i, j): v for i, row in enumerate(m) for j, v in enumerate(row) if v
        }
        rank, torsion = linalg.snf_invariants(entries, rows, cols)
        smf = smith_normal_form(sympy.Matrix(m))
        diag = [abs(smf[i, i]) for i in range(min(rows, cols))]
        expected_rank = sum(1 for d in diag if d)
        expected_torsion = sorted(int(d) for d in diag if d > 1)
        assert rank == expected_rank
        assert sorted(torsion) == expected_torsion
