"""Exact linear algebra over the rationals and the integers.

Dense routines use ``fractions.Fraction``; rank queries first clear
denominators and run fraction-free (Bareiss) elimination on Python ints,
which is much faster than fraction pivoting.  The Smith normal form
routine is tuned for sparse simplicial boundary matrices: it eliminates
with unit pivots chosen by a Markowitz fill heuristic and only hands the
(usually empty) remainder to the dense textbook algorithm.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _as_int_rows(rows):
    """Scale each row by the lcm of denominators; kernels and ranks agree."""
    out = []
    for row in rows:
        mult = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                mult = lcm(mult, x.denominator)
        if mult == 1:
            out.append([int(x) for x in row])
        else:
            out.append([int(x * mult) for x in row])
    return out


def rank(rows) -> int:
    """Rank over Q of a matrix given as a list of rows (ints or Fractions)."""
    m = _as_int_rows(rows)
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        for i in range(row + 1, len(m)):
            if not any(m[i][col:]):
                continue
            xi = m[i][col]
            for j in range(col, ncols):
                m[i][j] = (pv * m[i][j] - xi * m[row][j]) // prev
        prev = pv
        row += 1
        r += 1
        if row == len(m):
            break
    return r


def rref(rows):
    """Reduced row echelon form over Q.

    Returns (reduced nonzero rows, pivot column indices).
    """
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    row = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = None
        for i in range(row, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col]:
                c = m[i][col]
                ri = m[i]
                rr = m[row]
                m[i] = [a - c * b for a, b in zip(ri, rr)]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return m[:row], pivots


def nullspace(rows, ncols=None):
    """Basis of the right kernel over Q, as a list of Fraction vectors."""
    if not rows:
        return [] if not ncols else [
            [Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)
        ]
    ncols = len(rows[0])
    red, pivots = rref(rows)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, pivots):
            v[p] = -r[f]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One solution of A x = b over Q, or None if inconsistent."""
    if not rows:
        return None if any(rhs) else []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in zip(red, pivots):
        x[p] = r[-1]
    return x


def invert(rows):
    """Inverse of a square rational matrix, or None if singular."""
    n = len(rows)
    aug = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in red]


def det_int(rows) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    m = [list(map(int, row)) for row in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pv = m[col][col]
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                m[i][j] = (pv * m[i][j] - m[i][col] * m[col][j]) // prev
            m[i][col] = 0
        prev = pv
    return sign * m[n - 1][n - 1]


def matmul(a, b):
    """Product of two dense rational matrices."""
    if not a or not b:
        return []
    nb = len(b[0])
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


# ---------------------------------------------------------------------------
# Integer Smith normal form
# ---------------------------------------------------------------------------


def _dense_snf_diagonal(rows):
    """Diagonal of the Smith form of a small dense integer matrix."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    diag = []
    top = 0
    while top < nr and top < nc:
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        m[top], m[bi] = m[bi], m[top]
        for row in m:
            row[top], row[bj] = row[bj], row[top]
        piv = m[top][top]
        dirty = False
        for i in range(top + 1, nr):
            q = m[i][top] // piv
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[top])]
            if m[i][top]:
                dirty = True
        for j in range(top + 1, nc):
            q = m[top][j] // piv
            if q:
                for row in m:
                    row[j] -= q * row[top]
            if m[top][j]:
                dirty = True
        if dirty:
            continue
        diag.append(abs(piv))
        top += 1
    # enforce the divisibility chain (invariant factors)
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if b % a != 0:
                g = gcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
                changed = True
        diag.sort()
    return diag


def snf_invariants(entries, nrows, ncols):
    """Rank and torsion invariant factors of a sparse integer matrix.

    ``entries`` maps (row, col) to a nonzero int.  Unit pivots are
    eliminated first with a min-fill heuristic; whatever survives goes
    through the dense routine.  Returns (rank, [factors > 1]).
    """
    row_data = {}
    col_data = {}
    for (i, j), v in entries.items():
        if v:
            row_data.setdefault(i, {})[j] = v
            col_data.setdefault(j, set()).add(i)
    rank_units = 0
    while True:
        best = None
        best_cost = None
        for i, row in row_data.items():
            rlen = len(row)
            for j, v in row.items():
                if v in (1, -1):
                    cost = (rlen - 1) * (len(col_data[j]) - 1)
                    if best_cost is None or cost < best_cost:
                        best, best_cost = (i, j), cost
                        if cost == 0:
                            break
            if best_cost == 0:
                break
        if best is None:
            break
        pi, pj = best
        piv_row = row_data.pop(pi)
        piv = piv_row.pop(pj)
        col_rows = col_data.pop(pj)
        col_rows.discard(pi)
        for j in piv_row:
            col_data[j].discard(pi)
        for i in col_rows:
            row = row_data[i]
            factor = row.pop(pj) * piv  # piv in {1,-1} so this is v/piv
            for j, v in piv_row.items():
                nv = row.get(j, 0) - factor * v
                if nv:
                    if j not in row:
                        col_data[j].add(i)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    col_data[j].discard(i)
            if not row:
                del row_data[i]
        rank_units += 1
    if not row_data:
        return rank_units, []
    rows_left = sorted(row_data)
    cols_left = sorted({j for row in row_data.values() for j in row})
    cindex = {j: k for k, j in enumerate(cols_left)}
    dense = [[0] * len(cols_left) for _ in rows_left]
    for k, i in enumerate(rows_left):
        for j, v in row_data[i].items():
            dense[k][cindex[j]] = v
    diag = _dense_snf_diagonal(dense)
    torsion = [d for d in diag if d > 1]
    return rank_units + len(diag), torsion
