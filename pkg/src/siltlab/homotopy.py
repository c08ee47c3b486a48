"""Bounded complexes of projectives and their homotopy category.

Cochain convention: the differential has degree +1, the suspension S
shifts degrees down by one (a degree-0 stalk moves to degree -1) and
negates the differential.  All arithmetic is exact over Q.

A complex stores, per degree, the tuple of vertices labelling its
projective summands, and per differential a matrix of path combinations.
The entry (i, j) of a matrix representing a morphism C -> D is the
component P(u_j) -> P(v_i), a Q-combination of algebra paths from v_i
to u_j; composing morphisms concatenates path words (see algebra.py).
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import sympy

from .algebra import (
    Algebra,
    combo_add,
    combo_lazy_coeff,
    combo_mul,
    combo_scale,
    is_lazy,
    lazy_path,
)
from .errors import DiagnosticError, IncompatibleMap, UnknownVertex, ZeroObject
from . import linalg


def _zero_matrix(nrows, ncols):
    return [[{} for _ in range(ncols)] for _ in range(nrows)]


def _mat_mul(alg, a, b, ncols=None):
    nrows = len(a)
    mid = len(b)
    if ncols is None:
        ncols = len(b[0]) if b else 0
    out = _zero_matrix(nrows, ncols)
    for i in range(nrows):
        arow = a[i]
        for k in range(mid):
            entry = arow[k]
            if not entry:
                continue
            brow = b[k]
            orow = out[i]
            for j in range(ncols):
                if brow[j]:
                    orow[j] = combo_add(orow[j], combo_mul(alg, entry, brow[j]))
    return out


def _mat_add(a, b):
    return [[combo_add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_scale(a, c):
    return [[combo_scale(x, c) for x in row] for row in a]


def _mat_is_zero(a):
    return all(not entry for row in a for entry in row)


class Complex:
    """A bounded complex of projective modules over a fixed algebra."""

    __slots__ = ("algebra", "terms", "diff")

    def __init__(self, algebra: Algebra, terms, diff, check=True):
        self.algebra = algebra
        self.terms = {d: tuple(t) for d, t in terms.items() if t}
        self.diff = {}
        for d in sorted(self.terms):
            if d + 1 in self.terms:
                m = diff.get(d)
                if m is None:
                    m = _zero_matrix(len(self.terms[d + 1]), len(self.terms[d]))
                self.diff[d] = [[dict(e) for e in row] for row in m]
        if check:
            self._validate()

    def _validate(self):
        alg = self.algebra
        for d, t in self.terms.items():
            for v in t:
                if v not in alg.vertex_index:
                    raise UnknownVertex(f"unknown vertex {v!r} in degree {d}")
        for d, m in self.diff.items():
            rows, cols = self.terms[d + 1], self.terms[d]
            if len(m) != len(rows) or any(len(r) != len(cols) for r in m):
                raise IncompatibleMap(f"differential at degree {d} has wrong shape")
            for i, row in enumerate(m):
                for j, entry in enumerate(row):
                    for p in entry:
                        if alg.source(p) != rows[i] or alg.target(p) != cols[j]:
                            raise IncompatibleMap(
                                f"entry ({i},{j}) at degree {d} is not a map "
                                f"P({cols[j]}) -> P({rows[i]})"
                            )
        for d in self.diff:
            if d + 1 in self.diff:
                if not _mat_is_zero(_mat_mul(self.algebra, self.diff[d + 1], self.diff[d])):
                    raise IncompatibleMap(f"d o d != 0 at degree {d}")

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self):
        return sorted(self.terms)

    def support(self):
        if not self.terms:
            return None
        ds = self.degrees()
        return ds[0], ds[-1]

    def summands_count(self) -> int:
        return sum(len(t) for t in self.terms.values())

    def term(self, d):
        return self.terms.get(d, ())

    def dmatrix(self, d):
        rows = len(self.term(d + 1))
        cols = len(self.term(d))
        m = self.diff.get(d)
        if m is None:
            return _zero_matrix(rows, cols)
        return m

    def dim_vector(self):
        """Degreewise multiset of vertices, an isomorphism invariant."""
        return tuple((d, tuple(sorted(map(str, self.terms[d])))) for d in self.degrees())

    def __repr__(self):
        if self.is_zero():
            return "Complex(0)"
        parts = ", ".join(f"{d}:{list(self.terms[d])}" for d in self.degrees())
        return f"Complex({parts})"


def zero_complex(algebra: Algebra) -> Complex:
    return Complex(algebra, {}, {}, check=False)


def stalk_complex(algebra: Algebra, v, degree=0) -> Complex:
    if v not in algebra.vertex_index:
        raise UnknownVertex(f"unknown vertex {v!r}")
    return Complex(algebra, {degree: (v,)}, {}, check=False)


def projective_complex(algebra: Algebra, v) -> Complex:
    """The indecomposable projective P(v) as a stalk in degree 0."""
    return stalk_complex(algebra, v, 0)


def two_term_complex(algebra: Algebra, lower, upper, matrix, degree=0) -> Complex:
    """Complex with ``lower`` in ``degree`` mapping to ``upper`` in degree+1."""
    return Complex(
        algebra,
        {degree: tuple(lower), degree + 1: tuple(upper)},
        {degree: matrix},
    )


def shift(X: Complex, k: int) -> Complex:
    """Suspension S^k: degrees shifted by -k, differential scaled by (-1)^k."""
    if k == 0 or X.is_zero():
        return X
    sign = 1 if k % 2 == 0 else -1
    terms = {d - k: t for d, t in X.terms.items()}
    diff = {d - k: _mat_scale(m, sign) for d, m in X.diff.items()}
    return Complex(X.algebra, terms, diff, check=False)


def direct_sum(Xs, algebra=None) -> Complex:
    Xs = [X for X in Xs if not X.is_zero()]
    if not Xs:
        if algebra is None:
            raise ZeroObject("empty direct sum needs an explicit algebra")
        return zero_complex(algebra)
    alg = Xs[0].algebra
    degrees = sorted({d for X in Xs for d in X.terms})
    terms = {d: tuple(itertools.chain.from_iterable(X.term(d) for X in Xs)) for d in degrees}
    diff = {}
    for d in degrees:
        if d + 1 not in terms:
            continue
        m = _zero_matrix(len(terms[d + 1]), len(terms[d]))
        ri = 0
        ci = 0
        for X in Xs:
            sub = X.dmatrix(d)
            for i, row in enumerate(sub):
                for j, entry in enumerate(row):
                    if entry:
                        m[ri + i][ci + j] = dict(entry)
            ri += len(X.term(d + 1))
            ci += len(X.term(d))
        diff[d] = m
    return Complex(alg, terms, diff, check=False)


def hom_window(X: Complex, Y: Complex):
    """Interval [lo, hi] with Hom(X, S^i Y) = 0 for i outside it.

    Chain maps need overlapping degree supports, and supp(S^i Y) is
    supp(Y) - i, so lo = min supp Y - max supp X and hi = max supp Y -
    min supp X.
    """
    if X.is_zero() or Y.is_zero():
        raise ZeroObject("hom_window needs nonzero complexes")
    xlo, xhi = X.support()
    ylo, yhi = Y.support()
    return ylo - xhi, yhi - xlo


class ChainMap:
    """A degreewise matrix of path combinations commuting with d."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Complex, target: Complex, components, check=True):
        self.source = source
        self.target = target
        self.components = {
            d: [[dict(e) for e in row] for row in m]
            for d, m in components.items()
            if m and any(entry for row in m for entry in row)
        }
        if check:
            self._validate()

    def component(self, d):
        m = self.components.get(d)
        if m is not None:
            return m
        return _zero_matrix(len(self.target.term(d)), len(self.source.term(d)))

    def _validate(self):
        alg = self.source.algebra
        for d, m in self.components.items():
            rows, cols = self.target.term(d), self.source.term(d)
            if len(m) != len(rows) or any(len(r) != len(cols) for r in m):
                raise IncompatibleMap(f"component at degree {d} has wrong shape")
            for i, row in enumerate(m):
                for j, entry in enumerate(row):
                    for p in entry:
                        if alg.source(p) != rows[i] or alg.target(p) != cols[j]:
                            raise IncompatibleMap(f"bad entry ({i},{j}) at degree {d}")
        for d in set(self.source.diff) | set(self.components):
            nc = len(self.source.term(d))
            lhs = _mat_mul(alg, self.target.dmatrix(d), self.component(d), ncols=nc)
            rhs = _mat_mul(alg, self.component(d + 1), self.source.dmatrix(d), ncols=nc)
            if not _mat_is_zero(_mat_add(lhs, _mat_scale(rhs, -1))):
                raise IncompatibleMap(f"does not commute with d at degree {d}")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        alg = self.source.algebra
        comps = {}
        for d in other.source.degrees():
            if self.target.term(d):
                comps[d] = _mat_mul(alg, self.component(d), other.component(d))
        return ChainMap(other.source, self.target, comps, check=False)

    def is_zero(self) -> bool:
        return all(_mat_is_zero(m) for m in self.components.values())


def zero_map(source: Complex, target: Complex) -> ChainMap:
    return ChainMap(source, target, {}, check=False)


def identity_map(X: Complex) -> ChainMap:
    comps = {}
    for d, t in X.terms.items():
        m = _zero_matrix(len(t), len(t))
        for i, v in enumerate(t):
            m[i][i] = {lazy_path(v): Fraction(1)}
        comps[d] = m
    return ChainMap(X, X, comps, check=False)


def cone(f: ChainMap) -> Complex:
    """Mapping cone; realises the triangle X -> Y -> cone(f) -> SX."""
    X, Y = f.source, f.target
    alg = X.algebra
    degrees = sorted({d - 1 for d in X.terms} | set(Y.terms))
    terms = {d: tuple(X.term(d + 1)) + tuple(Y.term(d)) for d in degrees}
    terms = {d: t for d, t in terms.items() if t}
    diff = {}
    for d in terms:
        if d + 1 not in terms:
            continue
        xs, ys = len(X.term(d + 1)), len(Y.term(d))
        xt, yt = len(X.term(d + 2)), len(Y.term(d + 1))
        m = _zero_matrix(xt + yt, xs + ys)
        dx = X.dmatrix(d + 1)
        for i in range(xt):
            for j in range(xs):
                if dx[i][j]:
                    m[i][j] = combo_scale(dx[i][j], -1)
        fc = f.component(d + 1)
        for i in range(yt):
            for j in range(xs):
                if fc[i][j]:
                    m[xt + i][j] = dict(fc[i][j])
        dy = Y.dmatrix(d)
        for i in range(yt):
            for j in range(ys):
                if dy[i][j]:
                    m[xt + i][xs + j] = dict(dy[i][j])
        diff[d] = m
    return Complex(alg, terms, diff)


# ---------------------------------------------------------------------------
# Hom spaces by exact linear algebra
# ---------------------------------------------------------------------------


class _MapCoords:
    """Coordinate system for degreewise module maps X^d -> Y^{d+off}."""

    def __init__(self, X: Complex, Y: Complex, offset: int):
        alg = X.algebra
        self.X, self.Y, self.offset = X, Y, offset
        self.coords = []
        self.index = {}
        for d in X.degrees():
            ys = Y.term(d + offset)
            xs = X.term(d)
            if not ys:
                continue
            for i, vy in enumerate(ys):
                for j, vx in enumerate(xs):
                    for p in alg.hom_paths(vx, vy):
                        self.index[(d, i, j, p)] = len(self.coords)
                        self.coords.append((d, i, j, p))
        self.dim = len(self.coords)

    def matrices_from_vector(self, vec):
        comps = {}
        for (d, i, j, p), idx in self.index.items():
            c = vec[idx]
            if c:
                m = comps.setdefault(
                    d,
                    _zero_matrix(
                        len(self.Y.term(d + self.offset)), len(self.X.term(d))
                    ),
                )
                m[i][j] = combo_add(m[i][j], {p: Fraction(c)})
        return comps

    def vector_from_matrices(self, comps):
        vec = [Fraction(0)] * self.dim
        for d, m in comps.items():
            for i, row in enumerate(m):
                for j, entry in enumerate(row):
                    for p, c in entry.items():
                        vec[self.index[(d, i, j, p)]] += c
        return vec


def _chain_constraint_rows(X: Complex, Y: Complex, coords: _MapCoords):
    """Rows of the linear system expressing d_Y f = f d_X."""
    alg = X.algebra
    rows = {}

    def bump(rowkey, coord_idx, c):
        row = rows.setdefault(rowkey, {})
        row[coord_idx] = row.get(coord_idx, Fraction(0)) + c

    for d in sorted(set(X.degrees()) | set(Y.degrees())):
        xs = X.term(d)
        yt = Y.term(d + 1)
        if not xs or not yt:
            continue
        dy = Y.dmatrix(d)
        dx = X.dmatrix(d)
        # d_Y o f^d
        for i in range(len(yt)):
            for k in range(len(Y.term(d))):
                entry = dy[i][k]
                if not entry:
                    continue
                for j, vx in enumerate(xs):
                    for p in alg.hom_paths(vx, Y.term(d)[k]):
                        idx = coords.index.get((d, k, j, p))
                        if idx is None:
                            continue
                        for w, c in entry.items():
                            q = alg.mul(w, p)
                            if q is not None:
                                bump((d, i, j, q), idx, c)
        # - f^{d+1} o d_X
        for i in range(len(yt)):
            for l, vxl in enumerate(X.term(d + 1)):
                for p in alg.hom_paths(vxl, yt[i]):
                    idx = coords.index.get((d + 1, i, l, p))
                    if idx is None:
                        continue
                    for j in range(len(xs)):
                        entry = dx[l][j]
                        for w, c in entry.items():
                            q = alg.mul(p, w)
                            if q is not None:
                                bump((d, i, j, q), idx, -c)
    return [
        [row.get(k, Fraction(0)) for k in range(coords.dim)] for row in rows.values()
    ]


def _homotopy_image_rows(X: Complex, Y: Complex, coords: _MapCoords):
    """Images d_Y h + h d_X of a homotopy basis, in map coordinates."""
    alg = X.algebra
    hcoords = _MapCoords(X, Y, -1)
    images = []
    for (d, i, j, p) in hcoords.coords:
        vec = [Fraction(0)] * coords.dim
        # d_Y^{d-1} o h at degree d: rows over Y.term(d)
        dy = Y.dmatrix(d - 1)
        for r in range(len(Y.term(d))):
            entry = dy[r][i]
            for w, c in entry.items():
                q = alg.mul(w, p)
                if q is not None:
                    vec[coords.index[(d, r, j, q)]] += c
        # h^{d+1} o d_X^d contributes at degree d' = d - 1? no: h at (d,i,j)
        # is a map X^d -> Y^{d-1}; it also feeds (h o d_X) at degree d-1.
        dx = X.dmatrix(d - 1)
        for s in range(len(X.term(d - 1))):
            entry = dx[j][s]
            for w, c in entry.items():
                q = alg.mul(p, w)
                if q is not None:
                    vec[coords.index[(d - 1, i, s, q)]] += c
        if any(vec):
            images.append(vec)
    return images


class HomSpace:
    """Hom(X, S^i Y) in the homotopy category, with chosen representatives."""

    def __init__(self, X: Complex, Y: Complex, degree: int):
        self.X, self.Y, self.degree = X, Y, degree
        Ys = shift(Y, degree)
        self._coords = _MapCoords(X, Ys, 0)
        if self._coords.dim == 0:
            self.dimension = 0
            self.basis = []
            self._rep_rows, self._rep_pivots = [], []
            self._bnd_rows, self._bnd_pivots = [], []
            self._shifted_target = Ys
            return
        constraint = _chain_constraint_rows(X, Ys, self._coords)
        kernel = linalg.nullspace(constraint, self._coords.dim) if constraint else [
            [Fraction(int(a == b)) for b in range(self._coords.dim)]
            for a in range(self._coords.dim)
        ]
        boundaries = _homotopy_image_rows(X, Ys, self._coords)
        self._bnd_rows, self._bnd_pivots = linalg.rref(boundaries) if boundaries else ([], [])
        reduced = []
        for v in kernel:
            reduced.append(self._reduce_mod_boundaries(list(v)))
        self._rep_rows, self._rep_pivots = linalg.rref([r for r in reduced if any(r)]) if any(
            any(r) for r in reduced
        ) else ([], [])
        self.dimension = len(self._rep_rows)
        self._shifted_target = Ys
        self.basis = [
            ChainMap(X, Ys, self._coords.matrices_from_vector(row), check=False)
            for row in self._rep_rows
        ]

    def _reduce_mod_boundaries(self, vec):
        for row, p in zip(self._bnd_rows, self._bnd_pivots):
            c = vec[p]
            if c:
                vec = [a - c * b for a, b in zip(vec, row)]
        return vec

    def class_coords(self, f: ChainMap):
        """Coordinates of the homotopy class of f in the chosen basis."""
        vec = self._coords.vector_from_matrices(
            {d: f.component(d) for d in f.source.degrees()}
        )
        vec = self._reduce_mod_boundaries(vec)
        out = []
        for row, p in zip(self._rep_rows, self._rep_pivots):
            c = vec[p]
            out.append(c)
            if c:
                vec = [a - c * b for a, b in zip(vec, row)]
        if any(vec):
            raise DiagnosticError("chain map does not lie in the computed hom space")
        return tuple(out)


def hom_basis(X: Complex, Y: Complex, i: int) -> HomSpace:
    return HomSpace(X, Y, i)


def hom_dim(X: Complex, Y: Complex, i: int) -> int:
    """dim Hom(X, S^i Y) in the homotopy category, ranks only."""
    if X.is_zero() or Y.is_zero():
        return 0
    lo, hi = hom_window(X, Y)
    if i < lo or i > hi:
        return 0
    Ys = shift(Y, i)
    coords = _MapCoords(X, Ys, 0)
    if coords.dim == 0:
        return 0
    constraint = _chain_constraint_rows(X, Ys, coords)
    rank_t = linalg.rank(constraint) if constraint else 0
    boundaries = _homotopy_image_rows(X, Ys, coords)
    rank_s = linalg.rank(boundaries) if boundaries else 0
    return coords.dim - rank_t - rank_s


# ---------------------------------------------------------------------------
# Minimal models
# ---------------------------------------------------------------------------


def _invert_endo_combo(alg, v, entry):
    """Invert a combo in e_v Lambda e_v whose lazy coefficient is nonzero."""
    lam = combo_lazy_coeff(entry, v)
    nil = combo_scale(
        {p: c for p, c in entry.items() if not is_lazy(p)}, Fraction(1) / lam
    )
    inv = {lazy_path(v): Fraction(1) / lam}
    power = {lazy_path(v): Fraction(1) / lam}
    sign = -1
    while True:
        power = combo_mul(alg, nil, power)
        if not power:
            break
        inv = combo_add(inv, combo_scale(power, sign))
        sign = -sign
    return inv


def minimalize(X: Complex) -> Complex:
    """Gaussian cancellation of invertible differential entries."""
    if X.is_zero():
        return X
    alg = X.algebra
    terms = {d: list(t) for d, t in X.terms.items()}
    diff = {d: [[dict(e) for e in row] for row in m] for d, m in X.diff.items()}

    def find_unit():
        for d in sorted(diff):
            m = diff[d]
            for i, row in enumerate(m):
                for j, entry in enumerate(row):
                    v = terms[d + 1][i]
                    if terms[d][j] == v and combo_lazy_coeff(entry, v):
                        return d, i, j
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        d, i, j = hit
        v = terms[d + 1][i]
        m = diff[d]
        a_inv = _invert_endo_combo(alg, v, m[i][j])
        for i2 in range(len(m)):
            if i2 == i or not m[i2][j]:
                continue
            left = combo_mul(alg, m[i2][j], a_inv)
            for j2 in range(len(m[0])):
                if j2 == j or not m[i][j2]:
                    continue
                corr = combo_scale(combo_mul(alg, left, m[i][j2]), -1)
                m[i2][j2] = combo_add(m[i2][j2], corr)
        # drop row i / column j and the two summands
        diff[d] = [
            [e for j2, e in enumerate(row) if j2 != j]
            for i2, row in enumerate(m)
            if i2 != i
        ]
        if d - 1 in diff:
            diff[d - 1] = [row for j2, row in enumerate(diff[d - 1]) if j2 != j]
        if d + 1 in diff:
            diff[d + 1] = [[e for i2, e in enumerate(row) if i2 != i] for row in diff[d + 1]]
        del terms[d][j]
        del terms[d + 1][i]
        for dd in (d, d - 1, d + 1):
            if dd in diff and (not diff[dd] or not diff[dd][0]):
                del diff[dd]
        for dd in (d, d + 1):
            if dd in terms and not terms[dd]:
                del terms[dd]
    return Complex(alg, {d: tuple(t) for d, t in terms.items()}, diff)


# ---------------------------------------------------------------------------
# Chain endomorphisms, idempotents, Krull-Schmidt decomposition
# ---------------------------------------------------------------------------


class _ChainEnd:
    """The chain-level endomorphism algebra of a complex, in coordinates."""

    def __init__(self, X: Complex):
        self.X = X
        self.coords = _MapCoords(X, X, 0)
        constraint = _chain_constraint_rows(X, X, self.coords)
        if constraint:
            kernel = linalg.nullspace(constraint, self.coords.dim)
        else:
            kernel = [
                [Fraction(int(a == b)) for b in range(self.coords.dim)]
                for a in range(self.coords.dim)
            ]
        self.basis_rows, self.basis_pivots = linalg.rref(kernel)
        self.dim = len(self.basis_rows)
        self._mats = [self.coords.matrices_from_vector(row) for row in self.basis_rows]

    def to_coords(self, vec):
        out = []
        v = list(vec)
        for row, p in zip(self.basis_rows, self.basis_pivots):
            c = v[p]
            out.append(c)
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        if any(v):
            raise DiagnosticError("endomorphism outside computed chain End")
        return out

    def matrices(self, coeffs):
        comps = {}
        for c, mats in zip(coeffs, self._mats):
            if not c:
                continue
            for d, m in mats.items():
                if d not in comps:
                    comps[d] = _zero_matrix(len(self.X.term(d)), len(self.X.term(d)))
                comps[d] = _mat_add(comps[d], _mat_scale(m, c))
        return comps

    def multiply(self, a, b):
        """Coordinates of (a o b) for coordinate vectors a, b."""
        alg = self.X.algebra
        ma = self.matrices(a)
        mb = self.matrices(b)
        comps = {}
        for d in self.X.degrees():
            if d in ma and d in mb:
                comps[d] = _mat_mul(alg, ma[d], mb[d])
        return self.to_coords(self.coords.vector_from_matrices(comps))

    def identity_coords(self):
        comps = {}
        for d, t in self.X.terms.items():
            m = _zero_matrix(len(t), len(t))
            for i, v in enumerate(t):
                m[i][i] = {lazy_path(v): Fraction(1)}
            comps[d] = m
        return self.to_coords(self.coords.vector_from_matrices(comps))


def _structure_constants(end: _ChainEnd):
    n = end.dim
    units = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return [[end.multiply(units[i], units[j]) for j in range(n)] for i in range(n)]


def _radical_rows(table, n):
    """Radical of the algebra via the trace form (characteristic zero)."""
    # L[i] = matrix of left multiplication by basis element i
    left = []
    for i in range(n):
        m = [[table[i][j][k] for j in range(n)] for k in range(n)]
        left.append(m)
    gram = [
        [
            sum(
                sum(left[i][r][c] * left[j][c][r] for c in range(n))
                for r in range(n)
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    return linalg.nullspace(gram, n)


class EndAlgebra:
    """End(X) in the homotopy category: basis, products, radical."""

    def __init__(self, X: Complex):
        self.X = X
        self.hom = HomSpace(X, X, 0)
        self.dimension = self.hom.dimension
        n = self.dimension
        self.table = [
            [
                self.hom.class_coords(self.hom.basis[i].compose(self.hom.basis[j]))
                for j in range(n)
            ]
            for i in range(n)
        ]
        rad = _radical_rows(self.table, n) if n else []
        self.radical_basis = [tuple(v) for v in rad]
        self.radical_dimension = len(rad)
        self.is_local = n - self.radical_dimension == 1

    def multiply(self, a, b):
        n = self.dimension
        out = [Fraction(0)] * n
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                if not b[j]:
                    continue
                prod = self.table[i][j]
                c = a[i] * b[j]
                for k in range(n):
                    out[k] += c * prod[k]
        return out


def end_algebra(X: Complex) -> EndAlgebra:
    return EndAlgebra(X)


# -- idempotent hunting ------------------------------------------------------


def _min_poly(multiply, dim_ambient, ident, elem):
    """Monic minimal polynomial (list of Fractions, low degree first)."""
    rows = [list(ident)]
    power = list(ident)
    while True:
        power = multiply(power, elem) if rows else list(elem)
        # express: does power lie in the span of rows?
        sol = linalg.solve([list(c) for c in zip(*rows)], power)
        if sol is not None:
            coeffs = [-c for c in sol] + [Fraction(1)]
            return coeffs
        rows.append(list(power))


def _poly_eval(multiply, scale_unit, coeffs, elem):
    """Evaluate a polynomial at elem inside the algebra."""
    n = len(elem)
    out = [Fraction(0)] * n
    power = scale_unit(Fraction(1))
    for c in coeffs:
        if c:
            out = [a + c * b for a, b in zip(out, power)]
        power = multiply(power, elem)
    return out


def _splitting_idempotent(multiply, ident, candidates):
    """Search candidates for one whose minimal polynomial splits coprimely."""
    x = sympy.Symbol("x")
    for elem in candidates:
        coeffs = _min_poly(multiply, len(ident), ident, elem)
        poly = sympy.Poly([sympy.Rational(c) for c in reversed(coeffs)], x)
        _, factors = poly.factor_list()
        if len(factors) < 2:
            continue
        f1 = (factors[0][0] ** factors[0][1]).as_expr()
        f2 = sympy.prod((f ** e).as_expr() for f, e in factors[1:])
        s, t, h = sympy.gcdex(f1, f2, x)
        if sympy.simplify(h - 1) != 0:
            continue
        tv = sympy.Poly(sympy.expand(t * f2), x).all_coeffs()
        coeff_list = [Fraction(sympy.Rational(c)) for c in reversed(tv)]

        def scale_unit(c, _ident=ident):
            return [c * u for u in _ident]

        e = _poly_eval(multiply, scale_unit, coeff_list, elem)
        ee = multiply(e, e)
        if ee == e and any(e) and e != ident:
            return e
    return None


def _idempotent_candidates(dim, rng):
    units = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    for u in units:
        yield u
    for i in range(dim):
        for j in range(i + 1, dim):
            yield [a + b for a, b in zip(units[i], units[j])]
            yield [a - b for a, b in zip(units[i], units[j])]
    for _ in range(400):
        yield [Fraction(rng.randint(-3, 3)) for _ in range(dim)]


def _connected_blocks(X: Complex):
    """Partition summand slots by the nonzero-differential adjacency."""
    nodes = [(d, i) for d in X.degrees() for i in range(len(X.term(d)))]
    parent = {n: n for n in nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for d, m in X.diff.items():
        for i, row in enumerate(m):
            for j, entry in enumerate(row):
                if entry:
                    union((d, j), (d + 1, i))
    groups = {}
    for n in nodes:
        groups.setdefault(find(n), []).append(n)
    return sorted(groups.values())


def _restrict(X: Complex, nodes) -> Complex:
    keep = {}
    for d, i in nodes:
        keep.setdefault(d, []).append(i)
    for d in keep:
        keep[d].sort()
    terms = {d: tuple(X.term(d)[i] for i in keep[d]) for d in keep}
    diff = {}
    for d in keep:
        if d + 1 not in keep:
            continue
        m = X.dmatrix(d)
        diff[d] = [[dict(m[i][j]) for j in keep[d]] for i in keep[d + 1]]
    return Complex(X.algebra, terms, diff, check=False)


def _scalar_part(X: Complex, mat, d):
    """Lazy coefficients of a square degree-d endomorphism matrix."""
    t = X.term(d)
    n = len(t)
    return [
        [combo_lazy_coeff(mat[i][j], t[i]) if t[i] == t[j] else Fraction(0) for j in range(n)]
        for i in range(n)
    ]


def _split_by_idempotent(X: Complex, comps):
    """Split X along a strict chain idempotent into two complexes."""
    alg = X.algebra
    incl = {}
    proj = {}
    keep = {}
    for d in X.degrees():
        t = X.term(d)
        n = len(t)
        eta = comps.get(d) or _zero_matrix(n, n)
        # scalar base change grouping eigenvectors per vertex block
        blocks = {}
        for i, v in enumerate(t):
            blocks.setdefault(v, []).append(i)
        P = [[Fraction(0)] * n for _ in range(n)]
        ones = []
        order = []
        for v in sorted(blocks, key=str):
            idxs = blocks[v]
            sub = [[_scalar_entry(eta, i, j, t) for j in idxs] for i in idxs]
            im_basis = _column_space_basis(sub)
            ker_basis = linalg.nullspace(sub, len(idxs)) if sub else []
            cols = im_basis + ker_basis
            if len(cols) != len(idxs):
                raise DiagnosticError("idempotent scalar part failed to split")
            for local_col, colvec in enumerate(cols):
                gi = len(order)
                order.append((v, local_col < len(im_basis)))
                for local_row, i in enumerate(idxs):
                    P[i][gi] = colvec[local_row]
                if local_col < len(im_basis):
                    ones.append(gi)
        Pinv = linalg.invert(P)
        if Pinv is None:
            raise DiagnosticError("scalar base change not invertible")
        S = _scalar_matrix_to_combo(Pinv, t, order)      # S: new <- old
        Sinv = _scalar_matrix_to_combo(P, t, order, flip=True)
        eta_t = _mat_mul(alg, _mat_mul(alg, S, eta), Sinv)
        new_vertices = [v for v, _ in order]
        D = _diag_combo(new_vertices, [k in set(ones) for k in range(n)])
        one = _diag_combo(new_vertices, [True] * n)
        u = _mat_add(
            _mat_mul(alg, D, eta_t),
            _mat_mul(
                alg,
                _mat_sub(one, D),
                _mat_sub(one, eta_t),
            ),
        )
        u_inv = _unipotent_inverse(alg, u, new_vertices)
        V = _mat_mul(alg, u, S)            # V: X -> new coordinates
        V_inv = _mat_mul(alg, Sinv, u_inv)
        keep[d] = (ones, new_vertices)
        incl[d] = V_inv
        proj[d] = V
    return _assemble_split(X, incl, proj, keep)


def _scalar_entry(eta, i, j, t):
    if t[i] != t[j]:
        return Fraction(0)
    return combo_lazy_coeff(eta[i][j], t[i])


def _column_space_basis(rows):
    if not rows:
        return []
    cols = list(zip(*rows))
    _, pivots = linalg.rref(rows)
    return [ [Fraction(x) for x in cols[p]] for p in pivots ]


def _scalar_matrix_to_combo(M, t, order, flip=False):
    """Scalar matrix as path-combo matrix between old/new summand lists."""
    n = len(t)
    out = _zero_matrix(n, n)
    for i in range(n):
        for j in range(n):
            c = M[i][j]
            if c:
                vi = order[i][0] if not flip else t[i]
                vj = t[j] if not flip else order[j][0]
                if vi != vj:
                    raise DiagnosticError("scalar base change mixes vertices")
                out[i][j] = {lazy_path(vi): Fraction(c)}
    return out


def _diag_combo(vertices, flags):
    n = len(vertices)
    out = _zero_matrix(n, n)
    for i, (v, f) in enumerate(zip(vertices, flags)):
        if f:
            out[i][i] = {lazy_path(v): Fraction(1)}
    return out


def _mat_sub(a, b):
    return _mat_add(a, _mat_scale(b, -1))


def _unipotent_inverse(alg, u, vertices):
    n = len(vertices)
    one = _diag_combo(vertices, [True] * n)
    nil = _mat_sub(u, one)
    inv = one
    power = one
    sign = -1
    while True:
        power = _mat_mul(alg, nil, power)
        if _mat_is_zero(power):
            break
        inv = _mat_add(inv, _mat_scale(power, sign))
        sign = -sign
    return inv


def _assemble_split(X, incl, proj, keep):
    alg = X.algebra
    parts = []
    for which in (True, False):
        terms = {}
        sel = {}
        for d, (ones, new_vertices) in keep.items():
            ones_set = set(ones)
            idxs = [
                k
                for k in range(len(new_vertices))
                if (k in ones_set) == which
            ]
            sel[d] = idxs
            if idxs:
                terms[d] = tuple(new_vertices[k] for k in idxs)
        diff = {}
        for d in terms:
            if d + 1 not in terms:
                continue
            big = _mat_mul(
                alg, _mat_mul(alg, proj[d + 1], X.dmatrix(d)), incl[d]
            )
            diff[d] = [[big[i][j] for j in sel[d]] for i in sel[d + 1]]
        parts.append(Complex(alg, terms, diff))
    return parts


def decompose(X: Complex):
    """Indecomposable summands (with multiplicity) of the minimal model."""
    X = minimalize(X)
    if X.is_zero():
        return []
    blocks = _connected_blocks(X)
    if len(blocks) > 1:
        out = []
        for nodes in blocks:
            out.extend(decompose(_restrict(X, nodes)))
        return out
    end = _ChainEnd(X)
    if end.dim == 1:
        return [X]
    table = _structure_constants(end)
    rad_rows = _radical_rows(table, end.dim)
    if end.dim - len(rad_rows) == 1:
        return [X]
    rng = random.Random(96511)
    ident = end.identity_coords()
    e = _splitting_idempotent(
        end.multiply, ident, _idempotent_candidates(end.dim, rng)
    )
    if e is None:
        raise DiagnosticError(
            "no splitting idempotent found; End/rad may be a nontrivial "
            "division algebra"
        )
    comps = end.matrices(e)
    parts = _split_by_idempotent(X, comps)
    out = []
    for part in parts:
        out.extend(decompose(part))
    return out


def _composite_invertible(X: Complex, comps) -> bool:
    for d in X.degrees():
        n = len(X.term(d))
        m = comps.get(d)
        if m is None:
            return n == 0
        scal = _scalar_part(X, m, d)
        if linalg.rank(scal) != n:
            return False
    return True


def _indec_isomorphic(X: Complex, Y: Complex) -> bool:
    if X.dim_vector() != Y.dim_vector():
        return False
    fwd = HomSpace(X, Y, 0)
    bwd = HomSpace(Y, X, 0)
    alg = X.algebra
    for f in fwd.basis:
        for g in bwd.basis:
            comps = {}
            ok = True
            for d in X.degrees():
                comps[d] = _mat_mul(alg, g.component(d), f.component(d))
            if _composite_invertible(X, comps):
                return True
    return False


def is_isomorphic(X: Complex, Y: Complex) -> bool:
    """Isomorphism in the homotopy category, via minimal models."""
    xs = decompose(X)
    ys = decompose(Y)
    if len(xs) != len(ys):
        return False
    remaining = list(ys)
    for x in xs:
        hit = None
        for k, y in enumerate(remaining):
            if _indec_isomorphic(x, y):
                hit = k
                break
        if hit is None:
            return False
        remaining.pop(hit)
    return True


# ---------------------------------------------------------------------------
# Minimal approximations
# ---------------------------------------------------------------------------


def minimal_right_approximation(T, D: Complex) -> ChainMap:
    """Minimal right add(T)-approximation C -> D.

    Assembles one copy of T' per homotopy-class basis element of
    Hom(T', D), then greedily removes copies while the induced maps
    Hom(T'', C) -> Hom(T'', D) stay surjective for every T'' in T.
    """
    alg = D.algebra
    T = [t for t in T if not t.is_zero()]
    targets = {k: HomSpace(t, D, 0) for k, t in enumerate(T)}
    copies = []  # (T index, basis map)
    for k, t in enumerate(T):
        for b in targets[k].basis:
            copies.append((k, b))
    pair_homs = {}
    for k1 in range(len(T)):
        for k2 in range(len(T)):
            pair_homs[(k1, k2)] = HomSpace(T[k1], T[k2], 0)
    # composite class vectors: for test object k1, copy (k2, b):
    # { class(b o u) : u in basis Hom(T_k1, T_k2) }
    comp_vectors = {}
    for ci, (k2, b) in enumerate(copies):
        for k1 in range(len(T)):
            vecs = [
                targets[k1].class_coords(b.compose(u))
                for u in pair_homs[(k1, k2)].basis
            ]
            comp_vectors[(k1, ci)] = vecs

    def surjective(active):
        for k1 in range(len(T)):
            need = targets[k1].dimension
            if need == 0:
                continue
            rows = []
            for ci in active:
                rows.extend(comp_vectors[(k1, ci)])
            if not rows or linalg.rank(rows) < need:
                return False
        return True

    active = list(range(len(copies)))
    for ci in list(active):
        trial = [c for c in active if c != ci]
        if surjective(trial):
            active = trial
    if not active:
        return zero_map(zero_complex(alg), D)
    sources = [T[copies[ci][0]] for ci in active]
    C = direct_sum(sources, algebra=alg)
    comps = {}
    for d in D.degrees():
        rows = len(D.term(d))
        cols = len(C.term(d))
        if rows == 0:
            continue
        m = _zero_matrix(rows, cols)
        off = 0
        for ci in active:
            t = T[copies[ci][0]]
            sub = copies[ci][1].component(d)
            for i in range(rows):
                for j in range(len(t.term(d))):
                    if sub[i][j]:
                        m[i][off + j] = dict(sub[i][j])
            off += len(t.term(d))
        comps[d] = m
    return ChainMap(C, D, comps)


def minimal_left_approximation(T, D: Complex) -> ChainMap:
    """Minimal left add(T)-approximation D -> C (dual construction)."""
    alg = D.algebra
    T = [t for t in T if not t.is_zero()]
    sources = {k: HomSpace(D, t, 0) for k, t in enumerate(T)}
    copies = []
    for k, t in enumerate(T):
        for b in sources[k].basis:
            copies.append((k, b))
    pair_homs = {}
    for k1 in range(len(T)):
        for k2 in range(len(T)):
            pair_homs[(k1, k2)] = HomSpace(T[k1], T[k2], 0)
    test_spaces = {k: HomSpace(D, t, 0) for k, t in enumerate(T)}
    comp_vectors = {}
    for ci, (k2, b) in enumerate(copies):
        for k1 in range(len(T)):
            vecs = [
                test_spaces[k1].class_coords(u.compose(b))
                for u in pair_homs[(k2, k1)].basis
            ]
            comp_vectors[(k1, ci)] = vecs

    def surjective(active):
        for k1 in range(len(T)):
            need = test_spaces[k1].dimension
            if need == 0:
                continue
            rows = []
            for ci in active:
                rows.extend(comp_vectors[(k1, ci)])
            if not rows or linalg.rank(rows) < need:
                return False
        return True

    active = list(range(len(copies)))
    for ci in list(active):
        trial = [c for c in active if c != ci]
        if surjective(trial):
            active = trial
    if not active:
        return zero_map(D, zero_complex(alg))
    parts = [T[copies[ci][0]] for ci in active]
    C = direct_sum(parts, algebra=alg)
    comps = {}
    for d in D.degrees():
        cols = len(D.term(d))
        rows = len(C.term(d))
        if rows == 0:
            continue
        m = _zero_matrix(rows, cols)
        off = 0
        for ci in active:
            t = T[copies[ci][0]]
            sub = copies[ci][1].component(d)
            for i in range(len(t.term(d))):
                for j in range(cols):
                    if sub[i][j]:
                        m[off + i][j] = dict(sub[i][j])
            off += len(t.term(d))
        comps[d] = m
    return ChainMap(D, C, comps)


# ---------------------------------------------------------------------------
# Canonical object registry
# ---------------------------------------------------------------------------


class Category:
    """Working context for K^b(proj A): registry, caches, K-theory."""

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self.objects = []
        self._buckets = {}
        self._shift_memo = {}
        self._homdim_memo = {}
        self._k0_memo = {}
        self.caches = {}

    def cache(self, name: str) -> dict:
        return self.caches.setdefault(name, {})

    def intern(self, X: Complex) -> int:
        """Id of the minimal indecomposable X, inserting if new."""
        key = X.dim_vector()
        bucket = self._buckets.setdefault(key, [])
        for idx in bucket:
            if _indec_isomorphic(self.objects[idx], X):
                return idx
        idx = len(self.objects)
        self.objects.append(X)
        bucket.append(idx)
        return idx

    def register(self, X: Complex):
        """Minimalize, decompose and intern; sorted id tuple (with mult.)."""
        return tuple(sorted(self.intern(part) for part in decompose(X)))

    def complex_of(self, idx: int) -> Complex:
        return self.objects[idx]

    def projective_ids(self):
        return tuple(
            self.intern(projective_complex(self.algebra, v))
            for v in self.algebra.vertices
        )

    def shift_id(self, idx: int, k: int) -> int:
        if k == 0:
            return idx
        key = (idx, k)
        if key not in self._shift_memo:
            self._shift_memo[key] = self.intern(shift(self.objects[idx], k))
        return self._shift_memo[key]

    def shift_ids(self, ids, k: int):
        return tuple(sorted(self.shift_id(i, k) for i in ids))

    def hom_dim_ids(self, a: int, b: int, i: int) -> int:
        key = (a, b, i)
        hit = self._homdim_memo.get(key)
        if hit is None:
            hit = hom_dim(self.objects[a], self.objects[b], i)
            self._homdim_memo[key] = hit
        return hit

    def k0_id(self, idx: int):
        hit = self._k0_memo.get(idx)
        if hit is None:
            hit = k0_class(self.objects[idx], self.algebra)
            self._k0_memo[idx] = hit
        return hit

    def pos_homs_vanish(self, a: int, b: int) -> bool:
        """Hom(A, S^i B) = 0 for all i > 0 (finite window check)."""
        lo, hi = hom_window(self.objects[a], self.objects[b])
        for i in range(max(1, lo), hi + 1):
            if self.hom_dim_ids(a, b, i):
                return False
        return True


def k0_class(X: Complex, algebra=None):
    """Alternating sum of degreewise projective multiplicities."""
    alg = algebra or X.algebra
    vec = [0] * len(alg.vertices)
    for d, t in X.terms.items():
        s = 1 if d % 2 == 0 else -1
        for v in t:
            vec[alg.vertex_index[v]] += s
    return tuple(vec)


# ---------------------------------------------------------------------------
# Randomised homotopy-equivalent presentations (used by soundness tests)
# ---------------------------------------------------------------------------


def random_presentation(X: Complex, rng, inflations=2, twists=6) -> Complex:
    """A non-minimal complex homotopy equivalent to X.

    Adds contractible two-term pieces and conjugates the differential by
    random degreewise automorphisms; hom dimensions must not notice.
    """
    alg = X.algebra
    pieces = [X]
    degrees = X.degrees() or [0]
    for _ in range(inflations):
        v = rng.choice(alg.vertices)
        d = rng.choice(degrees)
        pieces.append(
            Complex(
                alg,
                {d: (v,), d + 1: (v,)},
                {d: [[{lazy_path(v): Fraction(1)}]]},
                check=False,
            )
        )
    Y = direct_sum(pieces)
    terms = {d: list(t) for d, t in Y.terms.items()}
    diff = {d: [[dict(e) for e in row] for row in m] for d, m in Y.diff.items()}
    for _ in range(twists):
        d = rng.choice(sorted(terms))
        t = terms[d]
        if len(t) < 2:
            continue
        i, j = rng.sample(range(len(t)), 2)
        paths = alg.hom_paths(t[j], t[i])
        if not paths:
            continue
        p = rng.choice(paths)
        c = Fraction(rng.randint(1, 3))
        # U = I + c p E_{ij}; replace d by U^{-1} d U degreewise
        n = len(t)
        U = _diag_combo(t, [True] * n)
        U[i][j] = combo_add(U[i][j], {p: c})
        Uinv = _diag_combo(t, [True] * n)
        Uinv[i][j] = combo_add(Uinv[i][j], {p: -c})
        if d in diff:
            diff[d] = _mat_mul(alg, diff[d], U)
        if d - 1 in diff:
            diff[d - 1] = _mat_mul(alg, Uinv, diff[d - 1])
    return Complex(alg, {d: tuple(t) for d, t in terms.items()}, diff)
