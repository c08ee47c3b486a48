"""Bound quiver algebras with monomial relations.

Fixed conventions used by the whole package:

* paths are stored in word order, ``(a1, a2)`` meaning "a1 then a2" with
  ``target(a1) == source(a2)``; the lazy path at v is ``("e", v)``;
* left modules, P(v) = Lambda e_v; a morphism P(u) -> P(v) is right
  multiplication by an element of e_u Lambda e_v, whose basis we take to
  be the paths from v to u;
* composing morphisms g o f concatenates the representing words as
  ``mul(g.word, f.word) = g.word + f.word`` (endpoints match because g
  runs w -> v and f runs v -> u).

With this choice dim P(v) counts the paths leaving v, and for the linear
quiver 1 -> 2 -> 3 one gets dim P(1) = 3 and a nonzero map P(3) -> P(1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfiniteDimensional, MalformedSpec, ConventionViolation, UnknownVertex

LAZY = "e"


def lazy_path(v):
    return (LAZY, v)


def is_lazy(path) -> bool:
    return len(path) == 2 and path[0] == LAZY


@dataclass(frozen=True)
class QuiverSpec:
    """Vertices, arrows (id, src, tgt) and monomial zero relations."""

    vertices: tuple
    arrows: tuple  # of (id, src, tgt)
    relations: tuple  # of tuples of arrow ids, contiguous forbidden words

    def validate(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise MalformedSpec("duplicate vertex ids")
        seen = set()
        arr = {}
        for aid, src, tgt in self.arrows:
            if aid in seen:
                raise MalformedSpec(f"duplicate arrow id {aid!r}")
            seen.add(aid)
            if src not in vs or tgt not in vs:
                raise MalformedSpec(f"arrow {aid!r} has undeclared endpoint")
            arr[aid] = (src, tgt)
        for rel in self.relations:
            if len(rel) < 2:
                raise MalformedSpec("relation shorter than two arrows")
            for aid in rel:
                if aid not in arr:
                    raise MalformedSpec(f"relation uses unknown arrow {aid!r}")
            for a, b in zip(rel, rel[1:]):
                if arr[a][1] != arr[b][0]:
                    raise MalformedSpec(f"relation {rel} is not a composable path")


class Algebra:
    """A finite-dimensional bound path algebra with explicit path basis."""

    def __init__(self, spec: QuiverSpec):
        spec.validate()
        self.spec = spec
        self.vertices = tuple(spec.vertices)
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrow_source = {}
        self.arrow_target = {}
        for aid, src, tgt in spec.arrows:
            self.arrow_source[aid] = src
            self.arrow_target[aid] = tgt
        self.relations = tuple(tuple(r) for r in spec.relations)
        self._forbidden = set(self.relations)
        self._max_rel_len = max((len(r) for r in self.relations), default=2)
        self.basis = self._enumerate_basis()
        self.dimension = len(self.basis)
        self._basis_set = set(self.basis)
        self._by_endpoints = {}
        for p in self.basis:
            self._by_endpoints.setdefault((self.source(p), self.target(p)), []).append(p)
        self._check_cycles_bounded()

    # -- path structure ----------------------------------------------------

    def source(self, path):
        if is_lazy(path):
            return path[1]
        return self.arrow_source[path[0]]

    def target(self, path):
        if is_lazy(path):
            return path[1]
        return self.arrow_target[path[-1]]

    def _word_ok(self, word) -> bool:
        n = len(word)
        for rel in self._forbidden:
            k = len(rel)
            if k > n:
                continue
            for start in range(n - k + 1):
                if tuple(word[start:start + k]) == rel:
                    return False
        return True

    def _enumerate_basis(self):
        out_arrows = {}
        for aid, src in self.arrow_source.items():
            out_arrows.setdefault(src, []).append(aid)
        for v in out_arrows:
            out_arrows[v].sort(key=str)
        basis = [lazy_path(v) for v in self.vertices]
        frontier = []
        for aid in sorted(self.arrow_source, key=str):
            word = (aid,)
            if self._word_ok(word):
                frontier.append(word)
        # A relation-free path longer than every suffix automaton state
        # count forces a relation-free cycle, hence infinite dimension.
        bound = len(self.vertices) + len(self.arrow_source) * (self._max_rel_len - 1) + 1
        length = 1
        while frontier:
            basis.extend(frontier)
            length += 1
            if length > bound:
                raise InfiniteDimensional(
                    "path enumeration found a relation-free cycle"
                )
            nxt = []
            for word in frontier:
                tail = self.arrow_target[word[-1]]
                for aid in out_arrows.get(tail, ()):
                    new = word + (aid,)
                    if self._word_ok(new[-self._max_rel_len:]):
                        nxt.append(new)
            frontier = nxt
        return tuple(basis)

    def _check_cycles_bounded(self):
        # every directed cycle must run into some relation when iterated
        for p in self.basis:
            if not is_lazy(p) and self.source(p) == self.target(p):
                if self._word_ok(p + p):
                    raise InfiniteDimensional(
                        f"relation-free cycle {p} detected after enumeration"
                    )

    # -- multiplication ----------------------------------------------------

    def mul(self, p, q):
        """Concatenate word p then word q; zero (None) if not composable.

        Morphism composition g o f is ``mul(g.word, f.word)``: the word of
        g ends where the word of f starts under the Hom convention above.
        """
        if is_lazy(p):
            return q if self.source(q) == p[1] else None
        if is_lazy(q):
            return p if self.target(p) == q[1] else None
        if self.target(p) != self.source(q):
            return None
        word = p + q
        return word if word in self._basis_set else None

    def compose_many(self, *paths):
        acc = paths[0]
        for p in paths[1:]:
            acc = self.mul(acc, p)
            if acc is None:
                return None
        return acc

    def paths_from_to(self, src, tgt):
        """Basis paths with the given source and target (word order)."""
        return tuple(self._by_endpoints.get((src, tgt), ()))

    def hom_paths(self, u, v):
        """Basis of Hom(P(u), P(v)): the paths from v to u."""
        if u not in self.vertex_index or v not in self.vertex_index:
            raise UnknownVertex(f"unknown vertex in ({u!r}, {v!r})")
        return self.paths_from_to(v, u)

    def module_dimension(self, v) -> int:
        """k-dimension of the projective module P(v): paths leaving v."""
        if v not in self.vertex_index:
            raise UnknownVertex(f"unknown vertex {v!r}")
        return sum(1 for p in self.basis if self.source(p) == v)

    def cartan_matrix(self):
        """C[u][v] = dim Hom(P(u), P(v)), rows and columns in vertex order."""
        n = len(self.vertices)
        return [
            [len(self.hom_paths(self.vertices[a], self.vertices[b])) for b in range(n)]
            for a in range(n)
        ]

    def path_label(self, path) -> str:
        if is_lazy(path):
            return f"e:{path[1]}"
        return ".".join(str(a) for a in path)

    def path_from_label(self, label: str):
        if label.startswith("e:"):
            v = label[2:]
            v = _coerce_vertex(v, self.vertices)
            return lazy_path(v)
        word = tuple(_coerce_arrow(a, self.arrow_source) for a in label.split("."))
        if word not in self._basis_set:
            raise MalformedSpec(f"path {label!r} is not a basis element")
        return word

    def __repr__(self):
        return (
            f"Algebra({len(self.vertices)} vertices, "
            f"{len(self.arrow_source)} arrows, dim {self.dimension})"
        )


def _coerce_vertex(v, vertices):
    if v in vertices:
        return v
    try:
        iv = int(v)
    except (TypeError, ValueError):
        raise UnknownVertex(f"unknown vertex {v!r}")
    if iv in vertices:
        return iv
    raise UnknownVertex(f"unknown vertex {v!r}")


def _coerce_arrow(a, arrows):
    if a in arrows:
        return a
    raise MalformedSpec(f"unknown arrow {a!r}")


def build_bound_quiver_algebra(spec: QuiverSpec) -> Algebra:
    """Construct the algebra, enumerating its finite path basis."""
    return Algebra(spec)


def make_lambda(r: int, n: int, m: int, relation_windows=None) -> Algebra:
    """The bound cycle-with-tail algebra on n + m vertices.

    The cycle c0 -> c1 -> ... -> c(n-1) -> c0 carries r consecutive
    length-two zero relations whose last window ends at c0, where the tail
    c0 -> t1 -> ... -> tm is attached.  ``relation_windows`` overrides the
    placement with explicit starting arrow indices on the cycle.
    """
    if not (n > r > 0):
        raise ConventionViolation(f"need n > r > 0, got r={r}, n={n}")
    if m < 0:
        raise ConventionViolation(f"need m >= 0, got m={m}")
    vertices = [f"c{i}" for i in range(n)] + [f"t{j}" for j in range(1, m + 1)]
    arrows = [(f"x{i}", f"c{i}", f"c{(i + 1) % n}") for i in range(n)]
    if m >= 1:
        arrows.append(("y1", "c0", "t1"))
        arrows.extend((f"y{j}", f"t{j - 1}", f"t{j}") for j in range(2, m + 1))
    if relation_windows is None:
        relation_windows = [(n - 1 - t) % n for t in range(1, r + 1)]
    if len(relation_windows) != r:
        raise ConventionViolation(f"expected {r} relation windows")
    relations = [(f"x{i % n}", f"x{(i + 1) % n}") for i in relation_windows]
    return Algebra(QuiverSpec(tuple(vertices), tuple(arrows), tuple(relations)))


def make_linear_a(l: int, orientation) -> Algebra:
    """Path algebra of an A_l quiver; orientation entries are 'f' or 'b'."""
    if l < 1:
        raise MalformedSpec("need at least one vertex")
    orientation = list(orientation)
    if len(orientation) != l - 1:
        raise MalformedSpec(f"expected {l - 1} orientation entries, got {len(orientation)}")
    vertices = list(range(1, l + 1))
    arrows = []
    for i, o in enumerate(orientation, start=1):
        key = str(o).lower()
        if key in ("f", "fwd", ">", "forward"):
            arrows.append((f"a{i}_{i + 1}", i, i + 1))
        elif key in ("b", "bwd", "<", "backward"):
            arrows.append((f"a{i + 1}_{i}", i + 1, i))
        else:
            raise MalformedSpec(f"bad orientation entry {o!r}")
    return Algebra(QuiverSpec(tuple(vertices), tuple(arrows), ()))


# -- serialisation ----------------------------------------------------------


def algebra_to_dict(alg: Algebra) -> dict:
    return {
        "schema": "siltlab/1",
        "vertices": list(alg.vertices),
        "arrows": [
            {"id": aid, "src": alg.arrow_source[aid], "tgt": alg.arrow_target[aid]}
            for aid in sorted(alg.arrow_source, key=str)
        ],
        "relations": [list(rel) for rel in alg.relations],
    }


def algebra_from_dict(data: dict) -> Algebra:
    try:
        vertices = tuple(data["vertices"])
        arrows = tuple((a["id"], a["src"], a["tgt"]) for a in data["arrows"])
        relations = tuple(tuple(r) for r in data.get("relations", []))
    except (KeyError, TypeError) as exc:
        raise MalformedSpec(f"bad algebra document: {exc}")
    return Algebra(QuiverSpec(vertices, arrows, relations))


def algebra_to_json(alg: Algebra) -> str:
    return json.dumps(algebra_to_dict(alg), indent=2, sort_keys=True) + "\n"


def algebra_from_json(text: str) -> Algebra:
    return algebra_from_dict(json.loads(text))


# -- path combinations (free Q-linear combinations of basis paths) ----------


def combo(path, coeff=1):
    return {path: Fraction(coeff)}


def combo_add(a, b):
    out = dict(a)
    for p, c in b.items():
        nc = out.get(p, Fraction(0)) + c
        if nc:
            out[p] = nc
        elif p in out:
            del out[p]
    return out


def combo_scale(a, c):
    c = Fraction(c)
    if not c:
        return {}
    return {p: x * c for p, x in a.items()}


def combo_mul(alg: Algebra, a, b):
    out = {}
    for p, cp in a.items():
        for q, cq in b.items():
            pq = alg.mul(p, q)
            if pq is not None:
                nc = out.get(pq, Fraction(0)) + cp * cq
                if nc:
                    out[pq] = nc
                elif pq in out:
                    del out[pq]
    return out


def combo_lazy_coeff(a, v):
    return a.get(lazy_path(v), Fraction(0))
