"""K-theory pairings, central charges and the embedding into stability data.

Charges are group homomorphisms K_0 -> C stored as row vectors of exact
Gaussian rationals against the fixed basis of projective classes.  A
silting pair (M, M') gets the vertex charge that sends the j-th heart
simple to i when M_j lies in M' and to -1 otherwise; points of the pairs
complex (chains with convex weights) map to the heart of the first
positively weighted pair together with the weighted sum of vertex
charges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidChain, InvalidWeights, NotSilting, SingularEuler
from .homotopy import Category, Complex, hom_window
from .silting import SiltingPair, is_silting, pair_leq, torsion_simple_labels
from . import linalg


@dataclass(frozen=True)
class ChargeFunctional:
    """Row vector of (re, im) pairs against the projective K_0 basis."""

    values: tuple  # of (Fraction, Fraction)

    def __call__(self, k0_vector):
        re = sum(r * c for (r, _), c in zip(self.values, k0_vector))
        im = sum(i * c for (_, i), c in zip(self.values, k0_vector))
        return re, im

    def __add__(self, other):
        return ChargeFunctional(
            tuple(
                (r1 + r2, i1 + i2)
                for (r1, i1), (r2, i2) in zip(self.values, other.values)
            )
        )

    def scale(self, c):
        c = Fraction(c)
        return ChargeFunctional(tuple((r * c, i * c) for r, i in self.values))

    def to_jsonable(self):
        return [[str(r), str(i)] for r, i in self.values]


@dataclass(frozen=True)
class StabilityPoint:
    heart: tuple  # silting object ids
    charge: ChargeFunctional

    def to_jsonable(self):
        return {"heart": list(self.heart), "charge": self.charge.to_jsonable()}


@dataclass(frozen=True)
class CWPoint:
    """A chain of silting pairs with a convex weight vector."""

    chain: tuple  # of SiltingPair, strictly ascending
    weights: tuple  # of Fraction, nonnegative, summing to one

    def normalized(self) -> "CWPoint":
        kept = [(p, w) for p, w in zip(self.chain, self.weights) if w]
        return CWPoint(tuple(p for p, _ in kept), tuple(w for _, w in kept))


def euler_matrix(cat: Category, M):
    """E[a][b] = sum_i (-1)^i dim Hom(M_a, S^i M_b) over the hom window."""
    M = tuple(sorted(M))
    out = []
    for a in M:
        row = []
        for b in M:
            lo, hi = hom_window(cat.complex_of(a), cat.complex_of(b))
            val = sum(
                (-1) ** i * cat.hom_dim_ids(a, b, i) for i in range(lo, hi + 1)
            )
            row.append(val)
        out.append(row)
    return out


def simple_classes(cat: Category, M):
    """K_0 classes of the heart simples: the dual basis to the summand
    classes under the Euler pairing; integral for silting objects."""
    M = tuple(sorted(M))
    if not is_silting(cat, M):
        raise NotSilting("simple classes need a silting object")
    cartan = cat.algebra.cartan_matrix()
    A = [list(col) for col in zip(*[cat.k0_id(i) for i in M])]
    # chi(x, y) = x^T C y; solve (A^T C) S = I
    AtC = linalg.matmul([list(row) for row in zip(*A)], cartan)
    S = linalg.invert(AtC)
    if S is None:
        raise SingularEuler("Euler pairing against the summands is singular")
    cols = []
    for j in range(len(M)):
        col = tuple(S[i][j] for i in range(len(M)))
        if any(x.denominator != 1 for x in col):
            raise SingularEuler("simple classes are not integral")
        cols.append(tuple(int(x) for x in col))
    return cols


def vertex_charge(cat: Category, pair: SiltingPair) -> StabilityPoint:
    """Charge of a silting pair: heart simples dual to subset summands go
    to i, the torsion-label simples go to -1."""
    pair = SiltingPair.of(pair.ambient, pair.sub)
    memo = cat.cache("vertex_charge")
    if pair in memo:
        return memo[pair]
    M = pair.ambient
    simples = simple_classes(cat, M)
    torsion = set(torsion_simple_labels(pair))
    n = len(M)
    cartan = cat.algebra.cartan_matrix()
    A = [list(col) for col in zip(*[cat.k0_id(i) for i in M])]
    AtC = linalg.matmul([list(row) for row in zip(*A)], cartan)
    # value row vector on the simple basis: -1 at torsion labels, i elsewhere
    re_s = [Fraction(-1) if j in torsion else Fraction(0) for j in range(n)]
    im_s = [Fraction(0) if j in torsion else Fraction(1) for j in range(n)]
    # convert to the projective basis: w = c . S^{-1} = c . (A^T C)
    re = [
        sum(re_s[j] * AtC[j][v] for j in range(n)) for v in range(n)
    ]
    im = [
        sum(im_s[j] * AtC[j][v] for j in range(n)) for v in range(n)
    ]
    point = StabilityPoint(
        heart=M, charge=ChargeFunctional(tuple(zip(re, im)))
    )
    memo[pair] = point
    return point


def validate_point(cat: Category, point: StabilityPoint) -> dict:
    """PASS iff every heart-simple class lands strictly inside the upper
    half plane closed along the negative real axis."""
    failures = []
    for j, cls in enumerate(simple_classes(cat, point.heart)):
        re, im = point.charge(cls)
        inside = im > 0 or (im == 0 and re < 0)
        if not inside:
            failures.append({"simple": j, "value": [str(re), str(im)]})
    return {"verdict": "PASS" if not failures else "FAIL", "failures": failures}


def embed_cw_point(cat: Category, point: CWPoint) -> StabilityPoint:
    """Map a weighted chain of silting pairs to heart-plus-charge data."""
    chain, weights = point.chain, point.weights
    if len(chain) != len(weights) or not chain:
        raise InvalidChain("chain and weight lengths differ or are empty")
    for q, p in zip(chain, chain[1:]):
        if q == p or not pair_leq(cat, q, p):
            raise InvalidChain("chain entries must strictly ascend in the pair order")
    weights = tuple(Fraction(w) for w in weights)
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise InvalidWeights("weights must be nonnegative and sum to one")
    first = next((k for k, w in enumerate(weights) if w > 0), None)
    if first is None:
        raise InvalidWeights("at least one weight must be positive")
    charge = None
    for p, w in zip(chain, weights):
        if not w:
            continue
        piece = vertex_charge(cat, p).charge.scale(w)
        charge = piece if charge is None else charge + piece
    return StabilityPoint(heart=chain[first].ambient, charge=charge)


def injectivity_probe(cat: Category, points) -> dict:
    """Distinct normalized CW points must have distinct images."""
    seen = {}
    collisions = []
    distinct = 0
    for point in points:
        norm = point.normalized()
        key = tuple((p, w) for p, w in zip(norm.chain, norm.weights))
        image = embed_cw_point(cat, norm)
        ikey = (image.heart, image.charge.values)
        prev = seen.get(ikey)
        if prev is None:
            seen[ikey] = key
            distinct += 1
        elif prev != key:
            collisions.append({"first": str(prev), "second": str(key)})
    return {
        "points": distinct,
        "collisions": collisions,
        "pass": not collisions,
    }


# ---------------------------------------------------------------------------
# Window classification
# ---------------------------------------------------------------------------

CLASSIFY_COLUMNS = (
    "label",
    "in_aisle",
    "in_coaisle",
    "heart",
    "heart_simple",
    "silting_summand",
    "cot_aisle_window",
)


def classify_objects(cat: Category, M, objects) -> list:
    """Tag window objects against the t-structure of a silting object.

    ``objects`` is a list of (label, Complex).  Aisle and co-aisle tags
    are exact (the hom window is sound); the co-t-structure aisle tag
    only tests left orthogonality against aisle objects in the given
    window, hence the name cot_aisle_window: UNSOUND-BEYOND-WINDOW.
    """
    M = tuple(sorted(M))
    if not is_silting(cat, M):
        raise NotSilting("classification needs a silting object")
    ids = []
    for label, X in objects:
        parts = cat.register(X)
        ids.append((label, parts))
    rows = []
    aisle_members = []
    for label, parts in ids:
        in_aisle = all(
            cat.pos_homs_vanish(m, x) for m in M for x in parts
        )
        in_coaisle = all(
            _nonpos_homs_vanish(cat, m, x) for m in M for x in parts
        )
        shifted = [cat.shift_id(x, -1) for x in parts]
        heart = in_aisle and all(
            _nonpos_homs_vanish(cat, m, x) for m in M for x in shifted
        )
        hs = False
        if heart and len(parts) == 1:
            hits = [
                (a, cat.hom_dim_ids(m, parts[0], 0))
                for a, m in enumerate(M)
            ]
            nonzero = [(a, d) for a, d in hits if d]
            hs = len(nonzero) == 1 and nonzero[0][1] == 1
        silt = len(parts) == 1 and parts[0] in M
        if in_aisle:
            aisle_members.append(parts)
        rows.append(
            {
                "label": label,
                "parts": parts,
                "in_aisle": in_aisle,
                "in_coaisle": in_coaisle,
                "heart": heart,
                "heart_simple": hs,
                "silting_summand": silt,
            }
        )
    aisle_ids = sorted({x for parts in aisle_members for x in parts})
    for row in rows:
        row["cot_aisle_window"] = all(
            _nonneg_homs_vanish(cat, x, y) for x in row["parts"] for y in aisle_ids
        )
    return rows


def _nonpos_homs_vanish(cat, m, x) -> bool:
    lo, hi = hom_window(cat.complex_of(m), cat.complex_of(x))
    for i in range(lo, min(hi, 0) + 1):
        if cat.hom_dim_ids(m, x, i):
            return False
    return True


def _nonneg_homs_vanish(cat, x, y) -> bool:
    lo, hi = hom_window(cat.complex_of(x), cat.complex_of(y))
    for i in range(max(lo, 0), hi + 1):
        if cat.hom_dim_ids(x, y, i):
            return False
    return True


def classification_tsv(rows) -> str:
    out = ["\t".join(CLASSIFY_COLUMNS)]
    for row in rows:
        out.append(
            "\t".join(
                [str(row["label"])]
                + [
                    ("1" if row[c] else "0")
                    for c in CLASSIFY_COLUMNS
                    if c != "label"
                ]
            )
        )
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Window generators for linear A_n quivers (interval modules and shifts)
# ---------------------------------------------------------------------------


def interval_module_complex(algebra, i, j) -> Complex:
    """Projective presentation of the interval module supported on i..j
    for the linear quiver 1 -> 2 -> ... -> n."""
    n = len(algebra.vertices)
    if not 1 <= i <= j <= n:
        raise ValueError(f"bad interval [{i},{j}]")
    if j == n:
        return Complex(algebra, {0: (i,)}, {}, check=False)
    paths = algebra.hom_paths(j + 1, i)
    if len(paths) != 1:
        raise ValueError("expected a unique path for the presentation")
    return Complex(
        algebra,
        {-1: (j + 1,), 0: (i,)},
        {-1: [[{paths[0]: Fraction(1)}]]},
    )


def a3_grid_object(algebra, x, row) -> Complex:
    """Object of the standard derived picture of the linear A_3 quiver.

    The module category occupies the triangle with simples S(3), S(2),
    S(1) at bottom positions x = 6, 7, 8, projectives up the left edge,
    and the suspension acts by (x, row) -> (x + 2, 2 - row).
    """
    from .homotopy import shift as _shift

    base = {
        (6, 0): (3, 3),
        (7, 0): (2, 2),
        (8, 0): (1, 1),
        (6.5, 1): (2, 3),
        (7.5, 1): (1, 2),
        (7, 2): (1, 3),
    }
    if row == 1:
        for bx, ival in ((6.5, (2, 3)), (7.5, (1, 2))):
            steps = (x - bx) / 2
            if steps == int(steps):
                t = int(steps)
                return _shift(interval_module_complex(algebra, *ival), t)
        raise ValueError(f"bad row-1 position {x}")
    # rows 0 and 2: suspension flips the row and moves x by two
    for (bx, brow), ival in base.items():
        if brow == 1:
            continue
        for t_parity, target_row in ((0, brow), (1, 2 - brow)):
            diff = x - bx - 2 * t_parity
            if diff % 4 == 0 and target_row == row:
                t = t_parity + diff // 2
                return _shift(interval_module_complex(algebra, *ival), t)
    raise ValueError(f"bad position ({x}, {row})")


def a3_window_objects(algebra, x_min=0, x_max=14):
    """Labelled grid objects covering the drawn window of the A_3 picture."""
    out = []
    for row in (0, 1, 2):
        xs = (
            [x + 0.5 for x in range(int(x_min), int(x_max))]
            if row == 1
            else list(range(int(x_min), int(x_max) + 1))
        )
        for x in xs:
            label = f"{x:g},{row}"
            out.append((label, a3_grid_object(algebra, x, row)))
    return out


def point_to_json(point: StabilityPoint) -> str:
    return json.dumps(point.to_jsonable(), indent=2, sort_keys=True) + "\n"


def sample_cw_points(cat: Category, poset, pairs, n: int, seed: int):
    """Seeded sample of weighted maximal chains of a pairs poset.

    ``poset`` is the structural poset, ``pairs`` maps node keys to
    silting pairs; chains walk cover edges upward from a random rank-one
    node, weights are random convex combinations with occasional zeros.
    """
    import random

    rng = random.Random(seed)
    starts = [i for i in range(1, poset.n) if poset.ranks[i] == 1]
    out = []
    for _ in range(n):
        i = rng.choice(starts)
        chain = [i]
        while True:
            ups = poset.members(poset.cover_up[chain[-1]])
            ups = [u for u in ups if u != 0]
            if not ups:
                break
            chain.append(rng.choice(ups))
        draws = [rng.randint(0, 4) for _ in chain]
        if not any(draws):
            draws[rng.randrange(len(draws))] = 1
        total = sum(draws)
        weights = tuple(Fraction(d, total) for d in draws)
        out.append(
            CWPoint(tuple(pairs[poset.keys[i]] for i in chain), weights)
        )
    return out


def verify_real_value(cat: Category, poset, pairs) -> dict:
    """Exhaustive check: for comparable pairs q <= p and every torsion
    label j of q, the charge of p is real on the j-th simple of q."""
    checked = 0
    violations = []
    key_pairs = [(i, pairs[poset.keys[i]]) for i in range(1, poset.n)]
    for i, q in key_pairs:
        simples = simple_classes(cat, q.ambient)
        labels = torsion_simple_labels(q)
        ups = [j for j in poset.members(poset.up[i]) if j != i and j != 0]
        for jdx in ups:
            p = pairs[poset.keys[jdx]]
            charge = vertex_charge(cat, p).charge
            for lab in labels:
                checked += 1
                _, im = charge(simples[lab])
                if im != 0:
                    violations.append(
                        {
                            "lower": poset.keys[i],
                            "upper": poset.keys[jdx],
                            "simple": lab,
                        }
                    )
    return {"checked": checked, "violations": violations, "pass": not violations}
