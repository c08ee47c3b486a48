"""Order complexes and exact integral simplicial homology.

Homology runs over Z via Smith normal form so that torsion can not hide
behind a field computation.  Contractibility is certified by greedy
elementary collapses; when the greedy search gets stuck the verdict
falls back to the homology level.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from . import linalg


@dataclass
class SimplicialComplex:
    """Vertices plus maximal faces; lower faces are generated on demand."""

    vertices: list
    facets: list  # sorted tuples of vertex indices

    def faces_by_dim(self):
        faces = {}
        for facet in self.facets:
            n = len(facet)
            for r in range(1, n + 1):
                store = faces.setdefault(r - 1, set())
                for sub in itertools.combinations(facet, r):
                    store.add(sub)
        return {d: sorted(fs) for d, fs in faces.items()}

    def is_empty(self):
        return not self.facets

    def face_counts(self):
        return {d: len(fs) for d, fs in self.faces_by_dim().items()}


def order_complex(elements, leq) -> SimplicialComplex:
    """Chains of a finite poset given by a strict comparability test.

    ``elements`` is any finite iterable of hashable keys and ``leq(a, b)``
    decides the order; facets are the maximal chains.
    """
    elems = list(elements)
    n = len(elems)
    up_mask = [0] * n
    dn_mask = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and leq(elems[i], elems[j]):
                up_mask[i] |= 1 << j
                dn_mask[j] |= 1 << i
    cover_next = [[] for _ in range(n)]
    for i in range(n):
        m = up_mask[i]
        j = 0
        while m:
            if m & 1 and (up_mask[i] & dn_mask[j]) == 0:
                cover_next[i].append(j)
            m >>= 1
            j += 1
    sources = [i for i in range(n) if dn_mask[i] == 0]
    facets = []

    def extend(chain):
        nxt = cover_next[chain[-1]]
        if not nxt:
            facets.append(tuple(sorted(chain)))
            return
        for j in nxt:
            extend(chain + [j])

    for s in sources:
        extend([s])
    return SimplicialComplex(elems, sorted(set(facets)))


@dataclass
class HomologyProfile:
    """Reduced integral homology: degree -> (free rank, torsion factors)."""

    groups: dict
    face_counts: dict

    def betti(self, d: int) -> int:
        return self.groups.get(d, (0, ()))[0]

    def torsion(self, d: int):
        return self.groups.get(d, (0, ()))[1]

    def is_trivial(self) -> bool:
        return all(b == 0 and not t for b, t in self.groups.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in self.face_counts.items())

    def to_dict(self) -> dict:
        return {
            "groups": {
                str(d): {"rank": b, "torsion": list(t)}
                for d, (b, t) in sorted(self.groups.items())
            },
            "faces": {str(d): n for d, n in sorted(self.face_counts.items())},
            "euler": self.euler_characteristic(),
        }


def _boundary_entries(lower_index, faces):
    entries = {}
    for j, face in enumerate(faces):
        for pos in range(len(face)):
            sub = face[:pos] + face[pos + 1 :]
            i = lower_index[sub]
            entries[(i, j)] = 1 if pos % 2 == 0 else -1
    return entries


def homology(sc: SimplicialComplex) -> HomologyProfile:
    """Reduced homology of the complex, Smith normal form over Z."""
    faces = sc.faces_by_dim()
    counts = {d: len(fs) for d, fs in faces.items()}
    if not faces:
        return HomologyProfile({}, {})
    top = max(faces)
    ranks = {}
    torsions = {}
    # augmentation: rank of the 1 x n_0 all-ones matrix
    ranks[0] = 1 if counts.get(0) else 0
    torsions[0] = []
    for d in range(1, top + 1):
        lower_index = {f: i for i, f in enumerate(faces[d - 1])}
        entries = _boundary_entries(lower_index, faces[d])
        r, tor = linalg.snf_invariants(entries, counts[d - 1], counts[d])
        ranks[d] = r
        torsions[d] = tor
    ranks[top + 1] = 0
    torsions[top + 1] = []
    groups = {}
    for d in range(0, top + 1):
        betti = counts[d] - ranks[d] - ranks[d + 1]
        tor = tuple(torsions[d + 1])
        if betti or tor:
            groups[d] = (betti, tor)
    # Euler characteristic consistency: alternating faces vs reduced betti
    chi_faces = sum((-1) ** d * n for d, n in counts.items())
    chi_betti = sum((-1) ** d * (counts[d] - ranks[d] - ranks[d + 1]) for d in counts)
    assert chi_faces == chi_betti + 1, "euler characteristic mismatch"
    return HomologyProfile(groups, counts)


def reduced_homology_matches_sphere(profile: HomologyProfile, dim: int) -> bool:
    """Does the profile equal the reduced homology of S^dim (dim >= 0)?"""
    expected = {dim: (1, ())}
    return profile.groups == expected


def sphere_check(poset, x) -> dict:
    """Homology-level sphere certificate for the open interval (bottom, x)."""
    i = x if isinstance(x, int) else poset.node_of(x)
    rank = poset.ranks[i]
    strict = poset.down[i] & ~(1 << i) & ~1
    nodes = poset.members(strict)
    if rank == 1:
        verdict = "PASS" if not nodes else "FAIL"
        return {
            "node": poset.keys[i],
            "rank": rank,
            "expected": "S^-1 (empty)",
            "verdict": verdict,
        }
    sc = order_complex(nodes, lambda a, b: poset.leq(a, b))
    profile = homology(sc)
    ok = reduced_homology_matches_sphere(profile, rank - 2)
    return {
        "node": poset.keys[i],
        "rank": rank,
        "expected": f"S^{rank - 2}",
        "homology": profile.to_dict(),
        "verdict": "PASS" if ok else "FAIL",
    }


def _collapse(faces_by_dim):
    """Greedy elementary collapses in lexicographic order.

    Returns the surviving faces.  A face is free when it has exactly one
    coface one dimension up and that coface is maximal; closure of the
    complex makes this the correct freeness test.
    """
    faces = {d: set(fs) for d, fs in faces_by_dim.items()}
    cofaces = {}
    for d, fs in faces.items():
        for f in fs:
            cofaces[f] = set()
    for d, fs in faces.items():
        if d == 0:
            continue
        for f in fs:
            for pos in range(len(f)):
                sub = f[:pos] + f[pos + 1 :]
                cofaces[sub].add(f)
    changed = True
    while changed:
        changed = False
        candidates = sorted(
            (f for f, cf in cofaces.items() if len(cf) == 1),
        )
        for f in candidates:
            cf = cofaces.get(f)
            if cf is None or len(cf) != 1:
                continue
            tau = next(iter(cf))
            if cofaces.get(tau):
                continue
            # remove the free pair (f, tau)
            for face in (f, tau):
                faces[len(face) - 1].discard(face)
                del cofaces[face]
                for pos in range(len(face)):
                    sub = face[:pos] + face[pos + 1 :]
                    if sub in cofaces:
                        cofaces[sub].discard(face)
            changed = True
    return {d: sorted(fs) for d, fs in faces.items() if fs}


def contractibility_check(sc: SimplicialComplex) -> dict:
    """CONTRACTIBLE if greedy collapses reach a point, else ACYCLIC if the
    reduced homology vanishes, else FAIL."""
    if sc.is_empty():
        return {"verdict": "FAIL", "reason": "empty complex"}
    faces = sc.faces_by_dim()
    core = _collapse(faces)
    total = sum(len(fs) for fs in core.values())
    if total == 1 and 0 in core:
        return {
            "verdict": "CONTRACTIBLE",
            "collapsed_to": list(core[0][0]),
            "faces_before": sum(len(fs) for fs in faces.values()),
        }
    core_profile = homology(
        SimplicialComplex(sc.vertices, _maximal_faces(core))
    )
    if core_profile.is_trivial():
        return {
            "verdict": "ACYCLIC",
            "core_faces": {str(d): len(fs) for d, fs in core.items()},
            "homology": core_profile.to_dict(),
        }
    return {
        "verdict": "FAIL",
        "homology": core_profile.to_dict(),
    }


def _maximal_faces(faces_by_dim):
    all_faces = set()
    for fs in faces_by_dim.values():
        all_faces.update(fs)
    maximal = [
        f for f in all_faces if not any(g != f and set(f) < set(g) for g in all_faces)
    ]
    return sorted(maximal)


def homology_to_json(profile: HomologyProfile) -> str:
    return json.dumps(profile.to_dict(), indent=2, sort_keys=True) + "\n"
