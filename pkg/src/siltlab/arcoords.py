"""Symbolic coordinates for the ZZ-type components of the AR quiver.

Objects of the k-th component carry planar coordinates (i, j); the
suspension walks through the r components cyclically and translates by
(r + m, r - n) once per full cycle.  Morphism existence between two
coordinates is a two-clause hammock test.  The module is fully symbolic
and firewalled from the linear-algebra model: no dictionary between
coordinates and explicit complexes is assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .errors import ConventionViolation, ParameterMismatch


@dataclass(frozen=True)
class ZCoord:
    k: int
    i: int
    j: int
    r: int
    n: int
    m: int

    def __post_init__(self):
        if not (self.n > self.r > 0) or self.m < 0:
            raise ConventionViolation("need n > r > 0 and m >= 0")
        if not 0 <= self.k < self.r:
            raise ConventionViolation(f"component index {self.k} outside [0, r)")

    def params(self):
        return (self.r, self.n, self.m)


def z_suspend(z: ZCoord, t: int = 1) -> ZCoord:
    """t-fold suspension: k steps cyclically through the components and
    (i, j) translates by (r + m, r - n) at each wraparound."""
    r, n, m = z.params()
    wraps, k_new = divmod(z.k + t, r)
    return ZCoord(k_new, z.i + wraps * (r + m), z.j + wraps * (r - n), r, n, m)


def z_hom_nonzero(a: ZCoord, b: ZCoord) -> bool:
    """Morphism existence: b in the forward hammock of a (same component,
    both coordinates at least as large), or the desuspension of b in the
    strictly backward hammock."""
    if a.params() != b.params():
        raise ParameterMismatch("coordinates live over different algebras")
    if b.k == a.k and b.i >= a.i and b.j >= a.j:
        return True
    c = z_suspend(b, -1)
    return c.k == a.k and c.i <= a.i - 1 and c.j <= a.j - 1


def _band_nonempty(lower, upper) -> bool:
    """Integers t >= 0 with all lower bounds <= t <= all upper bounds?"""
    lo = 0
    hi = None
    for b in lower:
        lo = max(lo, ceil(b))
    for b in upper:
        hi = floor(b) if hi is None else min(hi, floor(b))
    return hi is None or lo <= hi


def hom_from_some_negative_suspension(m0: ZCoord, b: ZCoord) -> bool:
    """Whether Hom(S^{-s} m0, b) is nonzero for some s > 0.

    Writing s = first + t*r, the source coordinates move linearly in t,
    so each hammock inequality becomes a half line in t; the existential
    reduces to a band intersection per residue and clause.
    """
    if m0.params() != b.params():
        raise ParameterMismatch("coordinates live over different algebras")
    r, n, m = m0.params()
    di, dj = r + m, n - r  # source moves by (-di, +dj) per extra cycle
    for first in range(1, r + 1):
        z0 = z_suspend(m0, -first)
        if z0.k == b.k:
            # forward clause: b.i >= z0.i - t*di and b.j >= z0.j + t*dj
            if _band_nonempty(
                [Fraction(z0.i - b.i, di)], [Fraction(b.j - z0.j, dj)]
            ):
                return True
        c = z_suspend(b, -1)
        if z0.k == c.k:
            # suspended backward clause: c.i <= z.i - 1 and c.j <= z.j - 1
            if _band_nonempty(
                [Fraction(c.j + 1 - z0.j, dj)], [Fraction(z0.i - c.i - 1, di)]
            ):
                return True
    return False


def hom_to_some_positive_suspension(b: ZCoord, m0: ZCoord, k: int) -> bool:
    """Whether Hom(b, S^{k+s} m0) is nonzero for some s > 0."""
    if m0.params() != b.params():
        raise ParameterMismatch("coordinates live over different algebras")
    r, n, m = m0.params()
    di, dj = r + m, n - r  # target moves by (+di, -dj) per extra cycle
    for first in range(1, r + 1):
        z0 = z_suspend(m0, k + first)
        if z0.k == b.k:
            # forward clause from b: z.i >= b.i and z.j >= b.j
            if _band_nonempty(
                [Fraction(b.i - z0.i, di)], [Fraction(z0.j - b.j, dj)]
            ):
                return True
        c0 = z_suspend(z0, -1)
        if c0.k == b.k:
            # z = S c with c.i <= b.i - 1 and c.j <= b.j - 1
            if _band_nonempty(
                [Fraction(c0.j - b.j + 1, dj)], [Fraction(b.i - 1 - c0.i, di)]
            ):
                return True
    return False


def finiteness_survivors(m0: ZCoord, k: int, box) -> list:
    """Coordinates in the box outside the double-hammock exclusion zone.

    ``box`` is (k_values, i_min, i_max, j_min, j_max).  A coordinate is
    excluded when it both receives a map from some negative suspension
    of m0 and maps to some suspension beyond S^k m0.
    """
    k_values, i_min, i_max, j_min, j_max = box
    out = []
    for kc in k_values:
        for i in range(i_min, i_max + 1):
            for j in range(j_min, j_max + 1):
                b = ZCoord(kc, i, j, m0.r, m0.n, m0.m)
                excluded = hom_from_some_negative_suspension(
                    m0, b
                ) and hom_to_some_positive_suspension(b, m0, k)
                if not excluded:
                    out.append(b)
    return out


def survivors_csv(survivors) -> str:
    lines = ["k,i,j"]
    for z in survivors:
        lines.append(f"{z.k},{z.i},{z.j}")
    return "\n".join(lines) + "\n"
