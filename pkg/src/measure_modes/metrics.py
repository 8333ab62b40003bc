"""Total-variation and Prohorov distances, plus finite F-/S-gauges."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .intervals import ZERO, PiecewiseFunc, Region, as_fraction, piece_regions
from .measures import Measure, integrate, measure_of
from .rational import Q

PROHOROV_MAX_ATOMS = 15


class AtomicOnlyError(ValueError):
    """Prohorov distance is only computed for small purely atomic measures."""


def _density_diff_cells(a: Measure, b: Measure) -> list[tuple[Q, Q]]:
    crit = sorted(set(a.density.breakpoints) | set(b.density.breakpoints))
    return [(hi - lo, a.density(lo) - b.density(lo)) for lo, hi in zip(crit, crit[1:])]


def tv_distance(a: Measure, b: Measure) -> Q:
    """``sup_A |a(A) - b(A)|``, as the positive part of ``a - b``."""
    locs = {x for x, _ in a.atoms} | {x for x, _ in b.atoms}
    pos = ZERO
    for x in locs:
        d = a.atom_mass(x) - b.atom_mass(x)
        if d > 0:
            pos += d
    for width, d in _density_diff_cells(a, b):
        if d > 0:
            pos += d * width
    return pos


def hahn_set(a: Measure, b: Measure) -> Region:
    """A region on which ``a - b`` attains its total variation."""
    comps = []
    locs = {x for x, _ in a.atoms} | {x for x, _ in b.atoms}
    for x in locs:
        if a.atom_mass(x) > b.atom_mass(x):
            comps.append((x, x, True, True))
    crit = sorted(set(a.density.breakpoints) | set(b.density.breakpoints))
    for lo, hi in zip(crit, crit[1:]):
        if a.density(lo) > b.density(lo):
            comps.append((lo, hi, False, False))
    # open cells carry the density part; b-heavy atoms inside them are cut out
    region = Region(comps)
    for x, m in b.atoms:
        if m > a.atom_mass(x) and region.contains(x):
            region = region - Region.point(x)
    return region


def tv_brute_oracle(a: Measure, b: Measure, level: int) -> Q:
    """Max of ``|a(A) - b(A)|`` over every region with endpoints on the grid ``i / 2**level``.

    Any such region is a union of grid points and open grid cells, so the
    maximum is the larger of the summed positive and negative piece
    differences. Equals ``tv_distance`` when all atoms and breakpoints sit
    on the grid.
    """
    if not 0 <= level <= 10:
        raise ValueError("oracle level must be in 0..10")
    n = 2**level
    crit = [Q(i, n) for i in range(n + 1)]
    pos = neg = ZERO
    for piece in piece_regions(crit):
        d = measure_of(a, piece) - measure_of(b, piece)
        if d > 0:
            pos += d
        else:
            neg -= d
    return max(pos, neg)


# -- Prohorov ---------------------------------------------------------------------


def _atomic_support(m: Measure) -> tuple[list[Q], list[Q]]:
    merged: dict[Q, Q] = {}
    for x, mass in m.atoms:
        if mass:
            merged[x] = merged.get(x, ZERO) + mass
    xs = sorted(merged)
    return xs, [merged[x] for x in xs]


def prohorov_distance(a: Measure, b: Measure, backend: str | None = None) -> Q:
    """Exact Prohorov distance between two purely atomic measures.

    For each direction, every nonempty subset ``A`` of the first measure's
    support gives the least ``ε`` with ``a(A) <= b(A^ε) + ε`` (``A^ε`` the
    open ε-neighbourhood); the distance is the largest such threshold over
    both directions. Subsets of the joint support that add points outside
    ``supp a`` only enlarge ``A^ε`` without adding mass, so they are skipped.
    """
    if not (a.is_atomic and b.is_atomic):
        raise AtomicOnlyError("prohorov_distance is an atomic-only operation")
    xa, ma = _atomic_support(a)
    xb, mb = _atomic_support(b)
    if len(set(xa) | set(xb)) > PROHOROV_MAX_ATOMS:
        raise AtomicOnlyError(
            f"joint support exceeds {PROHOROV_MAX_ATOMS} atoms (atomic-only operation)"
        )
    ints, denom = kernels.scale_to_integers(xa + ma + xb + mb)
    na, nb = len(xa), len(xb)
    ixa, ima = ints[:na], ints[na:2 * na]
    ixb, imb = ints[2 * na:2 * na + nb], ints[2 * na + nb:]
    t1 = kernels.prohorov_one_sided(ixa, ima, ixb, imb, backend=backend)
    t2 = kernels.prohorov_one_sided(ixb, imb, ixa, ima, backend=backend)
    return Q(max(t1, t2), denom)


def prohorov_feasible(a: Measure, b: Measure, eps: Q) -> bool:
    """Direct check of both Prohorov inequalities at one ``ε`` (for cross-checks)."""
    from itertools import combinations

    xa, ma = _atomic_support(a)
    xb, mb = _atomic_support(b)
    for xs, ms, ys, ns in ((xa, ma, xb, mb), (xb, mb, xa, ma)):
        for r in range(1, len(xs) + 1):
            for idx in combinations(range(len(xs)), r):
                mass = sum((ms[i] for i in idx), ZERO)
                near = sum((ns[j] for j, y in enumerate(ys)
                            if min(abs(y - xs[i]) for i in idx) < eps), ZERO)
                if mass > near + eps:
                    return False
    return True


# -- gauges ------------------------------------------------------------------------


class GaugeKind(str, enum.Enum):
    F = "F"
    S = "S"


@dataclass(frozen=True)
class GaugeSpec:
    """Finite F-gauge (test functions) or S-gauge (test sets) around ``center``."""

    kind: GaugeKind
    family: tuple[PiecewiseFunc, ...] | tuple[Region, ...]
    epsilon: Q
    center: Measure

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GaugeKind(self.kind))
        object.__setattr__(self, "family", tuple(self.family))
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        if not self.family:
            raise ValueError("gauge family must be nonempty")
        if self.epsilon <= 0:
            raise ValueError("gauge epsilon must be positive")
        want = PiecewiseFunc if self.kind is GaugeKind.F else Region
        if not all(isinstance(x, want) for x in self.family):
            raise TypeError(f"{self.kind.value}-gauge family must hold {want.__name__} objects")


@dataclass(frozen=True)
class GaugeVerdict:
    contained: bool
    margin: Q
    worst_index: int
    worst_deviation: Q


def gauge_contains(g: GaugeSpec, candidate: Measure) -> GaugeVerdict:
    """Whether ``candidate`` lies in the basic neighbourhood; margin = ε − worst deviation."""
    devs = []
    for obj in g.family:
        if g.kind is GaugeKind.F:
            devs.append(abs(integrate(candidate, obj) - integrate(g.center, obj)))
        else:
            devs.append(abs(measure_of(candidate, obj) - measure_of(g.center, obj)))
    worst = max(range(len(devs)), key=devs.__getitem__)
    margin = g.epsilon - devs[worst]
    return GaugeVerdict(margin > 0, margin, worst, devs[worst])


def mass_deviation(a: Measure, b: Measure, regions: Sequence[Region]) -> Q:
    return max((abs(measure_of(a, r) - measure_of(b, r)) for r in regions), default=ZERO)


__all__ = [
    "AtomicOnlyError",
    "GaugeKind",
    "GaugeSpec",
    "GaugeVerdict",
    "PROHOROV_MAX_ATOMS",
    "gauge_contains",
    "hahn_set",
    "mass_deviation",
    "prohorov_distance",
    "prohorov_feasible",
    "tv_brute_oracle",
    "tv_distance",
]

