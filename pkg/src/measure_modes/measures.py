"""Probability measures on [0, 1]: finitely many atoms plus a piecewise-constant density."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .intervals import (
    ONE,
    ZERO,
    FuncKind,
    PiecewiseFunc,
    RationalLike,
    Region,
    as_fraction,
)
from .rational import Q


class InvalidMeasure(ValueError):
    """Raised when a measure violates its invariants.

    ``violations`` holds ``(invariant, message)`` pairs; ``problems`` just the messages.
    """

    def __init__(self, violations: list[tuple[str, str]]) -> None:
        super().__init__("; ".join(msg for _, msg in violations))
        self.violations = violations
        self.problems = [msg for _, msg in violations]
        self.invariants = sorted({code for code, _ in violations})


ZERO_DENSITY = PiecewiseFunc.simple([0, 1], [0])


@dataclass(frozen=True)
class Measure:
    atoms: tuple[tuple[Q, Q], ...] = ()
    density: PiecewiseFunc = field(default=ZERO_DENSITY)

    def __post_init__(self) -> None:
        atoms = tuple((as_fraction(x), as_fraction(m)) for x, m in self.atoms)
        object.__setattr__(self, "atoms", tuple(sorted(atoms)))
        if self.density.kind is not FuncKind.SIMPLE:
            raise ValueError("density must be a Simple (piecewise-constant) function")

    # -- constructors -------------------------------------------------------
    @classmethod
    def dirac(cls, x: RationalLike) -> Measure:
        x = as_fraction(x)
        if not 0 <= x <= 1:
            raise ValueError("Dirac location outside [0,1]")
        return cls(((x, ONE),))

    @classmethod
    def uniform(cls, a: RationalLike = 0, b: RationalLike = 1) -> Measure:
        a, b = as_fraction(a), as_fraction(b)
        if not 0 <= a < b <= 1:
            raise ValueError("uniform needs 0 <= a < b <= 1")
        bps = sorted({ZERO, a, b, ONE})
        vals = [1 / (b - a) if a <= lo < b else ZERO for lo in bps[:-1]]
        return cls((), PiecewiseFunc.simple(bps, vals))

    @classmethod
    def square_wave(cls, n: int) -> Measure:
        """Density 2 on ``[k/n, k/n + 1/(2n))`` for ``k = 0..n-1``, 0 elsewhere."""
        if n < 1:
            raise ValueError("square wave index must be >= 1")
        bps = [Q(j, 2 * n) for j in range(2 * n + 1)]
        vals = [Q(2) if j % 2 == 0 else ZERO for j in range(2 * n)]
        return cls((), PiecewiseFunc.simple(bps, vals))

    @classmethod
    def atomic(cls, pairs: Iterable[tuple[RationalLike, RationalLike]]) -> Measure:
        return cls(tuple((as_fraction(x), as_fraction(m)) for x, m in pairs))

    # -- structure ----------------------------------------------------------
    @property
    def is_atomic(self) -> bool:
        return all(v == 0 for v in self.density.values)

    @cached_property
    def _cumulative(self) -> tuple[Q, ...]:
        """Density mass of ``[0, b_k]`` at each density breakpoint."""
        out, acc, bps = [ZERO], ZERO, self.density.breakpoints
        for i, v in enumerate(self.density.values):
            acc += v * (bps[i + 1] - bps[i])
            out.append(acc)
        return tuple(out)

    def density_cdf(self, x: Q) -> Q:
        """``∫_0^x p``."""
        bps = self.density.breakpoints
        k = min(bisect_right(bps, x), len(bps) - 1) - 1
        return self._cumulative[k] + self.density.values[k] * (x - bps[k])

    def atom_mass(self, x: Q) -> Q:
        return sum((m for loc, m in self.atoms if loc == x), ZERO)

    def structure_points(self) -> set[Q]:
        """Atom locations and density breakpoints."""
        return {x for x, _ in self.atoms} | set(self.density.breakpoints)

    def total_mass(self) -> Q:
        return sum((m for _, m in self.atoms), ZERO) + density_integral(self.density, ZERO, ONE)

    def canonical(self) -> Measure:
        """Merge coincident atoms, drop null atoms, and merge equal density cells."""
        merged: dict[Q, Q] = {}
        for x, m in self.atoms:
            merged[x] = merged.get(x, ZERO) + m
        atoms = tuple((x, m) for x, m in sorted(merged.items()) if m != 0)
        bps, vals = [self.density.breakpoints[0]], []
        for i, v in enumerate(self.density.values):
            if vals and vals[-1] == v:
                bps[-1] = self.density.breakpoints[i + 1]
            else:
                vals.append(v)
                bps.append(self.density.breakpoints[i + 1])
        return Measure(atoms, PiecewiseFunc.simple(bps, vals))

    def restrict(self, region: Region) -> Measure:
        """``A -> m(A ∩ region)``; a sub-probability, so not validated."""
        atoms = tuple((x, m) for x, m in self.atoms if region.contains(x))
        crit = sorted(set(self.density.breakpoints) | region.endpoints())
        vals = []
        for lo, hi in zip(crit, crit[1:]):
            inside = region.contains((lo + hi) / 2)
            vals.append(self.density(lo) if inside else ZERO)
        return Measure(atoms, PiecewiseFunc.simple(crit, vals))

    def scaled(self, w: Q) -> Measure:
        return Measure(
            tuple((x, w * m) for x, m in self.atoms),
            PiecewiseFunc.simple(self.density.breakpoints, [w * v for v in self.density.values]),
        )

    def __str__(self) -> str:
        parts = [f"{m}*δ({x})" for x, m in self.atoms]
        if not self.is_atomic:
            bps = self.density.breakpoints
            cells = [f"{v} on [{bps[i]},{bps[i + 1]})" for i, v in enumerate(self.density.values) if v]
            parts.append("density{" + ", ".join(cells) + "}")
        return " + ".join(parts) if parts else "0"


def measure_violations(m: Measure) -> list[tuple[str, str]]:
    """Every violated invariant as ``(name, message)``; empty when ``m`` is valid."""
    out = []
    locs = [x for x, _ in m.atoms]
    if len(set(locs)) != len(locs):
        dups = sorted({x for x in locs if locs.count(x) > 1})
        out.append(("distinct_atoms", "duplicate atom at " + ", ".join(str(x) for x in dups)))
    for x, mass in m.atoms:
        if not 0 <= x <= 1:
            out.append(("atom_in_unit_interval", f"atom location {x} outside [0,1]"))
        if mass < 0:
            out.append(("nonnegative_mass", f"negative atom mass {mass} at {x}"))
    neg = [v for v in m.density.values if v < 0]
    if neg:
        out.append(("nonnegative_density", f"negative density value {neg[0]}"))
    total = m.total_mass()
    if total != 1:
        out.append(("total_mass_one", f"total mass {total} != 1"))
    return out


def measure_problems(m: Measure) -> list[str]:
    return [msg for _, msg in measure_violations(m)]


def measure_validate(m: Measure) -> Measure:
    """Return ``m`` unchanged if it is a probability measure, else raise InvalidMeasure."""
    bad = measure_violations(m)
    if bad:
        raise InvalidMeasure(bad)
    return m


def density_integral(p: PiecewiseFunc, lo: Q, hi: Q) -> Q:
    """Lebesgue integral of a Simple function over ``[lo, hi]``."""
    if hi <= lo:
        return ZERO
    bps = p.breakpoints
    total = ZERO
    for i in range(max(bisect_right(bps, lo) - 1, 0), len(p.values)):
        a = bps[i]
        if a >= hi:
            break
        v = p.values[i]
        if v:
            total += v * (min(bps[i + 1], hi) - max(a, lo))
    return total


def measure_of(m: Measure, a: Region) -> Q:
    total = ZERO
    ivs = a.intervals
    for x, mass in m.atoms:
        if mass:
            for iv in ivs:
                if iv.contains(x):
                    total += mass
                    break
    if not m.is_atomic:
        for iv in ivs:
            if iv.hi > iv.lo:
                total += m.density_cdf(iv.hi) - m.density_cdf(iv.lo)
    return total


def partition_masses(m: Measure, regions: Sequence[Region]) -> list[Q]:
    """``[m(r) for r in regions]`` for pairwise disjoint regions, in one sweep."""
    out = [ZERO] * len(regions)
    tagged = sorted(((iv.lo, iv.hi), iv, i) for i, r in enumerate(regions) for iv in r)
    k = 0
    for x, w in m.atoms:
        if not w:
            continue
        while k < len(tagged) and tagged[k][1].hi < x:
            k += 1
        j = k
        while j < len(tagged) and tagged[j][1].lo <= x:
            if tagged[j][1].contains(x):
                out[tagged[j][2]] += w
                break
            j += 1
    if m.is_atomic:
        return out
    bps, vals, cum = m.density.breakpoints, m.density.values, m._cumulative
    last = len(vals) - 1
    j = 0

    def cdf(x: Q) -> Q:
        nonlocal j
        while j < last and bps[j + 1] <= x:
            j += 1
        return cum[j] + vals[j] * (x - bps[j])

    for _, iv, i in tagged:
        if iv.hi > iv.lo:
            a = cdf(iv.lo)
            out[i] += cdf(iv.hi) - a
    return out


def integrate(m: Measure, f: PiecewiseFunc) -> Q:
    """Exact ``∫ f dm``."""
    total = sum((mass * f(x) for x, mass in m.atoms), ZERO)
    if m.is_atomic:
        return total
    crit = sorted(set(f.breakpoints) | set(m.density.breakpoints))
    dens = cell_values(m.density, crit)
    if f.kind is FuncKind.SIMPLE:
        for lo, hi, c, v in zip(crit, crit[1:], dens, cell_values(f, crit)):
            if c and v:
                total += c * v * (hi - lo)
        return total
    at = [f(x) for x in crit]  # crit refines f's breakpoints, so f is linear on each cell
    for i, c in enumerate(dens):
        if c:
            total += c * (at[i] + at[i + 1]) / 2 * (crit[i + 1] - crit[i])
    return total


def convex_combine(weights: Sequence[RationalLike], measures: Sequence[Measure]) -> Measure:
    weights = [as_fraction(w) for w in weights]
    if len(weights) != len(measures):
        raise ValueError("weights and measures differ in length")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    if sum(weights, ZERO) != 1:
        raise ValueError(f"weights sum to {sum(weights, ZERO)}, not 1")
    return mixture(weights, measures)


def cell_values(p: PiecewiseFunc, bps: Sequence[Q]) -> list[Q]:
    """Values of a Simple ``p`` on the cells of a refinement ``bps`` of its breakpoints."""
    out, j, own = [], 0, p.breakpoints
    for lo in bps[:-1]:
        while own[j + 1] <= lo:
            j += 1
        out.append(p.values[j])
    return out


def mixture(weights: Sequence[Q], measures: Sequence[Measure]) -> Measure:
    """Unchecked weighted sum of measures (no normalization)."""
    atoms: dict[Q, Q] = {}
    for w, mu in zip(weights, measures):
        for x, mass in mu.atoms:
            atoms[x] = atoms.get(x, ZERO) + w * mass
    bps = sorted({b for mu in measures for b in mu.density.breakpoints})
    vals = [ZERO] * (len(bps) - 1)
    for w, mu in zip(weights, measures):
        if w and not mu.is_atomic:
            for i, v in enumerate(cell_values(mu.density, bps)):
                if v:
                    vals[i] += w * v
    return Measure(
        tuple((x, mass) for x, mass in sorted(atoms.items()) if mass != 0),
        PiecewiseFunc.simple(bps, vals),
    ).canonical()


__all__ = [
    "InvalidMeasure",
    "Measure",
    "ZERO_DENSITY",
    "cell_values",
    "convex_combine",
    "density_integral",
    "integrate",
    "measure_of",
    "measure_problems",
    "measure_validate",
    "measure_violations",
    "mixture",
    "partition_masses",
]
