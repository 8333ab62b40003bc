"""Level-set quantization certificates and greedy ball-cover discretization.

``make_certificate`` builds, for a bounded test function ``f`` and a target
``ε``, a finite partition of [0, 1] into level sets of ``f`` together with a
per-cell tolerance: any measure whose cell masses are all within that
tolerance of ``ν``'s also integrates ``f`` to within ``ε`` of ``∫ f dν``.

``vague_approximate`` replaces ``ν`` by atoms on the grid ``{i / n1}``, each
atom carrying the mass of its ball minus the balls already used.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from .intervals import (
    ONE,
    ZERO,
    FuncKind,
    PiecewiseFunc,
    RationalLike,
    Region,
    as_fraction,
    func_level_partition,
)
from .measures import Measure, cell_values, integrate, partition_masses
from .rational import Q, ceil, floor


@dataclass(frozen=True)
class QuantizationCertificate:
    f: PiecewiseFunc
    n: int
    cells: tuple[Region, ...]
    cell_tolerance: Q
    target_epsilon: Q
    trivial: bool = False


@dataclass(frozen=True)
class CertificateCheck:
    hypothesis: bool
    conclusion: bool
    gap: Q
    worst_cell_deviation: Q

    @property
    def consistent(self) -> bool:
        return self.conclusion or not self.hypothesis


def make_certificate(f: PiecewiseFunc, target_epsilon: RationalLike) -> QuantizationCertificate:
    eps = as_fraction(target_epsilon)
    if eps <= 0:
        raise ValueError("target epsilon must be positive")
    if f.is_zero:
        # every measure integrates 0 to 0, so no cell constraint is needed
        return QuantizationCertificate(f, 1, (Region.full(),), eps, eps, trivial=True)
    m = f.sup_norm
    n = floor(4 * m / eps) + 1  # smallest n with 4M/n < eps
    cells = tuple(func_level_partition(f, n))
    return QuantizationCertificate(f, n, cells, eps / (2 * n * m), eps)


def certificate_check(c: QuantizationCertificate, nu: Measure, rho: Measure) -> CertificateCheck:
    devs = [abs(x - y) for x, y in zip(partition_masses(nu, c.cells), partition_masses(rho, c.cells))]
    worst = max(devs)
    hypothesis = c.trivial or worst < c.cell_tolerance
    diff = abs(integrate(nu, c.f) - integrate(rho, c.f))
    return CertificateCheck(hypothesis, diff < c.target_epsilon, c.target_epsilon - diff, worst)


@dataclass(frozen=True)
class VagueApproxResult:
    atoms: Measure
    n1: int
    centers_used: tuple[Q, ...]
    error_bound: Q
    cover_cells: tuple[Region, ...]


def grid_ball(center: Q, radius: Q) -> Region:
    """Open ball in [0, 1] with its relative-topology clipping."""
    lo, hi = center - radius, center + radius
    return Region([(max(lo, ZERO), min(hi, ONE), lo < 0, hi > 1)])


def greedy_cover_cells(n1: int) -> tuple[Region, ...]:
    """Cells of the left-to-right ball cover, built literally: ball minus earlier balls."""
    radius = Q(1, n1)
    covered = Region()
    cells = []
    for i in range(n1 + 1):
        ball = grid_ball(Q(i, n1), radius)
        cells.append(ball - covered)
        covered = covered | ball
    return tuple(cells)


def grid_cells(n1: int) -> tuple[Region, ...]:
    """Closed form of :func:`greedy_cover_cells`: ``[i/n1, (i+1)/n1)`` for ``i < n1``, then ``{1}``."""
    cells = [Region([(Q(i, n1), Q(i + 1, n1), True, False)]) for i in range(n1)]
    return tuple(cells) + (Region.point(1),)


def _grid_masses(nu: Measure, n1: int) -> list[Q]:
    masses = [ZERO] * (n1 + 1)
    for x, m in nu.atoms:
        masses[min(floor(x * n1), n1)] += m
    bps = nu.density.breakpoints
    for k, v in enumerate(nu.density.values):
        if not v:
            continue
        lo, hi = bps[k], bps[k + 1]
        for i in range(floor(lo * n1), ceil(hi * n1)):
            overlap = min(hi, Q(i + 1, n1)) - max(lo, Q(i, n1))
            masses[i] += v * overlap
    return masses


def vague_approximate(nu: Measure, n1: int) -> VagueApproxResult:
    """Greedy discretization of ``nu`` onto the centers ``0, 1/n1, ..., 1``.

    Balls are used left to right; the atom at a center gets the mass of its
    ball minus every earlier ball. ``error_bound`` is the largest distance
    any mass moves, so ``|∫f dν - ∫f dν_ε| <= Lip(f) * error_bound``.
    """
    if n1 < 2:
        raise ValueError("n1 must be >= 2")
    masses = _grid_masses(nu, n1)
    atoms = tuple((Q(i, n1), m) for i, m in enumerate(masses) if m)
    return VagueApproxResult(Measure(atoms), n1, tuple(x for x, _ in atoms), Q(1, n1),
                             grid_cells(n1))


def approximation_error(nu: Measure, result: VagueApproxResult, f: PiecewiseFunc) -> Q:
    return abs(integrate(nu, f) - integrate(result.atoms, f))


def modulus_epsilon(f: PiecewiseFunc, n1: int) -> Q:
    """An ``ε`` with ``|f(x) - f(y)| < ε`` whenever ``|x - y| < 2/n1``.

    For a ContinuousPL ``f`` with Lipschitz constant ``L > 0`` this is
    ``2L/n1``; a constant ``f`` admits any positive ``ε`` and gets ``1/n1``.
    """
    if f.kind is not FuncKind.CONTINUOUS_PL:
        raise ValueError("modulus needs a ContinuousPL function")
    lip = f.lipschitz()
    return 2 * lip / n1 if lip else Q(1, n1)


def proposition_bounds(f: PiecewiseFunc, n1: int) -> tuple[Q, Q]:
    """``(ε, (1 + 2‖f‖∞) ε)``: the compact-space bound and the general one."""
    eps = modulus_epsilon(f, n1)
    return eps, (1 + 2 * f.sup_norm) * eps


def perturb_in_neighbourhood(nu: Measure, cells: tuple[Region, ...],
                             shifts: list[Q]) -> Measure:
    """Measure whose mass on ``cells[i]`` is ``nu(cells[i]) + shifts[i]``.

    ``cells`` must partition [0, 1]. Within a cell the new mass is spread
    like ``nu`` if ``nu`` charges the cell, otherwise uniformly (or as an
    atom on a one-point cell). Shifts must sum to zero and keep every cell
    mass nonnegative.
    """
    if sum(shifts, ZERO) != 0:
        raise ValueError("shifts must sum to zero")
    bases = partition_masses(nu, cells)
    targets = [b + s for b, s in zip(bases, shifts)]
    if any(t < 0 for t in targets):
        raise ValueError("shift makes a cell mass negative")
    pieces = sorted((iv.lo, not iv.lo_closed, iv, i) for i, c in enumerate(cells) for iv in c)
    starts = [(lo, flag) for lo, flag, _, _ in pieces]

    def owner(x: Q) -> int:
        k = bisect_right(starts, (x, False)) - 1
        if k < 0 or not pieces[k][2].contains(x):
            raise ValueError(f"cells do not cover {x}")
        return pieces[k][3]

    ratio = [t / b if b else ZERO for b, t in zip(bases, targets)]
    atoms = [(x, m * ratio[owner(x)]) for x, m in nu.atoms if m]
    spread = [ZERO] * len(cells)
    for i, (cell, b, t) in enumerate(zip(cells, bases, targets)):
        if b or not t:
            continue
        if not cell:
            raise ValueError("cannot put mass on an empty cell")
        length = cell.lebesgue()
        if length:
            spread[i] = t / length
        else:
            atoms.append((next(iter(cell)).lo, t))
    crit = sorted(set(nu.density.breakpoints) | {x for c in cells for x in c.endpoints()})
    base_vals = cell_values(nu.density, crit)
    vals = []
    for lo, hi, v in zip(crit, crit[1:], base_vals):
        i = owner((lo + hi) / 2)
        vals.append(v * ratio[i] + spread[i])
    merged: dict[Q, Q] = {}
    for x, m in atoms:
        merged[x] = merged.get(x, ZERO) + m
    return Measure(tuple(merged.items()), PiecewiseFunc.simple(crit, vals)).canonical()


__all__ = [
    "CertificateCheck",
    "QuantizationCertificate",
    "VagueApproxResult",
    "approximation_error",
    "certificate_check",
    "grid_ball",
    "grid_cells",
    "greedy_cover_cells",
    "make_certificate",
    "modulus_epsilon",
    "perturb_in_neighbourhood",
    "proposition_bounds",
    "vague_approximate",
]

