"""Symbolic measure sequences and convergence-mode verdicts.

A :class:`SequenceFamily` is ``n -> Measure`` from a small closed-form
catalog (or a finite table). For catalog kinds the limit of ``fam_n(A)``,
``∫ f dfam_n`` and ``tv(fam_n, ρ)`` is known exactly together with a proof
certificate: either an index from which the value is constant, or an
envelope ``|value(n) - limit| <= c/n``. Verdicts are built from those
certificates, never from numerics on a finite prefix.

Every verdict is relative to a test budget: finitely many regions
(dyadic unions, their closures, flag variants, and probes adapted to the
measures involved) and finitely many hat functions. The budget is echoed in
every report.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from . import kernels
from .intervals import (
    ONE,
    ZERO,
    FuncKind,
    PiecewiseFunc,
    Region,
    base_enumerate,
    piece_regions,
    region_closure,
    region_complement,
    region_from_endpoints,
    region_interior,
    region_shrink,
)
from .measures import Measure, integrate, measure_of, partition_masses
from .metrics import tv_distance
from .rational import Q, ceil, floor


class FamilyKind(str, enum.Enum):
    DIRAC_AT = "dirac-at"
    UNIFORM_ON = "uniform-on"
    SQUARE_WAVE = "square-wave"
    CONSTANT = "constant"
    TABULATED = "tabulated"


class Unavailable(Exception):
    """Exact eventual values are not available for tabulated families."""


@dataclass(frozen=True)
class SequenceFamily:
    kind: FamilyKind
    measure: Measure | None = None
    terms: tuple[Measure, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.kind is FamilyKind.CONSTANT and self.measure is None:
            raise ValueError("constant family needs a measure")
        if self.kind is FamilyKind.TABULATED and not self.terms:
            raise ValueError("tabulated family needs at least one term")

    @classmethod
    def dirac_at(cls) -> SequenceFamily:
        return cls(FamilyKind.DIRAC_AT)

    @classmethod
    def uniform_on(cls) -> SequenceFamily:
        return cls(FamilyKind.UNIFORM_ON)

    @classmethod
    def square_wave(cls) -> SequenceFamily:
        return cls(FamilyKind.SQUARE_WAVE)

    @classmethod
    def constant(cls, nu: Measure) -> SequenceFamily:
        return cls(FamilyKind.CONSTANT, measure=nu)

    @classmethod
    def tabulated(cls, terms: Iterable[Measure]) -> SequenceFamily:
        return cls(FamilyKind.TABULATED, terms=tuple(terms))

    @property
    def is_catalog(self) -> bool:
        return self.kind is not FamilyKind.TABULATED

    def label(self) -> str:
        if self.kind is FamilyKind.CONSTANT:
            return f"constant({self.measure})"
        if self.kind is FamilyKind.TABULATED:
            return f"tabulated[{len(self.terms)}]"
        return self.kind.value

    def structure_points(self) -> set[Q]:
        """Breakpoints of the (setwise) limit object, or of all tabulated terms."""
        if self.kind in (FamilyKind.DIRAC_AT, FamilyKind.UNIFORM_ON):
            return {ZERO}
        if self.kind is FamilyKind.SQUARE_WAVE:
            return set()
        if self.kind is FamilyKind.CONSTANT:
            return self.measure.structure_points()
        pts: set[Q] = set()
        for t in self.terms:
            pts |= t.structure_points()
        return pts


def family_term(fam: SequenceFamily, n: int) -> Measure:
    if n < 1:
        raise ValueError("sequence index starts at 1")
    if fam.kind is FamilyKind.DIRAC_AT:
        return Measure.dirac(Q(1, n))
    if fam.kind is FamilyKind.UNIFORM_ON:
        return Measure.uniform(0, Q(1, n))
    if fam.kind is FamilyKind.SQUARE_WAVE:
        return Measure.square_wave(n)
    if fam.kind is FamilyKind.CONSTANT:
        return fam.measure
    if n > len(fam.terms):
        raise IndexError(f"tabulated family has only {len(fam.terms)} terms")
    return fam.terms[n - 1]


# -- eventual values ---------------------------------------------------------------


@dataclass(frozen=True)
class EventualValue:
    """Exact limit of a scalar sequence with a certificate.

    ``attained_from``: the value equals ``limit`` for every ``n >=`` it.
    ``envelope``: ``|value(n) - limit| <= envelope / n`` for every ``n >= 1``.
    At least one of the two is always set.
    """

    limit: Q
    attained_from: int | None = None
    envelope: Q | None = None


def _walk_down(value: Callable[[int], Q], limit: Q, start: int) -> int:
    n = max(start, 1)
    while n > 1 and value(n - 1) == limit:
        n -= 1
    return n


def _contains_right_of_zero(a: Region) -> Q | None:
    """``h`` if ``a`` contains ``(0, h)`` via a component starting at 0, else None."""
    for iv in a:
        if iv.lo == 0 and iv.hi > 0:
            return iv.hi
    return None


def _first_positive_point(a: Region) -> Q | None:
    """Infimum of ``a ∖ {0}``, or None when that set is empty."""
    for iv in a:
        if iv.hi > 0:
            return iv.lo
    return None


def _ceil_inv(x: Q) -> int:
    return ceil(1 / x)


def eventual_value(fam: SequenceFamily, a: Region) -> EventualValue:
    """Exact ``lim_n fam_n(a)`` with a certificate."""
    if fam.kind is FamilyKind.TABULATED:
        raise Unavailable("tabulated families have no exact eventual values")
    if fam.kind is FamilyKind.CONSTANT:
        return EventualValue(measure_of(fam.measure, a), attained_from=1)
    if fam.kind is FamilyKind.SQUARE_WAVE:
        length = a.lebesgue()
        if length in (ZERO, ONE):
            # null sets and co-null sets: every term gives the same value
            return EventualValue(length, attained_from=1, envelope=ZERO)
        return EventualValue(length, envelope=Q(len(a), 2))

    def value(n: int) -> Q:
        return measure_of(family_term(fam, n), a)

    h = _contains_right_of_zero(a)
    if h is not None:
        limit = ONE
        start = floor(1 / h) + 1 if fam.kind is FamilyKind.DIRAC_AT else _ceil_inv(h)
    else:
        limit = ZERO
        eta = _first_positive_point(a)
        if eta is None:
            start = 1
        else:
            # eta > 0 here: a component starting at 0 with hi > 0 would have set h
            start = floor(1 / eta) + 1 if fam.kind is FamilyKind.DIRAC_AT else _ceil_inv(eta)
    return EventualValue(limit, attained_from=_walk_down(value, limit, start))


def eventual_integral(fam: SequenceFamily, f: PiecewiseFunc) -> EventualValue:
    """Exact ``lim_n ∫ f dfam_n`` with a certificate."""
    if fam.kind is FamilyKind.TABULATED:
        raise Unavailable("tabulated families have no exact eventual values")
    if fam.kind is FamilyKind.CONSTANT:
        return EventualValue(integrate(fam.measure, f), attained_from=1)
    if f.kind is FuncKind.SIMPLE:
        # a simple function is a finite combination of cell indicators
        evs = [(v, eventual_value(fam, f.cell_region(i))) for i, v in enumerate(f.values) if v]
        limit = sum((v * ev.limit for v, ev in evs), ZERO)
        if all(ev.attained_from is not None for _, ev in evs):
            return EventualValue(limit, attained_from=max((ev.attained_from for _, ev in evs), default=1))
        return EventualValue(limit, envelope=sum((abs(v) * ev.envelope for v, ev in evs), ZERO))
    lip = f.lipschitz()
    if fam.kind is FamilyKind.SQUARE_WAVE:
        limit = integrate(Measure.uniform(), f)
        if lip == 0:
            return EventualValue(limit, attained_from=1, envelope=ZERO)
        return EventualValue(limit, envelope=lip / 4)
    limit = f(ZERO)
    b1 = f.breakpoints[1]
    slope0 = (f.values[1] - f.values[0]) / b1
    if slope0 == 0:
        # constant on [0, b1]: exact once the term lives there
        start = _ceil_inv(b1)
        return EventualValue(limit, attained_from=_walk_down(
            lambda n: integrate(family_term(fam, n), f), limit, start))
    coeff = lip if fam.kind is FamilyKind.DIRAC_AT else lip / 2
    return EventualValue(limit, envelope=coeff)


def eventual_tv(fam: SequenceFamily, candidate: Measure) -> EventualValue:
    """Exact ``lim_n tv(fam_n, candidate)`` with a certificate."""
    if fam.kind is FamilyKind.TABULATED:
        raise Unavailable("tabulated families have no exact eventual values")
    if fam.kind is FamilyKind.CONSTANT:
        return EventualValue(tv_distance(fam.measure, candidate), attained_from=1)

    def value(n: int) -> Q:
        return tv_distance(family_term(fam, n), candidate)

    p = candidate.canonical().density
    if fam.kind is FamilyKind.DIRAC_AT:
        # tv(δ_x, ρ) = 1 - ρ({x}); only atoms at reciprocals of integers matter
        start = 1
        for x, m in candidate.atoms:
            if m and x > 0 and (1 / x).denominator == 1:
                start = max(start, int(1 / x) + 1)
        return EventualValue(ONE, attained_from=_walk_down(value, ONE, start))
    if fam.kind is FamilyKind.UNIFORM_ON:
        # overlap ∫_0^{1/n} min(n, p) <= ‖p‖∞ / n
        if p.values[0] == 0:
            return EventualValue(ONE, attained_from=_walk_down(value, ONE, _ceil_inv(p.breakpoints[1])))
        return EventualValue(ONE, envelope=p.sup_norm)
    # square wave: overlap = ∫ min(2, p) over the first half of every cell
    g = [min(Q(2), v) for v in p.values]
    limit_overlap = sum((v * (hi - lo) for v, lo, hi in zip(g, p.breakpoints, p.breakpoints[1:])), ZERO) / 2
    limit = 1 - limit_overlap
    jumps = sum(1 for u, v in zip(g, g[1:]) if u != v)
    if jumps == 0:
        return EventualValue(limit, attained_from=1, envelope=ZERO)
    return EventualValue(limit, envelope=Q(jumps, 2))


# -- verdicts ------------------------------------------------------------------------


class Mode(str, enum.Enum):
    VAGUE = "Vague"
    WEAK = "Weak"
    SETWISE = "Setwise"
    TV = "TV"


class Status(str, enum.Enum):
    CONVERGES_EXACT = "ConvergesExact"
    CONVERGES_ON_EVIDENCE = "ConvergesOnEvidence"
    DIVERGES_WITNESS = "DivergesWitness"
    INCONCLUSIVE = "Inconclusive"

    @property
    def converges(self) -> bool:
        return self in (Status.CONVERGES_EXACT, Status.CONVERGES_ON_EVIDENCE)


TV_WITNESS = "tv_distance"


@dataclass(frozen=True)
class ModeVerdict:
    mode: Mode
    status: Status
    witness: Region | PiecewiseFunc | str | None = None
    gap: Q | None = None
    tested: int = 0
    evidence: dict = field(default_factory=dict, compare=False)
    note: str = ""


@dataclass(frozen=True)
class Budget:
    k_base: int = 3
    k_funcs: int = 3
    n_max: int = 64


def hat_family(k: int) -> list[PiecewiseFunc]:
    """Tents of half-width ``2**-j`` centred on the grid ``i/2**j``, ``j = 1..k``."""
    out, seen = [], set()
    for j in range(1, k + 1):
        h = Q(1, 2**j)
        for i in range(2**j + 1):
            f = PiecewiseFunc.hat(i * h, h)
            if f not in seen:
                seen.add(f)
                out.append(f)
    return out


def structural_probes(*point_sets: Iterable[Q]) -> list[Region]:
    """Singletons and open gaps of the joint structure, refined by midpoints.

    Agreement of two measures on all of these pieces forces equality of
    measures whose atoms and density breakpoints lie in the point sets.
    """
    pts: set[Q] = {ZERO, ONE}
    for s in point_sets:
        pts |= set(s)
    crit = sorted(pts)
    crit = sorted(set(crit) | {(a + b) / 2 for a, b in zip(crit, crit[1:])})
    return piece_regions(crit)


def _region_key(r: Region, gap: Q) -> tuple:
    return (gap, -len(r), r.lebesgue())


class _Tracker:
    """Collects per-object outcomes and keeps the strongest divergence witness."""

    def __init__(self) -> None:
        self.tested = 0
        self.best_key: tuple | None = None
        self.witness = None
        self.gap: Q | None = None
        self.attained: int | None = 1
        self.envelope = ZERO
        self.unresolved = 0
        self.witness_evidence: dict = {}

    def add_converging(self, ev: EventualValue | None = None) -> None:
        self.tested += 1
        if ev is None:
            return
        if ev.attained_from is None:
            self.attained = None
        elif self.attained is not None:
            self.attained = max(self.attained, ev.attained_from)
        if ev.envelope is not None:
            self.envelope = max(self.envelope, ev.envelope)

    def add_diverging(self, obj, gap: Q, key: tuple, evidence: dict) -> None:
        self.tested += 1
        if self.best_key is None or key > self.best_key:
            self.best_key, self.witness, self.gap = key, obj, gap
            self.witness_evidence = evidence

    def add_unresolved(self) -> None:
        self.tested += 1
        self.unresolved += 1

    def verdict(self, mode: Mode, exact: bool, note: str = "") -> ModeVerdict:
        if self.witness is not None:
            return ModeVerdict(mode, Status.DIVERGES_WITNESS, self.witness, self.gap,
                               self.tested, self.witness_evidence, note)
        if self.tested == 0 or self.unresolved:
            return ModeVerdict(mode, Status.INCONCLUSIVE, None, None, self.tested, {}, note)
        status = Status.CONVERGES_EXACT if exact else Status.CONVERGES_ON_EVIDENCE
        evidence = {}
        if exact:
            evidence = {"attained_from": self.attained, "envelope": self.envelope}
        return ModeVerdict(mode, status, None, None, self.tested, evidence, note)


def _ev_evidence(ev: EventualValue) -> dict:
    return {"limit": ev.limit, "attained_from": ev.attained_from, "envelope": ev.envelope}


def _tail(fam: SequenceFamily, n_max: int) -> list[Measure]:
    terms = list(fam.terms[:n_max])
    return terms[len(terms) // 2:] if len(terms) > 1 else terms


def _tabulated_outcome(tr: _Tracker, obj, tail_values: list[Q], target: Q, key_fn) -> None:
    if all(v == target for v in tail_values):
        tr.add_converging()
    elif all(v == tail_values[0] for v in tail_values):
        gap = abs(tail_values[0] - target)
        tr.add_diverging(obj, gap, key_fn(obj, gap), {"tail_value": tail_values[0], "tail_length": len(tail_values)})
    else:
        tr.add_unresolved()


def _assess_regions(fam: SequenceFamily, candidate: Measure, regions: Iterable[Region],
                    tr: _Tracker, n_max: int) -> None:
    if fam.is_catalog:
        for r in regions:
            ev = eventual_value(fam, r)
            target = measure_of(candidate, r)
            if ev.limit == target:
                tr.add_converging(ev)
            else:
                gap = abs(ev.limit - target)
                tr.add_diverging(r, gap, _region_key(r, gap), _ev_evidence(ev))
        return
    tail = _tail(fam, n_max)
    regions = list(regions)
    table = region_masses([*tail, candidate], regions)
    for r, values in zip(regions, table):
        _tabulated_outcome(tr, r, values[:-1], values[-1], _region_key)


def region_masses(measures: Sequence[Measure], regions: Sequence[Region]) -> list[list[Q]]:
    """``[[m(r) for m in measures] for r in regions]`` from one sweep per measure.

    All endpoints go into one critical grid; every region is then a run of
    consecutive grid pieces per component, read off prefix sums.
    """
    crit = sorted({ZERO, ONE}.union(*(r.endpoints() for r in regions),
                                    *(m.structure_points() for m in measures)))
    pieces = piece_regions(crit)
    prefixes = []
    for m in measures:
        acc, pre = ZERO, [ZERO]
        for x in partition_masses(m, pieces):
            acc += x
            pre.append(acc)
        prefixes.append(pre)
    index = {x: i for i, x in enumerate(crit)}
    out = []
    for r in regions:
        spans = [(2 * index[iv.lo] + (not iv.lo_closed), 2 * index[iv.hi] + 1 - (not iv.hi_closed)) for iv in r]
        out.append([sum((pre[e] - pre[s] for s, e in spans), ZERO) for pre in prefixes])
    return out


def _scan_base(fam: SequenceFamily, candidate: Measure, k: int, tr: _Tracker,
               backend: str | None) -> None:
    """Every base union (open, then closed) through the integer scan kernel.

    The eventual value of a catalog family is a limit of additive set
    functions, hence additive on the grid pieces; so are candidate masses.
    """
    n = 2**k
    crit = [Q(i, n) for i in range(n + 1)]
    pieces = piece_regions(crit)
    evs = [eventual_value(fam, p) for p in pieces]
    diffs = [ev.limit - measure_of(candidate, p) for ev, p in zip(evs, pieces)]
    ints, denom = kernels.scale_to_integers(diffs)
    pts, cells = ints[0::2], ints[1::2]
    piece_attained = None if any(ev.attained_from is None for ev in evs) else max(ev.attained_from for ev in evs)
    for closed in (False, True):
        best_abs, _, seq, total, nonzero = kernels.scan_unions(pts, cells, k, closed, backend=backend)
        if nonzero == 0:
            # all unions agree; certify them uniformly through their pieces
            tr.tested += total
            if piece_attained is None:
                tr.attained = None
            elif tr.attained is not None:
                tr.attained = max(tr.attained, piece_attained)
            if fam.kind is FamilyKind.SQUARE_WAVE:
                tr.envelope = max(tr.envelope, Q(k, 2))  # <= k components, 1/2 each
            continue
        tr.tested += total - 1
        witness = region_from_endpoints(seq, n, closed=closed)
        ev = eventual_value(fam, witness)
        gap = abs(ev.limit - measure_of(candidate, witness))
        if gap != Q(best_abs, denom):
            raise AssertionError("scan kernel disagrees with direct evaluation")
        tr.add_diverging(witness, gap, _region_key(witness, gap), _ev_evidence(ev))


def _flag_variants(k: int) -> list[Region]:
    n = 2**k
    out = []
    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            lo, hi = Q(a, n), Q(b, n)
            out.append(Region([(lo, hi, True, False)]))
            out.append(Region([(lo, hi, False, True)]))
    return out


def setwise_test_regions(fam: SequenceFamily, candidate: Measure, k_base: int) -> list[Region]:
    """The non-kernel part of the setwise test family: flag variants and probes."""
    if k_base < 1:
        return []
    return _flag_variants(k_base) + structural_probes(fam.structure_points(), candidate.structure_points())


def classify_modes(fam: SequenceFamily, candidate: Measure, budget: Budget = Budget(),
                   backend: str | None = None) -> list[ModeVerdict]:
    """Per-mode verdicts for ``fam_n -> candidate`` at the given test budget."""
    exact = fam.is_catalog
    out = []

    # vague and weak: on [0,1] both test classes are the continuous functions
    funcs = hat_family(budget.k_funcs) if budget.k_funcs >= 1 else []
    for mode in (Mode.VAGUE, Mode.WEAK):
        tr = _Tracker()
        if exact:
            for f in funcs:
                ev = eventual_integral(fam, f)
                target = integrate(candidate, f)
                if ev.limit == target:
                    tr.add_converging(ev)
                else:
                    gap = abs(ev.limit - target)
                    tr.add_diverging(f, gap, (gap,), _ev_evidence(ev))
        else:
            tail = _tail(fam, budget.n_max)
            for idx, f in enumerate(funcs):
                _tabulated_outcome(tr, f, [integrate(t, f) for t in tail], integrate(candidate, f),
                                   lambda obj, gap, idx=idx: (gap, -idx))
        out.append(tr.verdict(mode, exact, "same hat family for vague and weak (C_c = C_0 = C_b on [0,1])"))

    tr = _Tracker()
    if budget.k_base >= 1:
        if exact:
            _scan_base(fam, candidate, budget.k_base, tr, backend)
        else:
            regions = base_enumerate(budget.k_base)
            _assess_regions(fam, candidate, regions + [region_closure(r) for r in regions], tr, budget.n_max)
        _assess_regions(fam, candidate, setwise_test_regions(fam, candidate, budget.k_base), tr, budget.n_max)
    out.append(tr.verdict(Mode.SETWISE, exact))

    tr = _Tracker()
    if exact:
        ev = eventual_tv(fam, candidate)
        if ev.limit == 0:
            tr.add_converging(ev)
        else:
            tr.add_diverging(TV_WITNESS, ev.limit, (ev.limit,), _ev_evidence(ev))
    else:
        _tabulated_outcome(tr, TV_WITNESS, [tv_distance(t, candidate) for t in _tail(fam, budget.n_max)],
                           ZERO, lambda obj, gap: (gap,))
    out.append(tr.verdict(Mode.TV, exact))
    return out


# -- Portmanteau cross-check -----------------------------------------------------------


@dataclass(frozen=True)
class PortmanteauReport:
    open_verdict: ModeVerdict
    closed_verdict: ModeVerdict
    agree: bool
    n_open: int
    n_closed: int


@lru_cache(maxsize=8)
def _portmanteau_sets(k_base: int) -> tuple[tuple[Region, ...], tuple[Region, ...]]:
    base = tuple(base_enumerate(k_base)) if k_base >= 1 else ()
    closures = tuple(region_closure(u) for u in base)
    opens = base + tuple(region_complement(c) for c in closures)
    closeds = closures + tuple(region_complement(u) for u in base)
    return opens, closeds


def portmanteau_crosscheck(fam: SequenceFamily, candidate: Measure, k_base: int,
                           n_max: int = 64) -> PortmanteauReport:
    """Setwise verdict on open test sets versus on closed test sets.

    Opens are the base unions and the complements of their closures;
    closed sets are those closures and the complements of the base unions.
    The two verdicts must agree.
    """
    opens, closeds = _portmanteau_sets(k_base)
    verdicts = []
    for family in (opens, closeds):
        tr = _Tracker()
        _assess_regions(fam, candidate, family, tr, n_max)
        verdicts.append(tr.verdict(Mode.SETWISE, fam.is_catalog))
    ov, cv = verdicts
    return PortmanteauReport(ov, cv, ov.status == cv.status, len(opens), len(closeds))


# -- compactness gap ------------------------------------------------------------------


@dataclass(frozen=True)
class GapEntry:
    region: Region
    limsup: Q
    core_limsups: tuple[Q, ...]
    grid_gap: Q
    gap: Q


@dataclass(frozen=True)
class CompactnessReport:
    k_base: int
    deltas: tuple[Q, ...]
    entries: tuple[GapEntry, ...]

    @property
    def witnesses(self) -> tuple[GapEntry, ...]:
        return tuple(e for e in self.entries if e.gap > 0)

    def entry(self, region: Region) -> GapEntry:
        for e in self.entries:
            if e.region == region:
                return e
        raise KeyError(str(region))


def sup_core_limsup(fam: SequenceFamily, u: Region) -> Q:
    """``sup_{δ>0} limsup_n fam_n(shrink(u, δ))``, which equals the sup over closed ``K ⊂ u``.

    Every closed (hence compact) ``K ⊂ u`` sits inside some δ-core, and the
    cores increase to the relative interior of ``u`` as ``δ -> 0``.
    """
    if fam.kind is FamilyKind.TABULATED:
        raise Unavailable("compactness gap needs exact limsups")
    if fam.kind in (FamilyKind.DIRAC_AT, FamilyKind.UNIFORM_ON):
        # cores contain some [0, h] only when u keeps 0 together with a right neighbourhood
        for iv in u:
            if iv.lo == 0 and iv.lo_closed and iv.hi > 0:
                return ONE
        return ZERO
    if fam.kind is FamilyKind.SQUARE_WAVE:
        return region_interior(u).lebesgue()
    return measure_of(fam.measure, region_interior(u))


def compactness_gap(fam: SequenceFamily, k_base: int, delta_grid: Sequence[Q]) -> CompactnessReport:
    """Mass-escape gaps ``limsup fam_n(U) - sup_K limsup fam_n(K)`` over base opens ``U``.

    ``grid_gap`` uses only the supplied δ-cores (an upper bound on the gap);
    ``gap`` is exact. A positive ``gap`` certifies that no subsequence
    converges setwise.
    """
    deltas = tuple(Q(d) for d in delta_grid)
    if not deltas or any(d <= 0 for d in deltas):
        raise ValueError("delta grid must be nonempty and positive")
    entries = []
    for u in base_enumerate(k_base):
        top = eventual_value(fam, u).limit
        cores = tuple(eventual_value(fam, region_shrink(u, d)).limit for d in deltas)
        entries.append(GapEntry(u, top, cores, top - max(cores), top - sup_core_limsup(fam, u)))
    return CompactnessReport(k_base, deltas, tuple(entries))


# -- gallery ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GalleryCase:
    name: str
    family: SequenceFamily
    candidate: Measure
    pins: dict  # mode -> (status, witness, gap)
    compactness_pins: dict  # region -> gap, plus "*" for all-zero


def gallery_cases() -> list[GalleryCase]:
    dirac0, unif = Measure.dirac(0), Measure.uniform()
    s = Status
    return [
        GalleryCase(
            "dirac-at -> dirac:0", SequenceFamily.dirac_at(), dirac0,
            {Mode.VAGUE: (s.CONVERGES_EXACT, None, None),
             Mode.WEAK: (s.CONVERGES_EXACT, None, None),
             Mode.SETWISE: (s.DIVERGES_WITNESS, Region.interval(0, 1, "()"), ONE),
             Mode.TV: (s.DIVERGES_WITNESS, TV_WITNESS, ONE)},
            {Region.interval(0, 1, "()"): ONE},
        ),
        GalleryCase(
            "square-wave -> uniform:0,1", SequenceFamily.square_wave(), unif,
            {Mode.VAGUE: (s.CONVERGES_EXACT, None, None),
             Mode.WEAK: (s.CONVERGES_EXACT, None, None),
             Mode.SETWISE: (s.CONVERGES_EXACT, None, None),
             Mode.TV: (s.DIVERGES_WITNESS, TV_WITNESS, Q(1, 2))},
            {"*": ZERO},
        ),
        GalleryCase(
            "constant(uniform) -> uniform:0,1", SequenceFamily.constant(unif), unif,
            {m: (s.CONVERGES_EXACT, None, None) for m in Mode},
            {"*": ZERO},
        ),
    ]


GALLERY_BUDGET = Budget(3, 3, 64)
GALLERY_DELTAS = (Q(1, 8), Q(1, 16), Q(1, 32))


@dataclass(frozen=True)
class GalleryRow:
    case: str
    verdicts: tuple[ModeVerdict, ...]
    portmanteau: PortmanteauReport
    compactness: CompactnessReport
    mismatches: tuple[str, ...]


def gallery_run(budget: Budget = GALLERY_BUDGET, backend: str | None = None) -> list[GalleryRow]:
    rows = []
    for case in gallery_cases():
        verdicts = tuple(classify_modes(case.family, case.candidate, budget, backend=backend))
        port = portmanteau_crosscheck(case.family, case.candidate, budget.k_base, budget.n_max)
        comp = compactness_gap(case.family, budget.k_base, GALLERY_DELTAS)
        bad = []
        for v in verdicts:
            status, witness, gap = case.pins[v.mode]
            if v.status is not status or v.witness != witness or v.gap != gap:
                bad.append(f"{v.mode.value}: got {v.status.value} {v.witness} {v.gap}, "
                           f"pinned {status.value} {witness} {gap}")
        if not port.agree:
            bad.append("portmanteau: open/closed verdicts disagree")
        for key, gap in case.compactness_pins.items():
            if key == "*":
                if any(e.gap != gap for e in comp.entries):
                    bad.append(f"compactness: expected every gap == {gap}")
            elif comp.entry(key).gap != gap:
                bad.append(f"compactness: gap({key}) = {comp.entry(key).gap}, pinned {gap}")
        rows.append(GalleryRow(case.name, verdicts, port, comp, tuple(bad)))
    return rows


__all__ = [
    "Budget",
    "CompactnessReport",
    "EventualValue",
    "FamilyKind",
    "GALLERY_BUDGET",
    "GALLERY_DELTAS",
    "GalleryRow",
    "GapEntry",
    "Mode",
    "ModeVerdict",
    "PortmanteauReport",
    "SequenceFamily",
    "Status",
    "TV_WITNESS",
    "Unavailable",
    "classify_modes",
    "compactness_gap",
    "eventual_integral",
    "eventual_tv",
    "eventual_value",
    "family_term",
    "gallery_cases",
    "gallery_run",
    "hat_family",
    "portmanteau_crosscheck",
    "region_masses",
    "setwise_test_regions",
    "structural_probes",
    "sup_core_limsup",
]
