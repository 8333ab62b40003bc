"""Exact region algebra and test functions on the unit interval.

A :class:`Region` is a finite union of subintervals of ``[0, 1]`` with
endpoint-inclusion flags. Every region is kept in normal form: components
sorted, pairwise disjoint, and no two of them mergeable into one connected
interval. All coordinates are :class:`fractions.Q`.

Boolean operations work on a *piece decomposition*: the sorted critical
points ``c_0 = 0 < c_1 < ... < c_m = 1`` of the operands split ``[0, 1]``
into the singletons ``{c_i}`` and the open gaps ``(c_i, c_{i+1})``. Each
operand is constant on every piece, so any Boolean combination is decided
piece by piece and reassembled into maximal runs.
"""

from __future__ import annotations

import enum
import re
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .rational import RATIONAL_TYPES, Q, floor

ZERO = Q(0)
ONE = Q(1)

RationalLike = Q | int | str


def as_fraction(value: RationalLike) -> Q:
    """Coerce ints, rationals and ``"p/q"`` strings to the exact type; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Q):
        return value
    if isinstance(value, (int, *RATIONAL_TYPES)):
        return Q(value)
    if isinstance(value, str):
        return Q(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class Interval(NamedTuple):
    lo: Q
    hi: Q
    lo_closed: bool
    hi_closed: bool

    def contains(self, x: Q) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi or (
            self.lo == self.hi and not (self.lo_closed and self.hi_closed)
        )

    def __str__(self) -> str:
        if self.lo == self.hi:
            return "{" + str(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo},{self.hi}{right}"


class Region:
    """Finite union of subintervals of [0, 1], always normalized.

    Instances are immutable and hashable; equality is set equality because
    the normal form is unique.
    """

    __slots__ = ("_intervals", "_hash")

    def __init__(self, intervals: Iterable[Interval | tuple] = ()) -> None:
        raw = []
        for item in intervals:
            lo, hi, lo_closed, hi_closed = item
            iv = Interval(as_fraction(lo), as_fraction(hi), bool(lo_closed), bool(hi_closed))
            if iv.lo < 0 or iv.hi > 1:
                raise ValueError(f"interval {iv} leaves [0,1]")
            if not iv.is_empty:
                raw.append(iv)
        self._intervals = _normalize(raw)
        self._hash = hash(self._intervals)

    # -- construction helpers -------------------------------------------
    @classmethod
    def empty(cls) -> Region:
        return cls()

    @classmethod
    def full(cls) -> Region:
        return cls([(ZERO, ONE, True, True)])

    @classmethod
    def interval(cls, lo: RationalLike, hi: RationalLike, brackets: str = "[]") -> Region:
        if len(brackets) != 2 or brackets[0] not in "[(" or brackets[1] not in "])":
            raise ValueError(f"bad bracket spec {brackets!r}")
        return cls([(lo, hi, brackets[0] == "[", brackets[1] == "]")])

    @classmethod
    def point(cls, x: RationalLike) -> Region:
        return cls([(x, x, True, True)])

    @classmethod
    def parse(cls, text: str) -> Region:
        """Parse ``"[0,1/2) u {3/4} u (7/8,1]"``; ``"{}"`` or ``""`` is empty."""
        text = text.strip()
        if text in ("", "{}", "empty"):
            return cls()
        parts = re.split(r"\s*(?:u|∪|U)\s*", text)
        out = []
        for part in parts:
            m = re.fullmatch(r"([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])", part)
            if m:
                out.append((m.group(2), m.group(3), m.group(1) == "[", m.group(4) == "]"))
                continue
            m = re.fullmatch(r"\{\s*([^,}]+?)\s*\}", part)
            if m:
                out.append((m.group(1), m.group(1), True, True))
                continue
            raise ValueError(f"cannot parse region component {part!r}")
        return cls(out)

    # -- basic queries ----------------------------------------------------
    @property
    def intervals(self) -> tuple[Interval, ...]:
        return self._intervals

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._intervals)

    def __len__(self) -> int:
        return len(self._intervals)

    def __bool__(self) -> bool:
        return bool(self._intervals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return self._intervals == other._intervals

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Region({str(self)!r})"

    def __str__(self) -> str:
        if not self._intervals:
            return "{}"
        return " u ".join(str(iv) for iv in self._intervals)

    def contains(self, x: RationalLike) -> bool:
        x = as_fraction(x)
        return any(iv.contains(x) for iv in self._intervals)

    __contains__ = contains

    def endpoints(self) -> set[Q]:
        pts: set[Q] = set()
        for iv in self._intervals:
            pts.add(iv.lo)
            pts.add(iv.hi)
        return pts

    def lebesgue(self) -> Q:
        return sum((iv.hi - iv.lo for iv in self._intervals), ZERO)

    @property
    def is_open(self) -> bool:
        """Open in the relative topology of [0, 1]."""
        for iv in self._intervals:
            if iv.lo_closed and iv.lo != 0:
                return False
            if iv.hi_closed and iv.hi != 1:
                return False
        return True

    @property
    def is_closed(self) -> bool:
        return all(iv.lo_closed and iv.hi_closed for iv in self._intervals)

    def __or__(self, other: Region) -> Region:
        return region_union(self, other)

    def __and__(self, other: Region) -> Region:
        return region_intersection(self, other)

    def __sub__(self, other: Region) -> Region:
        return region_difference(self, other)

    def __invert__(self) -> Region:
        return region_complement(self)

    def issubset(self, other: Region) -> bool:
        return not (self - other)


def _normalize(raw: list[Interval]) -> tuple[Interval, ...]:
    """Sort and merge nonempty intervals into the unique maximal-component form."""
    if not raw:
        return ()
    out = []
    lo, hi, lc, hc = None, None, False, False
    for iv in sorted(raw, key=lambda iv: (iv.lo, not iv.lo_closed)):
        if lo is not None and (iv.lo < hi or (iv.lo == hi and (hc or iv.lo_closed))):
            if iv.hi > hi:
                hi, hc = iv.hi, iv.hi_closed
            elif iv.hi == hi:
                hc = hc or iv.hi_closed
            continue
        if lo is not None:
            out.append(Interval(lo, hi, lc, hc))
        lo, hi, lc, hc = iv
    out.append(Interval(lo, hi, lc, hc))
    return tuple(out)


def _piece_probe(crit: Sequence[Q], p: int) -> Q:
    if p % 2 == 0:
        return crit[p // 2]
    i = p // 2
    return (crit[i] + crit[i + 1]) / 2


def _piece_in(intervals: Sequence[Interval], crit: Sequence[Q], p: int) -> bool:
    x = _piece_probe(crit, p)
    return any(iv.contains(x) for iv in intervals)


def _assemble(crit: Sequence[Q], inside: Sequence[bool]) -> tuple[Interval, ...]:
    out = []
    p = 0
    n = len(inside)
    while p < n:
        if not inside[p]:
            p += 1
            continue
        start = p
        while p + 1 < n and inside[p + 1]:
            p += 1
        end = p
        lo = crit[start // 2]
        hi = crit[end // 2] if end % 2 == 0 else crit[end // 2 + 1]
        out.append(Interval(lo, hi, start % 2 == 0, end % 2 == 0))
        p += 1
    return tuple(out)


def critical_points(*regions: Region, extra: Iterable[Q] = ()) -> list[Q]:
    pts = {ZERO, ONE}
    for r in regions:
        pts |= r.endpoints()
    pts.update(extra)
    return sorted(pts)


def piece_regions(crit: Sequence[Q]) -> list[Region]:
    """The singletons and open gaps of a sorted critical-point list, in order."""
    out = []
    for i, c in enumerate(crit):
        out.append(Region([(c, c, True, True)]))
        if i + 1 < len(crit):
            out.append(Region([(c, crit[i + 1], False, False)]))
    return out


def _combine(regions: Sequence[Region], rule: Callable[[list[bool]], bool]) -> Region:
    crit = critical_points(*regions)
    inside = []
    for p in range(2 * len(crit) - 1):
        x = _piece_probe(crit, p)
        inside.append(rule([r.contains(x) for r in regions]))
    result = Region.__new__(Region)
    result._intervals = _assemble(crit, inside)
    result._hash = hash(result._intervals)
    return result


def region_union(a: Region, b: Region) -> Region:
    if not a:
        return b
    if not b:
        return a
    return _combine((a, b), any)


def region_intersection(a: Region, b: Region) -> Region:
    if not a or not b:
        return Region()
    return _combine((a, b), all)


def region_difference(a: Region, b: Region) -> Region:
    if not a or not b:
        return a
    return _combine((a, b), lambda m: m[0] and not m[1])


def region_complement(a: Region) -> Region:
    gaps = []
    lo, lo_closed = ZERO, True
    for iv in a:
        gaps.append((lo, iv.lo, lo_closed, not iv.lo_closed))
        lo, lo_closed = iv.hi, not iv.hi_closed
    gaps.append((lo, ONE, lo_closed, True))
    return Region(gaps)


def region_union_all(regions: Iterable[Region]) -> Region:
    return Region(iv for r in regions for iv in r)


def region_closure(a: Region) -> Region:
    return Region(Interval(iv.lo, iv.hi, True, True) for iv in a)


def region_interior(a: Region) -> Region:
    """Relative interior in [0, 1]; endpoints 0 and 1 may stay closed."""
    comps = []
    for iv in a:
        if iv.lo == iv.hi and not (iv.lo == 0 and iv.hi == 1):
            continue
        comps.append((iv.lo, iv.hi, iv.lo == 0 and iv.lo_closed, iv.hi == 1 and iv.hi_closed))
    return Region(comps)


def region_shrink(u: Region, delta: RationalLike) -> Region:
    """Closed core ``{x : B(x, delta) ∩ [0,1] ⊂ u}`` of a region.

    The open ball is taken relative to [0, 1], so a component containing 0
    (or 1) keeps that endpoint.
    """
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValueError("shrink radius must be positive")
    comps = []
    for iv in u:
        lo = ZERO if (iv.lo == 0 and iv.lo_closed) else iv.lo + delta
        hi = ONE if (iv.hi == 1 and iv.hi_closed) else iv.hi - delta
        if lo <= hi:
            comps.append((lo, hi, True, True))
    return Region(comps)


# -- countable base truncation ------------------------------------------------


def base_endpoint_sequences(k: int) -> Iterator[tuple[int, ...]]:
    """Endpoint index tuples ``(a0, b0, a1, b1, ...)`` on the grid ``i / 2**k``.

    Components are open, ordered, and may touch at an excluded point
    (``b_j == a_{j+1}``). At most ``k`` components. The depth-first order
    here is the canonical enumeration order shared with the scan kernels.
    """
    if k < 1:
        raise ValueError("complexity k must be >= 1")
    n = 2**k

    def walk(start: int, depth: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        for a in range(start, n + 1):
            for b in range(a + 1, n + 1):
                seq = prefix + (a, b)
                yield seq
                if depth + 1 < k:
                    yield from walk(b, depth + 1, seq)

    yield from walk(0, 0, ())


def region_from_endpoints(seq: Sequence[int], denom: int, closed: bool = False) -> Region:
    comps = []
    for j in range(0, len(seq), 2):
        comps.append((Q(seq[j], denom), Q(seq[j + 1], denom), closed, closed))
    return Region(comps)


def base_enumerate(k: int) -> list[Region]:
    """All unions of at most ``k`` open intervals with endpoints in ``{i/2**k}``."""
    return list(_base(k))


@lru_cache(maxsize=8)
def _base(k: int) -> tuple[Region, ...]:
    denom = 2**k
    return tuple(region_from_endpoints(seq, denom) for seq in base_endpoint_sequences(k))


# -- test functions -------------------------------------------------------------


class FuncKind(str, enum.Enum):
    CONTINUOUS_PL = "ContinuousPL"
    SIMPLE = "Simple"


@dataclass(frozen=True)
class PiecewiseFunc:
    """Piecewise-linear continuous or piecewise-constant function on [0, 1].

    Simple functions take ``values[i]`` on ``[b_i, b_{i+1})``; the last cell
    is closed at 1.
    """

    kind: FuncKind
    breakpoints: tuple[Q, ...]
    values: tuple[Q, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", FuncKind(self.kind))
        bps = tuple(as_fraction(b) for b in self.breakpoints)
        vals = tuple(as_fraction(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(b1 <= b0 for b0, b1 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        want = len(bps) if self.kind is FuncKind.CONTINUOUS_PL else len(bps) - 1
        if len(vals) != want:
            raise ValueError(f"{self.kind.value} needs {want} values, got {len(vals)}")

    # constructors
    @classmethod
    def pl(cls, breakpoints: Sequence[RationalLike], values: Sequence[RationalLike]) -> PiecewiseFunc:
        return cls(FuncKind.CONTINUOUS_PL, tuple(breakpoints), tuple(values))

    @classmethod
    def simple(cls, breakpoints: Sequence[RationalLike], values: Sequence[RationalLike]) -> PiecewiseFunc:
        return cls(FuncKind.SIMPLE, tuple(breakpoints), tuple(values))

    @classmethod
    def identity(cls) -> PiecewiseFunc:
        return cls.pl([0, 1], [0, 1])

    @classmethod
    def constant(cls, c: RationalLike, kind: FuncKind = FuncKind.CONTINUOUS_PL) -> PiecewiseFunc:
        if FuncKind(kind) is FuncKind.SIMPLE:
            return cls.simple([0, 1], [c])
        return cls.pl([0, 1], [c, c])

    @classmethod
    def hat(cls, center: RationalLike, halfwidth: RationalLike, height: RationalLike = 1) -> PiecewiseFunc:
        """Tent of the given height at ``center``, zero outside ``center ± halfwidth``, clipped to [0,1]."""
        c, h, top = as_fraction(center), as_fraction(halfwidth), as_fraction(height)
        if h <= 0:
            raise ValueError("halfwidth must be positive")
        pts = {ZERO, ONE, c}
        if 0 < c - h < 1:
            pts.add(c - h)
        if 0 < c + h < 1:
            pts.add(c + h)
        bps = sorted(p for p in pts if 0 <= p <= 1)
        vals = [max(ZERO, top * (1 - abs(x - c) / h)) for x in bps]
        return cls.pl(bps, vals)

    @classmethod
    def indicator(cls, region: Region) -> PiecewiseFunc:
        """Simple indicator of a union of half-open cells ``[a, b)`` (last may close at 1).

        Raises ValueError when the region is not of that shape.
        """
        crit = critical_points(region)
        vals = []
        for lo, hi in zip(crit, crit[1:]):
            last = hi == 1
            cell = Region([(lo, hi, True, last)])
            if cell.issubset(region):
                vals.append(ONE)
            elif not (cell & region):
                vals.append(ZERO)
            else:
                raise ValueError(f"{region} is not a union of half-open cells")
        f = cls.simple(crit, vals)
        if level_region(f, lambda v: v == 1) != region:
            raise ValueError(f"{region} is not a union of half-open cells")
        return f

    # evaluation
    def __call__(self, x: RationalLike) -> Q:
        x = as_fraction(x)
        if x < 0 or x > 1:
            raise ValueError("argument outside [0,1]")
        bps = self.breakpoints
        if self.kind is FuncKind.SIMPLE:
            return self.values[min(bisect_right(bps, x), len(bps) - 1) - 1]
        i = bisect_left(bps, x)
        if bps[i] == x:
            return self.values[i]
        x0, x1 = bps[i - 1], bps[i]
        v0, v1 = self.values[i - 1], self.values[i]
        return v0 + (v1 - v0) * (x - x0) / (x1 - x0)

    @property
    def sup_norm(self) -> Q:
        return max(abs(v) for v in self.values)

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def lipschitz(self) -> Q:
        """Exact Lipschitz constant (max |slope|) of a ContinuousPL function."""
        if self.kind is not FuncKind.CONTINUOUS_PL:
            raise ValueError("Lipschitz constant only defined for ContinuousPL")
        bps, vals = self.breakpoints, self.values
        return max(abs((vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i])) for i in range(len(bps) - 1))

    def refine(self, points: Iterable[Q]) -> PiecewiseFunc:
        """Same function on a finer breakpoint set."""
        bps = sorted(set(self.breakpoints) | {as_fraction(p) for p in points})
        if self.kind is FuncKind.CONTINUOUS_PL:
            return PiecewiseFunc.pl(bps, [self(b) for b in bps])
        return PiecewiseFunc.simple(bps, [self(b) for b in bps[:-1]])

    def cell_region(self, i: int) -> Region:
        """The i-th cell of a Simple function (half-open, last closed)."""
        bps = self.breakpoints
        return Region([(bps[i], bps[i + 1], True, i == len(bps) - 2)])


def level_region(f: PiecewiseFunc, accept: Callable[[Q], bool]) -> Region:
    """Union of Simple cells whose value passes ``accept``."""
    if f.kind is not FuncKind.SIMPLE:
        raise ValueError("level_region needs a Simple function")
    return region_union_all(f.cell_region(i) for i, v in enumerate(f.values) if accept(v))


class ZeroFunctionError(ValueError):
    """Level partition requested for the zero function.

    The only meaningful partition is the single cell ``[0, 1]``, which the
    exception carries as ``partition``.
    """

    def __init__(self) -> None:
        super().__init__("f is identically zero; use the single-cell partition")
        self.partition = [Region.full()]


def _linear_band(x0: Q, x1: Q, v0: Q, v1: Q,
                 lo: Q, hi: Q, hi_closed: bool) -> Region:
    # {x in [x0,x1] : lo <= f(x) < hi}  (or <= hi), f linear from v0 to v1
    if v0 == v1:
        ok = lo <= v0 and (v0 <= hi if hi_closed else v0 < hi)
        return Region([(x0, x1, True, True)]) if ok else Region()

    def t(y: Q) -> Q:
        return x0 + (y - v0) * (x1 - x0) / (v1 - v0)

    if v1 > v0:
        left, left_closed = max(x0, t(lo)), True
        th = t(hi)
        if th > x1:
            right, right_closed = x1, True
        else:
            right, right_closed = th, hi_closed
    else:
        th = t(hi)
        if th < x0:
            left, left_closed = x0, True
        else:
            left, left_closed = th, hi_closed
        right, right_closed = min(x1, t(lo)), True
    iv = Interval(left, right, left_closed, right_closed)
    return Region() if iv.is_empty else Region([iv])


def func_level_partition(f: PiecewiseFunc, n: int) -> list[Region]:
    """Exact preimages of ``n`` equal-height bands covering ``[-|f|, |f|]``.

    Band ``i`` (1-based) is ``[-M + 2(i-1)M/n, -M + 2iM/n)``, the last one
    closed on the right.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if f.is_zero:
        raise ZeroFunctionError()
    m = f.sup_norm
    bounds = [-m + 2 * i * m / n for i in range(n + 1)]

    def band(y: Q) -> int:  # 0-based band holding value y
        return min(floor((y + m) * n / (2 * m)), n - 1)

    if f.kind is FuncKind.SIMPLE:
        members: list[list] = [[] for _ in range(n)]
        for i, v in enumerate(f.values):
            members[band(v)].append(f.cell_region(i))
        return [region_union_all(parts) for parts in members]
    pieces: list[list[Region]] = [[] for _ in range(n)]
    bps, vals = f.breakpoints, f.values
    for j in range(len(bps) - 1):
        v0, v1 = vals[j], vals[j + 1]
        for i in range(band(min(v0, v1)), band(max(v0, v1)) + 1):
            pieces[i].append(_linear_band(bps[j], bps[j + 1], v0, v1, bounds[i], bounds[i + 1], i == n - 1))
    return [region_union_all(parts) for parts in pieces]


__all__ = [
    "FuncKind",
    "Interval",
    "ONE",
    "PiecewiseFunc",
    "RationalLike",
    "Region",
    "ZERO",
    "ZeroFunctionError",
    "as_fraction",
    "base_endpoint_sequences",
    "base_enumerate",
    "critical_points",
    "func_level_partition",
    "level_region",
    "piece_regions",
    "region_closure",
    "region_complement",
    "region_difference",
    "region_from_endpoints",
    "region_interior",
    "region_intersection",
    "region_shrink",
    "region_union",
    "region_union_all",
]
