from __future__ import annotations

import os

from hypothesis import HealthCheck, settings, strategies as st

from measure_modes import Interval, Measure, PiecewiseFunc, Q, Region

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GRID = 16


def dyadic(denom: int = GRID):
    return st.integers(0, denom).map(lambda k: Q(k, denom))


@st.composite
def intervals(draw, denom: int = GRID):
    a, b = sorted((draw(st.integers(0, denom)), draw(st.integers(0, denom))))
    if a == b:
        return Interval(Q(a, denom), Q(a, denom), True, True)
    return Interval(Q(a, denom), Q(b, denom), draw(st.booleans()), draw(st.booleans()))


@st.composite
def regions(draw, denom: int = GRID, max_parts: int = 4):
    return Region(draw(st.lists(intervals(denom), max_size=max_parts)))


@st.composite
def weights(draw, n: int, denom: int = 12):
    """``n`` nonnegative rationals summing to 1."""
    cuts = sorted(draw(st.lists(st.integers(0, denom), min_size=n - 1, max_size=n - 1)))
    bounds = [0, *cuts, denom]
    return [Q(bounds[i + 1] - bounds[i], denom) for i in range(n)]


@st.composite
def atomic_measures(draw, max_atoms: int = 4, denom: int = GRID):
    k = draw(st.integers(1, max_atoms))
    pts = draw(st.lists(st.integers(0, denom), min_size=k, max_size=k, unique=True))
    ws = draw(weights(k))
    return Measure.atomic([(Q(p, denom), w) for p, w in zip(pts, ws)]).canonical()


@st.composite
def density_measures(draw, cells: int = 4):
    raw = draw(st.lists(st.integers(0, 4), min_size=cells, max_size=cells).filter(any))
    total = Q(sum(raw), cells)
    bps = [Q(i, cells) for i in range(cells + 1)]
    return Measure(density=PiecewiseFunc.simple(bps, [Q(r) / total for r in raw]))


@st.composite
def measures(draw):
    kind = draw(st.sampled_from(["atomic", "density", "mixed"]))
    if kind == "atomic":
        return draw(atomic_measures())
    if kind == "density":
        return draw(density_measures())
    w = draw(st.integers(1, 3))
    a, d = draw(atomic_measures()), draw(density_measures())
    return Measure(tuple((x, m * Q(w, 4)) for x, m in a.atoms),
                   PiecewiseFunc.simple(d.density.breakpoints,
                                        [v * Q(4 - w, 4) for v in d.density.values])).canonical()


@st.composite
def pl_functions(draw, cells: int = 4, height: int = 2):
    vals = draw(st.lists(st.integers(-4 * height, 4 * height), min_size=cells + 1, max_size=cells + 1))
    return PiecewiseFunc.pl([Q(i, cells) for i in range(cells + 1)], [Q(v, 4) for v in vals])


@st.composite
def simple_functions(draw, cells: int = 4, height: int = 2):
    vals = draw(st.lists(st.integers(-4 * height, 4 * height), min_size=cells, max_size=cells))
    return PiecewiseFunc.simple([Q(i, cells) for i in range(cells + 1)], [Q(v, 4) for v in vals])


def membership_grid(denom: int = 4 * GRID):
    """Probe points fine enough to tell apart any two regions on the ``GRID`` lattice."""
    return [Q(k, denom) for k in range(denom + 1)]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for key in sorted(results):
            terminalreporter.line(results[key])
