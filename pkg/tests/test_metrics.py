from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, strategies as st

from measure_modes import (
    AtomicOnlyError,
    GaugeKind,
    GaugeSpec,
    Measure,
    PiecewiseFunc,
    Q,
    Region,
    family_term,
    gauge_contains,
    hahn_set,
    measure_of,
    piece_regions,
    prohorov_distance,
    prohorov_feasible,
    SequenceFamily,
    tv_brute_oracle,
    tv_distance,
)

from conftest import atomic_measures, density_measures, measures

HALF = Q(1, 2)
TINY = Q(1, 2**40)


def exhaustive_tv(a: Measure, b: Measure, level: int) -> Q:
    """Max over every union of grid points and open grid cells, enumerated subset by subset."""
    n = 2**level
    pieces = piece_regions([Q(i, n) for i in range(n + 1)])
    diffs = [measure_of(a, p) - measure_of(b, p) for p in pieces]
    best = Q(0)
    for picks in product((False, True), repeat=len(diffs)):
        best = max(best, abs(sum((d for d, keep in zip(diffs, picks) if keep), Q(0))))
    return best


# -- total variation ---------------------------------------------------------------------


@pytest.mark.parametrize("a, b, expected", [
    (Measure.dirac(HALF), Measure.dirac(HALF), Q(0)),
    (Measure.dirac(0), Measure.dirac(1), Q(1)),
    (Measure.uniform(), Measure.uniform(0, HALF), HALF),
])
def test_tv_examples(a, b, expected):
    assert tv_distance(a, b) == expected


def test_tv_closed_form_matches_oracle_on_uniform_pair():
    a, b = Measure.uniform(), Measure.uniform(0, HALF)
    assert tv_brute_oracle(a, b, 6) == HALF == tv_distance(a, b)


@pytest.mark.parametrize("a, b, level, expected", [
    (Measure.uniform(), Measure.uniform(), 3, Q(0)),
    (Measure.dirac(0), Measure.dirac(1), 1, Q(1)),
])
def test_oracle_examples(a, b, level, expected):
    assert tv_brute_oracle(a, b, level) == expected


def test_square_wave_tv_is_half():
    unif = Measure.uniform()
    fam = SequenceFamily.square_wave()
    assert {tv_distance(family_term(fam, n), unif) for n in range(1, 33)} == {HALF}


@given(measures(), measures())
def test_hahn_set_attains_tv(a, b):
    h = hahn_set(a, b)
    assert measure_of(a, h) - measure_of(b, h) == tv_distance(a, b)


@given(atomic_measures(denom=4), atomic_measures(denom=4))
def test_oracle_matches_exhaustive_subsets(a, b):
    assert tv_brute_oracle(a, b, 2) == exhaustive_tv(a, b, 2) == tv_distance(a, b)


@given(st.one_of(atomic_measures(), density_measures()), st.one_of(atomic_measures(), density_measures()))
def test_tv_matches_oracle_on_grid_inputs(a, b):
    assert tv_distance(a, b) == tv_brute_oracle(a, b, 4)


@given(measures(), measures(), measures())
def test_tv_axioms(a, b, c):
    assert tv_distance(a, a) == 0
    assert tv_distance(a, b) == tv_distance(b, a)
    assert 0 <= tv_distance(a, b) <= 1
    assert tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c)


# -- Prohorov ---------------------------------------------------------------------------


@pytest.mark.parametrize("a, b, expected", [
    (Measure.dirac(Q(1, 3)), Measure.dirac(Q(1, 3)), Q(0)),
    (Measure.dirac(0), Measure.dirac(Q(1, 4)), Q(1, 4)),
    (Measure.dirac(0), Measure.atomic([(0, Q(2, 3)), (1, Q(1, 3))]), Q(1, 3)),
    (Measure.dirac(0), Measure.dirac(1), Q(1)),
])
def test_prohorov_examples(a, b, expected):
    assert prohorov_distance(a, b) == expected


def test_prohorov_refuses_densities():
    with pytest.raises(AtomicOnlyError):
        prohorov_distance(Measure.uniform(), Measure.dirac(0))


def test_prohorov_refuses_large_supports():
    big = Measure.atomic([(Q(i, 20), Q(1, 20)) for i in range(20)])
    with pytest.raises(AtomicOnlyError):
        prohorov_distance(big, Measure.dirac(0))


@given(atomic_measures(), atomic_measures())
def test_prohorov_is_the_feasibility_threshold(a, b):
    d = prohorov_distance(a, b)
    assert prohorov_feasible(a, b, d + TINY)
    if d > 0:
        assert not prohorov_feasible(a, b, d - TINY)


@given(atomic_measures(), atomic_measures(), atomic_measures())
def test_prohorov_axioms_and_tv_bound(a, b, c):
    assert prohorov_distance(a, a) == 0
    assert prohorov_distance(a, b) == prohorov_distance(b, a)
    assert prohorov_distance(a, c) <= prohorov_distance(a, b) + prohorov_distance(b, c)
    assert prohorov_distance(a, b) <= tv_distance(a, b)


@given(atomic_measures(), atomic_measures())
def test_prohorov_backends_agree(a, b):
    assert prohorov_distance(a, b, backend="python") == prohorov_distance(a, b)


# -- gauges -----------------------------------------------------------------------------


@given(measures())
def test_gauge_contains_its_center(nu):
    g = GaugeSpec(GaugeKind.S, (Region.parse("(0,1/2)"), Region.point(0)), Q(1, 10), nu)
    v = gauge_contains(g, nu)
    assert v.contained and v.margin == Q(1, 10)


def test_s_gauge_excludes_escaping_dirac():
    g = GaugeSpec(GaugeKind.S, (Region.parse("(0,1)"),), HALF, Measure.dirac(0))
    for n in (1, 5, 64):
        v = gauge_contains(g, Measure.dirac(Q(1, n + 1)))
        assert not v.contained and v.worst_deviation == 1 and v.margin == -HALF


def test_f_gauge_example():
    g = GaugeSpec(GaugeKind.F, (PiecewiseFunc.identity(),), Q(1, 10), Measure.uniform())
    v = gauge_contains(g, Measure.dirac(HALF))
    assert v.contained and v.worst_deviation == 0


def test_gauge_validation():
    with pytest.raises(ValueError):
        GaugeSpec(GaugeKind.S, (), Q(1, 10), Measure.uniform())
    with pytest.raises(ValueError):
        GaugeSpec(GaugeKind.S, (Region.full(),), Q(0), Measure.uniform())
    with pytest.raises(TypeError):
        GaugeSpec(GaugeKind.F, (Region.full(),), Q(1), Measure.uniform())
