from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from measure_modes import (
    Measure,
    PiecewiseFunc,
    Q,
    Region,
    approximation_error,
    certificate_check,
    greedy_cover_cells,
    grid_cells,
    integrate,
    make_certificate,
    measure_of,
    modulus_epsilon,
    partition_masses,
    perturb_in_neighbourhood,
    proposition_bounds,
    vague_approximate,
)

from conftest import measures, pl_functions, simple_functions

HALF = Q(1, 2)
X = PiecewiseFunc.identity()


# -- certificates -----------------------------------------------------------------------


def test_certificate_for_identity():
    c = make_certificate(X, 1)
    assert c.n == 5 and c.cell_tolerance == Q(1, 10) and not c.trivial


def test_certificate_for_constant():
    c = make_certificate(PiecewiseFunc.constant(1), HALF)
    assert c.n == 9
    assert [r for r in c.cells if r] == [Region.full()]


def test_certificate_for_zero_is_trivial():
    c = make_certificate(PiecewiseFunc.constant(0), Q(1, 3))
    assert c.trivial
    check = certificate_check(c, Measure.dirac(0), Measure.dirac(1))
    assert check.hypothesis and check.conclusion and check.gap == Q(1, 3)


def test_certificate_rejects_nonpositive_epsilon():
    with pytest.raises(ValueError):
        make_certificate(X, 0)


def test_check_same_measure():
    c = make_certificate(X, Q(1, 4))
    r = certificate_check(c, Measure.uniform(), Measure.uniform())
    assert r.hypothesis and r.conclusion and r.gap == Q(1, 4)


def test_check_conclusion_without_hypothesis():
    r = certificate_check(make_certificate(X, 1), Measure.uniform(), Measure.dirac(0))
    assert r.conclusion and r.gap == HALF


def test_check_hypothesis_violated():
    r = certificate_check(make_certificate(X, Q(1, 10)), Measure.dirac(0), Measure.dirac(1))
    assert not r.hypothesis and r.worst_cell_deviation == 1 and r.consistent


@given(st.one_of(pl_functions(), simple_functions()), st.integers(1, 8), measures(), st.data())
def test_hypothesis_implies_conclusion(f, k, nu, data):
    c = make_certificate(f, Q(k, 4))
    if c.trivial:
        return
    bases = partition_masses(nu, c.cells)
    live = [i for i, cell in enumerate(c.cells) if cell]
    shifts = [Q(0)] * len(c.cells)
    if len(live) >= 2:
        i, j = data.draw(st.lists(st.sampled_from(live), min_size=2, max_size=2, unique=True))
        room = min(bases[j], c.cell_tolerance * Q(9, 10))
        step = room * Q(data.draw(st.integers(0, 8)), 8)
        shifts[i], shifts[j] = step, -step
    rho = perturb_in_neighbourhood(nu, c.cells, shifts)
    r = certificate_check(c, nu, rho)
    assert r.hypothesis
    assert r.conclusion and r.gap > 0


# -- perturbation -----------------------------------------------------------------------


@given(measures(), st.integers(2, 6), st.data())
def test_perturb_hits_target_masses(nu, n1, data):
    cells = grid_cells(n1)
    bases = partition_masses(nu, cells)
    i, j = data.draw(st.lists(st.integers(0, n1), min_size=2, max_size=2, unique=True))
    step = bases[j] * Q(data.draw(st.integers(0, 4)), 4)
    shifts = [Q(0)] * len(cells)
    shifts[i], shifts[j] = step, -step
    rho = perturb_in_neighbourhood(nu, cells, shifts)
    assert partition_masses(rho, cells) == [b + s for b, s in zip(bases, shifts)]
    assert measure_of(rho, Region.full()) == 1


def test_perturb_rejects_bad_shifts():
    cells = grid_cells(2)
    with pytest.raises(ValueError):
        perturb_in_neighbourhood(Measure.uniform(), cells, [Q(1, 4), Q(0), Q(0)])
    with pytest.raises(ValueError):
        perturb_in_neighbourhood(Measure.uniform(), cells, [Q(-3, 4), Q(3, 4), Q(0)])


def test_perturb_puts_atom_on_point_cell():
    rho = perturb_in_neighbourhood(Measure.uniform(), grid_cells(2), [Q(-1, 4), Q(0), Q(1, 4)])
    assert rho.atom_mass(Q(1)) == Q(1, 4)


# -- vague approximation ----------------------------------------------------------------


def test_vague_dirac_half():
    r = vague_approximate(Measure.dirac(HALF), 2)
    assert r.atoms == Measure.dirac(HALF).canonical()
    assert r.centers_used == (HALF,)


def test_vague_uniform():
    r = vague_approximate(Measure.uniform(), 2)
    assert r.atoms == Measure.atomic([(0, HALF), (HALF, HALF)]).canonical()


def test_vague_rejects_small_grid():
    with pytest.raises(ValueError):
        vague_approximate(Measure.uniform(), 1)


@pytest.mark.parametrize("n1", [2, 3, 5, 8, 13])
def test_greedy_cover_has_closed_form(n1):
    assert greedy_cover_cells(n1) == grid_cells(n1)


@given(measures(), st.integers(2, 40))
def test_vague_conserves_mass_on_cells(nu, n1):
    r = vague_approximate(nu, n1)
    assert measure_of(r.atoms, Region.full()) == 1
    masses = partition_masses(nu, r.cover_cells)
    for i, m in enumerate(masses):
        assert r.atoms.atom_mass(Q(i, n1)) == m


@given(measures(), pl_functions(), st.integers(1, 8))
def test_error_within_epsilon_when_grid_is_fine(nu, f, k):
    eps = Q(k, 8)
    lip = f.lipschitz()
    n1 = max(2, int(2 * lip / eps) + 1)
    r = vague_approximate(nu, n1)
    err = approximation_error(nu, r, f)
    assert err <= eps
    assert err <= lip * r.error_bound
    compact, general = proposition_bounds(f, n1)
    assert err <= compact <= general


def test_modulus_examples():
    assert modulus_epsilon(X, 4) == HALF
    assert modulus_epsilon(PiecewiseFunc.constant(3), 4) == Q(1, 4)
    with pytest.raises(ValueError):
        modulus_epsilon(PiecewiseFunc.simple([0, 1], [1]), 4)


def test_nonmonotone_error_counterexample():
    """Doubling the grid can increase the error; the bound still holds at every level."""
    d = Q(1, 17)
    nu = Measure(density=PiecewiseFunc.simple(
        [Q(i, 8) for i in range(9)], [0, 32 * d, 0, 8 * d, 16 * d, 32 * d, 16 * d, 32 * d]))
    f = PiecewiseFunc.pl([0, Q(7, 8), 1], [-1, Q(-3, 2), Q(5, 4)])
    errs = [approximation_error(nu, vague_approximate(nu, 2**j), f) for j in range(1, 4)]
    assert errs == [Q(87, 476), Q(115, 476), Q(141, 476)]
    for j in range(1, 11):
        n1 = 2**j
        assert approximation_error(nu, vague_approximate(nu, n1), f) <= f.lipschitz() / n1
    assert integrate(nu, PiecewiseFunc.constant(1)) == 1
