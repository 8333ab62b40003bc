"""Seeded randomized property campaigns over exact objects.

Every campaign takes a :class:`random.Random` and returns a plain dict of
counts and extremes, so the same seed always yields the same report.
"""

from __future__ import annotations

import random
from itertools import combinations

from .approx import (
    approximation_error,
    certificate_check,
    make_certificate,
    perturb_in_neighbourhood,
    vague_approximate,
)
from .intervals import ONE, ZERO, PiecewiseFunc, Region
from .measures import Measure, integrate, measure_of, mixture, partition_masses
from .metrics import prohorov_distance, tv_brute_oracle, tv_distance
from .rational import Q
from .sequences import Budget, SequenceFamily, Status, classify_modes, portmanteau_crosscheck
from .sigma_atoms import AtomMeasure, atoms_of, brute_force_atoms, dense_family_member, sigma_algebra

# -- generators ------------------------------------------------------------------------


def random_weights(rng: random.Random, n: int, top: int = 9) -> list[Q]:
    raw = [rng.randint(1, top) for _ in range(n)]
    total = sum(raw)
    return [Q(r, total) for r in raw]


def random_atomic(rng: random.Random, max_atoms: int = 5, grid: int = 16) -> Measure:
    k = rng.randint(1, max_atoms)
    locs = rng.sample(range(grid + 1), k)
    return Measure(tuple((Q(x, grid), w) for x, w in zip(locs, random_weights(rng, k))))


def random_density(rng: random.Random, grid: int = 8) -> Measure:
    """Absolutely continuous probability with a density constant on ``1/grid`` cells."""
    w = [rng.randint(0, 4) for _ in range(grid)]
    if not any(w):
        w[rng.randrange(grid)] = 1
    total = sum(w)
    bps = [Q(i, grid) for i in range(grid + 1)]
    return Measure((), PiecewiseFunc.simple(bps, [Q(x * grid, total) for x in w])).canonical()


def random_measure(rng: random.Random) -> Measure:
    """Atomic, absolutely continuous, or a mix of both, with dyadic structure."""
    pick = rng.randrange(3)
    if pick == 0:
        return random_atomic(rng, grid=rng.choice((4, 8, 16, 32)))
    if pick == 1:
        return random_density(rng, grid=rng.choice((2, 4, 8)))
    t = Q(rng.randint(1, 7), 8)
    return mixture([t, 1 - t], [random_atomic(rng), random_density(rng)])


def random_pl(rng: random.Random, grid: int = 8, height: int = 2) -> PiecewiseFunc:
    inner = sorted(rng.sample(range(1, grid), rng.randint(0, min(3, grid - 1))))
    bps = [ZERO] + [Q(b, grid) for b in inner] + [ONE]
    vals = [Q(rng.randint(-4 * height, 4 * height), 4) for _ in bps]
    return PiecewiseFunc.pl(bps, vals)


def random_simple(rng: random.Random, grid: int = 8, height: int = 2) -> PiecewiseFunc:
    inner = sorted(rng.sample(range(1, grid), rng.randint(0, min(3, grid - 1))))
    bps = [ZERO] + [Q(b, grid) for b in inner] + [ONE]
    vals = [Q(rng.randint(-4 * height, 4 * height), 4) for _ in bps[:-1]]
    return PiecewiseFunc.simple(bps, vals)


def random_region(rng: random.Random, grid: int = 8) -> Region:
    comps = []
    for _ in range(rng.randint(0, 3)):
        a, b = sorted(rng.sample(range(grid + 1), 2))
        comps.append((Q(a, grid), Q(b, grid), rng.random() < 0.5, rng.random() < 0.5))
    if rng.random() < 0.3:
        x = Q(rng.randint(0, grid), grid)
        comps.append((x, x, True, True))
    return Region(comps)


def shifts_within(rng: random.Random, nu: Measure, cells, tol: Q, base=None) -> list[Q]:
    """Zero-sum cell shifts of size ``< tol`` that keep every cell mass nonnegative."""
    if base is None:
        base = partition_masses(nu, cells)
    live = [i for i, c in enumerate(cells) if c]
    raw = {i: Q(1, 2) if not base[i] else Q(rng.randint(-8, 8), 16) for i in live}
    mean = sum(raw.values(), ZERO) / len(raw)
    raw = {i: r - mean for i, r in raw.items()}  # |r| < 1
    scale = Q(9, 10) * tol
    for i, r in raw.items():
        if r < 0:
            scale = min(scale, base[i] / -r)
    return [scale * raw.get(i, ZERO) for i in range(len(cells))]


# -- campaigns -----------------------------------------------------------------------------


def certificate_campaign(rng: random.Random, trials: int) -> dict:
    """Perturb ``ν`` inside the certified cell neighbourhood and check the integral bound."""
    held = violations = 0
    min_margin = None
    for _ in range(trials):
        f = random_pl(rng) if rng.random() < 0.5 else random_simple(rng)
        eps = Q(1, rng.randint(1, 8))
        nu = random_measure(rng)
        cert = make_certificate(f, eps)
        base = partition_masses(nu, cert.cells)
        shifts = shifts_within(rng, nu, cert.cells, cert.cell_tolerance, base)
        rho = perturb_in_neighbourhood(nu, cert.cells, shifts)
        chk = certificate_check(cert, nu, rho)
        if chk.hypothesis:
            held += 1
            if not chk.conclusion:
                violations += 1
            if min_margin is None or chk.gap < min_margin:
                min_margin = chk.gap
    return {"trials": trials, "hypothesis_held": held, "violations": violations, "min_margin": min_margin}


def vague_campaign(rng: random.Random, trials: int, j_max: int = 10) -> dict:
    """Error bound at ``n1 > 2L/ε`` and the error sequence along ``n1 = 2^j``."""
    bound_violations = nonmonotone = not_vanishing = 0
    first_nonmonotone = None
    for t in range(trials):
        nu = random_measure(rng)
        f = random_pl(rng)
        lip = f.lipschitz()
        eps = Q(1, rng.randint(1, 16))
        n1 = max(2, int(2 * lip / eps) + 1)
        if approximation_error(nu, vague_approximate(nu, n1), f) > eps:
            bound_violations += 1
        errs = [approximation_error(nu, vague_approximate(nu, 2**j), f) for j in range(1, j_max + 1)]
        if any(b > a for a, b in zip(errs, errs[1:])):
            nonmonotone += 1
            if first_nonmonotone is None:
                first_nonmonotone = {"trial": t, "nu": str(nu), "f": [str(v) for v in f.values],
                                     "breakpoints": [str(b) for b in f.breakpoints],
                                     "errors": [str(e) for e in errs]}
        if errs[-1] > lip / 2**j_max:
            not_vanishing += 1
    return {"trials": trials, "bound_violations": bound_violations, "nonmonotone": nonmonotone,
            "tail_bound_violations": not_vanishing, "first_nonmonotone": first_nonmonotone}


def metric_campaign(rng: random.Random, trials: int, max_atoms: int = 5) -> dict:
    """Symmetry, identity and triangle inequality for tv and Prohorov, and Prohorov <= tv."""
    out = {"trials": trials, "tv_axiom_failures": 0, "prohorov_axiom_failures": 0,
           "prohorov_above_tv": 0, "oracle_mismatches": 0}
    for _ in range(trials):
        a, b, c = (random_atomic(rng, max_atoms) for _ in range(3))
        for key, d in (("tv_axiom_failures", tv_distance), ("prohorov_axiom_failures", prohorov_distance)):
            ab, ba, ac, bc = d(a, b), d(b, a), d(a, c), d(b, c)
            ok = ab == ba and d(a, a) == 0 and (ab == 0) == (a.canonical() == b.canonical())
            ok = ok and ac <= ab + bc
            out[key] += not ok
        if prohorov_distance(a, b) > tv_distance(a, b):
            out["prohorov_above_tv"] += 1
        if tv_brute_oracle(a, b, 4) != tv_distance(a, b):
            out["oracle_mismatches"] += 1
    return out


def bridge_campaign(rng: random.Random, trials: int) -> dict:
    """``|ν(A) - ρ(A)| <= tv`` and ``|∫f d(ν-ρ)| <= 2‖f‖ tv`` on random pairs."""
    set_fail = func_fail = 0
    for _ in range(trials):
        nu, rho = random_measure(rng), random_measure(rng)
        tv = tv_distance(nu, rho)
        a = random_region(rng)
        if abs(measure_of(nu, a) - measure_of(rho, a)) > tv:
            set_fail += 1
        f = random_pl(rng) if rng.random() < 0.5 else random_simple(rng)
        if abs(integrate(nu, f) - integrate(rho, f)) > 2 * f.sup_norm * tv:
            func_fail += 1
    return {"trials": trials, "set_bridge_failures": set_fail, "function_bridge_failures": func_fail}


def random_tabulated(rng: random.Random, length: int = 8) -> tuple[SequenceFamily, Measure]:
    """Short tabulated prefix and a candidate: sometimes constant, sometimes eventually constant."""
    limit = random_measure(rng)
    other = random_measure(rng)
    style = rng.randrange(3)
    if style == 0:
        terms = [limit] * length
    elif style == 1:
        cut = rng.randint(1, length)
        terms = [other] * cut + [limit] * (length - cut)
    else:
        terms = [rng.choice((limit, other)) for _ in range(length)]
    cand = limit if rng.random() < 0.7 else other
    return SequenceFamily.tabulated(terms), cand


def portmanteau_campaign(rng: random.Random, trials: int, k_base: int = 2) -> dict:
    disagreements = 0
    for _ in range(trials):
        fam, cand = random_tabulated(rng)
        if not portmanteau_crosscheck(fam, cand, k_base).agree:
            disagreements += 1
    return {"trials": trials, "k_base": k_base, "disagreements": disagreements}


def hierarchy_violations(verdicts) -> list[str]:
    """Fineness chain: TV ⇒ setwise ⇒ weak, read off one verdict list."""
    by_mode = {v.mode.value: v.status for v in verdicts}
    bad = []
    for finer, coarser in (("TV", "Setwise"), ("Setwise", "Weak"), ("Weak", "Vague")):
        if by_mode[finer].converges and by_mode[coarser] is Status.DIVERGES_WITNESS:
            bad.append(f"{finer} converges but {coarser} diverges")
    return bad


def hierarchy_campaign(rng: random.Random, trials: int, budget: Budget = Budget(2, 2, 16)) -> dict:
    failures = 0
    for _ in range(trials):
        if rng.random() < 0.5:
            fam, cand = random_tabulated(rng)
        else:
            fam = rng.choice([SequenceFamily.dirac_at(), SequenceFamily.uniform_on(),
                              SequenceFamily.square_wave(), SequenceFamily.constant(random_measure(rng))])
            cand = rng.choice([Measure.dirac(0), Measure.uniform(), random_measure(rng)])
        failures += bool(hierarchy_violations(classify_modes(fam, cand, budget)))
    return {"trials": trials, "failures": failures}


def sigma_campaign(rng: random.Random, trials: int) -> dict:
    """Refinement against brute force on random generators, plus dense witnesses."""
    atom_mismatch = dense_fail = 0
    max_denominator = 0
    for _ in range(trials):
        m = rng.randint(1, 6)
        gens = [set(rng.sample(range(1, m + 1), rng.randint(0, m))) for _ in range(rng.randint(0, 3))]
        if atoms_of(m, gens) != brute_force_atoms(m, gens):
            atom_mismatch += 1
        fsa = sigma_algebra(m, gens)
        n = len(fsa.atoms)
        nu = AtomMeasure(tuple(random_weights(rng, n, top=20)))
        chosen = [i for i in range(n) if rng.random() < 0.5]
        eps = Q(1, rng.randint(1, 64))
        w = dense_family_member(fsa, nu, chosen, eps)
        exact_margin = eps - abs(w.rho.mass(chosen) - nu.mass(chosen))
        if not (w.margin > 0 and w.margin == exact_margin and w.denominator <= 128):
            dense_fail += 1
        max_denominator = max(max_denominator, w.denominator)
    return {"trials": trials, "atom_mismatches": atom_mismatch, "dense_failures": dense_fail,
            "max_denominator": max_denominator}


def all_generator_families(m: int):
    """Every set of subsets of ``{1..m}`` (as generator lists), ``2**(2**m)`` of them."""
    subsets = [frozenset(c) for r in range(m + 1) for c in combinations(range(1, m + 1), r)]
    for mask in range(1 << len(subsets)):
        yield [s for i, s in enumerate(subsets) if mask >> i & 1]


CAMPAIGNS = {
    "certificate": certificate_campaign,
    "vague": vague_campaign,
    "metric": metric_campaign,
    "bridge": bridge_campaign,
    "portmanteau": portmanteau_campaign,
    "hierarchy": hierarchy_campaign,
    "sigma": sigma_campaign,
}


def run_campaigns(seed: int, trials: int, names=None) -> dict:
    """Run each named campaign with its own generator derived from ``seed``."""
    out = {}
    for name in names or CAMPAIGNS:
        out[name] = CAMPAIGNS[name](random.Random(f"{seed}:{name}"), trials)
    return out


__all__ = [
    "CAMPAIGNS",
    "all_generator_families",
    "bridge_campaign",
    "certificate_campaign",
    "hierarchy_campaign",
    "hierarchy_violations",
    "metric_campaign",
    "portmanteau_campaign",
    "random_atomic",
    "random_density",
    "random_measure",
    "random_pl",
    "random_region",
    "random_simple",
    "random_tabulated",
    "run_campaigns",
    "shifts_within",
    "sigma_campaign",
    "vague_campaign",
]
