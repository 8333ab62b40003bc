"""Acceptance criteria 1-8, each at its stated tolerance and runtime.

Every criterion prints one ``criterion N: PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary. Run directly with
``python tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import json
import random
import sys
import time
from contextlib import contextmanager

import pytest

from measure_modes import (
    Budget,
    Measure,
    Mode,
    Q,
    SequenceFamily,
    Status,
    atoms_of,
    brute_force_atoms,
    classify_modes,
    eventual_tv,
    family_term,
    gallery_cases,
    gallery_run,
    portmanteau_crosscheck,
    tv_distance,
)
from measure_modes.campaigns import (
    all_generator_families,
    bridge_campaign,
    certificate_campaign,
    hierarchy_campaign,
    hierarchy_violations,
    metric_campaign,
    portmanteau_campaign,
    sigma_campaign,
    vague_campaign,
)
from measure_modes.cli import dispatch

SEED = 0
RESULTS: dict[str, str] = {}


def rng(name: str) -> random.Random:
    return random.Random(f"{SEED}:{name}")


def record(key: str, ok: bool, elapsed: float, limit: float | None, detail: str) -> None:
    budget = f"limit {limit:g}s" if limit is not None else "no limit"
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {elapsed:6.2f}s ({budget})  {detail}"
    RESULTS[key] = line
    print(line)


@contextmanager
def stopwatch():
    box = {}
    start = time.perf_counter()
    yield box
    box["elapsed"] = time.perf_counter() - start


# -- 1: gallery pins ----------------------------------------------------------------------


def test_criterion_1_gallery_pins():
    with stopwatch() as t:
        _, classify = dispatch(["classify", "--family", "dirac-at", "--limit", "dirac:0"])
        _, compact = dispatch(["compactness", "--family", "dirac-at"])
    v = {x["mode"]: x for x in json.loads(classify)["result"]["verdicts"]}
    gaps = {e["region"]["text"]: e["gap"]["exact"] for e in json.loads(compact)["result"]["entries"]}
    checks = {
        "weak": v["Weak"]["status"] == "ConvergesExact",
        "setwise": (v["Setwise"]["status"], v["Setwise"]["witness"]["text"], v["Setwise"]["gap"]["exact"])
        == ("DivergesWitness", "(0,1)", "1/1"),
        "tv": (v["TV"]["status"], v["TV"]["gap"]["exact"]) == ("DivergesWitness", "1/1"),
        "gap(0,1)": gaps.get("(0,1)") == "1/1",
    }
    ok = all(checks.values()) and t["elapsed"] < 1
    record("1", ok, t["elapsed"], 1, " ".join(f"{k}={'ok' if c else 'BAD'}" for k, c in checks.items()))
    assert all(checks.values()), checks
    assert t["elapsed"] < 1


# -- 2: setwise but not TV ----------------------------------------------------------------


def test_criterion_2_square_wave():
    unif = Measure.uniform()
    fam = SequenceFamily.square_wave()
    with stopwatch() as t:
        v = {x.mode: x for x in classify_modes(fam, unif, Budget(k_base=4))}
        tvs = {tv_distance(family_term(fam, n), unif) for n in range(1, 65)}
        ev = eventual_tv(fam, unif)
    setwise = v[Mode.SETWISE]
    ok_set = setwise.status is Status.CONVERGES_EXACT
    ok_tv = tvs == {Q(1, 2)} and v[Mode.TV].gap == Q(1, 2) and ev.limit == Q(1, 2) and ev.attained_from == 1
    ok = ok_set and ok_tv and t["elapsed"] < 5
    record("2", ok, t["elapsed"], 5,
           f"setwise={setwise.status.value} on {setwise.tested} regions; tv(n=1..64)={sorted(map(str, tvs))}")
    assert ok_set and ok_tv
    assert t["elapsed"] < 5


# -- 3: certificate -----------------------------------------------------------------------


def test_criterion_3_certificates():
    with stopwatch() as t:
        out = certificate_campaign(rng("certificate"), 10_000)
    ok = out["violations"] == 0 and out["hypothesis_held"] == 10_000 and t["elapsed"] < 30
    record("3", ok, t["elapsed"], 30,
           f"{out['hypothesis_held']} hypotheses held, {out['violations']} violations, "
           f"min margin {out['min_margin']}")
    assert out["violations"] == 0 and out["hypothesis_held"] == 10_000
    assert out["min_margin"] > 0
    assert t["elapsed"] < 30


# -- 4: discretization bound and monotone decay ------------------------------------------


@pytest.fixture(scope="module")
def vague_outcome():
    with stopwatch() as t:
        out = vague_campaign(rng("vague"), 1_000)
    bound_ok = out["bound_violations"] == 0 and out["tail_bound_violations"] == 0
    mono_ok = out["nonmonotone"] == 0
    record("4", bound_ok and mono_ok and t["elapsed"] < 30, t["elapsed"], 30,
           f"bound violations {out['bound_violations']}/1000; "
           f"nonincreasing along 2^j: {1000 - out['nonmonotone']}/1000 "
           f"(first counterexample errors {(out['first_nonmonotone'] or {}).get('errors', [])[:4]})")
    return out, t["elapsed"]


def test_criterion_4_error_bound(vague_outcome):
    out, elapsed = vague_outcome
    assert out["bound_violations"] == 0
    assert out["tail_bound_violations"] == 0
    assert elapsed < 30


def test_criterion_4_error_nonincreasing(vague_outcome):
    """Fails: the error along n1 = 2^j is not monotone in general (see the ledger)."""
    out, _ = vague_outcome
    assert out["nonmonotone"] == 0, out["first_nonmonotone"]


# -- 5: metric axioms ---------------------------------------------------------------------


def test_criterion_5_metric_axioms():
    with stopwatch() as t:
        out = metric_campaign(rng("metric"), 2_000)
    fails = {k: v for k, v in out.items() if k != "trials"}
    ok = not any(fails.values()) and t["elapsed"] < 60
    record("5", ok, t["elapsed"], 60, ", ".join(f"{k}={v}" for k, v in fails.items()))
    assert not any(fails.values()), fails
    assert t["elapsed"] < 60


# -- 6: portmanteau -----------------------------------------------------------------------


def test_criterion_6_portmanteau():
    with stopwatch() as t:
        gallery = [portmanteau_crosscheck(c.family, c.candidate, 3) for c in gallery_cases()]
        out = portmanteau_campaign(rng("portmanteau"), 200, k_base=3)
    disagree = sum(not p.agree for p in gallery) + out["disagreements"]
    ok = disagree == 0 and t["elapsed"] < 10
    record("6", ok, t["elapsed"], 10, f"{len(gallery)} gallery families + 200 tabulated prefixes, "
                                      f"{disagree} discrepancies")
    assert disagree == 0
    assert t["elapsed"] < 10


# -- 7: finite sigma-algebras -------------------------------------------------------------


def test_criterion_7_sigma_algebras():
    with stopwatch() as t:
        families = mismatches = 0
        for m in range(1, 5):
            for gens in all_generator_families(m):
                families += 1
                mismatches += atoms_of(m, gens) != brute_force_atoms(m, gens)
        out = sigma_campaign(rng("sigma"), 1_000)
    ok = mismatches == 0 and out["atom_mismatches"] == 0 and out["dense_failures"] == 0 and t["elapsed"] < 30
    record("7", ok, t["elapsed"], 30, f"{families} generator families (m<=4), {mismatches} mismatches; "
                                      f"1000 dense queries, {out['dense_failures']} failures")
    assert mismatches == 0 and out["atom_mismatches"] == 0 and out["dense_failures"] == 0
    assert t["elapsed"] < 30


# -- 8: hierarchy -------------------------------------------------------------------------


def test_criterion_8_hierarchy():
    with stopwatch() as t:
        gallery_bad = sum(bool(hierarchy_violations(row.verdicts)) for row in gallery_run(Budget(k_base=3)))
        runs = hierarchy_campaign(rng("hierarchy"), 200)
        bridges = bridge_campaign(rng("bridge"), 1_000)
    bad = gallery_bad + runs["failures"] + bridges["set_bridge_failures"] + bridges["function_bridge_failures"]
    record("8", bad == 0, t["elapsed"], None,
           f"chain violations {gallery_bad + runs['failures']} over 3 gallery + 200 random runs; "
           f"bridge failures {bridges['set_bridge_failures']}+{bridges['function_bridge_failures']}/1000")
    assert bad == 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
