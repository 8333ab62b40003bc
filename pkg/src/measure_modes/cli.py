"""``measure-modes`` command line.

Every subcommand prints one report (JSON by default, ``--text`` for aligned
columns). Reports contain no timestamps or paths beyond the command echo,
so identical inputs give byte-identical output.

Exit codes: 0 success, 2 invalid input (with a JSON error object naming
the violated invariant), 3 gallery pin failure, 64 unknown subcommand.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import codec
from .approx import (
    approximation_error,
    certificate_check,
    make_certificate,
    proposition_bounds,
    vague_approximate,
)
from .campaigns import CAMPAIGNS, run_campaigns
from .intervals import PiecewiseFunc, Region
from .kernels import BACKEND
from .measures import InvalidMeasure, Measure
from .metrics import AtomicOnlyError, gauge_contains, hahn_set, prohorov_distance, tv_distance
from .rational import RATIONAL_BACKEND, Q
from .sequences import (
    GALLERY_DELTAS,
    Budget,
    ModeVerdict,
    Unavailable,
    classify_modes,
    compactness_gap,
    gallery_run,
    portmanteau_crosscheck,
)
from .sigma_atoms import AtomMeasure, dense_family_member, elementary_count_verdict, sigma_algebra

EXIT_OK, EXIT_INVALID, EXIT_PIN, EXIT_USAGE = 0, 2, 3, 64
BUDGET_ENV = "MEASURE_MODES_BUDGET"


class CliError(Exception):
    def __init__(self, payload: dict, code: int = EXIT_INVALID) -> None:
        super().__init__(payload.get("message", ""))
        self.payload = payload
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2) with bare text
        raise CliError({"type": "UsageError", "invariant": "arguments", "message": message})


# -- JSON conversion of results ---------------------------------------------------------


def to_json(obj: Any) -> Any:
    """Exact objects to JSON-ready values (rationals become ``{"exact", "decimal"}``)."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int) and type(obj) is int:
        return obj
    if isinstance(obj, Region):
        return {"region": codec.region_to_json(obj), "text": str(obj)}
    if isinstance(obj, PiecewiseFunc):
        return codec.func_to_json(obj)
    if isinstance(obj, Measure):
        return codec.measure_to_json(obj)
    if isinstance(obj, ModeVerdict):
        return verdict_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    if hasattr(obj, "value") and isinstance(obj.value, str):  # enums
        return obj.value
    try:
        return codec.exact(Q(obj))
    except (TypeError, ValueError):
        raise TypeError(f"cannot serialise {type(obj).__name__}") from None


def verdict_json(v: ModeVerdict) -> dict:
    return {
        "mode": v.mode.value,
        "status": v.status.value,
        "witness": to_json(v.witness),
        "gap": None if v.gap is None else codec.exact(v.gap),
        "tested": v.tested,
        "evidence": to_json(v.evidence),
        "note": v.note,
    }


# -- text rendering ------------------------------------------------------------------------


def _fmt(v: Any) -> str:
    if isinstance(v, dict) and set(v) == {"exact", "decimal"}:
        return f"{v['exact']} ({v['decimal']})"
    if isinstance(v, dict) and set(v) == {"region", "text"}:
        return v["text"]
    if isinstance(v, (dict, list)):
        return json.dumps(v, ensure_ascii=False, separators=(",", ":"))
    return "-" if v is None else str(v)


def _table(rows: list[list[str]], header: list[str]) -> list[str]:
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
    line = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
    return [line(header), line(["-" * w for w in widths])] + [line(r) for r in rows]


def _verdict_rows(verdicts: list[dict]) -> list[list[str]]:
    return [[v["mode"], v["status"], _fmt(v["witness"]), _fmt(v["gap"]), str(v["tested"])] for v in verdicts]


VERDICT_HEADER = ["mode", "status", "witness", "gap", "tested"]
TEXT_ROW_LIMIT = 20


def render_text(report: dict) -> str:
    out = ["command: " + " ".join(report["command"])]
    for k, v in report.get("inputs", {}).items():
        out.append(f"input:   {k} sha256={v[:16]}")
    if report.get("budget"):
        out.append("budget:  " + ", ".join(f"{k}={_fmt(v)}" for k, v in report["budget"].items()))
    res = report["result"]
    if "verdicts" in res:
        out += [""] + _table(_verdict_rows(res["verdicts"]), VERDICT_HEADER)
    if "rows" in res:  # gallery
        for row in res["rows"]:
            out += ["", f"[{row['case']}]  {'ok' if not row['mismatches'] else 'MISMATCH'}"]
            out += _table(_verdict_rows(row["verdicts"]), VERDICT_HEADER)
            p = row["portmanteau"]
            out.append(f"portmanteau: open={p['open_status']} closed={p['closed_status']} agree={p['agree']}")
            out.append(f"compactness: positive gaps={len(row['compactness']['witnesses'])}")
            out += [f"  ! {m}" for m in row["mismatches"]]
    if "entries" in res:  # compactness
        rows = [[e["region"]["text"], _fmt(e["limsup"]), _fmt(e["grid_gap"]), _fmt(e["gap"])]
                for e in res["entries"] if e["gap"]["exact"] != "0/1"]
        out += ["", f"{len(res['entries'])} open sets tested, {len(rows)} with positive gap"]
        if rows:
            out += _table(rows[:TEXT_ROW_LIMIT], ["U", "limsup", "grid_gap", "gap"])
            if len(rows) > TEXT_ROW_LIMIT:
                out.append(f"... {len(rows) - TEXT_ROW_LIMIT} more (full list in JSON output)")
    scalars = {k: v for k, v in res.items() if k not in ("verdicts", "rows", "entries")}
    if scalars:
        width = max(len(k) for k in scalars)
        out += [""] + [f"{k.ljust(width)}  {_fmt(v)}" for k, v in scalars.items()]
    return "\n".join(out) + "\n"


# -- helpers ---------------------------------------------------------------------------------


def _digest(spec: str) -> str:
    path = Path(spec)
    data = path.read_bytes() if path.is_file() else spec.encode()
    return hashlib.sha256(data).hexdigest()


def _budget(args) -> Budget:
    k_base, k_funcs = 3, 3
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            k_base, k_funcs = (int(x) for x in env.split(","))
        except ValueError:
            raise CliError({"type": "UsageError", "invariant": "budget_env",
                            "message": f"{BUDGET_ENV} must be 'k_base,k_funcs', got {env!r}"}) from None
    if getattr(args, "kbase", None) is not None:
        k_base = args.kbase
    if getattr(args, "kfuncs", None) is not None:
        k_funcs = args.kfuncs
    n_max = getattr(args, "nmax", None) or 64
    if k_base < 0 or k_funcs < 0 or n_max < 1:
        raise CliError({"type": "UsageError", "invariant": "budget_nonnegative",
                        "message": "budget parameters must be nonnegative"})
    return Budget(k_base, k_funcs, n_max)


def _eps(text: str) -> Q:
    e = codec.parse_q(text, "--eps")
    if e <= 0:
        raise codec.SchemaError("positive_epsilon", "epsilon must be positive", "--eps")
    return e


def _int_sets(text: str) -> list[set[int]]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            out.append({int(x) for x in part.split(",") if x.strip()})
        except ValueError:
            raise codec.SchemaError("generator_syntax", f"bad generator {part!r}", "--gens") from None
    return out


# -- subcommands ---------------------------------------------------------------------------------


def cmd_tv(args) -> tuple[dict, dict]:
    a, b = codec.measure_spec(args.a), codec.measure_spec(args.b)
    return {"tv": tv_distance(a, b), "hahn_set": hahn_set(a, b)}, {}


def cmd_prohorov(args):
    a, b = codec.measure_spec(args.a), codec.measure_spec(args.b)
    return {"prohorov": prohorov_distance(a, b), "tv": tv_distance(a, b)}, {}


def cmd_gauge(args):
    g = codec.gauge_from_json(codec.load_json(args.spec))
    v = gauge_contains(g, codec.measure_spec(args.candidate))
    return {"kind": g.kind.value, "contained": v.contained, "margin": v.margin,
            "worst_index": v.worst_index, "worst_deviation": v.worst_deviation}, {}


def cmd_quantize(args):
    f = codec.func_from_json(codec.load_json(args.f) if not args.f.lstrip().startswith("{") else json.loads(args.f))
    cert = make_certificate(f, _eps(args.eps))
    res = {"certificate": codec.certificate_to_json(cert)}
    if args.nu and args.rho:
        chk = certificate_check(cert, codec.measure_spec(args.nu), codec.measure_spec(args.rho))
        res.update(hypothesis=chk.hypothesis, conclusion=chk.conclusion, margin=chk.gap,
                   worst_cell_deviation=chk.worst_cell_deviation)
    return res, {}


def cmd_vague(args):
    nu = codec.measure_spec(args.nu)
    if args.n1 < 2:
        raise codec.SchemaError("n1_at_least_2", "n1 must be >= 2", "--n1")
    r = vague_approximate(nu, args.n1)
    res = {"result": codec.vague_to_json(r)}
    if args.f:
        f = codec.func_from_json(codec.load_json(args.f))
        res["error"] = approximation_error(nu, r, f)
        if f.kind.value == "ContinuousPL":
            eps, general = proposition_bounds(f, args.n1)
            res.update(modulus_epsilon=eps, general_bound=general)
    return res, {}


def cmd_classify(args):
    budget = _budget(args)
    fam, cand = codec.family_spec(args.family), codec.limit_spec(args.limit)
    verdicts = classify_modes(fam, cand, budget)
    return {"family": fam.label(), "limit": str(cand), "verdicts": [verdict_json(v) for v in verdicts]}, budget


def cmd_compactness(args):
    budget = _budget(args)
    deltas = tuple(codec.parse_q(d, "--deltas") for d in args.deltas.split(",")) if args.deltas else GALLERY_DELTAS
    if any(d <= 0 for d in deltas):
        raise codec.SchemaError("positive_delta", "every delta must be positive", "--deltas")
    fam = codec.family_spec(args.family)
    try:
        rep = compactness_gap(fam, budget.k_base, deltas)
    except Unavailable as e:
        raise CliError({"type": "Unavailable", "invariant": "catalog_family", "message": str(e)}) from None
    entries = [{"region": to_json(e.region), "limsup": codec.exact(e.limsup),
                "core_limsups": [codec.exact(c) for c in e.core_limsups],
                "grid_gap": codec.exact(e.grid_gap), "gap": codec.exact(e.gap)} for e in rep.entries]
    worst = max(rep.entries, key=lambda e: e.gap, default=None)
    return {"family": fam.label(), "deltas": [codec.q(d) for d in deltas],
            "max_gap": None if worst is None else worst.gap,
            "max_gap_region": None if worst is None else worst.region,
            "entries": entries}, budget


def cmd_portmanteau(args):
    budget = _budget(args)
    fam, cand = codec.family_spec(args.family), codec.limit_spec(args.limit)
    p = portmanteau_crosscheck(fam, cand, budget.k_base, budget.n_max)
    return {"family": fam.label(), "limit": str(cand), "agree": p.agree, "n_open": p.n_open,
            "n_closed": p.n_closed, "verdicts": [dict(verdict_json(p.open_verdict), mode="Setwise(open)"),
                         dict(verdict_json(p.closed_verdict), mode="Setwise(closed)")]}, budget


def cmd_gallery(args):
    budget = _budget(args)
    rows = []
    for row in gallery_run(budget):
        rows.append({
            "case": row.case,
            "verdicts": [verdict_json(v) for v in row.verdicts],
            "portmanteau": {"open_status": row.portmanteau.open_verdict.status.value,
                            "closed_status": row.portmanteau.closed_verdict.status.value,
                            "agree": row.portmanteau.agree},
            "compactness": {"witnesses": [{"region": to_json(e.region), "gap": codec.exact(e.gap)}
                                          for e in row.compactness.witnesses]},
            "mismatches": list(row.mismatches),
        })
    ok = all(not r["mismatches"] for r in rows)
    return {"pins_ok": ok, "rows": rows}, budget


def cmd_atoms(args):
    fsa = sigma_algebra(args.ground, _int_sets(args.gens))
    return elementary_count_verdict(fsa), {}


def cmd_dense(args):
    fsa = sigma_algebra(args.ground, _int_sets(args.gens))
    n = len(fsa.atoms)
    if args.nu:
        weights = [codec.parse_q(w.strip(), "--nu") for w in args.nu.split(",")]
    else:
        weights = [Q(1, n)] * n
    if len(weights) != n:
        raise codec.SchemaError("one_weight_per_atom", f"need {n} weights, got {len(weights)}", "--nu")
    try:
        nu = AtomMeasure(tuple(weights))
    except ValueError as e:
        raise codec.SchemaError("simplex", str(e), "--nu") from None
    if args.set:
        chosen = fsa.atoms_in(int(x) for x in args.set.split(",") if x.strip())
    else:
        chosen = tuple(int(x) for x in (args.atoms or "0").split(",") if x.strip())
    w = dense_family_member(fsa, nu, chosen, _eps(args.eps))
    return {"atoms": [list(a) for a in fsa.atoms], "chosen_atoms": list(chosen),
            "rho": list(w.rho.weights), "denominator": w.denominator,
            "nu_mass": nu.mass(chosen), "rho_mass": w.rho.mass(chosen),
            "deviation": w.deviation, "margin": w.margin}, {}


def cmd_check(args):
    names = args.only.split(",") if args.only else None
    if names and any(n not in CAMPAIGNS for n in names):
        raise CliError({"type": "UsageError", "invariant": "campaign_name",
                        "message": f"campaigns are {sorted(CAMPAIGNS)}"})
    res = run_campaigns(args.seed, args.trials, names)
    return {"seed": args.seed, "trials": args.trials, "campaigns": res}, {}


COMMANDS: dict[str, Callable] = {
    "tv": cmd_tv,
    "prohorov": cmd_prohorov,
    "gauge": cmd_gauge,
    "quantize": cmd_quantize,
    "vague-approx": cmd_vague,
    "classify": cmd_classify,
    "compactness": cmd_compactness,
    "portmanteau": cmd_portmanteau,
    "gallery": cmd_gallery,
    "atoms": cmd_atoms,
    "dense-witness": cmd_dense,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="measure-modes", description="Exact topologies on probability measures on [0,1].")
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", dest="text", action="store_false", help="JSON report (default)")
    g.add_argument("--text", dest="text", action="store_true", help="aligned-column text report")
    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--kbase", type=int, help="max components of test unions (dyadic level too)")
    budget.add_argument("--kfuncs", type=int, help="hat-function level")
    budget.add_argument("--nmax", type=int, help="prefix length for tabulated families")

    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    s = sub.add_parser("tv", parents=[fmt], help="total-variation distance")
    s.add_argument("a"), s.add_argument("b")
    s = sub.add_parser("prohorov", parents=[fmt], help="Prohorov distance (atomic measures)")
    s.add_argument("a"), s.add_argument("b")
    s = sub.add_parser("gauge", parents=[fmt], help="neighbourhood membership")
    s.add_argument("spec"), s.add_argument("candidate")
    s = sub.add_parser("quantize", parents=[fmt], help="level-set quantization certificate")
    s.add_argument("--f", required=True)
    s.add_argument("--eps", required=True)
    s.add_argument("--nu")
    s.add_argument("--rho")
    s = sub.add_parser("vague-approx", parents=[fmt], help="grid discretization")
    s.add_argument("--nu", required=True)
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--f")
    s = sub.add_parser("classify", parents=[fmt, budget], help="mode verdicts for a family")
    s.add_argument("--family", required=True)
    s.add_argument("--limit", required=True)
    s = sub.add_parser("compactness", parents=[fmt, budget], help="mass-escape gaps")
    s.add_argument("--family", required=True)
    s.add_argument("--deltas")
    s = sub.add_parser("portmanteau", parents=[fmt, budget], help="open vs closed setwise verdicts")
    s.add_argument("--family", required=True)
    s.add_argument("--limit", required=True)
    sub.add_parser("gallery", parents=[fmt, budget], help="pinned counterexample table")
    s = sub.add_parser("atoms", parents=[fmt], help="atoms of a generated σ-algebra")
    s.add_argument("--ground", type=int, required=True)
    s.add_argument("--gens", default="")
    s = sub.add_parser("dense-witness", parents=[fmt], help="dyadic-grid measure near ν on a set")
    s.add_argument("--ground", type=int, required=True)
    s.add_argument("--gens", default="")
    s.add_argument("--nu", help="comma-separated atom weights (default uniform)")
    s.add_argument("--atoms", help="comma-separated atom indices (0-based)")
    s.add_argument("--set", help="comma-separated ground elements forming a union of atoms")
    s.add_argument("--eps", required=True)
    s = sub.add_parser("check", parents=[fmt], help="seeded randomized property campaigns")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--only", help=f"comma-separated subset of {','.join(CAMPAIGNS)}")
    return p


def dispatch(argv: Sequence[str]) -> tuple[int, str]:
    """Run one command; returns ``(exit code, report text)``."""
    argv = list(argv)
    parser = build_parser()
    first = next((a for a in argv if not a.startswith("-")), None)
    if first is None or first not in COMMANDS:
        if argv and argv[0] in ("-h", "--help"):
            return EXIT_OK, parser.format_help()
        msg = f"unknown subcommand {first!r}\n" if first else "missing subcommand\n"
        return EXIT_USAGE, msg + parser.format_usage()
    as_text = "--text" in argv
    try:
        args = parser.parse_args(argv)
        result, budget = COMMANDS[args.command](args)
    except CliError as e:
        return e.code, codec.dumps({"error": e.payload})
    except codec.SchemaError as e:
        return EXIT_INVALID, codec.dumps({"error": e.to_json()})
    except InvalidMeasure as e:
        return EXIT_INVALID, codec.dumps({"error": codec.invalid_measure_to_json(e)})
    except AtomicOnlyError as e:
        return EXIT_INVALID, codec.dumps({"error": {"type": "AtomicOnlyError", "invariant": "atomic_only",
                                                    "message": str(e)}})
    except (ValueError, TypeError) as e:
        return EXIT_INVALID, codec.dumps({"error": {"type": type(e).__name__, "invariant": "input",
                                                    "message": str(e)}})
    specs = [v for k, v in sorted(vars(args).items())
             if isinstance(v, str) and k not in ("command",) and (Path(v).is_file() or k in ("a", "b", "nu", "rho"))]
    report = {
        "command": argv,
        "inputs": {s: _digest(s) for s in specs},
        "budget": to_json(vars(budget)) if isinstance(budget, Budget) else None,
        "backend": {"kernels": BACKEND, "rationals": RATIONAL_BACKEND},
        "result": to_json(result),
    }
    text = render_text(report) if as_text else codec.dumps(report)
    code = EXIT_PIN if args.command == "gallery" and not result["pins_ok"] else EXIT_OK
    return code, text


def main(argv: Sequence[str] | None = None) -> int:
    code, text = dispatch(sys.argv[1:] if argv is None else argv)
    (sys.stderr if code == EXIT_USAGE else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
