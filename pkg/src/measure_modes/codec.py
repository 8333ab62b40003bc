"""JSON encoding of the exact objects, plus parsers for the CLI's short specs.

Rationals are always strings ``"p/q"`` (``"0/1"``, ``"3/1"``); decimals are
only ever added next to them as display annotations.
"""

from __future__ import annotations

import json
import re
from decimal import Context
from pathlib import Path
from typing import Any

from .approx import QuantizationCertificate, VagueApproxResult
from .intervals import FuncKind, PiecewiseFunc, Region
from .measures import InvalidMeasure, Measure, measure_validate
from .metrics import GaugeKind, GaugeSpec
from .rational import Q
from .sequences import SequenceFamily

DECIMAL_DIGITS = 12


class SchemaError(ValueError):
    """Malformed input; ``invariant`` names the rule that failed."""

    def __init__(self, invariant: str, message: str, path: str = "$") -> None:
        super().__init__(f"{path}: {message}")
        self.invariant = invariant
        self.path = path
        self.message = message

    def to_json(self) -> dict:
        return {"type": "SchemaError", "invariant": self.invariant, "path": self.path,
                "message": self.message}


# -- rationals --------------------------------------------------------------------


def q(x: Q | int) -> str:
    x = Q(x)
    return f"{int(x.numerator)}/{int(x.denominator)}"


def decimal(x: Q | int, digits: int = DECIMAL_DIGITS) -> str:
    x = Q(x)
    ctx = Context(prec=digits)
    return str(ctx.divide(ctx.create_decimal(int(x.numerator)), ctx.create_decimal(int(x.denominator))))


def exact(x: Q | int) -> dict:
    return {"exact": q(x), "decimal": decimal(x)}


def parse_q(obj: Any, path: str = "$") -> Q:
    if isinstance(obj, bool) or isinstance(obj, float):
        raise SchemaError("exact_rational", f"expected a \"p/q\" string, got {obj!r}", path)
    if isinstance(obj, int):
        return Q(obj)
    if isinstance(obj, str) and re.fullmatch(r"\s*[+-]?\d+(\s*/\s*\d+)?\s*", obj):
        try:
            return Q(obj.replace(" ", ""))
        except ZeroDivisionError:
            raise SchemaError("exact_rational", f"zero denominator in {obj!r}", path) from None
    raise SchemaError("exact_rational", f"expected a \"p/q\" string, got {obj!r}", path)


def _list(obj: Any, path: str) -> list:
    if not isinstance(obj, list):
        raise SchemaError("schema", f"expected a list, got {type(obj).__name__}", path)
    return obj


def _dict(obj: Any, path: str, keys: tuple[str, ...]) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError("schema", f"expected an object, got {type(obj).__name__}", path)
    missing = [k for k in keys if k not in obj]
    if missing:
        raise SchemaError("schema", f"missing key(s) {missing}", path)
    return obj


# -- regions and functions ----------------------------------------------------------


def region_to_json(r: Region) -> list:
    return [[q(iv.lo), q(iv.hi), iv.lo_closed, iv.hi_closed] for iv in r]


def region_from_json(obj: Any, path: str = "$") -> Region:
    comps = []
    for i, item in enumerate(_list(obj, path)):
        p = f"{path}[{i}]"
        item = _list(item, p)
        if len(item) != 4 or not all(isinstance(b, bool) for b in item[2:]):
            raise SchemaError("schema", "component must be [lo, hi, lo_closed, hi_closed]", p)
        lo, hi = parse_q(item[0], p + "[0]"), parse_q(item[1], p + "[1]")
        if not 0 <= lo <= hi <= 1:
            raise SchemaError("interval_in_unit_interval", f"need 0 <= lo <= hi <= 1, got {lo}, {hi}", p)
        comps.append((lo, hi, item[2], item[3]))
    return Region(comps)


def func_to_json(f: PiecewiseFunc) -> dict:
    return {"kind": f.kind.value, "breakpoints": [q(b) for b in f.breakpoints],
            "values": [q(v) for v in f.values]}


def func_from_json(obj: Any, path: str = "$") -> PiecewiseFunc:
    d = _dict(obj, path, ("kind", "breakpoints", "values"))
    try:
        kind = FuncKind(d["kind"])
    except ValueError:
        raise SchemaError("schema", f"unknown function kind {d['kind']!r}", path + ".kind") from None
    bps = [parse_q(b, f"{path}.breakpoints[{i}]") for i, b in enumerate(_list(d["breakpoints"], path))]
    vals = [parse_q(v, f"{path}.values[{i}]") for i, v in enumerate(_list(d["values"], path))]
    try:
        return PiecewiseFunc(kind, tuple(bps), tuple(vals))
    except ValueError as e:
        raise SchemaError("piecewise_function", str(e), path) from None


# -- measures -------------------------------------------------------------------------


def measure_to_json(m: Measure) -> dict:
    return {"atoms": [[q(x), q(w)] for x, w in m.atoms], "density": func_to_json(m.density)}


def measure_from_json(obj: Any, path: str = "$", validate: bool = True) -> Measure:
    """Parse a measure object (or a named constructor string) and validate it."""
    if isinstance(obj, str):
        return named_measure(obj)
    d = _dict(obj, path, ())
    atoms = []
    for i, pair in enumerate(_list(d.get("atoms", []), path + ".atoms")):
        p = f"{path}.atoms[{i}]"
        pair = _list(pair, p)
        if len(pair) != 2:
            raise SchemaError("schema", "atom must be [loc, mass]", p)
        atoms.append((parse_q(pair[0], p + "[0]"), parse_q(pair[1], p + "[1]")))
    if "density" in d:
        density = func_from_json(d["density"], path + ".density")
        if density.kind is not FuncKind.SIMPLE:
            raise SchemaError("simple_density", "density must be a Simple function", path + ".density")
        m = Measure(tuple(atoms), density)
    else:
        m = Measure(tuple(atoms))
    if validate:
        measure_validate(m)
    return m


_NAMED = re.compile(r"\s*(dirac|uniform|square[_-]wave)\s*[(:]\s*([^()]*?)\s*\)?\s*")


def named_measure(text: str) -> Measure:
    """``dirac(p)``, ``uniform(a,b)``, ``square_wave(n)``; the ``name:args`` form works too."""
    m = _NAMED.fullmatch(text)
    if not m:
        raise SchemaError("measure_spec", f"unrecognised measure spec {text!r}")
    name, args = m.group(1).replace("-", "_"), [a for a in re.split(r"\s*,\s*", m.group(2)) if a]
    try:
        if name == "dirac" and len(args) == 1:
            return Measure.dirac(parse_q(args[0]))
        if name == "uniform" and len(args) in (0, 2):
            return Measure.uniform(*(parse_q(a) for a in args))
        if name == "square_wave" and len(args) == 1 and args[0].isdigit():
            return Measure.square_wave(int(args[0]))
    except ValueError as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError("measure_spec", str(e)) from None
    raise SchemaError("measure_spec", f"bad arguments in {text!r}")


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise SchemaError("readable_input", f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("json_syntax", f"{path}: {e.msg} at line {e.lineno}") from None


def measure_spec(text: str) -> Measure:
    """A measure from a JSON file path, an inline JSON object, or a named constructor."""
    if text.lstrip().startswith("{"):
        try:
            return measure_from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise SchemaError("json_syntax", e.msg) from None
    if _NAMED.fullmatch(text) and not Path(text).exists():
        return named_measure(text)
    return measure_from_json(load_json(text))


# -- gauges, families, certificates -----------------------------------------------------


def gauge_to_json(g: GaugeSpec) -> dict:
    enc = func_to_json if g.kind is GaugeKind.F else region_to_json
    return {"kind": g.kind.value, "family": [enc(x) for x in g.family],
            "epsilon": q(g.epsilon), "center": measure_to_json(g.center)}


def gauge_from_json(obj: Any, path: str = "$") -> GaugeSpec:
    d = _dict(obj, path, ("kind", "family", "epsilon", "center"))
    if d["kind"] not in ("F", "S"):
        raise SchemaError("schema", "gauge kind must be \"F\" or \"S\"", path + ".kind")
    dec = func_from_json if d["kind"] == "F" else region_from_json
    family = [dec(x, f"{path}.family[{i}]") for i, x in enumerate(_list(d["family"], path + ".family"))]
    eps = parse_q(d["epsilon"], path + ".epsilon")
    if eps <= 0:
        raise SchemaError("positive_epsilon", "gauge epsilon must be positive", path + ".epsilon")
    if not family:
        raise SchemaError("nonempty_family", "gauge family must be nonempty", path + ".family")
    return GaugeSpec(GaugeKind(d["kind"]), tuple(family), eps, measure_from_json(d["center"], path + ".center"))


def family_spec(text: str) -> SequenceFamily:
    """``dirac-at``, ``uniform-on``, ``square-wave``, ``constant:<measure>`` or ``tabulated:<file>``."""
    head, _, rest = text.partition(":")
    if head == "dirac-at" and not rest:
        return SequenceFamily.dirac_at()
    if head == "uniform-on" and not rest:
        return SequenceFamily.uniform_on()
    if head == "square-wave" and not rest:
        return SequenceFamily.square_wave()
    if head == "constant" and rest:
        return SequenceFamily.constant(measure_spec(rest))
    if head == "tabulated" and rest:
        return tabulated_from_json(load_json(rest))
    raise SchemaError("family_spec", f"unrecognised family spec {text!r}")


def tabulated_from_json(obj: Any, path: str = "$") -> SequenceFamily:
    terms = obj["terms"] if isinstance(obj, dict) and "terms" in obj else obj
    p = path + ".terms" if isinstance(obj, dict) else path
    items = _list(terms, p)
    if not items:
        raise SchemaError("nonempty_family", "tabulated family needs at least one term", p)
    return SequenceFamily.tabulated(measure_from_json(t, f"{p}[{i}]") for i, t in enumerate(items))


def tabulated_to_json(fam: SequenceFamily) -> dict:
    return {"terms": [measure_to_json(t) for t in fam.terms]}


def limit_spec(text: str) -> Measure:
    """``dirac:0``, ``uniform:a,b``, ``square-wave:n``, or anything :func:`measure_spec` takes."""
    return measure_spec(text)


def certificate_to_json(c: QuantizationCertificate) -> dict:
    return {"f": func_to_json(c.f), "n": c.n, "cells": [region_to_json(r) for r in c.cells],
            "cell_tolerance": q(c.cell_tolerance), "target_epsilon": q(c.target_epsilon),
            "trivial": c.trivial}


def certificate_from_json(obj: Any, path: str = "$") -> QuantizationCertificate:
    d = _dict(obj, path, ("f", "n", "cells", "cell_tolerance", "target_epsilon"))
    return QuantizationCertificate(
        func_from_json(d["f"], path + ".f"), int(d["n"]),
        tuple(region_from_json(r, f"{path}.cells[{i}]") for i, r in enumerate(_list(d["cells"], path))),
        parse_q(d["cell_tolerance"]), parse_q(d["target_epsilon"]), bool(d.get("trivial", False)))


def vague_to_json(r: VagueApproxResult) -> dict:
    return {"atoms": measure_to_json(r.atoms), "n1": r.n1, "centers_used": [q(c) for c in r.centers_used],
            "error_bound": q(r.error_bound), "cover_cells": [region_to_json(c) for c in r.cover_cells]}


def vague_from_json(obj: Any, path: str = "$") -> VagueApproxResult:
    d = _dict(obj, path, ("atoms", "n1", "centers_used", "error_bound", "cover_cells"))
    return VagueApproxResult(
        measure_from_json(d["atoms"], path + ".atoms"), int(d["n1"]),
        tuple(parse_q(c) for c in d["centers_used"]), parse_q(d["error_bound"]),
        tuple(region_from_json(c) for c in d["cover_cells"]))


def invalid_measure_to_json(e: InvalidMeasure) -> dict:
    return {"type": "InvalidMeasure", "invariant": e.invariants[0], "invariants": e.invariants,
            "problems": e.problems}


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


__all__ = [
    "SchemaError",
    "certificate_from_json",
    "certificate_to_json",
    "decimal",
    "dumps",
    "exact",
    "family_spec",
    "func_from_json",
    "func_to_json",
    "gauge_from_json",
    "gauge_to_json",
    "invalid_measure_to_json",
    "limit_spec",
    "load_json",
    "measure_from_json",
    "measure_spec",
    "measure_to_json",
    "named_measure",
    "parse_q",
    "q",
    "region_from_json",
    "region_to_json",
    "tabulated_from_json",
    "tabulated_to_json",
    "vague_from_json",
    "vague_to_json",
]
