"""Compiled versus pure-Python kernels, and gmpy2 versus fractions rationals.

    python benchmarks/bench_kernels.py [--repeat N] [--rationals]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from measure_modes import Budget, Measure, Q, SequenceFamily, classify_modes, prohorov_distance
from measure_modes import _kernels_py, kernels

try:
    from measure_modes import _kernels as compiled
except ImportError:
    compiled = None


def scan_inputs(k: int, seed: int = 1):
    rng = random.Random(seed)
    n = 2**k
    return [rng.randint(-50, 50) for _ in range(n + 1)], [rng.randint(-50, 50) for _ in range(n)]


def prohorov_pair(seed: int = 2):
    rng = random.Random(seed)
    pts = rng.sample(range(65), 14)
    a = Measure.atomic([(Q(x, 64), Q(1, 7)) for x in pts[:7]])
    b = Measure.atomic([(Q(x, 64), Q(1, 7)) for x in pts[7:]])
    return a, b


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def row(name: str, py: float, c: float | None) -> str:
    if c is None:
        return f"{name:<38} {py * 1e3:10.2f} ms {'n/a':>12} {'':>8}"
    return f"{name:<38} {py * 1e3:10.2f} ms {c * 1e3:9.2f} ms {py / c:7.1f}x"


RATIONAL_SCRIPT = """
import random, timeit
from measure_modes import RATIONAL_BACKEND
from measure_modes.campaigns import certificate_campaign
t = min(timeit.repeat(lambda: certificate_campaign(random.Random(0), 300), number=1, repeat=3))
print(RATIONAL_BACKEND, t)
"""


def rational_comparison() -> list[str]:
    lines = []
    for pure in ("0", "1"):
        env = dict(os.environ, MEASURE_MODES_PURE=pure)
        out = subprocess.run([sys.executable, "-c", RATIONAL_SCRIPT], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        lines.append(f"{'certificate campaign x300 (' + out[0] + ')':<38} {float(out[1]) * 1e3:10.2f} ms")
    return lines


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--rationals", action="store_true", help="also compare rational backends (subprocess)")
    args = ap.parse_args(argv)

    print(f"kernel backend in use: {kernels.BACKEND}")
    print(f"{'benchmark':<38} {'python':>13} {'compiled':>12} {'speedup':>8}")
    for k in (2, 3, 4):
        pts, cells = scan_inputs(k)
        py = best_of(lambda: _kernels_py.scan_unions(pts, cells, k, True), args.repeat)
        c = best_of(lambda: compiled.scan_unions(pts, cells, k, True), args.repeat) if compiled else None
        print(row(f"scan_unions k={k} (closed)", py, c))

    a, b = prohorov_pair()
    py = best_of(lambda: prohorov_distance(a, b, backend="python"), args.repeat)
    c = best_of(lambda: prohorov_distance(a, b, backend="compiled"), args.repeat) if compiled else None
    print(row("prohorov 7 vs 7 atoms", py, c))

    fam, unif = SequenceFamily.square_wave(), Measure.uniform()
    budget = Budget(k_base=4)
    py = best_of(lambda: classify_modes(fam, unif, budget, backend="python"), args.repeat)
    c = best_of(lambda: classify_modes(fam, unif, budget, backend="compiled"), args.repeat) if compiled else None
    print(row("classify square-wave k_base=4", py, c))

    if args.rationals:
        print()
        for line in rational_comparison():
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
