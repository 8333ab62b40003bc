"""Backend selection for the integer kernels.

The compiled extension is used when it imports and the inputs fit in
int64 with headroom; otherwise the pure-Python twin runs. Set
``MEASURE_MODES_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from math import lcm
from typing import Sequence

from . import _kernels_py
from .rational import Q

_compiled = None
if os.environ.get("MEASURE_MODES_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

# sums of up to a few hundred terms must stay inside int64
_SAFE = 1 << 52


def scale_to_integers(values: Sequence[Q]) -> tuple[list[int], int]:
    """Common-denominator numerators of ``values`` and that denominator."""
    denom = 1
    for v in values:
        denom = lcm(denom, int(v.denominator))
    return [int(v.numerator) * (denom // int(v.denominator)) for v in values], denom


def _fits(*arrays: Sequence[int]) -> bool:
    return all(sum(abs(v) for v in arr) < _SAFE for arr in arrays)


def scan_unions(pts: Sequence[int], cells: Sequence[int], max_comp: int, closed: bool,
                backend: str | None = None):
    impl = _pick(backend, pts, cells)
    return impl.scan_unions(list(pts), list(cells), max_comp, closed)


def prohorov_one_sided(xs: Sequence[int], amass: Sequence[int], ys: Sequence[int],
                       bmass: Sequence[int], backend: str | None = None) -> int:
    impl = _pick(backend, xs, amass, ys, bmass)
    return impl.prohorov_one_sided(list(xs), list(amass), list(ys), list(bmass))


def _pick(backend: str | None, *arrays: Sequence[int]):
    if backend == "python":
        return _kernels_py
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if _compiled is not None and _fits(*arrays):
        return _compiled
    return _kernels_py
