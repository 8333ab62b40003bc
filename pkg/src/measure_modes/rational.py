"""The exact rational type used throughout.

``gmpy2.mpq`` when it is importable (an order of magnitude faster),
otherwise :class:`fractions.Fraction`; ``MEASURE_MODES_PURE=1`` forces the
latter. The two compare, hash and print identically, and mixed arithmetic
works, so callers may pass either.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

Q = Fraction
if os.environ.get("MEASURE_MODES_PURE", "") not in ("1", "true", "yes"):
    try:
        from gmpy2 import mpq as Q  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - gmpy2 is optional
        Q = Fraction

RATIONAL_BACKEND = "gmpy2" if Q is not Fraction else "fractions"
RATIONAL_TYPES = (Fraction, Q)



def floor(x) -> int:
    """``math.floor`` as a plain ``int`` for either rational type."""
    return int(math.floor(x))


def ceil(x) -> int:
    return int(math.ceil(x))


__all__ = ["Q", "RATIONAL_BACKEND", "RATIONAL_TYPES", "ceil", "floor"]
