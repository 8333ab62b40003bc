"""Exact rational computations for modes of convergence of probability measures on [0, 1].

Submodules:

* ``intervals``: finite unions of intervals and piecewise functions
* ``measures``: atoms plus a piecewise-constant density
* ``metrics``: total variation, Prohorov, setwise gauges
* ``approx``: quantization certificates and vague approximation
* ``sequences``: eventual values, mode classification, the gallery
* ``sigma_atoms``: atoms of finite σ-algebras and dense rational families
"""

from __future__ import annotations

from .approx import *  # noqa: F401,F403
from .intervals import *  # noqa: F401,F403
from .kernels import BACKEND
from .measures import *  # noqa: F401,F403
from .metrics import *  # noqa: F401,F403
from .rational import RATIONAL_BACKEND, Q
from .sequences import *  # noqa: F401,F403
from .sigma_atoms import *  # noqa: F401,F403

from . import approx, intervals, measures, metrics, sequences, sigma_atoms

__version__ = "0.1.0"

__all__ = (
    ["BACKEND", "Q", "RATIONAL_BACKEND", "__version__"]
    + intervals.__all__ + measures.__all__ + metrics.__all__
    + approx.__all__ + sequences.__all__ + sigma_atoms.__all__
)
