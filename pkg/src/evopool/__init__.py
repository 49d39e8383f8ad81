"""evopool — pool-based evolutionary global optimization benchmarking.

A steady-state genetic algorithm with configurable crossover operators
and optional gradient-based local optimization, a suite of analytic
benchmark landscapes, a randomized-Gaussian landscape generator with a
minima-enumeration oracle, and an experiment harness for
dimensionality-scaling studies.
"""

from ._accel import USE_NUMBA, backend_name
from .functions import (
    Bounds,
    FunctionSpec,
    LunacekParams,
    lookup_function,
)
from .localopt import (
    LocalOptSettings,
    MinimizeResult,
    NonFiniteError,
    minimize,
    minimize_spec,
)

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "FunctionSpec",
    "LocalOptSettings",
    "LunacekParams",
    "MinimizeResult",
    "NonFiniteError",
    "USE_NUMBA",
    "backend_name",
    "lookup_function",
    "minimize",
    "minimize_spec",
    "__version__",
]
