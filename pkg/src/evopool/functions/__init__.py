"""Benchmark objective functions.

Each objective is described by a :class:`FunctionSpec` carrying the
search bounds, the known global optimum (when there is one), the
dimension rule, and handles into the numeric kernels.  Plain
``<name>_value`` / ``<name>_gradient`` helpers are exported for direct
use; ``lookup_function`` builds the spec the engine and CLI consume.

Rastrigin and Schwefel carry a harmonic penalty outside their nominal
box so unconstrained local optimization stays inside.  The
``ackley-simplified-grad`` variant reports the true Ackley value as
fitness but descends a separable surrogate potential whose gradient is
the dimension-decoupled Ackley gradient; because that surrogate has a
kink at zero in every coordinate, its spec enables the optimizer's
orthant safeguard.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .._accel import USE_NUMBA
from . import _kernels_numpy as _knp

if USE_NUMBA:
    from . import _kernels_numba as _k
else:
    _k = _knp

FID_ACKLEY = _knp.FID_ACKLEY
FID_ACKLEY_DECOUPLED = _knp.FID_ACKLEY_DECOUPLED
FID_RASTRIGIN = _knp.FID_RASTRIGIN
FID_SCHWEFEL = _knp.FID_SCHWEFEL
FID_SCHAFFER_F7 = _knp.FID_SCHAFFER_F7
FID_SCHAFFER_F6 = _knp.FID_SCHAFFER_F6
FID_LUNACEK = _knp.FID_LUNACEK
FID_GAUSSMIX = _knp.FID_GAUSSMIX

SCHWEFEL_OFFSET = _knp.SCHWEFEL_OFFSET
SCHWEFEL_ARGMIN = 420.9687

_EMPTY = np.empty(0)
_EMPTY2D = np.empty((0, 0))

DIM_ANY = "any-n"
DIM_FIXED_2 = "fixed-2"
DIM_PAIRS = "pairs-over-n"

FUNCTION_NAMES = (
    "ackley",
    "ackley-simplified-grad",
    "rastrigin",
    "schwefel",
    "schafferf7",
    "schafferf6",
    "lunacek",
)


@dataclass(frozen=True)
class Bounds:
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("bounds require lower < upper")

    @property
    def width(self):
        return self.upper - self.lower


@dataclass(frozen=True)
class LunacekParams:
    mu1: float = 2.5
    d: float = 1.0
    s: float = 0.7

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("lunacek s must be positive")
        if (self.mu1 * self.mu1 - self.d) / self.s < 0.0:
            raise ValueError("lunacek parameters give a negative radicand for mu2")

    @property
    def mu2(self):
        return -math.sqrt((self.mu1 * self.mu1 - self.d) / self.s)

    def as_array(self):
        return np.array([self.mu1, self.d, self.s, self.mu2])


def _check_dim(dim, rule, name):
    if dim < 1:
        raise ValueError(f"{name}: dimension must be >= 1, got {dim}")
    if rule == DIM_FIXED_2 and dim != 2:
        raise ValueError(f"{name}: requires exactly 2 dimensions, got {dim}")
    if rule == DIM_PAIRS and dim < 2:
        raise ValueError(f"{name}: requires at least 2 dimensions, got {dim}")


@dataclass
class FunctionSpec:
    """One benchmark objective, fully wired for the engine.

    ``fid`` is the kernel id used for fitness evaluation; ``fid_opt`` is
    the (possibly different) id whose gradient drives local
    optimization.  They differ only for ``ackley-simplified-grad``.
    """

    name: str
    dim: int
    dim_rule: str
    bounds: Bounds
    target_value: float
    target_point: np.ndarray | None
    fid: int
    fid_opt: int
    fp: np.ndarray = field(default_factory=lambda: _EMPTY)
    gw: np.ndarray = field(default_factory=lambda: _EMPTY)
    gz: np.ndarray = field(default_factory=lambda: _EMPTY)
    gc: np.ndarray = field(default_factory=lambda: _EMPTY2D)
    orthant_at_zero: bool = False
    # True for functions whose harmonic exterior penalty makes the value
    # jump at the box edge; enables the optimizer's cliff safeguard
    cliff_at_bounds: bool = False

    def __post_init__(self):
        _check_dim(self.dim, self.dim_rule, self.name)

    def _coerce(self, x):
        x = np.ascontiguousarray(x, dtype=float)
        if x.size != self.dim:
            raise ValueError(
                f"{self.name}: expected dimension {self.dim}, got {x.size}"
            )
        return x

    def value(self, x):
        x = self._coerce(x)
        return float(_k.value(self.fid, x, self.fp, self.gw, self.gz, self.gc))

    def gradient(self, x):
        x = self._coerce(x)
        gout = np.empty(self.dim)
        _k.value_and_grad(self.fid, x, self.fp, self.gw, self.gz, self.gc, gout)
        return gout

    def value_and_grad(self, x):
        x = self._coerce(x)
        gout = np.empty(self.dim)
        v = _k.value_and_grad(self.fid, x, self.fp, self.gw, self.gz, self.gc, gout)
        return float(v), gout

    def opt_value_and_grad(self, x):
        """Value/gradient of the surface local optimization descends."""
        x = self._coerce(x)
        gout = np.empty(self.dim)
        v = _k.value_and_grad(self.fid_opt, x, self.fp, self.gw, self.gz, self.gc, gout)
        return float(v), gout

    def sample_uniform(self, rng, count=None):
        if count is None:
            return rng.uniform(self.bounds.lower, self.bounds.upper, self.dim)
        return rng.uniform(self.bounds.lower, self.bounds.upper, (count, self.dim))


def _spec_ackley(dim):
    return FunctionSpec(
        name="ackley",
        dim=dim,
        dim_rule=DIM_ANY,
        bounds=Bounds(-32.768, 32.768),
        target_value=0.0,
        target_point=np.zeros(dim),
        fid=FID_ACKLEY,
        fid_opt=FID_ACKLEY,
    )


def _spec_ackley_simplified(dim):
    return FunctionSpec(
        name="ackley-simplified-grad",
        dim=dim,
        dim_rule=DIM_ANY,
        bounds=Bounds(-32.768, 32.768),
        target_value=0.0,
        target_point=np.zeros(dim),
        fid=FID_ACKLEY,
        fid_opt=FID_ACKLEY_DECOUPLED,
        orthant_at_zero=True,
    )


def _spec_rastrigin(dim):
    return FunctionSpec(
        name="rastrigin",
        dim=dim,
        dim_rule=DIM_ANY,
        bounds=Bounds(-5.12, 5.12),
        target_value=0.0,
        target_point=np.zeros(dim),
        fid=FID_RASTRIGIN,
        fid_opt=FID_RASTRIGIN,
        cliff_at_bounds=True,
    )


def schwefel_target_value(dim):
    """Residual of the 418.9829 offset at the known argmin."""
    a = SCHWEFEL_ARGMIN
    return dim * (SCHWEFEL_OFFSET - a * math.sin(math.sqrt(a)))


def _spec_schwefel(dim):
    return FunctionSpec(
        name="schwefel",
        dim=dim,
        dim_rule=DIM_ANY,
        bounds=Bounds(-500.0, 500.0),
        target_value=schwefel_target_value(dim),
        target_point=np.full(dim, SCHWEFEL_ARGMIN),
        fid=FID_SCHWEFEL,
        fid_opt=FID_SCHWEFEL,
        cliff_at_bounds=True,
    )


def _spec_schafferf7(dim):
    return FunctionSpec(
        name="schafferf7",
        dim=dim,
        dim_rule=DIM_PAIRS,
        bounds=Bounds(-100.0, 100.0),
        target_value=0.0,
        target_point=np.zeros(dim),
        fid=FID_SCHAFFER_F7,
        fid_opt=FID_SCHAFFER_F7,
    )


def _spec_schafferf6(dim):
    return FunctionSpec(
        name="schafferf6",
        dim=dim,
        dim_rule=DIM_FIXED_2,
        bounds=Bounds(-100.0, 100.0),
        target_value=0.0,
        target_point=np.zeros(dim),
        fid=FID_SCHAFFER_F6,
        fid_opt=FID_SCHAFFER_F6,
    )


def _spec_lunacek(dim, params=None):
    p = params or LunacekParams()
    return FunctionSpec(
        name="lunacek",
        dim=dim,
        dim_rule=DIM_ANY,
        bounds=Bounds(-5.0, 5.0),
        target_value=0.0,
        target_point=np.full(dim, p.mu1),
        fid=FID_LUNACEK,
        fid_opt=FID_LUNACEK,
        fp=p.as_array(),
    )


_BUILDERS = {
    "ackley": _spec_ackley,
    "ackley-simplified-grad": _spec_ackley_simplified,
    "rastrigin": _spec_rastrigin,
    "schwefel": _spec_schwefel,
    "schafferf7": _spec_schafferf7,
    "schafferf6": _spec_schafferf6,
    "lunacek": _spec_lunacek,
}


def lookup_function(name, dim, lunacek_params=None):
    """Build the spec for ``name`` at dimension ``dim``.

    ``name`` may also be ``grunge:<path>`` to load a saved landscape
    file; its stored dimension must match ``dim``.
    """
    if name.startswith("grunge:"):
        from ..grunge import grunge_load

        landscape = grunge_load(name[len("grunge:"):])
        if dim != landscape.M:
            raise ValueError(
                f"landscape has dimension {landscape.M}, requested {dim}"
            )
        return landscape.as_function_spec()
    if name not in _BUILDERS:
        raise ValueError(f"unknown function {name!r}")
    if name == "lunacek":
        return _BUILDERS[name](dim, lunacek_params)
    return _BUILDERS[name](dim)


# --- plain per-function helpers -------------------------------------------

def _as_vec(x, name, min_dim=1):
    x = np.ascontiguousarray(x, dtype=float)
    if x.ndim != 1 or x.size < min_dim:
        raise ValueError(f"{name}: expected a vector of dimension >= {min_dim}")
    return x


def _grad(fid, x, fp=_EMPTY):
    gout = np.empty(x.size)
    _k.value_and_grad(fid, x, fp, _EMPTY, _EMPTY, _EMPTY2D, gout)
    return gout


def ackley_value(x):
    return float(_k.ackley_value(_as_vec(x, "ackley")))


def ackley_gradient(x):
    return _grad(FID_ACKLEY, _as_vec(x, "ackley"))


def ackley_gradient_simplified(x):
    return _grad(FID_ACKLEY_DECOUPLED, _as_vec(x, "ackley"))


def rastrigin_value(x):
    return float(_k.rastrigin_value(_as_vec(x, "rastrigin")))


def rastrigin_gradient(x):
    return _grad(FID_RASTRIGIN, _as_vec(x, "rastrigin"))


def schwefel_value(x):
    return float(_k.schwefel_value(_as_vec(x, "schwefel")))


def schwefel_gradient(x):
    return _grad(FID_SCHWEFEL, _as_vec(x, "schwefel"))


def schafferf7_value(x):
    return float(_k.schaffer7_value(_as_vec(x, "schafferf7", min_dim=2)))


def schafferf7_gradient(x):
    return _grad(FID_SCHAFFER_F7, _as_vec(x, "schafferf7", min_dim=2))


def schafferf6_value(x):
    x = _as_vec(x, "schafferf6", min_dim=2)
    if x.size != 2:
        raise ValueError("schafferf6: expected exactly 2 dimensions")
    return float(_k.schaffer6_value(x))


def schafferf6_gradient(x):
    x = _as_vec(x, "schafferf6", min_dim=2)
    if x.size != 2:
        raise ValueError("schafferf6: expected exactly 2 dimensions")
    return _grad(FID_SCHAFFER_F6, x)


def lunacek_value(x, params=None):
    p = params or LunacekParams()
    x = _as_vec(x, "lunacek")
    return float(_k.lunacek_value(x, p.as_array()))


def lunacek_gradient(x, params=None):
    p = params or LunacekParams()
    return _grad(FID_LUNACEK, _as_vec(x, "lunacek"), p.as_array())
