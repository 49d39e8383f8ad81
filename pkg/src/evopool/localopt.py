"""Limited-memory quasi-Newton local optimizer.

Two implementations of the same algorithm live here:

* :func:`minimize` — the generic Python version working on arbitrary
  ``fg(x) -> (value, gradient)`` callables (also the numpy-backend path),
* ``_localopt_numba.minimize_kernel`` — the jitted twin, dispatching on
  the integer function ids of the kernel modules.

The algorithm is L-BFGS (two-loop recursion, memory of ``memory_pairs``
update pairs) with a doubling/halving line search enforcing sufficient
decrease and attempting a strong-Wolfe-style curvature condition.
Update pairs violating the curvature requirement are skipped rather
than aborting, which keeps the recursion well-posed on piecewise
objectives.  When the objective is known to be separable with a kink at
zero (the dimension-decoupled Ackley gradient), an orthant safeguard in
the style of OWL-QN is enabled: trial points may not cross zero in any
coordinate, and direction components opposing their own pseudo-gradient
are dropped.  Coordinates then land exactly on the kink instead of
chattering around it.

Functions carrying the harmonic exterior penalty get a second, closely
related safeguard: the penalized objectives jump discontinuously at the
box edge, and on Schwefel the edge basin slopes outward, so a
coordinate can converge onto the cliff face and then veto every joint
line-search step (any step moves it across the jump).  With
``cliff=(lo, hi)`` enabled, trial points may not carry an in-box
coordinate across the box edge outward (it lands exactly on the edge
instead), pinned coordinates are dropped from the search direction, and
convergence is measured on the projected gradient — the standard
treatment of active bound constraints.
"""

from dataclasses import dataclass

import numpy as np

STATUS_CONVERGED = "converged"
STATUS_MAX_ITER = "max-iter"
STATUS_LS_FAIL = "line-search-failure"

_STATUS_BY_CODE = {0: STATUS_CONVERGED, 1: STATUS_MAX_ITER, 2: STATUS_LS_FAIL}

_PAIR_SKIP_TOL = 1e-10
_MAX_LS_EVALS = 60
_MIN_STEP = 1e-20
_MAX_RESTARTS = 3


class NonFiniteError(RuntimeError):
    """Objective or gradient became non-finite during minimization."""

    def __init__(self, x):
        super().__init__("non-finite objective value or gradient encountered")
        self.x = np.asarray(x).copy()


@dataclass
class LocalOptSettings:
    memory_pairs: int = 5
    fitness_tol: float = 1e-8
    gradient_tol: float = 1e-8
    max_iterations: int = 5000
    sufficient_decrease: float = 1e-4
    curvature: float = 0.9

    def __post_init__(self):
        if self.memory_pairs < 1:
            raise ValueError("memory_pairs must be >= 1")
        if self.fitness_tol <= 0 or self.gradient_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class MinimizeResult:
    x: np.ndarray
    value: float
    status: str
    iterations: int

    @property
    def converged(self):
        return self.status == STATUS_CONVERGED


def _line_search(fg, x, fx, gx, d, c1, c2, orthant, cliff):
    """Find a step along d satisfying sufficient decrease.

    Starts at step 1, doubles while the (strong-Wolfe style) curvature
    condition says the step is too short, halves while sufficient
    decrease fails.  With the orthant safeguard, trial points are
    projected so no coordinate crosses zero; with the cliff safeguard,
    in-box coordinates may not cross the box edge outward.
    """
    d0 = float(gx @ d)
    slope = min(d0, -1e-300)
    sx = np.sign(x)
    if cliff is not None:
        lo, hi = cliff
        in_box = (x >= lo) & (x <= hi)
    a = 1.0
    best = None
    expanding = True
    for _ in range(_MAX_LS_EVALS):
        xa = x + a * d
        if orthant:
            xa[(np.sign(xa) != sx) & (sx != 0.0)] = 0.0
        if cliff is not None:
            xa[in_box & (xa < lo)] = lo
            xa[in_box & (xa > hi)] = hi
        fa, ga = fg(xa)
        if not np.isfinite(fa) or not np.all(np.isfinite(ga)):
            raise NonFiniteError(xa)
        if fa <= fx + c1 * a * slope:
            best = (xa, fa, ga)
            da = float(ga @ d)
            if abs(da) <= c2 * abs(d0) or da >= 0.0 or not expanding:
                return best
            a *= 2.0
        else:
            if best is not None:
                return best
            expanding = False
            a *= 0.5
            if a < _MIN_STEP:
                break
    return best


def minimize(fg, x0, settings=None, orthant_at_zero=False, cliff=None):
    """Minimize ``fg(x) -> (value, gradient)`` starting from ``x0``.

    Stops when the value change falls below ``fitness_tol`` or the
    (projected) gradient max-norm falls below ``gradient_tol``.  The
    accepted value sequence is non-increasing.  ``cliff=(lo, hi)``
    enables the penalty-edge safeguard described in the module
    docstring.
    """
    s = settings or LocalOptSettings()
    x = np.asarray(x0, dtype=float).copy()
    fx, gx = fg(x)
    gx = np.asarray(gx, dtype=float).copy()
    if not np.isfinite(fx) or not np.all(np.isfinite(gx)):
        raise NonFiniteError(x)
    if cliff is not None:
        lo, hi = cliff

    mem_s = []
    mem_y = []
    restarts = 0
    it = 0
    while it < s.max_iterations:
        geff = gx
        if cliff is not None:
            pinned = ((x == lo) & (gx > 0.0)) | ((x == hi) & (gx < 0.0))
            if np.any(pinned):
                geff = np.where(pinned, 0.0, gx)
        if np.max(np.abs(geff)) < s.gradient_tol:
            return MinimizeResult(x, fx, STATUS_CONVERGED, it)
        d = -_two_loop(gx, mem_s, mem_y)
        if orthant_at_zero:
            d[(d * gx > 0.0) | (gx == 0.0)] = 0.0
        if cliff is not None:
            d[((x == lo) & (d < 0.0)) | ((x == hi) & (d > 0.0))] = 0.0
        if float(gx @ d) >= 0.0:
            d = -geff.copy()
            if orthant_at_zero:
                d[gx == 0.0] = 0.0
        found = _line_search(
            fg, x, fx, gx, d, s.sufficient_decrease, s.curvature,
            orthant_at_zero, cliff,
        )
        if found is None:
            if mem_s:
                mem_s.clear()
                mem_y.clear()
                continue
            return MinimizeResult(x, fx, STATUS_LS_FAIL, it)
        xn, fn, gn = found
        gn = np.asarray(gn, dtype=float).copy()
        step = xn - x
        ydiff = gn - gx
        sy = float(step @ ydiff)
        if sy > _PAIR_SKIP_TOL * np.linalg.norm(step) * np.linalg.norm(ydiff):
            mem_s.append(step)
            mem_y.append(ydiff)
            if len(mem_s) > s.memory_pairs:
                mem_s.pop(0)
                mem_y.pop(0)
        small = abs(fn - fx) < s.fitness_tol
        x, fx, gx = xn, fn, gn
        it += 1
        if small:
            # On a stalled decrease with history present, restart the
            # memory once: kink-contaminated pairs can freeze directions.
            if mem_s and restarts < _MAX_RESTARTS:
                mem_s.clear()
                mem_y.clear()
                restarts += 1
                continue
            return MinimizeResult(x, fx, STATUS_CONVERGED, it)
        restarts = 0
    return MinimizeResult(x, fx, STATUS_MAX_ITER, it)


def _two_loop(gx, mem_s, mem_y):
    q = gx.copy()
    k = len(mem_s)
    if k == 0:
        return q
    alphas = [0.0] * k
    for i in range(k - 1, -1, -1):
        alphas[i] = float(mem_s[i] @ q) / float(mem_y[i] @ mem_s[i])
        q -= alphas[i] * mem_y[i]
    gamma = float(mem_s[-1] @ mem_y[-1]) / float(mem_y[-1] @ mem_y[-1])
    q *= gamma
    for i in range(k):
        beta = float(mem_y[i] @ q) / float(mem_y[i] @ mem_s[i])
        q += (alphas[i] - beta) * mem_s[i]
    return q


def status_from_code(code):
    return _STATUS_BY_CODE[int(code)]


def minimize_spec(spec, x0, settings=None):
    """Locally optimize a :class:`FunctionSpec` from ``x0``.

    Uses the jitted kernel on the numba backend and the generic Python
    path otherwise.  The result's ``value`` is always the spec's fitness
    value at the final point, even when the spec descends a different
    surface (the simplified-gradient Ackley variant).
    """
    from ._accel import USE_NUMBA

    s = settings or LocalOptSettings()
    x0 = np.ascontiguousarray(x0, dtype=float)
    cliff = spec.cliff_at_bounds
    lo = spec.bounds.lower if cliff else 0.0
    hi = spec.bounds.upper if cliff else 0.0
    if USE_NUMBA:
        from ._localopt_numba import minimize_kernel

        x, fx, code, it = minimize_kernel(
            spec.fid_opt,
            spec.fp,
            spec.gw,
            spec.gz,
            spec.gc,
            x0,
            s.memory_pairs,
            s.fitness_tol,
            s.gradient_tol,
            s.max_iterations,
            s.sufficient_decrease,
            s.curvature,
            spec.orthant_at_zero,
            cliff,
            lo,
            hi,
        )
        if code == 3:
            raise NonFiniteError(x)
        result = MinimizeResult(x, fx, status_from_code(code), int(it))
    else:
        result = minimize(
            spec.opt_value_and_grad, x0, s,
            orthant_at_zero=spec.orthant_at_zero,
            cliff=(lo, hi) if cliff else None,
        )
    if spec.fid_opt != spec.fid:
        result.value = spec.value(result.x)
    return result
