"""Randomized-Gaussian benchmark landscapes (GRUNGE).

A landscape is a sum of N Gaussian wells in M dimensions,

    f(x) = sum_i  xi_i * exp(-zeta_i * sum_j (x_j - kappa_ij)^2),

with uniformly drawn depths ``xi`` (negative), widths ``zeta``
(positive) and centers ``kappa`` inside the search box.  The module
generates, serializes, and evaluates landscapes, and enumerates all
their minima by running local optimizations from every node of a fine
grid (or from random multistarts, as a cross-check oracle).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import USE_NUMBA
from .functions import DIM_ANY, FID_GAUSSMIX, Bounds, FunctionSpec
from .localopt import LocalOptSettings, minimize, minimize_spec

DEFAULT_DEPTH_RANGE = (-10.0, -0.1)
DEFAULT_WIDTH_RANGE = (0.5, 5.0)
DEFAULT_BOUNDS = Bounds(0.0, 10.0)
DEFAULT_MERGE_TOL = 1e-4

MAX_GRID_STARTS = 10**8

# Converged starts whose value is this close to the flat background are
# spurious (the optimizer stalled on the exponential tail far from every
# well); they are counted as skipped, not as minima.
MIN_WELL_DEPTH = 1e-8

# Accept a final point as a minimum only if the gradient is tiny there.
_ACCEPT_GRAD_NORM = 1e-7

_ENUM_SETTINGS = LocalOptSettings(
    fitness_tol=1e-15, gradient_tol=1e-9, max_iterations=2000
)

_BATCH = 1 << 14


class GrungeFormatError(ValueError):
    """Malformed landscape or catalog file."""


@dataclass
class GrungeLandscape:
    M: int
    N: int
    weights: np.ndarray
    widths: np.ndarray
    centers: np.ndarray
    bounds: Bounds = DEFAULT_BOUNDS

    def __post_init__(self):
        self.weights = np.ascontiguousarray(self.weights, dtype=float)
        self.widths = np.ascontiguousarray(self.widths, dtype=float)
        self.centers = np.ascontiguousarray(self.centers, dtype=float)
        if self.M < 1 or self.N < 1:
            raise ValueError("landscape needs M >= 1 and N >= 1")
        if self.weights.shape != (self.N,) or self.widths.shape != (self.N,):
            raise ValueError("weights/widths must have one entry per Gaussian")
        if self.centers.shape != (self.N, self.M):
            raise ValueError("centers must be an (N, M) array")
        if not np.all(self.widths > 0.0):
            raise ValueError("all widths must be positive")
        if np.any(self.centers < self.bounds.lower) or np.any(
            self.centers > self.bounds.upper
        ):
            raise ValueError("all centers must lie within the bounds")

    @property
    def name(self):
        return f"GRUNGE[{self.M},{self.N}]"

    def as_function_spec(self, target_value=None, target_point=None):
        return FunctionSpec(
            name=self.name,
            dim=self.M,
            dim_rule=DIM_ANY,
            bounds=self.bounds,
            target_value=-math.inf if target_value is None else target_value,
            target_point=target_point,
            fid=FID_GAUSSMIX,
            fid_opt=FID_GAUSSMIX,
            gw=self.weights,
            gz=self.widths,
            gc=self.centers,
        )

    def value(self, x):
        return self.as_function_spec().value(x)

    def gradient(self, x):
        return self.as_function_spec().gradient(x)

    def __eq__(self, other):
        if not isinstance(other, GrungeLandscape):
            return NotImplemented
        return (
            self.M == other.M
            and self.N == other.N
            and self.bounds == other.bounds
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.widths, other.widths)
            and np.array_equal(self.centers, other.centers)
        )


@dataclass
class MinimaCatalog:
    """Distinct minima of a landscape, sorted ascending by value."""

    locations: np.ndarray  # (K, M)
    values: np.ndarray  # (K,)
    hits: np.ndarray  # (K,) basin-hit counts
    skipped: int = 0  # non-convergent or flat starts

    def __post_init__(self):
        self.locations = np.ascontiguousarray(self.locations, dtype=float)
        self.values = np.ascontiguousarray(self.values, dtype=float)
        self.hits = np.ascontiguousarray(self.hits, dtype=np.int64)

    def __len__(self):
        return self.values.size

    @property
    def global_min(self):
        if self.values.size == 0:
            raise ValueError("empty catalog has no global minimum")
        return 0

    @property
    def global_min_value(self):
        return float(self.values[self.global_min])

    @property
    def global_min_location(self):
        return self.locations[self.global_min]


def grunge_generate(
    M,
    N,
    seed,
    depth_range=DEFAULT_DEPTH_RANGE,
    width_range=DEFAULT_WIDTH_RANGE,
    bounds=DEFAULT_BOUNDS,
    allow_mixed_sign=False,
):
    """Draw a random landscape; deterministic for a fixed seed.

    All weights are negative (wells) by default so the global minimum is
    guaranteed to be a well; pass ``allow_mixed_sign=True`` to permit a
    depth range reaching into positive weights (bumps).
    """
    if M < 1 or N < 1:
        raise ValueError("grunge_generate needs M >= 1 and N >= 1")
    if not depth_range[0] < depth_range[1]:
        raise ValueError("depth range must be ordered (lo < hi)")
    if depth_range[1] >= 0.0 and not allow_mixed_sign:
        raise ValueError("depth range must be negative (wells only)")
    if not (0.0 < width_range[0] < width_range[1]):
        raise ValueError("width range must be positive and ordered")
    rng = np.random.default_rng(seed)
    weights = rng.uniform(depth_range[0], depth_range[1], N)
    widths = rng.uniform(width_range[0], width_range[1], N)
    centers = rng.uniform(bounds.lower, bounds.upper, (N, M))
    return GrungeLandscape(M, N, weights, widths, centers, bounds)


def grunge_value(landscape, x):
    return landscape.value(x)


def grunge_gradient(landscape, x):
    return landscape.gradient(x)


# --- serialization ---------------------------------------------------------

def grunge_save(landscape, destination):
    lines = ["GRUNGE 1", f"{landscape.M} {landscape.N}"]
    for i in range(landscape.N):
        parts = [repr(float(landscape.weights[i])), repr(float(landscape.widths[i]))]
        parts.extend(repr(float(c)) for c in landscape.centers[i])
        lines.append(" ".join(parts))
    lines.append(f"BOUNDS {landscape.bounds.lower!r} {landscape.bounds.upper!r}")
    with open(destination, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_floats(text, count, lineno, what):
    parts = text.split()
    if len(parts) != count:
        raise GrungeFormatError(
            f"line {lineno}: expected {count} fields for {what}, got {len(parts)}"
        )
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise GrungeFormatError(f"line {lineno}: {exc}") from None


def grunge_load(source):
    with open(source) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "GRUNGE 1":
        found = lines[0].strip() if lines else "<empty file>"
        raise GrungeFormatError(f"line 1: expected header 'GRUNGE 1', got {found!r}")
    if len(lines) < 2:
        raise GrungeFormatError("line 2: missing 'M N' line")
    try:
        M, N = (int(p) for p in lines[1].split())
    except ValueError:
        raise GrungeFormatError(f"line 2: expected 'M N', got {lines[1]!r}") from None
    if len(lines) < 2 + N + 1:
        raise GrungeFormatError(
            f"line {len(lines) + 1}: truncated file, expected {N} Gaussian "
            f"lines plus a BOUNDS line"
        )
    weights = np.empty(N)
    widths = np.empty(N)
    centers = np.empty((N, M))
    for i in range(N):
        vals = _parse_floats(lines[2 + i], 2 + M, 3 + i, "a Gaussian")
        weights[i] = vals[0]
        widths[i] = vals[1]
        centers[i] = vals[2:]
    bline = lines[2 + N].split()
    if len(bline) != 3 or bline[0] != "BOUNDS":
        raise GrungeFormatError(
            f"line {3 + N}: expected 'BOUNDS lo hi', got {lines[2 + N]!r}"
        )
    try:
        bounds = Bounds(float(bline[1]), float(bline[2]))
    except ValueError as exc:
        raise GrungeFormatError(f"line {3 + N}: {exc}") from None
    try:
        return GrungeLandscape(M, N, weights, widths, centers, bounds)
    except ValueError as exc:
        raise GrungeFormatError(str(exc)) from None


def catalog_save(catalog, destination):
    lines = [f"MINIMA {len(catalog)}"]
    for i in range(len(catalog)):
        parts = [repr(float(catalog.values[i]))]
        parts.extend(repr(float(c)) for c in catalog.locations[i])
        parts.append(str(int(catalog.hits[i])))
        lines.append(" ".join(parts))
    with open(destination, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def catalog_load(source):
    with open(source) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("MINIMA "):
        raise GrungeFormatError("line 1: expected header 'MINIMA <count>'")
    try:
        count = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise GrungeFormatError("line 1: expected header 'MINIMA <count>'") from None
    if len(lines) < 1 + count:
        raise GrungeFormatError(f"line {len(lines) + 1}: truncated catalog")
    if count == 0:
        return MinimaCatalog(np.empty((0, 0)), np.empty(0), np.empty(0, dtype=np.int64))
    width = len(lines[1].split())
    M = width - 2
    if M < 1:
        raise GrungeFormatError("line 2: catalog rows need value, coordinates, hits")
    values = np.empty(count)
    locations = np.empty((count, M))
    hits = np.empty(count, dtype=np.int64)
    for i in range(count):
        vals = _parse_floats(lines[1 + i], width, 2 + i, "a minimum")
        values[i] = vals[0]
        locations[i] = vals[1:-1]
        hits[i] = int(vals[-1])
    return MinimaCatalog(locations, values, hits)


# --- enumeration -----------------------------------------------------------

def _cluster_impl(points, values, tol):
    n, m = points.shape
    reps = np.empty((n, m))
    rep_values = np.empty(n)
    hits = np.zeros(n, dtype=np.int64)
    k = 0
    tol2 = tol * tol
    for i in range(n):
        assigned = -1
        for r in range(k):
            d2 = 0.0
            for j in range(m):
                t = points[i, j] - reps[r, j]
                d2 += t * t
            if d2 <= tol2:
                assigned = r
                break
        if assigned < 0:
            reps[k] = points[i]
            rep_values[k] = values[i]
            hits[k] = 1
            k += 1
        else:
            hits[assigned] += 1
    return reps[:k].copy(), rep_values[:k].copy(), hits[:k].copy()


if USE_NUMBA:
    from numba import njit

    _cluster = njit(cache=True)(_cluster_impl)
else:
    _cluster = _cluster_impl


def _minimize_batch(landscape, starts, settings):
    """Local-optimize each row of ``starts``; returns (X, F, ok-mask)."""
    spec = landscape.as_function_spec()
    if USE_NUMBA:
        from ._localopt_numba import minimize_many

        X, F, status, _ = minimize_many(
            spec.fid,
            spec.fp,
            spec.gw,
            spec.gz,
            spec.gc,
            starts,
            settings.memory_pairs,
            settings.fitness_tol,
            settings.gradient_tol,
            settings.max_iterations,
            settings.sufficient_decrease,
            settings.curvature,
            False,
        )
        ok = status != 3
    else:
        n = starts.shape[0]
        X = np.empty_like(starts)
        F = np.empty(n)
        ok = np.ones(n, dtype=bool)
        for i in range(n):
            try:
                res = minimize(spec.opt_value_and_grad, starts[i], settings)
            except Exception:
                ok[i] = False
                continue
            X[i] = res.x
            F[i] = res.value
    return X, F, ok


def _collect_minima(landscape, start_batches, total, merge_tol, settings, min_depth):
    spec = landscape.as_function_spec()
    points = []
    values = []
    skipped = 0
    for starts in start_batches:
        X, F, ok = _minimize_batch(landscape, starts, settings)
        for i in range(X.shape[0]):
            if not ok[i] or F[i] > -min_depth:
                skipped += 1
                continue
            g = spec.gradient(X[i])
            if float(np.linalg.norm(g)) > _ACCEPT_GRAD_NORM * max(1.0, abs(F[i])):
                skipped += 1
                continue
            points.append(X[i])
            values.append(F[i])
    if not points:
        return MinimaCatalog(
            np.empty((0, landscape.M)),
            np.empty(0),
            np.empty(0, dtype=np.int64),
            skipped=skipped,
        )
    points = np.asarray(points)
    values = np.asarray(values)
    # feed the clusterer in ascending-value order so each representative
    # is the deepest point of its cluster; stable sort keeps discovery
    # order on exact ties
    order = np.argsort(values, kind="stable")
    reps, rep_values, hits = _cluster(points[order], values[order], merge_tol)
    return MinimaCatalog(reps, rep_values, hits, skipped=skipped)


def grunge_enumerate(
    landscape,
    grid_points_per_dim,
    merge_tol=DEFAULT_MERGE_TOL,
    settings=None,
    min_depth=MIN_WELL_DEPTH,
):
    """Enumerate minima by local optimization from every grid node."""
    if grid_points_per_dim < 2:
        raise ValueError("grid_points_per_dim must be >= 2")
    total = grid_points_per_dim ** landscape.M
    if total > MAX_GRID_STARTS:
        raise ValueError(
            f"grid of {total} starts exceeds the {MAX_GRID_STARTS} guard"
        )
    settings = settings or _ENUM_SETTINGS
    axis = np.linspace(
        landscape.bounds.lower, landscape.bounds.upper, grid_points_per_dim
    )

    def batches():
        for lo in range(0, total, _BATCH):
            idx = np.arange(lo, min(lo + _BATCH, total))
            coords = np.unravel_index(idx, (grid_points_per_dim,) * landscape.M)
            yield np.ascontiguousarray(np.stack([axis[c] for c in coords], axis=1))

    return _collect_minima(landscape, batches(), total, merge_tol, settings, min_depth)


def random_multistart(
    landscape,
    count,
    seed,
    merge_tol=DEFAULT_MERGE_TOL,
    settings=None,
    min_depth=MIN_WELL_DEPTH,
):
    """Catalog from ``count`` uniform-random local-optimization starts."""
    if count < 1:
        raise ValueError("count must be >= 1")
    settings = settings or _ENUM_SETTINGS
    rng = np.random.default_rng(seed)

    def batches():
        remaining = count
        while remaining > 0:
            n = min(_BATCH, remaining)
            yield rng.uniform(
                landscape.bounds.lower, landscape.bounds.upper, (n, landscape.M)
            )
            remaining -= n

    return _collect_minima(landscape, batches(), count, merge_tol, settings, min_depth)
