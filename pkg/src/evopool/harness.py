"""Experiment orchestration: repeated runs, sweeps, fits, CSV, plots.

The harness measures the number of global optimization steps to
solution.  Wall time is recorded for information only and never enters
any comparison.  Failed runs (max_steps reached) are reported but
excluded from scaling fits.
"""

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import CrossoverKind, PoolConfig, RunRecord, run

RECORD_COLUMNS = (
    "function",
    "dim",
    "algorithm",
    "locopt",
    "niching",
    "mnic",
    "seed",
    "steps",
    "success",
    "best_value",
    "wall_ms",
)

SERIES_COLUMNS = (
    "function",
    "algorithm",
    "dim",
    "mean_steps",
    "std_steps",
    "n_success",
    "n_fail",
)


@dataclass
class ScatterSummary:
    count: int
    max_steps: int
    min_steps: int
    mean_steps: float
    std_steps: float
    max_dev_pct: float
    min_dev_pct: float
    median_steps: float
    n_success: int
    n_fail: int

    @property
    def unsolved(self):
        return self.n_success == 0


@dataclass
class SeriesPoint:
    dim: int
    mean_steps: float
    std_steps: float
    median_steps: float
    n_success: int
    n_fail: int


@dataclass
class ScalingSeries:
    function: str
    algorithm: str
    points: list
    exponent: float = math.nan
    prefactor: float = math.nan
    residual: float = math.nan
    records: list = field(default_factory=list)

    @property
    def has_fit(self):
        return math.isfinite(self.exponent)


def _run_one(args):
    spec, kind, cfg, locopt, niching, seed = args
    return run(spec, kind, cfg, locopt=locopt, niching=niching, seed=seed)


def _run_batch(tasks, workers):
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, tasks))


def summarize(records):
    """Aggregate a set of runs into Tab.-5-style scatter statistics."""
    if not records:
        raise ValueError("cannot summarize an empty record set")
    steps = np.array([r.steps for r in records], dtype=float)
    mean = float(steps.mean())
    return ScatterSummary(
        count=len(records),
        max_steps=int(steps.max()),
        min_steps=int(steps.min()),
        mean_steps=mean,
        std_steps=float(steps.std(ddof=1)) if len(records) > 1 else 0.0,
        max_dev_pct=abs(steps.max() - mean) / mean * 100.0 if mean else 0.0,
        min_dev_pct=abs(steps.min() - mean) / mean * 100.0 if mean else 0.0,
        median_steps=float(np.median(steps)),
        n_success=sum(r.success for r in records),
        n_fail=sum(not r.success for r in records),
    )


def repeat_runs(
    spec, kind, cfg, count, master_seed, locopt=False, niching=None, workers=1
):
    """``count`` independent runs with seeds master_seed+1..+count."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if isinstance(kind, str):
        kind = CrossoverKind.parse(kind)
    tasks = [
        (spec, kind, cfg, locopt, niching, master_seed + i)
        for i in range(1, count + 1)
    ]
    records = _run_batch(tasks, workers)
    return summarize(records), records


def fit_power_law(dims, steps):
    """Least-squares fit steps = prefactor * dim**exponent (log-log).

    Returns (exponent, prefactor, residual); residual is the rms of the
    log-space misfit.
    """
    dims = np.asarray(dims, dtype=float)
    steps = np.asarray(steps, dtype=float)
    if dims.size < 2:
        raise ValueError("need at least 2 points for a power-law fit")
    ld = np.log(dims)
    ls = np.log(steps)
    slope, intercept = np.polyfit(ld, ls, 1)
    resid = ls - (slope * ld + intercept)
    return float(slope), float(math.exp(intercept)), float(
        np.sqrt(np.mean(resid**2))
    )


def dimension_sweep(
    spec_factory,
    dims,
    kind,
    cfg,
    repeats,
    master_seed,
    locopt=False,
    niching=None,
    workers=1,
):
    """Run ``repeats`` runs at each dimension and fit the scaling.

    ``spec_factory(dim)`` builds the objective at each dimension
    (typically ``lambda d: lookup_function(name, d)``).  Only successful
    runs feed the fit; a series without two successful dimensions keeps
    a NaN exponent (no-fit status).
    """
    dims = list(dims)
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("dims must be strictly increasing")
    if isinstance(kind, str):
        kind = CrossoverKind.parse(kind)
    points = []
    records = []
    for dim in dims:
        spec = spec_factory(dim)
        summary, recs = repeat_runs(
            spec, kind, cfg, repeats, master_seed, locopt=locopt,
            niching=niching, workers=workers,
        )
        records.extend(recs)
        ok = [r.steps for r in recs if r.success]
        points.append(
            SeriesPoint(
                dim=dim,
                mean_steps=float(np.mean(ok)) if ok else math.nan,
                std_steps=float(np.std(ok, ddof=1)) if len(ok) > 1 else 0.0,
                median_steps=float(np.median(ok)) if ok else math.nan,
                n_success=len(ok),
                n_fail=len(recs) - len(ok),
            )
        )
    series = ScalingSeries(
        function=records[0].function if records else "?",
        algorithm=kind.label,
        points=points,
        records=records,
    )
    fitted = [(p.dim, p.mean_steps) for p in points if p.n_success > 0]
    if len(fitted) >= 2:
        d, s = zip(*fitted)
        series.exponent, series.prefactor, series.residual = fit_power_law(d, s)
    return series


# --- CSV -------------------------------------------------------------------

def _record_row(r):
    return [
        r.function,
        r.dim,
        r.algorithm,
        int(r.locopt),
        r.niching,
        r.mnic,
        r.seed,
        r.steps,
        int(r.success),
        repr(r.best_value),
        f"{r.wall_ms:.3f}",
    ]


def export_records_csv(records, destination, config=None):
    """Write runs as CSV; ``config`` entries become #config comments."""
    with open(destination, "w", newline="") as fh:
        if config:
            for key, value in config.items():
                fh.write(f"#config {key}={value}\n")
        writer = csv.writer(fh)
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            writer.writerow(_record_row(r))


def import_records_csv(source):
    records = []
    with open(source, newline="") as fh:
        rows = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(io.StringIO("".join(rows)))
    header = next(reader)
    if tuple(header) != RECORD_COLUMNS:
        raise ValueError(f"unexpected record CSV header: {header}")
    for row in reader:
        records.append(
            RunRecord(
                function=row[0],
                dim=int(row[1]),
                algorithm=row[2],
                locopt=bool(int(row[3])),
                niching=int(row[4]),
                mnic=int(row[5]),
                seed=int(row[6]),
                steps=int(row[7]),
                success=bool(int(row[8])),
                best_value=float(row[9]),
                wall_ms=float(row[10]),
            )
        )
    return records


def export_series_csv(series_list, destination, config=None):
    """Write one or more scaling series plus #fit comment rows."""
    with open(destination, "w", newline="") as fh:
        if config:
            for key, value in config.items():
                fh.write(f"#config {key}={value}\n")
        writer = csv.writer(fh)
        writer.writerow(SERIES_COLUMNS)
        for series in series_list:
            for p in series.points:
                writer.writerow(
                    [
                        series.function,
                        series.algorithm,
                        p.dim,
                        repr(p.mean_steps),
                        repr(p.std_steps),
                        p.n_success,
                        p.n_fail,
                    ]
                )
        for series in series_list:
            fh.write(
                f"#fit {series.algorithm} {series.exponent!r} "
                f"{series.prefactor!r} {series.residual!r}\n"
            )


def emit_plot_script(series_list, destination):
    """Write a self-contained gnuplot script: steps vs dimension, log-log."""
    series_list = list(series_list)
    if not series_list or all(not s.points for s in series_list):
        raise ValueError("cannot plot an empty series")
    lines = [
        "# gnuplot script: mean global-optimization steps vs dimension",
        "set logscale xy",
        "set xlabel 'dimension'",
        "set ylabel 'mean steps to solution'",
        "set key left top",
    ]
    for i, series in enumerate(series_list):
        lines.append(f"$data{i} << EOD")
        for p in series.points:
            if p.n_success > 0:
                lines.append(f"{p.dim} {p.mean_steps!r} {p.std_steps!r}")
        lines.append("EOD")
    plots = []
    for i, series in enumerate(series_list):
        label = series.algorithm.capitalize()
        plots.append(f"$data{i} using 1:2 with linespoints title '{label}'")
        if series.has_fit:
            lines.append(
                f"fit{i}(x) = {series.prefactor!r} * x ** {series.exponent!r}"
            )
            plots.append(f"fit{i}(x) with lines dashtype 2 title '{label} fit'")
    lines.append("plot \\")
    lines.append(", \\\n".join("    " + p for p in plots))
    with open(destination, "w") as fh:
        fh.write("\n".join(lines) + "\n")
