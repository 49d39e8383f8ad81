"""Command-line front end.

Subcommands: ``solve``, ``sweep``, ``scatter``, ``grunge {gen,enum,solve}``,
``validate``.  Exit codes: 0 success, 2 configuration error, 3 run
failure (max_steps reached), 4 validation failure.
"""

import os
import sys

import click
import numpy as np

from . import backend_name
from .engine import (
    CrossoverKind,
    InitializationError,
    NichingConfig,
    PoolConfig,
    run,
)
from .functions import FUNCTION_NAMES, lookup_function
from .grunge import (
    GrungeFormatError,
    catalog_load,
    catalog_save,
    grunge_enumerate,
    grunge_generate,
    grunge_load,
    grunge_save,
)
from .harness import (
    dimension_sweep,
    emit_plot_script,
    export_records_csv,
    export_series_csv,
    repeat_runs,
    summarize,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUN_FAILURE = 3
EXIT_VALIDATION = 4

ALL_ALGOS = "holland,germany,portugal:1,portugal:3,portugal:5,portugal:7"


def _fail_config(message):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_CONFIG)


def _build_spec(function, dim):
    try:
        return lookup_function(function, dim)
    except (ValueError, OSError, GrungeFormatError) as exc:
        _fail_config(str(exc))


def _build_cfg(pool_size, diversity, mutation, father_shape, germany_shape,
               epsilon, max_steps):
    try:
        return PoolConfig(
            pool_size=pool_size,
            fitness_diversity=diversity,
            mutation_probability=mutation,
            father_rank_shape=father_shape,
            germany_cut_shape=germany_shape,
            termination_epsilon=epsilon,
            max_steps=max_steps,
        )
    except ValueError as exc:
        _fail_config(str(exc))


def _build_niching(cells, mnic):
    if mnic is None:
        return None
    try:
        return NichingConfig(cells_per_dim=cells, mnic=mnic)
    except ValueError as exc:
        _fail_config(str(exc))


def _parse_kind(label):
    try:
        return CrossoverKind.parse(label)
    except ValueError as exc:
        _fail_config(str(exc))


def _config_echo(**kwargs):
    return {k: v for k, v in kwargs.items() if v is not None}


def _pool_options(fn):
    opts = [
        click.option("--pool-size", default=1000, show_default=True,
                     help="Pool size (number of genomes kept)."),
        click.option("--diversity", default=1e-8, show_default=True,
                     help="Fitness-diversity threshold between pool members."),
        click.option("--mutation", default=0.05, show_default=True,
                     help="One-point mutation probability per child."),
        click.option("--father-shape", default=0.1, show_default=True,
                     help="Gaussian shape factor for father rank selection."),
        click.option("--germany-shape", default=0.3, show_default=True,
                     help="Gaussian width factor for the Germany cut position."),
        click.option("--epsilon", default=1e-6, show_default=True,
                     help="Termination epsilon above the target value."),
        click.option("--max-steps", default=1_000_000, show_default=True,
                     help="Step budget before a run counts as failed."),
        click.option("--locopt/--no-locopt", default=False, show_default=True,
                     help="Locally optimize every child (and the initial pool)."),
        click.option("--niche-cells", default=10, show_default=True,
                     help="Niching grid cells per dimension."),
        click.option("--mnic", default=None, type=int,
                     help="Max individuals per grid cell; enables niching."),
        click.option("--seed", default=0, show_default=True,
                     help="Master RNG seed."),
        click.option("--workers", default=os.cpu_count, type=int,
                     help="Parallel workers for independent runs "
                          "[default: machine parallelism; use 1 for "
                          "deterministic output]."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


@click.group()
@click.version_option(package_name="evopool")
def main():
    """Pool-based evolutionary global optimization benchmarking."""


@main.command()
@click.option("--function", required=True,
              help=f"One of {', '.join(FUNCTION_NAMES)} or grunge:<file>.")
@click.option("--dim", required=True, type=int, help="Problem dimensionality.")
@click.option("--algo", default="germany", show_default=True,
              help="Crossover operator (holland, germany, portugal:<k>).")
@click.option("--target", default=None, type=float,
              help="Override the target function value for termination.")
@click.option("--out", default=None, type=click.Path(),
              help="Write the run record as CSV.")
@_pool_options
def solve(function, dim, algo, target, out, **kw):
    """Run one GA run and print steps-to-solution and best value."""
    spec = _build_spec(function, dim)
    if target is not None:
        spec.target_value = target
    cfg = _build_cfg(kw["pool_size"], kw["diversity"], kw["mutation"],
                     kw["father_shape"], kw["germany_shape"], kw["epsilon"],
                     kw["max_steps"])
    kind = _parse_kind(algo)
    niching = _build_niching(kw["niche_cells"], kw["mnic"])
    try:
        record = run(spec, kind, cfg, locopt=kw["locopt"], niching=niching,
                     seed=kw["seed"])
    except InitializationError as exc:
        click.echo(f"run failed: {exc}", err=True)
        sys.exit(EXIT_RUN_FAILURE)
    click.echo(
        f"{record.function} dim={record.dim} algo={record.algorithm} "
        f"seed={record.seed}: "
        f"{'solved' if record.success else 'NOT solved'} in {record.steps} "
        f"steps, best value {record.best_value:.6e}"
    )
    if out:
        export_records_csv([record], out, config=_config_echo(
            function=function, dim=dim, algo=algo, **kw))
        click.echo(f"record written to {out}")
    sys.exit(EXIT_OK if record.success else EXIT_RUN_FAILURE)


@main.command()
@click.option("--function", required=True)
@click.option("--dims", required=True,
              help="Comma-separated, strictly increasing dimensions.")
@click.option("--algos", default=ALL_ALGOS, show_default=True,
              help="Comma-separated operator list.")
@click.option("--repeats", default=3, show_default=True)
@click.option("--out", default="sweep", show_default=True,
              help="Output prefix: <out>-series.csv, <out>-records.csv, "
                   "<out>.gnuplot.")
@_pool_options
def sweep(function, dims, algos, repeats, out, **kw):
    """Dimension sweep per algorithm; emits series CSV and a plot script."""
    try:
        dim_list = [int(d) for d in dims.split(",")]
    except ValueError:
        _fail_config(f"bad dims list {dims!r}")
    cfg = _build_cfg(kw["pool_size"], kw["diversity"], kw["mutation"],
                     kw["father_shape"], kw["germany_shape"], kw["epsilon"],
                     kw["max_steps"])
    niching = _build_niching(kw["niche_cells"], kw["mnic"])
    kinds = [_parse_kind(a) for a in algos.split(",")]
    # validate every dimension against the function's dimension rule
    for d in dim_list:
        _build_spec(function, d)
    series_list = []
    records = []
    for kind in kinds:
        try:
            series = dimension_sweep(
                lambda d: lookup_function(function, d), dim_list, kind, cfg,
                repeats, kw["seed"], locopt=kw["locopt"], niching=niching,
                workers=kw["workers"],
            )
        except ValueError as exc:
            _fail_config(str(exc))
        except InitializationError as exc:
            click.echo(f"run failed: {exc}", err=True)
            sys.exit(EXIT_RUN_FAILURE)
        series_list.append(series)
        records.extend(series.records)
        if series.has_fit:
            click.echo(
                f"{kind.label}: exponent {series.exponent:.3f}, "
                f"prefactor {series.prefactor:.3g}, "
                f"log-rms residual {series.residual:.3g}"
            )
        else:
            click.echo(f"{kind.label}: no fit (need >= 2 dimensions with successes)")
        for p in series.points:
            click.echo(
                f"  dim {p.dim}: mean {p.mean_steps:.1f} steps "
                f"({p.n_success} ok, {p.n_fail} failed)"
            )
    echo = _config_echo(function=function, dims=dims, algos=algos,
                        repeats=repeats, **kw)
    export_series_csv(series_list, f"{out}-series.csv", config=echo)
    export_records_csv(records, f"{out}-records.csv", config=echo)
    emit_plot_script(series_list, f"{out}.gnuplot")
    click.echo(f"wrote {out}-series.csv, {out}-records.csv, {out}.gnuplot")
    if all(not r.success for r in records):
        sys.exit(EXIT_RUN_FAILURE)
    sys.exit(EXIT_OK)


@main.command()
@click.option("--function", required=True)
@click.option("--dim", required=True, type=int)
@click.option("--algos", default=ALL_ALGOS, show_default=True)
@click.option("--count", default=10, show_default=True,
              help="Runs per algorithm (5 and 10 are the usual protocols).")
@click.option("--out", default=None, type=click.Path(),
              help="Write all run records as CSV.")
@_pool_options
def scatter(function, dim, algos, count, out, **kw):
    """Repeated-run scatter statistics per algorithm."""
    spec = _build_spec(function, dim)
    cfg = _build_cfg(kw["pool_size"], kw["diversity"], kw["mutation"],
                     kw["father_shape"], kw["germany_shape"], kw["epsilon"],
                     kw["max_steps"])
    niching = _build_niching(kw["niche_cells"], kw["mnic"])
    header = (f"{'algorithm':<12} {'max':>10} {'%dev':>7} {'min':>10} "
              f"{'%dev':>7} {'average':>11} {'ok':>3}")
    click.echo(header)
    records = []
    any_success = False
    for label in algos.split(","):
        kind = _parse_kind(label)
        try:
            summary, recs = repeat_runs(
                spec, kind, cfg, count, kw["seed"], locopt=kw["locopt"],
                niching=niching, workers=kw["workers"],
            )
        except InitializationError as exc:
            click.echo(f"run failed: {exc}", err=True)
            sys.exit(EXIT_RUN_FAILURE)
        records.extend(recs)
        any_success = any_success or summary.n_success > 0
        click.echo(
            f"{kind.label:<12} {summary.max_steps:>10} "
            f"{summary.max_dev_pct:>7.1f} {summary.min_steps:>10} "
            f"{summary.min_dev_pct:>7.1f} {summary.mean_steps:>11.1f} "
            f"{summary.n_success:>3}"
        )
    if out:
        export_records_csv(records, out, config=_config_echo(
            function=function, dim=dim, algos=algos, count=count, **kw))
        click.echo(f"records written to {out}")
    sys.exit(EXIT_OK if any_success else EXIT_RUN_FAILURE)


@main.group()
def grunge():
    """Generate, enumerate, and solve randomized-Gaussian landscapes."""


@grunge.command("gen")
@click.option("--m", "m", required=True, type=int, help="Dimensions.")
@click.option("--n", "n", required=True, type=int, help="Gaussian count.")
@click.option("--seed", default=0, show_default=True)
@click.option("--depth-lo", default=-10.0, show_default=True)
@click.option("--depth-hi", default=-0.1, show_default=True)
@click.option("--width-lo", default=0.5, show_default=True)
@click.option("--width-hi", default=5.0, show_default=True)
@click.option("--out", required=True, type=click.Path())
def grunge_gen(m, n, seed, depth_lo, depth_hi, width_lo, width_hi, out):
    """Write a new GRUNGE[M,N] landscape file."""
    try:
        landscape = grunge_generate(
            m, n, seed, depth_range=(depth_lo, depth_hi),
            width_range=(width_lo, width_hi),
        )
    except ValueError as exc:
        _fail_config(str(exc))
    grunge_save(landscape, out)
    click.echo(f"{landscape.name} (seed {seed}) written to {out}")


@grunge.command("enum")
@click.option("--landscape", required=True, type=click.Path(exists=True))
@click.option("--grid", default=10, show_default=True,
              help="Grid points per dimension.")
@click.option("--merge-tol", default=1e-4, show_default=True)
@click.option("--out", required=True, type=click.Path())
def grunge_enum(landscape, grid, merge_tol, out):
    """Enumerate all minima of a landscape onto a catalog file."""
    try:
        land = grunge_load(landscape)
    except (GrungeFormatError, OSError) as exc:
        _fail_config(str(exc))
    try:
        catalog = grunge_enumerate(land, grid, merge_tol=merge_tol)
    except ValueError as exc:
        _fail_config(str(exc))
    catalog_save(catalog, out)
    click.echo(
        f"{land.name}: {len(catalog)} distinct minima "
        f"({catalog.skipped} starts skipped), global minimum "
        f"{catalog.global_min_value!r}; catalog written to {out}"
    )


@grunge.command("solve")
@click.option("--landscape", required=True, type=click.Path(exists=True))
@click.option("--catalog", default=None, type=click.Path(),
              help="Minima catalog providing the target value.")
@click.option("--target", default=None, type=float,
              help="Explicit target value (alternative to --catalog).")
@click.option("--algo", default="germany", show_default=True)
@click.option("--out", default=None, type=click.Path())
@_pool_options
def grunge_solve(landscape, catalog, target, algo, out, **kw):
    """Run the GA against a landscape, target taken from its catalog."""
    try:
        land = grunge_load(landscape)
    except (GrungeFormatError, OSError) as exc:
        _fail_config(str(exc))
    if target is None:
        if catalog is None:
            _fail_config(
                "no target value: run 'grunge enum' first and pass --catalog "
                "(or give an explicit --target)"
            )
        try:
            cat = catalog_load(catalog)
            target = cat.global_min_value
        except (GrungeFormatError, OSError, ValueError) as exc:
            _fail_config(str(exc))
    spec = land.as_function_spec(target_value=target)
    cfg = _build_cfg(kw["pool_size"], kw["diversity"], kw["mutation"],
                     kw["father_shape"], kw["germany_shape"], kw["epsilon"],
                     kw["max_steps"])
    kind = _parse_kind(algo)
    niching = _build_niching(kw["niche_cells"], kw["mnic"])
    try:
        record = run(spec, kind, cfg, locopt=kw["locopt"], niching=niching,
                     seed=kw["seed"])
    except InitializationError as exc:
        click.echo(f"run failed: {exc}", err=True)
        sys.exit(EXIT_RUN_FAILURE)
    click.echo(
        f"{record.function} algo={record.algorithm} seed={record.seed}: "
        f"{'solved' if record.success else 'NOT solved'} in {record.steps} "
        f"steps, best value {record.best_value!r} (target {target!r})"
    )
    if out:
        export_records_csv([record], out, config=_config_echo(
            landscape=landscape, catalog=catalog, target=target, algo=algo,
            **kw))
    sys.exit(EXIT_OK if record.success else EXIT_RUN_FAILURE)


def _fd_gradient(value_fn, x, h_scale=1e-6):
    g = np.empty(x.size)
    for i in range(x.size):
        h = h_scale * max(1.0, abs(x[i]))
        xp = x.copy(); xp[i] += h
        xm = x.copy(); xm[i] -= h
        g[i] = (value_fn(xp) - value_fn(xm)) / (2.0 * h)
    return g


def _validate_gradient(spec, rng, points=100, singular_radius=1e-3):
    checked = 0
    while checked < points:
        x = spec.sample_uniform(rng)
        if np.any(np.abs(x) < singular_radius):
            continue
        analytic = spec.opt_value_and_grad(x)[1]
        numeric = _fd_gradient(lambda p: spec.opt_value_and_grad(p)[0], x)
        scale = max(1.0, float(np.max(np.abs(numeric))))
        if float(np.max(np.abs(analytic - numeric))) / scale > 1e-5:
            return False, f"gradient mismatch at {x[:4]}..."
        checked += 1
    return True, ""


def _validate_minimum(spec):
    if spec.target_point is None:
        return True, "no known argmin"
    err = abs(spec.value(spec.target_point) - spec.target_value)
    tol = 1e-3 * spec.dim if spec.name == "schwefel" else 1e-9
    if err > tol:
        return False, f"value at argmin off by {err:.3e}"
    return True, ""


def _validate_pool(spec):
    from .engine import PoolConfig as PC
    cfg = PC(pool_size=50, max_steps=2000)
    try:
        record = run(spec, "germany", cfg, seed=1, audit_every=100)
    except AssertionError as exc:
        return False, f"pool audit failed: {exc}"
    return True, f"{record.steps} steps audited"


@main.command()
@click.option("--function", "only", default=None,
              help="Restrict the suite to one function.")
@click.option("--landscape", default=None, type=click.Path(),
              help="Additionally validate a landscape file.")
@click.option("--seed", default=0, show_default=True)
def validate(only, landscape, seed):
    """Gradient, known-minimum, and pool-invariant validation suites."""
    rng = np.random.default_rng(seed)
    names = FUNCTION_NAMES if only is None else (only,)
    dims = {"schafferf6": 2}
    failures = 0
    rows = []
    for name in names:
        try:
            spec = lookup_function(name, dims.get(name, 10))
        except ValueError as exc:
            _fail_config(str(exc))
        for check, fn in (
            ("gradient", lambda s: _validate_gradient(s, rng)),
            ("minimum", _validate_minimum),
            ("pool", _validate_pool),
        ):
            ok, note = fn(spec)
            failures += not ok
            rows.append((name, check, ok, note))
    if landscape is not None:
        try:
            land = grunge_load(landscape)
            ok, note = True, f"{land.name} ok"
        except (GrungeFormatError, OSError) as exc:
            ok, note = False, str(exc)
        failures += not ok
        rows.append((landscape, "landscape", ok, note))
    width = max(len(r[0]) for r in rows)
    for name, check, ok, note in rows:
        status = "PASS" if ok else "FAIL"
        suffix = f"  {note}" if note else ""
        click.echo(f"{name:<{width}}  {check:<9} {status}{suffix}")
    if failures:
        click.echo(f"{failures} check(s) failed", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(f"all checks passed ({backend_name()} backend)")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
