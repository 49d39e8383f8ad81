"""Pool-based steady-state genetic algorithm.

A fixed-size pool of genomes is kept sorted by fitness.  Each global
optimization step mates two parents (mother uniform, father rank-biased
toward the fittest), crosses them with one of the named operators
(Holland: no cut, Germany: one Gaussian-positioned cut, Portugal:k — k
uniformly positioned cuts), mutates both children, optionally locally
optimizes them, and offers the fitter child to the pool.  The child is
inserted only if it beats the current worst member and violates neither
the fitness-diversity rule nor (when enabled) the static-grid niching
cap; on insertion the worst member (or the replaced niche member) is
dropped, so the pool size stays constant.
"""

import math
import time
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .localopt import LocalOptSettings, minimize_spec

ALGORITHMS = ("holland", "germany", "portugal:1", "portugal:3", "portugal:5", "portugal:7")


class InitializationError(RuntimeError):
    """The pool could not be filled under the diversity/niche rules."""


@dataclass
class Genome:
    genes: np.ndarray
    fitness: float

    def __lt__(self, other):
        return self.fitness < other.fitness


@dataclass
class PoolConfig:
    pool_size: int = 1000
    fitness_diversity: float = 1e-8
    mutation_probability: float = 0.05
    father_rank_shape: float = 0.1
    germany_cut_shape: float = 0.3
    termination_epsilon: float = 1e-6
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.pool_size < 2:
            raise ValueError("pool_size must be >= 2")
        if not 0.0 <= self.mutation_probability <= 1.0:
            raise ValueError("mutation_probability must be in [0, 1]")
        if self.father_rank_shape <= 0 or self.germany_cut_shape <= 0:
            raise ValueError("shape factors must be positive")
        if self.fitness_diversity < 0:
            raise ValueError("fitness_diversity must be >= 0")


@dataclass(frozen=True)
class CrossoverKind:
    kind: str  # "holland" | "germany" | "portugal"
    cuts: int = 0

    @classmethod
    def parse(cls, label):
        label = label.strip().lower()
        if label == "holland":
            return cls("holland")
        if label == "germany":
            return cls("germany", 1)
        if label.startswith("portugal:"):
            try:
                k = int(label.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad portugal cut count in {label!r}") from None
            if k < 1:
                raise ValueError("portugal cut count must be >= 1")
            return cls("portugal", k)
        raise ValueError(f"unknown crossover kind {label!r}")

    @property
    def label(self):
        if self.kind == "portugal":
            return f"portugal:{self.cuts}"
        return self.kind


@dataclass
class NichingConfig:
    cells_per_dim: int = 10
    mnic: int = 100
    replace_in_cell: bool = True  # False: pure-reject mode

    def __post_init__(self):
        if self.cells_per_dim < 1:
            raise ValueError("cells_per_dim must be >= 1")
        if self.mnic < 1:
            raise ValueError("mnic must be >= 1")


NICHE_ADMIT = "admit"
NICHE_ADMIT_REPLACING = "admit-replacing"
NICHE_REJECT = "reject"


class NichingGrid:
    """Static-grid occupancy tracker with an MNIC cap per cell."""

    def __init__(self, config, bounds):
        self.config = config
        self.bounds = bounds
        self.occupancy = {}

    def cell_of(self, genes):
        c = self.config.cells_per_dim
        scaled = (genes - self.bounds.lower) / self.bounds.width * c
        idx = np.clip(np.floor(scaled).astype(np.int64), 0, c - 1)
        return tuple(int(i) for i in idx)

    def add(self, cell):
        self.occupancy[cell] = self.occupancy.get(cell, 0) + 1

    def remove(self, cell):
        n = self.occupancy[cell] - 1
        if n:
            self.occupancy[cell] = n
        else:
            del self.occupancy[cell]

    def total(self):
        return sum(self.occupancy.values())


def niche_check(grid, pool, candidate_genes, candidate_fitness):
    """Decide admission of a candidate under the MNIC cap.

    Returns (NICHE_ADMIT, None), (NICHE_ADMIT_REPLACING, member_index)
    or (NICHE_REJECT, None).
    """
    cell = grid.cell_of(candidate_genes)
    if grid.occupancy.get(cell, 0) < grid.config.mnic:
        return NICHE_ADMIT, None
    if not grid.config.replace_in_cell:
        return NICHE_REJECT, None
    # cell is full: replace its worst member if the candidate is fitter
    worst_idx = -1
    for i in range(len(pool.members) - 1, -1, -1):
        if pool.cells[i] == cell:
            worst_idx = i
            break
    if worst_idx >= 0 and candidate_fitness < pool.members[worst_idx].fitness:
        return NICHE_ADMIT_REPLACING, worst_idx
    return NICHE_REJECT, None


class Pool:
    """Fitness-sorted fixed-capacity population."""

    def __init__(self, config, niching_grid=None):
        self.config = config
        self.members = []  # ascending fitness
        self.keys = []  # parallel fitness list for bisect
        self.grid = niching_grid
        self.cells = []  # parallel cell list (None entries when no grid)

    def __len__(self):
        return len(self.members)

    @property
    def best(self):
        return self.members[0]

    @property
    def worst(self):
        return self.members[-1]

    def violates_diversity(self, fitness):
        i = bisect_left(self.keys, fitness)
        if i < len(self.keys) and self.keys[i] - fitness < self.config.fitness_diversity:
            return True
        if i > 0 and fitness - self.keys[i - 1] < self.config.fitness_diversity:
            return True
        return False

    def _insert(self, genome):
        i = bisect_left(self.keys, genome.fitness)
        self.members.insert(i, genome)
        self.keys.insert(i, genome.fitness)
        cell = None
        if self.grid is not None:
            cell = self.grid.cell_of(genome.genes)
            self.grid.add(cell)
        self.cells.insert(i, cell)

    def _drop(self, index):
        self.members.pop(index)
        self.keys.pop(index)
        cell = self.cells.pop(index)
        if self.grid is not None:
            self.grid.remove(cell)

    def try_fill(self, genome):
        """Insertion during initialization: no eviction, full-pool error."""
        if len(self.members) >= self.config.pool_size:
            raise InitializationError("pool already full")
        if self.violates_diversity(genome.fitness):
            return False
        if self.grid is not None:
            verdict, _ = niche_check(self.grid, self, genome.genes, genome.fitness)
            if verdict != NICHE_ADMIT:
                return False
        self._insert(genome)
        return True

    def offer(self, genome):
        """Steady-state insertion; returns True when accepted."""
        if genome.fitness >= self.worst.fitness:
            return False
        if self.violates_diversity(genome.fitness):
            return False
        drop_index = len(self.members) - 1
        if self.grid is not None:
            verdict, replaced = niche_check(
                self.grid, self, genome.genes, genome.fitness
            )
            if verdict == NICHE_REJECT:
                return False
            if verdict == NICHE_ADMIT_REPLACING:
                drop_index = replaced
        self._drop(drop_index)
        self._insert(genome)
        return True

    def audit(self):
        """Raise AssertionError on any violated pool invariant."""
        assert len(self.members) == len(self.keys) == len(self.cells)
        for i, g in enumerate(self.members):
            assert math.isfinite(g.fitness)
            assert g.fitness == self.keys[i]
            if i:
                assert self.keys[i] >= self.keys[i - 1], "pool not sorted"
                assert (
                    self.keys[i] - self.keys[i - 1] >= self.config.fitness_diversity
                ), "diversity violated"
        if self.grid is not None:
            seen = {}
            for i, cell in enumerate(self.cells):
                assert cell == self.grid.cell_of(self.members[i].genes)
                seen[cell] = seen.get(cell, 0) + 1
            assert seen == self.grid.occupancy, "occupancy out of sync"
            for cell, n in seen.items():
                assert n <= self.grid.config.mnic, "MNIC exceeded"


@dataclass
class StepOutcome:
    accepted: bool
    best_fitness: float
    error: bool = False


@dataclass
class RunRecord:
    function: str
    dim: int
    algorithm: str
    locopt: bool
    niching: int  # cells_per_dim, 0 when disabled
    mnic: int  # 0 when disabled
    seed: int
    steps: int
    success: bool
    best_value: float
    wall_ms: float
    best_genes: np.ndarray | None = None
    step_errors: int = 0


def _evaluate(spec, genes, locopt, settings):
    """Fitness (and possibly moved genes) of a fresh child."""
    if locopt:
        res = minimize_spec(spec, genes, settings)
        return res.x, res.value
    return genes, spec.value(genes)


def initialize_pool(
    spec, cfg, locopt=False, seed=0, niching=None, locopt_settings=None, rng=None
):
    """Fill a pool with uniform-random (optionally optimized) genomes."""
    if rng is None:
        rng = np.random.default_rng(seed)
    grid = NichingGrid(niching, spec.bounds) if niching is not None else None
    pool = Pool(cfg, grid)
    attempts = 0
    max_attempts = 100 * cfg.pool_size
    while len(pool) < cfg.pool_size:
        if attempts >= max_attempts:
            raise InitializationError(
                f"could not fill pool of {cfg.pool_size} within "
                f"{max_attempts} draws (diversity/niche rules too tight)"
            )
        attempts += 1
        genes = spec.sample_uniform(rng)
        genes, fitness = _evaluate(spec, genes, locopt, locopt_settings)
        if not math.isfinite(fitness):
            continue
        pool.try_fill(Genome(genes, fitness))
    return pool


def select_parents(pool, cfg, rng):
    """Mother uniform; father rank-biased toward the fittest."""
    n = len(pool.members)
    mother = pool.members[int(rng.integers(n))]
    g = rng.standard_normal()
    rank = int(abs(g) * cfg.father_rank_shape * n)
    if rank > n - 1:
        rank = n - 1
    return mother, pool.members[rank]


def germany_cut_index(length, cfg, rng):
    g = rng.standard_normal()
    cut = round(length / 2 + g * cfg.germany_cut_shape * length)
    return min(max(cut, 0), length - 1)


def crossover(mother, father, kind, cfg, rng):
    """Produce two children; returns a pair of gene arrays."""
    a = mother.genes
    b = father.genes
    length = a.size
    if b.size != length:
        raise ValueError("parents must have equal gene lengths")
    if kind.kind == "holland":
        return a.copy(), b.copy()
    if kind.kind == "germany":
        cut = germany_cut_index(length, cfg, rng)
        if cut == 0:
            # partial non-crossing: child1 is a full father copy
            return b.copy(), a.copy()
        cuts = [cut]
    else:
        if kind.cuts > length - 1:
            raise ValueError(
                f"cannot place {kind.cuts} distinct cuts in a genome of length {length}"
            )
        cuts = sorted(int(c) + 1 for c in rng.choice(length - 1, kind.cuts, replace=False))
    child1 = a.copy()
    child2 = b.copy()
    take_father = False
    prev = 0
    for cut in cuts + [length]:
        if take_father:
            child1[prev:cut] = b[prev:cut]
            child2[prev:cut] = a[prev:cut]
        take_father = not take_father
        prev = cut
    return child1, child2


def mutate(genes, spec, cfg, rng):
    """One-point mutation with probability mutation_probability."""
    if rng.uniform() < cfg.mutation_probability:
        idx = int(rng.integers(genes.size))
        genes[idx] = rng.uniform(spec.bounds.lower, spec.bounds.upper)
    return genes


def global_step(pool, spec, kind, cfg, locopt=False, rng=None, locopt_settings=None):
    """One mating + crossover + mutation (+ locopt) + insertion cycle."""
    mother, father = select_parents(pool, cfg, rng)
    child1, child2 = crossover(mother, father, kind, cfg, rng)
    mutate(child1, spec, cfg, rng)
    mutate(child2, spec, cfg, rng)
    try:
        child1, f1 = _evaluate(spec, child1, locopt, locopt_settings)
        child2, f2 = _evaluate(spec, child2, locopt, locopt_settings)
    except Exception:
        return StepOutcome(False, pool.best.fitness, error=True)
    if not (math.isfinite(f1) and math.isfinite(f2)):
        return StepOutcome(False, pool.best.fitness, error=True)
    # only the fitter child is offered to the pool; child1 wins ties
    if f2 < f1:
        winner = Genome(child2, f2)
    else:
        winner = Genome(child1, f1)
    accepted = pool.offer(winner)
    return StepOutcome(accepted, pool.best.fitness)


def run(
    spec,
    kind,
    cfg,
    locopt=False,
    niching=None,
    seed=0,
    locopt_settings=None,
    audit_every=0,
):
    """Full GA run until the target is reached or max_steps expire."""
    if isinstance(kind, str):
        kind = CrossoverKind.parse(kind)
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    pool = initialize_pool(
        spec, cfg, locopt=locopt, niching=niching, locopt_settings=locopt_settings,
        rng=rng,
    )
    target = spec.target_value + cfg.termination_epsilon
    steps = 0
    errors = 0
    best = pool.best.fitness
    while best > target and steps < cfg.max_steps:
        outcome = global_step(
            pool, spec, kind, cfg, locopt=locopt, rng=rng,
            locopt_settings=locopt_settings,
        )
        steps += 1
        errors += outcome.error
        best = outcome.best_fitness
        if audit_every and steps % audit_every == 0:
            pool.audit()
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return RunRecord(
        function=spec.name,
        dim=spec.dim,
        algorithm=kind.label,
        locopt=locopt,
        niching=niching.cells_per_dim if niching else 0,
        mnic=niching.mnic if niching else 0,
        seed=seed,
        steps=steps,
        success=best <= target,
        best_value=best,
        wall_ms=wall_ms,
        best_genes=pool.best.genes.copy(),
        step_errors=errors,
    )
