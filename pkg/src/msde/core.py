"""DE/rand/1/bin engine.

Populations are stored as an ``(NP, D)`` array plus an ``(NP,)`` objective
vector. One generation draws all index triples and crossover masks up front
from the parent population (synchronous generations), then charges offspring
evaluations one at a time so the run can stop at the exact evaluation where
the acceptable error is reached or the budget runs out.

Random streams are :class:`numpy.random.Generator` instances (PCG64). Per
generation the draw order is: index triples, crossover uniforms, forced
crossover indices.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class Strategy(str, enum.Enum):
    DE = "DE"
    MSDE = "MSDE"

    @classmethod
    def parse(cls, value) -> "Strategy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown algorithm {value!r}; expected DE or MSDE") from None


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class DEConfig:
    """Control parameters of one optimization run.

    ``limit`` mirrors the ABC-style ``D*NP/2`` setting of the reference
    experiments. It is carried for completeness and not used by DE or MSDE.
    ``vectorized`` only changes how offspring are handed to the objective
    (one batch per generation versus one call per offspring); results are
    identical either way.
    """

    np: int = 50
    scale_factor: float = 0.5
    crossover_rate: float = 0.9
    max_evals: int = 200_000
    seed: Optional[int] = None
    strategy: Strategy = Strategy.DE
    limit: Optional[int] = None
    vectorized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy.parse(self.strategy))
        if self.np < 4:
            raise ConfigurationError("population size must be at least 4")
        if not 0.0 <= self.scale_factor <= 1.0:
            raise ConfigurationError("scale factor must lie in [0, 1]")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigurationError("crossover rate must lie in [0, 1]")
        if self.max_evals < 1:
            raise ConfigurationError("max_evals must be positive")

    def make_rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass
class EvalCounter:
    limit: int
    count: int = 0

    @property
    def remaining(self) -> int:
        return self.limit - self.count

    @property
    def halted(self) -> bool:
        return self.count >= self.limit

    def charge(self, n: int = 1) -> None:
        if self.count + n > self.limit:
            raise RuntimeError("evaluation budget exceeded")
        self.count += n


@dataclass
class Individual:
    vector: np.ndarray
    objective: float = math.inf
    evaluated: bool = False


@dataclass
class Population:
    vectors: np.ndarray
    objectives: np.ndarray
    generation: int = 0

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def __getitem__(self, i: int) -> Individual:
        f = float(self.objectives[i])
        return Individual(self.vectors[i].copy(), f, not math.isinf(f))

    @property
    def members(self) -> list[Individual]:
        return [self[i] for i in range(len(self))]

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.objectives))


@dataclass
class RunResult:
    best_vector: np.ndarray
    best_objective: float
    error: float
    evals_used: int
    success: bool
    generations: int
    history: list = field(default_factory=list, repr=False)


class RunState:
    """Evaluation bookkeeping shared by the DE loop and the memetic phase.

    Every objective call goes through here: it is charged to the counter,
    folded into the best-so-far, and checked against the acceptable error.
    """

    def __init__(self, problem, max_evals: int, vectorized: bool = True):
        self.problem = problem
        self.counter = EvalCounter(max_evals)
        self.vectorized = vectorized
        self.best_vector: Optional[np.ndarray] = None
        self.best_objective = math.inf
        self.success = False

    @property
    def halted(self) -> bool:
        return self.success or self.counter.halted

    @property
    def error(self) -> float:
        return abs(self.best_objective - self.problem.optimum_value)

    def _check(self) -> None:
        self.success = self.error <= self.problem.acceptable_error

    def _objective(self, X: np.ndarray) -> np.ndarray:
        values = self.problem.evaluate_batch(X)
        nan = np.isnan(values)
        if nan.any():
            values = np.where(nan, math.inf, values)
        return values

    def evaluate(self, x: np.ndarray) -> float:
        if self.counter.halted:
            raise RuntimeError("evaluation budget exhausted")
        return float(self.evaluate_batch(np.asarray(x, dtype=float)[None, :])[0])

    def evaluate_batch(self, X: np.ndarray, check_each: bool = True) -> np.ndarray:
        """Evaluate rows of ``X`` in order, stopping as soon as the run halts.

        Returns the objective values of the rows that were charged, which may
        be a prefix of ``X``. With ``check_each`` false the success test is
        deferred to the end of the batch (population initialisation).
        """
        n = min(len(X), self.counter.remaining)
        if n <= 0:
            return np.empty(0)
        if self.vectorized:
            values = self._objective(X[:n])
        else:
            values = np.empty(n)
        opt = self.problem.optimum_value
        tol = self.problem.acceptable_error
        best, k_best, m = self.best_objective, -1, n
        for k in range(n):
            if not self.vectorized:
                values[k] = self._objective(X[k:k + 1])[0]
            f = values[k]
            if f < best:
                best, k_best = f, k
                if check_each and abs(best - opt) <= tol:
                    m = k + 1
                    break
        self.counter.charge(m)
        if k_best >= 0:
            self.best_objective = float(best)
            self.best_vector = X[k_best].copy()
        self._check()
        return values[:m]

    def result(self, generations: int, history=None) -> RunResult:
        return RunResult(
            best_vector=self.best_vector,
            best_objective=self.best_objective,
            error=self.error,
            evals_used=self.counter.count,
            success=self.success,
            generations=generations,
            history=list(history or []),
        )


def clamp_to_bounds(vector: np.ndarray, problem) -> np.ndarray:
    return np.clip(vector, problem.lower, problem.upper)


def init_population(problem, config: DEConfig, rng: np.random.Generator,
                    state: RunState) -> Population:
    """Uniform random population, evaluated as one block.

    If the budget is smaller than NP only the affordable prefix is evaluated;
    the rest keep an infinite objective and the run halts.
    """
    low, high = problem.lower, problem.upper
    X = low + rng.random((config.np, problem.dimension)) * (high - low)
    X = np.clip(X, low, high)
    f = np.full(config.np, math.inf)
    values = state.evaluate_batch(X, check_each=False)
    f[: len(values)] = values
    return Population(X, f, 0)


def sample_distinct_indices(population_size: int, exclude: int,
                            rng: np.random.Generator) -> tuple[int, int, int]:
    if population_size < 4:
        raise ConfigurationError("need at least 4 individuals to draw 3 distinct partners")
    picks = rng.choice(population_size - 1, size=3, replace=False)
    picks = picks + (picks >= exclude)
    return int(picks[0]), int(picks[1]), int(picks[2])


def sample_index_triples(population_size: int, rng: np.random.Generator) -> np.ndarray:
    """One triple per target, row ``i`` excluding ``i``; shape ``(NP, 3)``.

    Sorting i.i.d. uniform keys gives a uniformly random ordering, so the
    first three columns are a uniform draw without replacement.
    """
    if population_size < 4:
        raise ConfigurationError("need at least 4 individuals to draw 3 distinct partners")
    keys = rng.random((population_size, population_size))
    np.fill_diagonal(keys, np.inf)
    return np.argsort(keys, axis=1)[:, :3]


def _difference_step(base, a, b, coefficient):
    return base + coefficient * (a - b)


def mutate_rand_1(population: Population, target: int, F: float,
                  rng: np.random.Generator, problem=None,
                  indices: Optional[Sequence[int]] = None) -> np.ndarray:
    if indices is None:
        indices = sample_distinct_indices(len(population), target, rng)
    i1, i2, i3 = indices
    X = population.vectors
    v = _difference_step(X[i1], X[i2], X[i3], F)
    return clamp_to_bounds(v, problem) if problem is not None else v


def crossover_binomial(parent: np.ndarray, trial: np.ndarray, CR: float,
                       rng: np.random.Generator) -> np.ndarray:
    parent = np.asarray(parent, dtype=float)
    trial = np.asarray(trial, dtype=float)
    if parent.shape != trial.shape:
        raise ValueError("parent and trial vectors differ in dimension")
    return _crossover_rows(parent[None, :], trial[None, :], CR, rng)[0]


def _crossover_rows(parents, trials, CR, rng):
    n, d = parents.shape
    mask = rng.random((n, d)) < CR
    mask[np.arange(n), rng.integers(d, size=n)] = True
    return np.where(mask, trials, parents)


def select_greedy(parent: Individual, offspring: Individual) -> Individual:
    # Minimisation; ties go to the offspring.
    return offspring if offspring.objective <= parent.objective else parent


def evolve_generation(population: Population, problem, coefficient: float,
                      CR: float, rng: np.random.Generator, state: RunState) -> None:
    """Mutation, crossover and greedy selection for every member, in place.

    ``coefficient`` multiplies the difference vector: ``F`` for DE,
    ``F + f_j`` for MSDE.
    """
    X = population.vectors
    idx = sample_index_triples(len(population), rng)
    mutants = _difference_step(X[idx[:, 0]], X[idx[:, 1]], X[idx[:, 2]], coefficient)
    mutants = np.clip(mutants, problem.lower, problem.upper)
    offspring = _crossover_rows(X, mutants, CR, rng)
    values = state.evaluate_batch(offspring)
    m = len(values)
    better = values <= population.objectives[:m]
    rows = np.flatnonzero(better)
    X[rows] = offspring[rows]
    population.objectives[rows] = values[rows]
    population.generation += 1


def optimize(problem, config: DEConfig, rng: Optional[np.random.Generator] = None,
             memetic=None) -> RunResult:
    """Run DE, or MSDE when a memetic config is given, until success or budget."""
    from .memetic import compute_fj

    if rng is None:
        rng = config.make_rng()
    state = RunState(problem, config.max_evals, vectorized=config.vectorized)
    pop = init_population(problem, config, rng, state)
    history = [state.best_objective]
    F = config.scale_factor
    while not state.halted:
        coefficient = F
        if memetic is not None:
            f_j = compute_fj(pop, problem, F, memetic, rng, state)
            if state.halted:
                history.append(state.best_objective)
                break
            coefficient = F + f_j
        evolve_generation(pop, problem, coefficient, config.crossover_rate, rng, state)
        history.append(state.best_objective)
    return state.result(pop.generation, history)


def run_de(problem, config: DEConfig, rng: Optional[np.random.Generator] = None) -> RunResult:
    if config.strategy is not Strategy.DE:
        raise ConfigurationError("run_de expects strategy DE")
    return optimize(problem, config, rng)
