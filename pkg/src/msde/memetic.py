"""Golden-section memetic step for DE.

Once per generation a golden-section search picks a scalar ``f_j`` by
searching along a random difference vector through the current best
individual. The winning coefficient is then added to ``F`` for every
mutation of that generation:

    v = x_r1 + (F + f_j) * (x_r2 - x_r3)

Each search iteration evaluates both interior points afresh, so it costs two
objective evaluations, all charged to the run's budget. A trial that beats
the best individual replaces it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import (
    ConfigurationError,
    DEConfig,
    Population,
    RunResult,
    Strategy,
    _difference_step,
    clamp_to_bounds,
    optimize,
    sample_distinct_indices,
)


# "best":   x_best + c * d, a line search through the best, so c = 0
#           reproduces the best individual (default).
# "mutant": x_best + (F + c) * d, the modified mutation anchored on the best.
#           Its minimiser is often c = -F (the best itself), which zeroes the
#           generation's step size and can stall the population.
# "random": x_r1 + (F + c) * d, the modified mutation as applied to the
#           population, with a random non-best base.
SEARCH_LINES = ("best", "mutant", "random")


@dataclass(frozen=True)
class MemeticConfig:
    interval: tuple[float, float] = (-1.2, 1.2)
    golden_ratio: float = 0.618
    width_tolerance: float = 1e-3
    max_gss_iterations: int = 20
    search_line: str = "best"

    def __post_init__(self):
        if self.search_line not in SEARCH_LINES:
            raise ConfigurationError(
                f"search_line must be one of {', '.join(SEARCH_LINES)}")
        a, b = self.interval
        object.__setattr__(self, "interval", (float(a), float(b)))
        if not a < b:
            raise ConfigurationError("GSS interval must satisfy low < high")
        if not 0.0 < self.golden_ratio < 1.0:
            raise ConfigurationError("golden ratio must lie in (0, 1)")
        if self.width_tolerance <= 0:
            raise ConfigurationError("width tolerance must be positive")
        if self.max_gss_iterations < 0:
            raise ConfigurationError("max_gss_iterations must be non-negative")

    @property
    def midpoint(self) -> float:
        a, b = self.interval
        return 0.5 * (a + b)

    @property
    def disabled(self) -> bool:
        a, b = self.interval
        return self.max_gss_iterations == 0 or b - a <= self.width_tolerance


def gss_minimize(phi: Callable, config: MemeticConfig, counter=None,
                 trace: Optional[list] = None, pairwise: bool = False) -> tuple[float, float]:
    """Minimise a scalar function over ``config.interval``.

    Returns the better interior point of the last completed iteration and its
    value. When no iteration runs, returns the interval midpoint and NaN.
    ``counter`` is only consulted (``counter.halted``) to stop early; charging
    evaluations is up to ``phi``. ``trace`` receives ``(a, b)`` after every
    iteration.

    With ``pairwise`` both interior points go to ``phi`` as one length-2
    array; ``phi`` may return just the first value if the budget stops it
    there.
    """
    a, b = config.interval
    psi = config.golden_ratio
    c_best, v_best = 0.5 * (a + b), math.nan

    def halted():
        return counter is not None and counter.halted

    for _ in range(config.max_gss_iterations):
        if b - a <= config.width_tolerance or halted():
            break
        f1 = b - (b - a) * psi
        f2 = a + (b - a) * psi
        if pairwise:
            values = phi(np.array([f1, f2]))
            v1 = float(values[0])
            v2 = float(values[1]) if len(values) > 1 else None
        else:
            v1 = phi(f1)
            v2 = None if halted() else phi(f2)
        if v2 is None:
            c_best, v_best = f1, v1
            break
        if v1 < v2:
            b = f2
            c_best, v_best = f1, v1
        else:
            a = f1
            c_best, v_best = f2, v2
        if trace is not None:
            trace.append((a, b))
    return c_best, v_best


def compute_fj(population: Population, problem, F: float, mem: MemeticConfig,
               rng: np.random.Generator, state) -> float:
    """Golden-section search for this generation's ``f_j``.

    The search line is ``x_best + c * (x_r2 - x_r3)`` with one random
    difference pair (excluding the best) held fixed; see ``SEARCH_LINES`` for
    the alternatives. A trial that improves on the best individual replaces
    it. Nothing is drawn or evaluated when the search is disabled or
    the run has already halted.
    """
    if mem.disabled or state.halted:
        return mem.midpoint
    best = population.best_index
    X = population.vectors
    i2, i3, i1 = sample_distinct_indices(len(population), best, rng)
    base = (X[i1] if mem.search_line == "random" else X[best]).copy()
    diff_a, diff_b = X[i2].copy(), X[i3].copy()
    offset = 0.0 if mem.search_line == "best" else F
    found = {"x": None, "f": math.inf}

    def phi(cs):
        trials = _difference_step(base, diff_a, diff_b, (offset + cs)[:, None])
        trials = np.clip(trials, problem.lower, problem.upper)
        values = state.evaluate_batch(trials)
        k = int(np.argmin(values))
        if values[k] < found["f"]:
            found["x"], found["f"] = trials[k].copy(), float(values[k])
        return values

    c_best, _ = gss_minimize(phi, mem, state, pairwise=True)
    if found["x"] is not None and found["f"] < population.objectives[best]:
        X[best] = found["x"]
        population.objectives[best] = found["f"]
    return c_best


def mutate_msde(population: Population, target: int, F: float, f_j: float,
                rng: np.random.Generator, problem=None, indices=None) -> np.ndarray:
    if indices is None:
        indices = sample_distinct_indices(len(population), target, rng)
    i1, i2, i3 = indices
    X = population.vectors
    v = _difference_step(X[i1], X[i2], X[i3], F + f_j)
    return clamp_to_bounds(v, problem) if problem is not None else v


def run_msde(problem, config: DEConfig, mem: Optional[MemeticConfig] = None,
             rng: Optional[np.random.Generator] = None) -> RunResult:
    if config.strategy is not Strategy.MSDE:
        raise ConfigurationError("run_msde expects strategy MSDE")
    return optimize(problem, config, rng, memetic=mem or MemeticConfig())


def run(problem, config: DEConfig, mem: Optional[MemeticConfig] = None,
        rng: Optional[np.random.Generator] = None) -> RunResult:
    """Dispatch on ``config.strategy``."""
    if config.strategy is Strategy.MSDE:
        return run_msde(problem, config, mem, rng)
    return optimize(problem, config, rng)
