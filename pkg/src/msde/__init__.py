"""Differential evolution with a golden-section memetic step, plus a benchmark harness."""
from .core import (
    DEConfig,
    EvalCounter,
    Individual,
    Population,
    RunResult,
    Strategy,
    clamp_to_bounds,
    crossover_binomial,
    init_population,
    mutate_rand_1,
    run_de,
    sample_distinct_indices,
    select_greedy,
)
from .memetic import MemeticConfig, compute_fj, gss_minimize, mutate_msde, run, run_msde
from .problems import Problem, catalog, get

__all__ = [
    "DEConfig", "EvalCounter", "Individual", "Population", "RunResult", "Strategy",
    "clamp_to_bounds", "crossover_binomial", "init_population", "mutate_rand_1", "run_de",
    "sample_distinct_indices", "select_greedy",
    "MemeticConfig", "compute_fj", "gss_minimize", "mutate_msde", "run", "run_msde",
    "Problem", "catalog", "get",
]
__version__ = "0.1.0"
