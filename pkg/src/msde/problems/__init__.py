"""Benchmark catalog: eight closed-form test functions and three applied problems.

========  ======================  ==========================  ======  ===  ========
key       problem                 range                       opt     D    accept
========  ======================  ==========================  ======  ===  ========
f1        step                    [-100, 100]                 0       30   1e-5
f2        Colville                [-10, 10]                   0       4    1e-5
f3        Kowalik                 [-5, 5]                     3.07e-4 4    1e-5
f4        shifted Rosenbrock      [-100, 100]                 390     10   1e-1
f5        six-hump camel back     [-5, 5]                     -1.0316 2    1e-5
f6        Hosaki                  [0, 5] x [0, 6]             -2.3458 2    1e-6
f7        Meyer-Roth              [-10, 10]                   0.4e-4  3    1e-3
f8        Shubert                 [-10, 10]                   -186.73 2    1e-5
f9        pressure vessel         see PRESSURE_VESSEL_BOUNDS  7197.73 4    1e-5
f10       Lennard-Jones, 5 atoms  [-2, 2]                     -9.1039 15   1e-4
f11       FM sound wave           [-6.4, 6.35]                0       6    1e-5
========  ======================  ==========================  ======  ===  ========
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import functions as fn
from .data import rosenbrock_shift


@dataclass(frozen=True)
class ConstraintSet:
    """Inequality constraints ``g(x) <= 0`` handled by a static quadratic penalty."""

    constraints: Callable[[np.ndarray], np.ndarray]
    penalty_coefficient: float = 1e10

    def violation(self, X: np.ndarray) -> np.ndarray:
        g = self.constraints(X)
        return np.sum(np.maximum(0.0, g) ** 2, axis=1)

    def penalize(self, raw: np.ndarray, X: np.ndarray) -> np.ndarray:
        v = self.violation(X)
        return np.where(v > 0.0, raw + self.penalty_coefficient * v, raw)


@dataclass(frozen=True)
class Problem:
    name: str
    dimension: int
    lower: np.ndarray
    upper: np.ndarray
    function: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    optimum_value: float
    acceptable_error: float
    optimum_point: Optional[np.ndarray] = None
    constraints: Optional[ConstraintSet] = None
    title: str = ""
    reported_optimum: Optional[float] = None

    def __post_init__(self):
        if self.reported_optimum is None:
            object.__setattr__(self, "reported_optimum", self.optimum_value)
        lower = np.broadcast_to(np.asarray(self.lower, dtype=float), (self.dimension,)).copy()
        upper = np.broadcast_to(np.asarray(self.upper, dtype=float), (self.dimension,)).copy()
        if np.any(lower > upper):
            raise ValueError(f"{self.name}: lower bound above upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.optimum_point is not None:
            pt = np.asarray(self.optimum_point, dtype=float)
            pt.setflags(write=False)
            object.__setattr__(self, "optimum_point", pt)

    @property
    def bounds(self) -> list[tuple[float, float]]:
        return list(zip(self.lower.tolist(), self.upper.tolist()))

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dimension:
            raise ValueError(
                f"{self.name}: expected shape (n, {self.dimension}), got {X.shape}")
        values = self.function(X)
        if self.constraints is not None:
            values = self.constraints.penalize(values, X)
        return values

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise ValueError(f"{self.name}: expected a single vector")
        return float(self.evaluate_batch(x[None, :])[0])


PRESSURE_VESSEL_BOUNDS = ((1.125, 12.5), (0.625, 12.5), (1e-8, 240.0), (1e-8, 240.0))

# Feasible minimiser with the thicknesses at their lower bounds: x3 sits on
# g1 = 0 and x4 on g3 = 0.
_PV_X3 = 1.125 / 0.0193
_PV_X4 = 750.0 * 1728.0 / (np.pi * _PV_X3**2) - 4.0 / 3.0 * _PV_X3

# Standard 5-atom cluster minimum (trigonal bipyramid), pair energy in units
# where the pair well depth is 1.
LJ5_MINIMUM = -9.103852415708


def lennard_jones_problem(n_atoms: int = 5, name: str = "f10", table_optima: bool = False) -> Problem:
    reported = -9.10 if n_atoms == 5 else None
    optimum = LJ5_MINIMUM if n_atoms == 5 else float("nan")
    return Problem(
        name=name,
        dimension=3 * n_atoms,
        lower=-2.0,
        upper=2.0,
        function=fn.lennard_jones,
        optimum_value=reported if table_optima and reported is not None else optimum,
        reported_optimum=reported,
        acceptable_error=1e-4,
        title=f"Lennard-Jones cluster ({n_atoms} atoms)",
    )


# Full-precision minima used as the error reference. The tabulated optima are
# rounded to fewer digits than some acceptable errors resolve (f6: -2.3458
# against 1e-6), which would put the true minimum outside the success band.
# f9's value is the minimum of the penalised objective, which sits slightly
# below the feasible optimum because the quadratic penalty is finite.
REFINED_OPTIMA = {
    "f3": 3.074859878056058e-04,
    "f5": -1.0316284534898774,
    "f6": -2.345811576101306,
    "f7": 4.355266194190142e-05,
    "f8": -186.73090883102392,
    "f9": 7197.728676511186,
}


def _build(table_optima: bool = False) -> dict[str, Problem]:
    shift = rosenbrock_shift()

    def P(name, dim, low, high, f, reported, tol, point, **kw):
        opt = reported if table_optima else REFINED_OPTIMA.get(name, reported)
        return Problem(name, dim, low, high, f, opt, tol, optimum_point=point,
                       reported_optimum=reported, **kw)

    problems = [
        P("f1", 30, -100.0, 100.0, fn.step, 0.0, 1e-5, np.zeros(30), title="Step"),
        P("f2", 4, -10.0, 10.0, fn.colville, 0.0, 1e-5, np.ones(4), title="Colville"),
        P("f3", 4, -5.0, 5.0, fn.kowalik, 3.07e-4, 1e-5,
          [0.1928, 0.1908, 0.1231, 0.1357], title="Kowalik"),
        P("f4", 10, -100.0, 100.0, fn.make_shifted_rosenbrock(shift), 390.0, 1e-1,
          shift, title="Shifted Rosenbrock"),
        P("f5", 2, -5.0, 5.0, fn.six_hump_camel, -1.0316, 1e-5,
          [-0.0898, 0.7126], title="Six-hump camel back"),
        P("f6", 2, [0.0, 0.0], [5.0, 6.0], fn.hosaki, -2.3458, 1e-6,
          [4.0, 2.0], title="Hosaki"),
        P("f7", 3, -10.0, 10.0, fn.meyer_roth, 0.4e-4, 1e-3,
          [3.13, 15.16, 0.78], title="Meyer and Roth"),
        P("f8", 2, -10.0, 10.0, fn.shubert, -186.7309, 1e-5,
          [-7.0835, 4.8580], title="Shubert"),
        P("f9", 4, [b[0] for b in PRESSURE_VESSEL_BOUNDS],
          [b[1] for b in PRESSURE_VESSEL_BOUNDS], fn.pressure_vessel_cost,
          7197.729, 1e-5, [1.125, 0.625, _PV_X3, _PV_X4],
          constraints=ConstraintSet(fn.pressure_vessel_constraints, 1e10),
          title="Pressure vessel design"),
        lennard_jones_problem(5, "f10", table_optima),
        P("f11", 6, -6.4, 6.35, fn.fm_sound_wave, 0.0, 1e-5, fn.FM_TARGET,
          title="FM sound wave"),
    ]
    return {p.name: p for p in problems}


@functools.lru_cache(maxsize=None)
def _catalog(table_optima: bool = False) -> dict[str, Problem]:
    return _build(table_optima)


def catalog(table_optima: bool = False) -> list[Problem]:
    """All eleven problems in order f1..f11.

    With ``table_optima`` the success reference is the rounded tabulated
    optimum instead of the full-precision minimum.
    """
    return list(_catalog(table_optima).values())


def names() -> list[str]:
    return list(_catalog())


def get(name: str, table_optima: bool = False) -> Problem:
    try:
        return _catalog(table_optima)[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {', '.join(_catalog())}") from None


CLOSED_FORM = ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8")


def eval_closed_form(name: str, x: Sequence[float]) -> float:
    if name not in CLOSED_FORM:
        raise KeyError(f"{name!r} is not one of the closed-form benchmarks")
    return get(name)(x)


def eval_pressure_vessel(x: Sequence[float]) -> float:
    return get("f9")(x)


def eval_lennard_jones(x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a single configuration vector")
    return float(fn.lennard_jones(x[None, :])[0])


def eval_fm_wave(x: Sequence[float]) -> float:
    return get("f11")(x)


def verify_optima(tolerance: float = 1e-3) -> dict[str, float]:
    """``|f(optimum_point) - optimum_value|`` per problem; raises if any exceeds ``tolerance``."""
    gaps = {}
    for p in catalog():
        if p.optimum_point is None:
            continue
        gaps[p.name] = abs(p(p.optimum_point) - p.reported_optimum)
    bad = {k: v for k, v in gaps.items() if v > tolerance}
    if bad:
        raise AssertionError(f"optimum mismatch: {bad}")
    return gaps
