"""Repeated-run experiments, summary statistics, CR sweeps and sign tables.

Each (problem, algorithm, run) triple gets its own seed derived from the
master seed, so statistics do not depend on execution order or on how runs
are spread over worker processes.
"""
from __future__ import annotations

import csv
import io
import math
import os
import tempfile
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import problems as catalog_mod
from .core import DEConfig, RunResult, Strategy
from .memetic import MemeticConfig, run

FLOAT_FORMAT = "{:.10e}"


@dataclass(frozen=True)
class ExperimentSpec:
    problems: tuple = tuple(catalog_mod.names())
    algorithms: tuple = (Strategy.DE, Strategy.MSDE)
    runs: int = 100
    base_config: DEConfig = DEConfig()
    memetic: MemeticConfig = MemeticConfig()
    master_seed: int = 12345
    table_optima: bool = False

    def __post_init__(self):
        object.__setattr__(self, "problems", tuple(self.problems))
        object.__setattr__(self, "algorithms",
                           tuple(Strategy.parse(a) for a in self.algorithms))
        if self.runs < 1:
            raise ValueError("runs must be positive")
        if not self.problems:
            raise ValueError("no problems selected")
        if not self.algorithms:
            raise ValueError("no algorithms selected")
        known = set(catalog_mod.names())
        unknown = [p for p in self.problems if p not in known]
        if unknown:
            raise ValueError(f"unknown problems: {', '.join(unknown)}")

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentSpec":
        """Build from plain config-file data (keys mirror the field names)."""
        data = dict(data)
        base = data.pop("base_config", {}) or {}
        mem = data.pop("memetic", {}) or {}
        if "interval" in mem:
            mem["interval"] = tuple(mem["interval"])
        kwargs = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        extra = set(data) - set(kwargs)
        if extra:
            raise ValueError(f"unknown config keys: {', '.join(sorted(extra))}")
        return cls(base_config=DEConfig(**base), memetic=MemeticConfig(**mem), **kwargs)


def run_seed(master_seed: int, problem: str, algorithm: Strategy, run_index: int) -> np.random.SeedSequence:
    algo = 0 if Strategy.parse(algorithm) is Strategy.DE else 1
    return np.random.SeedSequence(
        entropy=master_seed, spawn_key=(zlib.crc32(problem.encode()), algo, run_index))


@dataclass(frozen=True)
class AggregateStats:
    mfv: float
    sd: float
    me: float
    afe: float
    sr: int
    runs: int


def _mean(values: Sequence[float]) -> float:
    # Left-to-right accumulation keeps results independent of numpy's
    # pairwise summation.
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def aggregate(results: Sequence[RunResult], problem=None) -> AggregateStats:
    """MFV, population SD, ME, AFE and success count over ``results``.

    ``problem`` is accepted for symmetry with the run API; each result
    already carries its error and success flag.
    """
    if not results:
        raise ValueError("cannot aggregate an empty result set")
    best = [float(r.best_objective) for r in results]
    mfv = _mean(best)
    sd = math.sqrt(_mean([(b - mfv) ** 2 for b in best]))
    return AggregateStats(
        mfv=mfv,
        sd=sd,
        me=_mean([float(r.error) for r in results]),
        afe=_mean([float(r.evals_used) for r in results]),
        sr=sum(1 for r in results if r.success),
        runs=len(results),
    )


@dataclass
class Cell:
    problem: str
    algorithm: Strategy
    stats: AggregateStats
    results: list = field(default_factory=list, repr=False)


class ExperimentTable:
    """Statistics per (problem, algorithm), in experiment order."""

    header = ("problem", "algorithm", "MFV", "SD", "ME", "AFE", "SR", "runs")

    def __init__(self, cells: Iterable[Cell] = ()):
        self.cells = list(cells)

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    def __getitem__(self, key) -> AggregateStats:
        problem, algorithm = key
        algorithm = Strategy.parse(algorithm)
        for c in self.cells:
            if c.problem == problem and c.algorithm is algorithm:
                return c.stats
        raise KeyError(key)

    def problems(self) -> list[str]:
        return list(dict.fromkeys(c.problem for c in self.cells))

    def csv_rows(self):
        for c in self.cells:
            s = c.stats
            yield (c.problem, c.algorithm.value, *(FLOAT_FORMAT.format(v) for v in (s.mfv, s.sd, s.me, s.afe)),
                   str(s.sr), str(s.runs))

    @classmethod
    def from_csv(cls, source) -> "ExperimentTable":
        cells = []
        for row in _read_csv(source, cls.header):
            stats = AggregateStats(
                mfv=float(row["MFV"]), sd=float(row["SD"]), me=float(row["ME"]),
                afe=float(row["AFE"]), sr=int(row["SR"]), runs=int(row["runs"]))
            cells.append(Cell(row["problem"], Strategy.parse(row["algorithm"]), stats))
        return cls(cells)

    def merge(self, other: "ExperimentTable") -> "ExperimentTable":
        return ExperimentTable(self.cells + other.cells)


def _one_run(args):
    problem_name, algorithm, run_index, spec = args
    problem = catalog_mod.get(problem_name, spec.table_optima)
    seed = run_seed(spec.master_seed, problem_name, algorithm, run_index)
    config = replace(spec.base_config, strategy=algorithm, seed=None)
    return run(problem, config, spec.memetic, np.random.default_rng(seed))


def run_cell(spec: ExperimentSpec, problem: str, algorithm, workers: int = 1) -> Cell:
    algorithm = Strategy.parse(algorithm)
    jobs = [(problem, algorithm, i, spec) for i in range(spec.runs)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_one_run, jobs))
    else:
        results = [_one_run(j) for j in jobs]
    return Cell(problem, algorithm, aggregate(results), results)


def run_experiment(spec: ExperimentSpec, workers: int = 1, keep_results: bool = False,
                   progress=None) -> ExperimentTable:
    cells = []
    for problem in spec.problems:
        for algorithm in spec.algorithms:
            cell = run_cell(spec, problem, algorithm, workers)
            if not keep_results:
                cell.results = []
            if progress is not None:
                progress(cell)
            cells.append(cell)
    return ExperimentTable(cells)


class SweepTable:
    """Mean AFE per crossover rate, one column per algorithm."""

    def __init__(self, cr_values, algorithms, afe, problems):
        self.cr_values = list(cr_values)
        self.algorithms = list(algorithms)
        self.afe = afe  # {algorithm: [afe per cr]}
        self.problems = list(problems)

    @property
    def header(self):
        if len(self.algorithms) == 1:
            return ("CR", "AFE")
        return ("CR", *(f"AFE_{a.value}" for a in self.algorithms))

    def __len__(self):
        return len(self.cr_values)

    def csv_rows(self):
        for k, cr in enumerate(self.cr_values):
            yield (FLOAT_FORMAT.format(cr),
                   *(FLOAT_FORMAT.format(self.afe[a][k]) for a in self.algorithms))


def cr_sweep(spec: ExperimentSpec, cr_values: Sequence[float], workers: int = 1,
             progress=None) -> SweepTable:
    """AFE averaged over the experiment's problems for each crossover rate."""
    cr_values = [float(c) for c in cr_values]
    if not cr_values:
        raise ValueError("cr_values must not be empty")
    bad = [c for c in cr_values if not 0.0 <= c <= 1.0]
    if bad:
        raise ValueError(f"crossover rates outside [0, 1]: {bad}")
    afe = {a: [] for a in spec.algorithms}
    for cr in cr_values:
        sub = replace(spec, base_config=replace(spec.base_config, crossover_rate=cr))
        table = run_experiment(sub, workers)
        for a in spec.algorithms:
            afe[a].append(_mean([table[p, a].afe for p in spec.problems]))
        if progress is not None:
            progress(cr)
    return SweepTable(cr_values, spec.algorithms, afe, spec.problems)


@dataclass(frozen=True)
class ComparisonRow:
    problem: str
    verdict: str


def verdict(msde: AggregateStats, de: AggregateStats) -> str:
    """'+' when MSDE wins lexicographically on (higher SR, lower AFE, lower ME)."""
    key_msde = (-msde.sr, msde.afe, msde.me)
    key_de = (-de.sr, de.afe, de.me)
    return "+" if key_msde < key_de else "-"


class ComparisonTable:
    header = ("problem", "verdict")

    def __init__(self, rows: Sequence[ComparisonRow]):
        self.rows = list(rows)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    @property
    def plus_count(self) -> int:
        return sum(1 for r in self.rows if r.verdict == "+")

    def csv_rows(self):
        for r in self.rows:
            yield (r.problem, r.verdict)
        yield ("total_plus", str(self.plus_count))


def compare_sign(table: ExperimentTable) -> ComparisonTable:
    rows = []
    for problem in table.problems():
        try:
            de = table[problem, Strategy.DE]
            msde = table[problem, Strategy.MSDE]
        except KeyError:
            raise ValueError(f"{problem}: both DE and MSDE results are required") from None
        rows.append(ComparisonRow(problem, verdict(msde, de)))
    return ComparisonTable(rows)


def emit_csv(table, destination) -> None:
    """Write ``table.header`` and ``table.csv_rows()`` as CSV.

    ``destination`` is a path or a text stream. Paths are written through a
    temporary file in the same directory and renamed into place, so a failed
    write never leaves a truncated file behind.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    writer.writerows(table.csv_rows())
    text = buf.getvalue()
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = os.fspath(destination)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_csv(source, expected_header):
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, newline="") as fh:
            text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != tuple(expected_header):
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return list(reader)


def spec_metadata(spec: ExperimentSpec) -> dict:
    """JSON-ready description of an experiment, written next to CSV outputs."""
    cfg = asdict(spec.base_config)
    cfg["strategy"] = None
    cfg.pop("seed")
    return {
        "problems": list(spec.problems),
        "algorithms": [a.value for a in spec.algorithms],
        "runs": spec.runs,
        "master_seed": spec.master_seed,
        "base_config": cfg,
        "memetic": asdict(spec.memetic),
        "optimum_reference": "table" if spec.table_optima else "refined",
        "sd": "population standard deviation (divide by runs)",
        "me": "mean |best - optimum| over all runs, failed runs included",
        "afe": "mean objective evaluations per run, memetic evaluations included",
        "sr": "number of successful runs",
        "seeding": "numpy SeedSequence(master_seed, spawn_key=(crc32(problem), algorithm, run))",
    }
