"""Batch benchmark driver and report generation.

Runs the repeated-trial protocol for any (algorithm, function) pair, with
one derived random stream per trial so results do not depend on execution
order, aggregates cost and wall-time statistics, ranks algorithms per
function, and renders CSV / JSON / markdown reports plus plot-grid samples
of the 2-d (or sliced) function surfaces.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np

from .encoding import BitVector
from .local_search import DEFAULT_BUDGET, hill_climb, kls, kls1, kls2
from .objectives import OBJECTIVES, Objective, get_objective
from .rng import derive_stream
from .stochastic import GAParams, SAParams, genetic_algorithm, simulated_annealing

ALGORITHMS = ("hill", "kls", "kls1", "kls2", "sa", "ga")
FUNCTIONS = tuple(sorted(OBJECTIVES))
FORMATS = ("csv", "json", "md")

CSV_HEADER = "algo,func,cost_avg,cost_std,cost_min,cost_max,time_avg,time_std,trials"


@dataclass(frozen=True)
class RunConfig:
    algorithm: str
    objective: str
    trials: int = 50
    master_seed: int = 0
    budget: int = DEFAULT_BUDGET
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r} (known: {', '.join(ALGORITHMS)})")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r} (known: {', '.join(FUNCTIONS)})")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")


@dataclass(frozen=True)
class TrialStats:
    cost_avg: float
    cost_std: float
    cost_min: float
    cost_max: float
    time_avg: float
    time_std: float
    trials: int
    failures: int


@dataclass(frozen=True)
class RankTable:
    algorithms: tuple
    functions: tuple
    ranks: dict  # algo -> tuple of ranks aligned with `functions`
    arithmetic: dict  # algo -> mean rank
    geometric: dict  # algo -> geometric mean rank


def _sample_stats(values) -> tuple[float, float]:
    n = len(values)
    avg = sum(values) / n
    if n < 2:
        return avg, 0.0
    var = sum((v - avg) ** 2 for v in values) / (n - 1)
    return avg, math.sqrt(var)


def run_algorithm(algorithm: str, objective: Objective, rng, budget: int, params: dict):
    """Dispatch one run.

    `params` may carry overrides such as coding=gray, descent=first, or any
    SAParams / GAParams field; each algorithm consumes the keys it
    understands and ignores the rest, so one override set can drive a whole
    algorithm sweep (the CLI rejects keys nothing understands).
    """
    coding = str(params.get("coding", "binary"))
    if algorithm == "hill":
        return hill_climb(objective, objective.encoding(coding), rng, budget,
                          descent=str(params.get("descent", "steepest")))
    if algorithm == "kls":
        return kls(objective, objective.encoding(coding), rng, budget)
    if algorithm == "kls1":
        return kls1(objective, rng, budget)
    if algorithm == "kls2":
        return kls2(objective, rng, budget, coding)
    if algorithm == "sa":
        sa_params = _build_params(SAParams(budget=budget), params)
        return simulated_annealing(objective, objective.encoding(coding), rng, sa_params)
    if algorithm == "ga":
        ga_params = _build_params(GAParams(), params)
        return genetic_algorithm(objective, rng, ga_params, budget)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def known_param_keys() -> set:
    """Every override key some algorithm understands."""
    keys = {"coding", "descent"}
    keys.update(f.name for f in fields(SAParams))
    keys.update(f.name for f in fields(GAParams))
    return keys


def _build_params(defaults, overrides: dict):
    typed = {}
    for f in fields(defaults):
        if f.name in overrides:
            typed[f.name] = type(getattr(defaults, f.name))(overrides[f.name])
    return replace(defaults, **typed)


def run_trials(config: RunConfig) -> tuple[TrialStats, list[dict]]:
    """Run `trials` independent seeded runs and aggregate their statistics.

    Trial t draws every random number from derive_stream(master_seed, t).
    A trial that hits the evaluation budget keeps its best-so-far cost and
    is counted in `failures` rather than dropped.  The reported cost of a
    stochastic objective is one fresh noisy evaluation of the final
    solution, so its distance from zero measures solution quality.
    """
    objective = get_objective(config.objective)
    costs, times, records = [], [], []
    failures = 0
    for t in range(config.trials):
        rng = derive_stream(config.master_seed, t)
        t0 = time.perf_counter()
        result = run_algorithm(config.algorithm, objective, rng, config.budget, config.params)
        elapsed = time.perf_counter() - t0
        if objective.deterministic:
            cost = objective.fn(result.best_x)
        else:
            cost = objective.fn(result.best_x) + rng.gauss()
        if result.extras.get("terminated") == "budget":
            failures += 1
        costs.append(cost)
        times.append(elapsed)
        records.append(_trial_record(t, cost, elapsed, result))
    cost_avg, cost_std = _sample_stats(costs)
    time_avg, time_std = _sample_stats(times)
    stats = TrialStats(
        cost_avg, cost_std, min(costs), max(costs),
        time_avg, time_std, config.trials, failures,
    )
    return stats, records


def _trial_record(t: int, cost: float, elapsed: float, result) -> dict:
    record = {
        "trial": t,
        "cost": cost,
        "time": elapsed,
        "passes": result.passes,
        "evaluations": result.evaluations,
    }
    if isinstance(result.best_genotype, BitVector):
        record["genotype"] = result.best_genotype.to_hex()
    else:
        record["genotype"] = list(result.best_genotype)
    if "k_hist" in result.extras:
        record["k_hist"] = {str(k): v for k, v in result.extras["k_hist"].items()}
    return record


def quality(stats: TrialStats, objective: Objective) -> float:
    """Ranking key: average cost, except that stochastic objectives are
    judged by the distance of the average from the expected minimum."""
    if objective.deterministic:
        return stats.cost_avg
    return abs(stats.cost_avg - objective.known_min)


def rank_table(
    stats: dict,
    algorithms=ALGORITHMS,
    functions=FUNCTIONS,
) -> RankTable:
    """Rank algorithms per function by quality, ascending.

    Qualities are compared after rounding to two decimals (the reports'
    precision), tied algorithms share the best tied rank, and a missing
    (algorithm, function) cell gets the worst rank.
    """
    algorithms = tuple(algorithms)
    functions = tuple(functions)
    worst = len(algorithms)
    ranks = {a: [] for a in algorithms}
    for func in functions:
        objective = get_objective(func)
        q = {}
        for algo in algorithms:
            cell = stats.get((algo, func))
            if cell is not None:
                q[algo] = round(quality(cell, objective), 2)
        for algo in algorithms:
            if algo not in q:
                ranks[algo].append(worst)
            else:
                ranks[algo].append(1 + sum(1 for v in q.values() if v < q[algo]))
    return RankTable(
        algorithms=algorithms,
        functions=functions,
        ranks={a: tuple(r) for a, r in ranks.items()},
        arithmetic={a: arithmetic_mean_rank(r) for a, r in ranks.items()},
        geometric={a: geometric_mean_rank(r) for a, r in ranks.items()},
    )


def arithmetic_mean_rank(ranks) -> float:
    return sum(ranks) / len(ranks)


def geometric_mean_rank(ranks) -> float:
    return math.exp(sum(math.log(r) for r in ranks) / len(ranks))


def emit_report(
    stats: dict,
    format: str,
    records: Optional[dict] = None,
    master_seed: Optional[int] = None,
) -> str:
    """Render aggregated stats as csv, json, or markdown.

    `stats` maps (algorithm, function) to TrialStats.  CSV rows and the
    markdown tables order functions alphabetically; within a markdown
    table algorithms are sorted best-first by quality like the original
    result tables.  JSON carries the same fields plus per-trial records
    when given.
    """
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    if format == "csv":
        return _emit_csv(stats)
    if format == "json":
        return _emit_json(stats, records, master_seed)
    return _emit_markdown(stats)


def _cells_sorted(stats: dict):
    return sorted(stats.items(), key=lambda kv: (kv[0][1], kv[0][0]))


def _emit_csv(stats: dict) -> str:
    lines = [CSV_HEADER]
    for (algo, func), s in _cells_sorted(stats):
        lines.append(
            f"{algo},{func},{s.cost_avg!r},{s.cost_std!r},{s.cost_min!r},"
            f"{s.cost_max!r},{s.time_avg!r},{s.time_std!r},{s.trials}"
        )
    return "\n".join(lines) + "\n"


def _emit_json(stats: dict, records: Optional[dict], master_seed: Optional[int]) -> str:
    cells = []
    for (algo, func), s in _cells_sorted(stats):
        cell = {
            "algo": algo,
            "func": func,
            "cost_avg": s.cost_avg,
            "cost_std": s.cost_std,
            "cost_min": s.cost_min,
            "cost_max": s.cost_max,
            "time_avg": s.time_avg,
            "time_std": s.time_std,
            "trials": s.trials,
            "failures": s.failures,
        }
        if records is not None and (algo, func) in records:
            cell["records"] = records[(algo, func)]
        cells.append(cell)
    doc = {"results": cells}
    if master_seed is not None:
        doc["master_seed"] = master_seed
    return json.dumps(doc, indent=2) + "\n"


def _emit_markdown(stats: dict) -> str:
    functions = sorted({func for _, func in stats})
    out = []
    for func in functions:
        objective = get_objective(func)
        rows = [(algo, s) for (algo, f2), s in stats.items() if f2 == func]
        rows.sort(key=lambda r: (quality(r[1], objective), r[0]))
        out.append(f"### Results on {func.upper()}")
        out.append("")
        out.append("| Algorithm | Avr | Std | Min | Max | Time Avr | Time Std |")
        out.append("|---|---|---|---|---|---|---|")
        for algo, s in rows:
            out.append(
                f"| {algo} | {s.cost_avg:.2f} | {s.cost_std:.2f} | {s.cost_min:.2f} "
                f"| {s.cost_max:.2f} | {s.time_avg:.2f} | {s.time_std:.2f} |"
            )
        out.append("")
    algorithms = sorted({algo for algo, _ in stats})
    if len(functions) > 1 and len(algorithms) > 1:
        table = rank_table(stats, algorithms, functions)
        order = sorted(algorithms, key=lambda a: table.geometric[a])
        out.append("### Solution quality ranks")
        out.append("")
        header = " | ".join(f.upper() for f in functions)
        out.append(f"| Algorithm | {header} | Arithmetic | Geometric |")
        out.append("|---" * (len(functions) + 3) + "|")
        for algo in order:
            cells = " | ".join(str(r) for r in table.ranks[algo])
            out.append(
                f"| {algo} | {cells} | {table.arithmetic[algo]:.2f} "
                f"| {table.geometric[algo]:.2f} |"
            )
        out.append("")
    return "\n".join(out)


def surface_grid(func_id: str, resolution: int) -> np.ndarray:
    """Samples of the function surface over its bounds square.

    Returns an array of shape (resolution**2, 3) holding rows (x1, x2, f),
    x1 varying slowest.  Functions of more than two coefficients are
    sliced on their first two with the rest pinned at zero; the stochastic
    objective is sampled noise-free.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    objective = get_objective(func_id)
    axis = np.linspace(objective.lower, objective.upper, resolution)
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    X = np.zeros((resolution * resolution, objective.n))
    X[:, 0] = x1.ravel()
    X[:, 1] = x2.ravel()
    f = objective.fn_batch(X)
    return np.column_stack([X[:, 0], X[:, 1], f])


def grid_csv(grid: np.ndarray) -> str:
    lines = ["x1,x2,f"]
    for x1, x2, f in grid:
        lines.append(f"{x1!r},{x2!r},{f!r}")
    return "\n".join(lines) + "\n"
