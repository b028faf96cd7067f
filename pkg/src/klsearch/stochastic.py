"""Simulated annealing and a generational genetic algorithm.

Both searchers propose random perturbations instead of scanning the whole
neighborhood.  The annealer runs a fixed number of uniform random bit-flip
proposals per temperature, accepts uphill moves with probability
exp(gain / T), cools geometrically, and stops once several consecutive
temperatures were frozen (almost nothing accepted, best unchanged) or the
evaluation budget runs out.

The genetic algorithm is a plain generational GA: sigma-scaled fitness,
roulette selection, single-point crossover, independent per-bit mutation,
full replacement with a small elite carried over, Gray-coded genotypes by
default.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

from .encoding import BitVector, EncodingSpec, decode_coefficient, gray_to_binary
from .local_search import DEFAULT_BUDGET, SearchResult
from .objectives import Objective
from .rng import RngStream

_TEMP_SAMPLE_TRIES = 200


@dataclass(frozen=True)
class SAParams:
    init_accept_prob: float = 0.4
    temp_factor: float = 0.95
    size_factor: int = 16
    min_percent: float = 0.02
    freeze_limit: int = 5
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not 0.0 < self.init_accept_prob < 1.0:
            raise ValueError("init_accept_prob must be in (0, 1)")
        if not 0.0 < self.temp_factor < 1.0:
            raise ValueError("temp_factor must be in (0, 1)")
        if self.size_factor < 1 or self.freeze_limit < 1 or self.budget < 1:
            raise ValueError("size_factor, freeze_limit, and budget must be positive")
        if not 0.0 < self.min_percent < 1.0:
            raise ValueError("min_percent must be in (0, 1)")


@dataclass(frozen=True)
class GAParams:
    population_size: int = 30
    total_trials: int = 60_000
    crossover_rate: float = 0.85
    mutation_rate: float = 0.005
    generation_gap: float = 1.0
    coding: str = "gray"
    sigma_scaling_factor: float = 1.0
    elitism_count: int = 1

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must be in [0, 1]")
        if not 0.0 <= self.mutation_rate < 1.0:
            raise ValueError("mutation_rate must be in [0, 1)")
        if not 0 <= self.elitism_count <= self.population_size:
            raise ValueError("elitism_count must be in [0, population_size]")
        if self.sigma_scaling_factor <= 0:
            raise ValueError("sigma_scaling_factor must be positive")


@dataclass
class Population:
    """Evaluated individuals of one generation."""

    individuals: list  # of (BitVector, cost) pairs
    generation: int = 0


def sa_accept(gain: float, temperature: float, rng: RngStream) -> bool:
    """Metropolis test: downhill and sideways moves always pass, uphill
    moves pass with probability exp(gain / T) (gain < 0 uphill)."""
    if gain >= 0:
        return True
    return rng.uniform_real() < math.exp(gain / temperature)


def initial_temperature(
    objective: Objective,
    spec: EncodingSpec,
    rng: RngStream,
    params: SAParams,
) -> float:
    """Starting temperature calibrated so a mean uphill move is accepted
    with probability init_accept_prob.

    Samples one random bit flip from each of a fixed number of random
    solutions and averages the uphill cost increases (2 * _TEMP_SAMPLE_TRIES
    objective evaluations).  Landscapes with no uphill move in the sample
    fall back to T = 1.
    """
    decode = _decoder(spec)
    ups = []
    for _ in range(_TEMP_SAMPLE_TRIES):
        genotype = BitVector.random(spec, rng)
        x = [decode(g) for g in genotype.groups]
        cost = objective.fn(x)
        j = rng.uniform_index(spec.total_bits)
        g, b = divmod(j, spec.l)
        x[g] = decode(genotype.groups[g] ^ (1 << (spec.l - 1 - b)))
        increase = objective.fn(x) - cost
        if increase > 0:
            ups.append(increase)
    if not ups:
        return 1.0
    mean_up = sum(ups) / len(ups)
    return mean_up / math.log(1.0 / params.init_accept_prob)


def simulated_annealing(
    objective: Objective,
    spec: EncodingSpec,
    rng: RngStream,
    params: Optional[SAParams] = None,
) -> SearchResult:
    params = params or SAParams()
    start = time.perf_counter()
    temperature = initial_temperature(objective, spec, rng, params)
    evals = 2 * _TEMP_SAMPLE_TRIES

    decode = _decoder(spec)
    noisy = not objective.deterministic
    l = spec.l
    nl = spec.total_bits
    per_temp = params.size_factor * nl

    groups = list(BitVector.random(spec, rng).groups)
    x = [decode(g) for g in groups]
    cost = objective.fn(x) + (rng.gauss() if noisy else 0.0)
    evals += 1
    best_groups, best_cost = list(groups), cost

    temperatures = []
    frozen = 0
    uphill_accepts = 0
    while evals < params.budget and frozen < params.freeze_limit:
        accepted = 0
        proposals = 0
        improved = False
        while proposals < per_temp and evals < params.budget:
            j = rng.uniform_index(nl)
            g, b = divmod(j, l)
            new_code = groups[g] ^ (1 << (l - 1 - b))
            old_val = x[g]
            x[g] = decode(new_code)
            new_cost = objective.fn(x) + (rng.gauss() if noisy else 0.0)
            evals += 1
            proposals += 1
            gain = cost - new_cost
            if sa_accept(gain, temperature, rng):
                groups[g] = new_code
                cost = new_cost
                accepted += 1
                if gain < 0:
                    uphill_accepts += 1
                if cost < best_cost:
                    best_groups, best_cost = list(groups), cost
                    improved = True
            else:
                x[g] = old_val
        temperatures.append(temperature)
        if accepted / proposals < params.min_percent and not improved:
            frozen += 1
        else:
            frozen = 0
        temperature *= params.temp_factor

    genotype = BitVector(tuple(best_groups), l)
    return SearchResult(
        best_genotype=genotype,
        best_x=[decode(g) for g in best_groups],
        best_cost=best_cost,
        passes=len(temperatures),
        evaluations=evals,
        wall_time=time.perf_counter() - start,
        extras={
            "temperatures": temperatures,
            "uphill_accepts": uphill_accepts,
            "terminated": "budget" if evals >= params.budget else "frozen",
        },
    )


def ga_fitness(costs, sigma_scaling_factor: float = 1.0) -> list[float]:
    """Sigma-scaled fitness for minimization.

    e_i = max(0, 1 + (mean - cost_i) / (factor * 2 * std)); a population
    with zero cost spread scores 1.0 everywhere.
    """
    costs = list(costs)
    if not costs:
        raise ValueError("ga_fitness needs at least one cost")
    mean = sum(costs) / len(costs)
    var = sum((c - mean) ** 2 for c in costs) / len(costs)
    std = math.sqrt(var)
    if std == 0.0:
        return [1.0] * len(costs)
    scale = sigma_scaling_factor * 2.0 * std
    return [max(0.0, 1.0 + (mean - c) / scale) for c in costs]


def _roulette(cumulative: list[float], total: float, rng: RngStream) -> int:
    r = rng.uniform_real() * total
    for i, c in enumerate(cumulative):
        if r < c:
            return i
    return len(cumulative) - 1


def _crossover(a: tuple, b: tuple, cut: int, l: int) -> tuple:
    """First `cut` bits come from a, the rest from b."""
    child = []
    for i, (ga, gb) in enumerate(zip(a, b)):
        lo, hi = i * l, (i + 1) * l
        if cut >= hi:
            child.append(ga)
        elif cut <= lo:
            child.append(gb)
        else:
            low_mask = (1 << (hi - cut)) - 1
            child.append((ga & ~low_mask) | (gb & low_mask))
    return tuple(child)


def _mutate(groups: tuple, rate: float, nl: int, l: int, rng: RngStream) -> tuple:
    """Flip each bit independently with probability `rate`.

    Uses geometric gap sampling, which draws one uniform per flipped bit
    instead of one per bit; the flip distribution is exactly Bernoulli.
    """
    if rate <= 0.0:
        return groups
    out = list(groups)
    log_keep = math.log1p(-rate)
    j = -1
    while True:
        u = rng.uniform_real()
        j += 1 + int(math.log(1.0 - u) / log_keep)
        if j >= nl:
            break
        g, b = divmod(j, l)
        out[g] ^= 1 << (l - 1 - b)
    return tuple(out)


def ga_generation(
    pop: Population,
    params: GAParams,
    objective: Objective,
    spec: EncodingSpec,
    rng: RngStream,
) -> Population:
    """Produce the next generation: roulette selection on sigma-scaled
    fitness, single-point crossover, per-bit mutation, full replacement
    with the best `elitism_count` individuals carried over unchanged."""
    inds = pop.individuals
    fitness = ga_fitness([c for _, c in inds], params.sigma_scaling_factor)
    total = sum(fitness)
    cumulative = []
    acc = 0.0
    for f in fitness:
        acc += f
        cumulative.append(acc)

    elites = sorted(inds, key=lambda ic: ic[1])[: params.elitism_count]
    n_offspring = params.population_size - params.elitism_count
    nl, l = spec.total_bits, spec.l
    noisy = not objective.deterministic

    children: list[tuple] = []
    while len(children) < n_offspring:
        if total > 0.0:
            pa = inds[_roulette(cumulative, total, rng)][0].groups
            pb = inds[_roulette(cumulative, total, rng)][0].groups
        else:
            pa = inds[rng.uniform_index(len(inds))][0].groups
            pb = inds[rng.uniform_index(len(inds))][0].groups
        if nl > 1 and rng.uniform_real() < params.crossover_rate:
            cut = 1 + rng.uniform_index(nl - 1)
            pair = (_crossover(pa, pb, cut, l), _crossover(pb, pa, cut, l))
        else:
            pair = (pa, pb)
        for child in pair:
            if len(children) < n_offspring:
                children.append(_mutate(child, params.mutation_rate, nl, l, rng))

    decode = _decoder(spec)
    new_inds = list(elites)
    for groups in children:
        x = [decode(g) for g in groups]
        cost = objective.fn(x) + (rng.gauss() if noisy else 0.0)
        new_inds.append((BitVector(groups, l), cost))
    return Population(new_inds, pop.generation + 1)


def genetic_algorithm(
    objective: Objective,
    rng: RngStream,
    params: Optional[GAParams] = None,
    budget: Optional[int] = None,
) -> SearchResult:
    """Run the GA until the evaluation allowance is spent and return the
    best individual ever seen."""
    params = params or GAParams()
    start = time.perf_counter()
    spec = objective.encoding(params.coding)
    cap = params.total_trials if budget is None else min(budget, params.total_trials)
    decode = _decoder(spec)
    noisy = not objective.deterministic

    pop_inds = []
    evals = 0
    best: tuple[BitVector, float] | None = None
    for _ in range(params.population_size):
        genotype = BitVector.random(spec, rng)
        cost = objective.fn([decode(g) for g in genotype.groups])
        if noisy:
            cost += rng.gauss()
        evals += 1
        pop_inds.append((genotype, cost))
        if best is None or cost < best[1]:
            best = (genotype, cost)

    pop = Population(pop_inds)
    per_generation = params.population_size - params.elitism_count
    while per_generation > 0 and evals + per_generation <= cap:
        pop = ga_generation(pop, params, objective, spec, rng)
        evals += per_generation
        for genotype, cost in pop.individuals[params.elitism_count:]:
            if cost < best[1]:
                best = (genotype, cost)

    genotype, cost = best
    return SearchResult(
        best_genotype=genotype,
        best_x=[decode(g) for g in genotype.groups],
        best_cost=cost,
        passes=pop.generation,
        evaluations=evals,
        wall_time=time.perf_counter() - start,
        extras={"generations": pop.generation, "terminated": "budget"},
    )


def _decoder(spec: EncodingSpec):
    if spec.coding == "gray":
        return lambda g: decode_coefficient(gray_to_binary(g), spec)
    return lambda g: decode_coefficient(g, spec)
