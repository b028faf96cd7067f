"""Hill climbing and the variable depth search family.

All four searchers share the same skeleton: probe the unlocked neighborhood,
apply the steepest move, lock the slot so each neighborhood element is used
at most once per pass.  Hill climbing only ever applies strictly improving
moves and stops when none exists.  The variable depth searchers (``kls``,
``kls1``, ``kls2``) apply the best move even when it is uphill, record the
gain sequence of the whole pass, and then keep exactly the prefix of moves
whose cumulative gain is maximal; a pass with no positive prefix ends the
search.

``kls`` flips single bits of the full genotype.  ``kls1`` steps integer
coefficient vectors by +-1 inside the integer part of the bounds.  ``kls2``
searches a single l-bit group and replicates its decoded value to every
coefficient before evaluating.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .encoding import (
    BitVector,
    EncodingSpec,
    Move,
    bit_flip,
    decode_coefficient,
    gray_to_binary,
    int_step,
)
from .objectives import Objective
from .rng import RngStream

# Backstop per trial; natural termination normally comes first.
DEFAULT_BUDGET = 200_000


@dataclass
class SearchState:
    """Mutable state of one search run.

    ``genotype`` is a BitVector, or a tuple of ints for integer-step
    searches.  ``locks`` has one slot per available move.  ``replicate`` > 1
    means the (single-group) genotype's decoded value is copied to that many
    coefficients before evaluation.
    """

    genotype: object
    current_cost: float
    locks: list
    spec: Optional[EncodingSpec] = None
    replicate: int = 1
    eval_count: int = 0


@dataclass
class PassTrace:
    """Gain sequence of one pass and its committed prefix.

    ``prefix_best_k`` is the smallest k maximizing the cumulative gain
    G_k = g_1 + ... + g_k, with G_0 = 0 included.
    """

    moves: list
    gains: list
    prefix_best_k: int
    prefix_best_sum: float


@dataclass
class SearchResult:
    best_genotype: object
    best_x: list
    best_cost: float
    passes: int
    evaluations: int
    wall_time: float
    extras: dict = field(default_factory=dict)


def best_prefix(gains) -> tuple[int, float]:
    """Smallest k maximizing the cumulative gain, G_0 = 0 included."""
    best_k, best_sum, run = 0, 0.0, 0.0
    for k, g in enumerate(gains, start=1):
        run += g
        if run > best_sum:
            best_k, best_sum = k, run
    return best_k, best_sum


def integer_bounds(objective: Objective) -> tuple[int, int]:
    """Integer coefficient range inside the objective's real bounds."""
    return math.ceil(objective.lower), math.floor(objective.upper)


def random_initial(
    objective: Objective,
    spec: EncodingSpec,
    rng: RngStream,
    replicate: int = 1,
) -> SearchState:
    """Random bit genotype, every bit 0/1 with equal probability."""
    genotype = BitVector.random(spec, rng)
    x = _decoded(genotype, spec, replicate)
    cost = objective.evaluate(x, rng)
    return SearchState(
        genotype=genotype,
        current_cost=cost,
        locks=[False] * spec.total_bits,
        spec=spec,
        replicate=replicate,
        eval_count=1,
    )


def random_integer_state(objective: Objective, rng: RngStream) -> SearchState:
    """Random integer vector, each coefficient uniform over the integer range."""
    lo, hi = integer_bounds(objective)
    v = tuple(lo + rng.uniform_index(hi - lo + 1) for _ in range(objective.n))
    cost = objective.evaluate([float(c) for c in v], rng)
    return SearchState(
        genotype=v,
        current_cost=cost,
        locks=[False] * objective.n,
        eval_count=1,
    )


def _decoded(genotype: BitVector, spec: EncodingSpec, replicate: int) -> list[float]:
    gray = spec.coding == "gray"
    vals = [
        decode_coefficient(gray_to_binary(g) if gray else g, spec)
        for g in genotype.groups
    ]
    if replicate > 1:
        vals = vals * replicate
    return vals


def best_unlocked_move(state: SearchState, objective: Objective, rng=None):
    """Unlocked move with the maximum gain, or None when all are locked.

    Every candidate costs one objective evaluation.  Ties go to the lowest
    move index; for integer states the two directions of one coefficient are
    compared first (-1 winning ties) and the winners then compete by
    coefficient index.
    """
    if isinstance(state.genotype, BitVector):
        return _best_bit_move(state, objective, rng)
    return _best_int_move(state, objective, rng)


def _noise(costs: np.ndarray, objective: Objective, rng) -> np.ndarray:
    if objective.deterministic or rng is None:
        return costs
    return costs + np.array([rng.gauss() for _ in range(len(costs))])


def _best_bit_move(state: SearchState, objective: Objective, rng):
    spec = state.spec
    unlocked = [j for j, locked in enumerate(state.locks) if not locked]
    if not unlocked:
        return None
    l = spec.l
    gray = spec.coding == "gray"
    groups = state.genotype.groups
    cols = []
    new_vals = []
    for j in unlocked:
        g, b = divmod(j, l)
        code = groups[g] ^ (1 << (l - 1 - b))
        if gray:
            code = gray_to_binary(code)
        cols.append(g)
        new_vals.append(spec.lower + code * spec.step)
    m = len(unlocked)
    if state.replicate > 1:
        X = np.repeat(np.array(new_vals)[:, None], objective.n, axis=1)
    else:
        X = np.tile(np.array(_decoded(state.genotype, spec, 1)), (m, 1))
        X[np.arange(m), cols] = new_vals
    costs = _noise(objective.fn_batch(X), objective, rng)
    state.eval_count += m
    gains = state.current_cost - costs
    pick = int(np.argmax(gains))
    return bit_flip(unlocked[pick]), float(gains[pick])


def _best_int_move(state: SearchState, objective: Objective, rng):
    lo, hi = integer_bounds(objective)
    v = state.genotype
    unlocked = [i for i, locked in enumerate(state.locks) if not locked]
    if not unlocked:
        return None
    cands = []
    for i in unlocked:
        if v[i] - 1 >= lo:
            cands.append((i, -1, v[i] - 1.0))
        if v[i] + 1 <= hi:
            cands.append((i, 1, v[i] + 1.0))
    X = np.tile(np.array(v, dtype=float), (len(cands), 1))
    for r, (i, _, nv) in enumerate(cands):
        X[r, i] = nv
    costs = _noise(objective.fn_batch(X), objective, rng)
    state.eval_count += len(cands)
    gains = state.current_cost - costs
    per_coef = {}
    for (i, d, _), g in zip(cands, gains):
        if i not in per_coef or g > per_coef[i][0]:
            per_coef[i] = (float(g), d)
    i = min(per_coef, key=lambda c: (-per_coef[c][0], c))
    g, d = per_coef[i]
    return int_step(i, d), g


def _first_improving_move(state: SearchState, objective: Objective, rng):
    spec = state.spec
    x = _decoded(state.genotype, spec, state.replicate)
    gray = spec.coding == "gray"
    for j, locked in enumerate(state.locks):
        if locked:
            continue
        g, b = divmod(j, spec.l)
        code = state.genotype.groups[g] ^ (1 << (spec.l - 1 - b))
        if gray:
            code = gray_to_binary(code)
        val = spec.lower + code * spec.step
        if state.replicate > 1:
            cand = [val] * objective.n
        else:
            cand = list(x)
            cand[g] = val
        cost = objective.fn(cand)
        if not objective.deterministic and rng is not None:
            cost += rng.gauss()
        state.eval_count += 1
        gain = state.current_cost - cost
        if gain > 0:
            return bit_flip(j), gain
    return None


def _lock_slot(move: Move) -> int:
    return move.index


def apply_to_state(state: SearchState, move: Move, gain: float) -> None:
    """Apply an already-probed move; the new cost is cost - gain exactly."""
    state.genotype = _apply_genotype(state.genotype, move)
    state.current_cost -= gain


def _apply_genotype(genotype, move: Move):
    if move.kind == "bit_flip":
        return genotype.flip(move.index)
    v = list(genotype)
    v[move.index] += move.direction
    return tuple(v)


def kls_pass(
    state: SearchState,
    objective: Objective,
    rng=None,
    max_evals: Optional[int] = None,
) -> PassTrace:
    """One pass of temporary steepest moves over the whole neighborhood.

    Applies the best unlocked move (any gain) until every slot is locked,
    then rewinds so that exactly the moves of the best gain prefix remain
    applied.  The state's cost afterwards is cost_before - G_k exactly.
    """
    if any(state.locks):
        raise ValueError("kls_pass requires a state with all locks cleared")
    snapshot = state.genotype
    cost0 = state.current_cost
    moves: list[Move] = []
    gains: list[float] = []
    while max_evals is None or state.eval_count < max_evals:
        picked = best_unlocked_move(state, objective, rng)
        if picked is None:
            break
        move, gain = picked
        apply_to_state(state, move, gain)
        state.locks[_lock_slot(move)] = True
        moves.append(move)
        gains.append(gain)
    k, total = best_prefix(gains)
    genotype = snapshot
    for move in moves[:k]:
        genotype = _apply_genotype(genotype, move)
    state.genotype = genotype
    state.current_cost = cost0 - total
    return PassTrace(moves, gains, k, total)


def hill_climb(
    objective: Objective,
    spec: EncodingSpec,
    rng: RngStream,
    budget: int = DEFAULT_BUDGET,
    descent: str = "steepest",
) -> SearchResult:
    """Strictly downhill search; the default examines the whole unlocked
    neighborhood per step, ``descent="first"`` takes the first improving
    move in index order instead."""
    if descent not in ("steepest", "first"):
        raise ValueError(f"descent must be 'steepest' or 'first', got {descent!r}")
    start = time.perf_counter()
    state = random_initial(objective, spec, rng)
    passes = 0
    while True:
        passes += 1
        state.locks = [False] * len(state.locks)
        applied = 0
        while state.eval_count < budget:
            if descent == "steepest":
                picked = best_unlocked_move(state, objective, rng)
                if picked is None or picked[1] <= 0:
                    picked = None
            else:
                picked = _first_improving_move(state, objective, rng)
            if picked is None:
                break
            move, gain = picked
            apply_to_state(state, move, gain)
            state.locks[_lock_slot(move)] = True
            applied += 1
        if applied == 0 or state.eval_count >= budget:
            break
    return _finish(state, objective, passes, start, budget)


def kls(
    objective: Objective,
    spec: EncodingSpec,
    rng: RngStream,
    budget: int = DEFAULT_BUDGET,
) -> SearchResult:
    """Variable depth search over single bit flips of the full genotype."""
    start = time.perf_counter()
    state = random_initial(objective, spec, rng)
    return _variable_depth(state, objective, rng, budget, start)


def kls1(
    objective: Objective,
    rng: RngStream,
    budget: int = DEFAULT_BUDGET,
) -> SearchResult:
    """Variable depth search stepping integer coefficients by +-1.

    The state space is the integer lattice inside the bounds, so each pass
    locks a coefficient (not a bit) after its better direction is applied.
    """
    start = time.perf_counter()
    state = random_integer_state(objective, rng)
    return _variable_depth(state, objective, rng, budget, start)


def kls2(
    objective: Objective,
    rng: RngStream,
    budget: int = DEFAULT_BUDGET,
    coding: str = "binary",
) -> SearchResult:
    """Variable depth search on one l-bit group replicated to all
    coefficients, for objectives minimized on the all-equal diagonal."""
    start = time.perf_counter()
    spec = EncodingSpec(1, objective.l, objective.lower, objective.upper, coding)
    state = random_initial(objective, spec, rng, replicate=objective.n)
    return _variable_depth(state, objective, rng, budget, start)


def _variable_depth(state, objective, rng, budget, start) -> SearchResult:
    passes = 0
    k_hist: Counter = Counter()
    while True:
        passes += 1
        state.locks = [False] * len(state.locks)
        trace = kls_pass(state, objective, rng, max_evals=budget)
        k_hist[trace.prefix_best_k] += 1
        if trace.prefix_best_sum <= 0 or state.eval_count >= budget:
            break
    result = _finish(state, objective, passes, start, budget)
    result.extras["k_hist"] = dict(sorted(k_hist.items()))
    return result


def _finish(state, objective, passes, start, budget) -> SearchResult:
    if isinstance(state.genotype, BitVector):
        x = _decoded(state.genotype, state.spec, state.replicate)
    else:
        x = [float(v) for v in state.genotype]
    return SearchResult(
        best_genotype=state.genotype,
        best_x=x,
        best_cost=state.current_cost,
        passes=passes,
        evaluations=state.eval_count,
        wall_time=time.perf_counter() - start,
        extras={"terminated": "budget" if state.eval_count >= budget else "natural"},
    )
