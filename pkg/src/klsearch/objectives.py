"""The seven benchmark minimization problems.

Classic bit-coded test functions: a 3-d parabola, Rosenbrock's saddle, the
shifted 5-d step function, a 30-d noisy quartic, Shekel's foxholes, the sine
envelope sine wave, and the stretched V sine wave.  Each carries the bit
width, bounds, and known minimum its encoding uses.

Every function exposes two evaluation routes: ``fn`` / ``fn_batch`` compute
the deterministic part (scalar and vectorized over rows), while
``evaluate`` / ``evaluate_batch`` are the checked public entry points that
add Gaussian noise for the stochastic function when a random stream is
passed.  Omitting the stream gives the noise-free value, which is what the
tests pin down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .encoding import EncodingSpec
from .rng import RngStream

# Foxhole grid for f5: 25 minima on a 5x5 lattice with spacing 16.
FOXHOLE_A1 = (-32, -16, 0, 16, 32) * 5
FOXHOLE_A2 = (-32,) * 5 + (-16,) * 5 + (0,) * 5 + (16,) * 5 + (32,) * 5

_A1 = np.array(FOXHOLE_A1, dtype=float)
_A2 = np.array(FOXHOLE_A2, dtype=float)
_J = np.arange(1.0, 26.0)
_QUARTIC_W = np.arange(1.0, 31.0)


@dataclass(frozen=True)
class Objective:
    """A benchmark function plus the encoding it is searched under."""

    id: str
    n: int
    l: int
    lower: float
    upper: float
    known_min: float
    deterministic: bool
    fn: Callable[[Sequence[float]], float]
    fn_batch: Callable[[np.ndarray], np.ndarray]

    def encoding(self, coding: str = "binary") -> EncodingSpec:
        return EncodingSpec(self.n, self.l, self.lower, self.upper, coding)

    def check_domain(self, x: Sequence[float]) -> None:
        if len(x) != self.n:
            raise ValueError(f"{self.id} takes {self.n} coefficients, got {len(x)}")
        for v in x:
            if not self.lower <= v <= self.upper:
                raise ValueError(
                    f"{self.id} coefficient {v} outside [{self.lower}, {self.upper}]"
                )

    def evaluate(self, x: Sequence[float], rng: RngStream | None = None) -> float:
        """Cost of x.  Stochastic objectives add one fresh Gauss(0,1) draw
        per call when ``rng`` is given and none when it is omitted."""
        self.check_domain(x)
        value = self.fn(x)
        if not self.deterministic and rng is not None:
            value += rng.gauss()
        return value

    def evaluate_batch(self, X: np.ndarray, rng: RngStream | None = None) -> np.ndarray:
        """Costs of the rows of X, one evaluation (and one noise draw) each."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n:
            raise ValueError(f"{self.id} batch needs shape (m, {self.n}), got {X.shape}")
        values = self.fn_batch(X)
        if not self.deterministic and rng is not None:
            values = values + np.array([rng.gauss() for _ in range(len(X))])
        return values


def _f1(x):
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]


def _f1_batch(X):
    return (X * X).sum(axis=1)


def _f2(x):
    a = x[0] * x[0] - x[1]
    b = 1.0 - x[0]
    return 100.0 * a * a + b * b


def _f2_batch(X):
    a = X[:, 0] * X[:, 0] - X[:, 1]
    b = 1.0 - X[:, 0]
    return 100.0 * a * a + b * b


def _f3(x):
    # mathematical floor (toward -inf): floor(-5.12) = -6, which is what
    # makes the +30 shift land the minimum exactly at zero
    return 30.0 + sum(math.floor(v) for v in x)


def _f3_batch(X):
    return 30.0 + np.floor(X).sum(axis=1)


def _f4(x):
    return sum((i + 1.0) * v * v * v * v for i, v in enumerate(x))


def _f4_batch(X):
    X2 = X * X
    return (X2 * X2) @ _QUARTIC_W


def _f5(x):
    s = 0.0
    for j in range(25):
        d1 = x[0] - FOXHOLE_A1[j]
        d2 = x[1] - FOXHOLE_A2[j]
        s += 1.0 / ((j + 1) + d1 ** 6 + d2 ** 6)
    return 1.0 / (0.002 + s)


def _f5_batch(X):
    d1 = X[:, 0, None] - _A1
    d2 = X[:, 1, None] - _A2
    s = (1.0 / (_J + d1 ** 6 + d2 ** 6)).sum(axis=1)
    return 1.0 / (0.002 + s)


def _f6(x):
    r2 = x[0] * x[0] + x[1] * x[1]
    s = math.sin(math.sqrt(r2))
    d = 1.0 + 0.001 * r2
    return 0.5 + (s * s - 0.5) / (d * d)


def _f6_batch(X):
    r2 = X[:, 0] ** 2 + X[:, 1] ** 2
    s = np.sin(np.sqrt(r2))
    d = 1.0 + 0.001 * r2
    return 0.5 + (s * s - 0.5) / (d * d)


def _f7(x):
    r2 = x[0] * x[0] + x[1] * x[1]
    s = math.sin(50.0 * r2 ** 0.1)
    return r2 ** 0.25 * (s * s + 1.0)


def _f7_batch(X):
    r2 = X[:, 0] ** 2 + X[:, 1] ** 2
    s = np.sin(50.0 * r2 ** 0.1)
    return r2 ** 0.25 * (s * s + 1.0)


F1 = Objective("f1", 3, 10, -5.12, 5.12, 0.0, True, _f1, _f1_batch)
F2 = Objective("f2", 2, 12, -2.048, 2.048, 0.0, True, _f2, _f2_batch)
F3 = Objective("f3", 5, 10, -5.12, 5.12, 0.0, True, _f3, _f3_batch)
F4 = Objective("f4", 30, 8, -1.28, 1.28, 0.0, False, _f4, _f4_batch)
F5 = Objective("f5", 2, 17, -65.536, 65.536, 1.0, True, _f5, _f5_batch)
F6 = Objective("f6", 2, 22, -100.0, 100.0, 0.0, True, _f6, _f6_batch)
F7 = Objective("f7", 2, 22, -100.0, 100.0, 0.0, True, _f7, _f7_batch)

OBJECTIVES = {o.id: o for o in (F1, F2, F3, F4, F5, F6, F7)}


def get_objective(objective_id: str) -> Objective:
    try:
        return OBJECTIVES[objective_id]
    except KeyError:
        known = ", ".join(sorted(OBJECTIVES))
        raise ValueError(f"unknown objective {objective_id!r} (known: {known})") from None
