"""Finite-population and Monte Carlo processes.

Moran birth-death dynamics with fitness-proportional reproduction, sealed-
draw war-of-attrition contests, and the discretization bridge that turns the
continuous attrition game into a payoff matrix for replicator analysis.

Determinism contract: every trial draws from its own splitmix64 stream,
seeded by mixing the master seed with the trial index, and results are
reduced in trial order — so estimates are bit-identical across runs and
across worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels
from .errors import ParameterError
from .games import PayoffBimatrix
from .parallel import chunk_ranges, run_indexed, worker_count
from .rng import SplitMix64


# ---------------------------------------------------------------------------
# Moran process
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MoranConfig:
    """Population size, selection intensity w in [0, 1], trial budget, seed."""

    n: int
    selection_intensity: float = 0.0
    max_steps: int = 1_000_000
    trials: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"population size must be >= 2, got {self.n}")
        if not (0.0 <= self.selection_intensity <= 1.0):
            raise ParameterError(
                f"selection intensity must lie in [0, 1], got {self.selection_intensity}"
            )
        if self.max_steps < 1:
            raise ParameterError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class FixationEstimate:
    """Monte Carlo fixation-probability estimate.

    estimate and standard_error are over completed (non-censored) trials;
    censored counts runs that hit max_steps and are reported, never dropped.
    """

    fixed: int
    extinct: int
    censored: int
    trials: int

    @property
    def completed(self) -> int:
        return self.fixed + self.extinct

    @property
    def estimate(self) -> float:
        return self.fixed / self.completed

    @property
    def standard_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.completed)


def moran_fixation_analytic(r: float, n: int) -> float:
    """Fixation probability of one constant-fitness-r mutant among n.

    Neutral mutants (r within 1e-12 of 1) fix with probability 1/n; otherwise
    the birth-death formula (1 - 1/r) / (1 - r^-n) applies.
    """
    if not (r > 0):
        raise ParameterError(f"relative fitness must be > 0, got {r}")
    if n < 2:
        raise ParameterError(f"population size must be >= 2, got {n}")
    if abs(r - 1.0) <= 1e-12:
        return 1.0 / n
    return (1.0 - 1.0 / r) / (1.0 - r ** (-n))


def moran_simulate(a, cfg: MoranConfig, initial_mutants: int = 1) -> FixationEstimate:
    """Estimate the fixation probability of mutants playing a symmetric 2x2 game.

    Mutants play strategy 0 (the first row of `a`), residents strategy 1.
    Fitness is the linear map f = 1 - w + w * pi where pi averages the game
    payoff against the current population excluding self.  Each step one
    individual reproduces with probability proportional to fitness and its
    offspring replaces a uniformly chosen individual.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (2, 2):
        raise ParameterError(f"moran_simulate needs a 2x2 payoff matrix, got shape {a.shape}")
    if not (1 <= initial_mutants <= cfg.n - 1):
        raise ParameterError(
            f"initial mutants must lie in [1, n-1] = [1, {cfg.n - 1}], got {initial_mutants}"
        )
    w = cfg.selection_intensity
    if w > 0.0 and 1.0 - w + w * float(a.min()) < 0.0:
        raise ParameterError(
            "selection intensity and payoff matrix combine to a negative fitness; "
            f"need 1 - w + w*min(a) >= 0, got {1.0 - w + w * float(a.min())}"
        )

    spans = chunk_ranges(cfg.trials, worker_count())

    def make_task(offset: int, length: int):
        def task():
            return _kernels.active.moran_trials(
                float(a[0, 0]), float(a[0, 1]), float(a[1, 0]), float(a[1, 1]),
                cfg.n, w, initial_mutants, cfg.max_steps, length, cfg.seed, offset,
            )
        return task

    results = run_indexed([make_task(off, leng) for off, leng in spans])
    if any(status != 0 for _, status in results):
        raise ParameterError(
            "fitness collapsed to zero for both strategies during a trial; "
            "reduce selection intensity or shift payoffs"
        )
    outcomes = np.concatenate([out for out, _ in results])
    fixed = int(np.count_nonzero(outcomes == 1))
    extinct = int(np.count_nonzero(outcomes == 0))
    censored = int(np.count_nonzero(outcomes == 2))
    if fixed + extinct == 0:
        raise ParameterError("every trial hit max_steps; raise max_steps")
    return FixationEstimate(fixed=fixed, extinct=extinct, censored=censored, trials=cfg.trials)


# ---------------------------------------------------------------------------
# war-of-attrition contests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PurePersistence:
    """Always persist exactly m time units."""

    m: float

    def __post_init__(self):
        if self.m < 0:
            raise ParameterError(f"persistence time must be >= 0, got {self.m}")


@dataclass(frozen=True)
class ExponentialPersistence:
    """Draw persistence times from an exponential with the given hazard rate."""

    rate: float

    def __post_init__(self):
        if not (self.rate > 0):
            raise ParameterError(f"rate must be > 0, got {self.rate}")


PersistenceStrategy = Union[PurePersistence, ExponentialPersistence]


@dataclass(frozen=True)
class ContestOutcome:
    """One settled contest: winner is 0 (player a) or 1 (player b).

    The loser pays its cost rate over the full duration; the winner stops
    paying at the loser's withdrawal, earning v - c * duration.
    """

    winner: int
    duration: float
    payoff_a: float
    payoff_b: float


def sample_persistence(s: PersistenceStrategy, rng: SplitMix64) -> float:
    """Draw one persistence time; pure strategies consume no randomness."""
    if isinstance(s, PurePersistence):
        return s.m
    if isinstance(s, ExponentialPersistence):
        return -math.log(rng.uniform_pos()) / s.rate
    raise ParameterError(f"unknown persistence strategy {s!r}")


def run_contest(sa: PersistenceStrategy, sb: PersistenceStrategy,
                v: float, c_a: float, c_b: float, rng: SplitMix64) -> ContestOutcome:
    """Settle one sealed-draw contest.

    Both players draw persistence times up front; the shorter draw withdraws
    at duration min(t_a, t_b).  Exact ties are resolved by a fair coin, both
    players paying their cost over the tied duration.
    """
    if not (v > 0):
        raise ParameterError(f"resource value v must be > 0, got {v}")
    if not (c_a > 0 and c_b > 0):
        raise ParameterError(f"cost rates must be > 0, got c_a={c_a}, c_b={c_b}")
    t_a = sample_persistence(sa, rng)
    t_b = sample_persistence(sb, rng)
    if t_a > t_b:
        a_wins = True
    elif t_a < t_b:
        a_wins = False
    else:
        a_wins = rng.coin() == 0
    d = min(t_a, t_b)
    if a_wins:
        return ContestOutcome(winner=0, duration=d, payoff_a=v - c_a * d, payoff_b=-c_b * d)
    return ContestOutcome(winner=1, duration=d, payoff_a=-c_a * d, payoff_b=v - c_b * d)


def _persistence_code(s: PersistenceStrategy) -> tuple[int, float]:
    if isinstance(s, PurePersistence):
        return 0, s.m
    if isinstance(s, ExponentialPersistence):
        return 1, s.rate
    raise ParameterError(f"unknown persistence strategy {s!r}")


def run_contests(sa: PersistenceStrategy, sb: PersistenceStrategy,
                 v: float, c_a: float, c_b: float,
                 trials: int, seed: int):
    """Monte Carlo batch of contests; trial k replays run_contest on the
    stream derived from (seed, k).

    Returns (winners, durations, payoffs_a, payoffs_b) as arrays in trial
    order.
    """
    if not (v > 0):
        raise ParameterError(f"resource value v must be > 0, got {v}")
    if not (c_a > 0 and c_b > 0):
        raise ParameterError(f"cost rates must be > 0, got c_a={c_a}, c_b={c_b}")
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    kind_a, par_a = _persistence_code(sa)
    kind_b, par_b = _persistence_code(sb)

    spans = chunk_ranges(trials, worker_count())

    def make_task(offset: int, length: int):
        def task():
            return _kernels.active.contest_trials(
                kind_a, par_a, kind_b, par_b, v, c_a, c_b, length, seed, offset
            )
        return task

    parts = run_indexed([make_task(off, leng) for off, leng in spans])
    winners = np.concatenate([p[0] for p in parts])
    durations = np.concatenate([p[1] for p in parts])
    pay_a = np.concatenate([p[2] for p in parts])
    pay_b = np.concatenate([p[3] for p in parts])
    return winners, durations, pay_a, pay_b


# ---------------------------------------------------------------------------
# attrition discretization
# ---------------------------------------------------------------------------

def discretize_attrition(v: float, c: float, bins: int, t_max: float) -> PayoffBimatrix:
    """Symmetric matrix game over the persistence grid t_i = i * t_max / (bins-1).

    Outlasting the opponent wins v minus cost over the opponent's time;
    withdrawing first costs your own time; equal draws split the resource in
    expectation, v/2 - c * t_i.
    """
    if bins < 2:
        raise ParameterError(f"bins must be >= 2, got {bins}")
    if not (t_max > 0):
        raise ParameterError(f"t_max must be > 0, got {t_max}")
    if not (v > 0) or not (c > 0):
        raise ParameterError(f"v and c must be > 0, got v={v}, c={c}")
    times = np.array([i * t_max / (bins - 1) for i in range(bins)])
    a = np.empty((bins, bins))
    for i in range(bins):
        for j in range(bins):
            if i == j:
                a[i, j] = v / 2.0 - c * times[i]
            elif times[i] > times[j]:
                a[i, j] = v - c * times[j]
            else:
                a[i, j] = -c * times[i] + 0.0  # + 0.0 folds -0.0 into +0.0
    labels = tuple(f"persist={t:g}" for t in times)
    return PayoffBimatrix.from_symmetric(a, labels=labels)


def attrition_bimatrix(v: float, c_a: float, c_b: float, bins: int, t_max: float):
    """Two-population attrition payoffs with per-population cost rates.

    Returns (a, b, times): a[i][j] pays the row population at rate c_a,
    b[i][j] the column population at rate c_b.  With c_a == c_b this reduces
    to the symmetric discretization.
    """
    if bins < 2:
        raise ParameterError(f"bins must be >= 2, got {bins}")
    if not (t_max > 0):
        raise ParameterError(f"t_max must be > 0, got {t_max}")
    if not (v > 0) or not (c_a > 0) or not (c_b > 0):
        raise ParameterError(f"v and cost rates must be > 0, got v={v}, c_a={c_a}, c_b={c_b}")
    times = np.array([i * t_max / (bins - 1) for i in range(bins)])
    a = np.empty((bins, bins))
    b = np.empty((bins, bins))
    for i in range(bins):
        for j in range(bins):
            if i == j:
                a[i, j] = v / 2.0 - c_a * times[i]
                b[i, j] = v / 2.0 - c_b * times[j]
            elif times[i] > times[j]:
                a[i, j] = v - c_a * times[j]
                b[i, j] = -c_b * times[j] + 0.0
            else:
                a[i, j] = -c_a * times[i] + 0.0
                b[i, j] = v - c_b * times[i]
    return a, b, times
