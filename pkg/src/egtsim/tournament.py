"""Repeated-game match execution and IPD tournaments.

A match plays one strategy pair for a fixed number of rounds under
trembling-hand noise; a round robin plays every unordered roster pair once
with per-pair derived seeds; an ecological tournament turns per-pair
average scores into a payoff matrix and hands it to the replicator
integrator.

Matches within a round robin may run in parallel (see egtsim.parallel);
per-pair seeds plus index-ordered aggregation keep every output identical
for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import IntegratorConfig, Trajectory, integrate_replicator
from .errors import ParameterError
from .games import DEFAULT_STAGE, IpdStageParams
from .parallel import run_indexed
from .rng import SplitMix64, derive_seed
from .strategies import C, D, MatchState, Strategy, next_move


@dataclass(frozen=True)
class MatchConfig:
    """Rounds per match, trembling-hand noise in [0, 0.5), master seed."""

    rounds: int = 200
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 1:
            raise ParameterError(f"rounds must be >= 1, got {self.rounds}")
        if not (0.0 <= self.noise < 0.5):
            raise ParameterError(f"noise must lie in [0, 0.5), got {self.noise}")


@dataclass(frozen=True)
class MatchResult:
    """Cumulative payoffs and the executed move log of one match."""

    score_a: float
    score_b: float
    moves: tuple[tuple[str, str], ...]

    def cooperation_rates(self) -> tuple[float, float]:
        n = len(self.moves)
        ca = sum(1 for ma, _ in self.moves if ma == C)
        cb = sum(1 for _, mb in self.moves if mb == C)
        return ca / n, cb / n


def _payoff(stage: IpdStageParams, own: str, opp: str) -> float:
    if own == C:
        return stage.r if opp == C else stage.s
    return stage.t if opp == C else stage.p


def play_match(s1: Strategy, s2: Strategy, cfg: MatchConfig,
               stage: IpdStageParams = DEFAULT_STAGE) -> MatchResult:
    """Play one seeded match of cfg.rounds stage games.

    Per round: both strategies choose (sharing the match's stream in a fixed
    order), then each executed move independently flips with probability
    cfg.noise.  Strategies observe executed moves.
    """
    rng = SplitMix64(cfg.seed)
    state1 = MatchState()
    state2 = MatchState()
    score_a = 0.0
    score_b = 0.0
    moves = []
    for _ in range(cfg.rounds):
        m1 = next_move(s1, state1, rng)
        m2 = next_move(s2, state2, rng)
        if cfg.noise > 0.0:
            if rng.random() < cfg.noise:
                m1 = D if m1 == C else C
            if rng.random() < cfg.noise:
                m2 = D if m2 == C else C
        score_a += _payoff(stage, m1, m2)
        score_b += _payoff(stage, m2, m1)
        state1.record(m1, m2)
        state2.record(m2, m1)
        moves.append((m1, m2))
    return MatchResult(score_a=score_a, score_b=score_b, moves=tuple(moves))


@dataclass(frozen=True)
class ScoreTable:
    """Round-robin outcome: totals exclude self-play.

    pairwise[i][j] is row i's match score against column j (diagonal unused,
    kept at 0); totals[i] is the exact sum of row i's off-diagonal entries.
    """

    roster: tuple[str, ...]
    totals: np.ndarray
    pairwise: np.ndarray
    rounds: int

    def mean_per_round(self, i: int) -> float:
        opponents = len(self.roster) - 1
        return float(self.totals[i]) / (opponents * self.rounds)


def _check_roster(roster) -> list[tuple[str, Strategy]]:
    entries = list(roster)
    if len(entries) < 2:
        raise ParameterError(f"roster needs at least 2 strategies, got {len(entries)}")
    names = [name for name, _ in entries]
    dupes = {name for name in names if names.count(name) > 1}
    if dupes:
        raise ParameterError(f"duplicate roster names: {sorted(dupes)}")
    return entries


def round_robin(roster, cfg: MatchConfig,
                stage: IpdStageParams = DEFAULT_STAGE) -> ScoreTable:
    """Play every unordered pair exactly once (self-play excluded).

    roster is a sequence of (name, strategy) pairs with unique names.  The
    pair (i, j) plays under seed derive(cfg.seed, i, j), so the table is a
    pure function of (roster, cfg, stage).
    """
    entries = _check_roster(roster)
    n = len(entries)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def make_task(i: int, j: int):
        def task():
            pair_cfg = MatchConfig(rounds=cfg.rounds, noise=cfg.noise,
                                   seed=derive_seed(cfg.seed, i, j))
            return play_match(entries[i][1], entries[j][1], pair_cfg, stage)
        return task

    results = run_indexed([make_task(i, j) for i, j in pairs])
    pairwise = np.zeros((n, n))
    for (i, j), res in zip(pairs, results):
        pairwise[i, j] = res.score_a
        pairwise[j, i] = res.score_b
    totals = pairwise.sum(axis=1)
    return ScoreTable(roster=tuple(name for name, _ in entries),
                      totals=totals, pairwise=pairwise, rounds=cfg.rounds)


@dataclass(frozen=True)
class RosterMatrix:
    """Per-pair average-per-round payoffs and cooperation rates.

    payoff[i][j] is strategy i's average per-round score against j; the
    diagonal comes from a self-play match.  cooperation[i][j] is how often i
    cooperated against j.
    """

    names: tuple[str, ...]
    payoff: np.ndarray
    cooperation: np.ndarray


def roster_payoff_matrix(roster, cfg: MatchConfig,
                         stage: IpdStageParams = DEFAULT_STAGE) -> RosterMatrix:
    """Average-per-round payoff matrix over the roster, self-play included.

    Uses the same per-pair seeds as round_robin for i < j plus a self-play
    match seeded by derive(cfg.seed, i, i) for the diagonal.
    """
    entries = _check_roster(roster)
    n = len(entries)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]

    def make_task(i: int, j: int):
        def task():
            pair_cfg = MatchConfig(rounds=cfg.rounds, noise=cfg.noise,
                                   seed=derive_seed(cfg.seed, i, j))
            return play_match(entries[i][1], entries[j][1], pair_cfg, stage)
        return task

    results = run_indexed([make_task(i, j) for i, j in pairs])
    payoff = np.zeros((n, n))
    coop = np.zeros((n, n))
    for (i, j), res in zip(pairs, results):
        rates = res.cooperation_rates()
        payoff[i, j] = res.score_a / cfg.rounds
        coop[i, j] = rates[0]
        if i != j:
            payoff[j, i] = res.score_b / cfg.rounds
            coop[j, i] = rates[1]
    return RosterMatrix(names=tuple(name for name, _ in entries),
                        payoff=payoff, cooperation=coop)


def ecological_tournament(roster, cfg: MatchConfig,
                          stage: IpdStageParams = DEFAULT_STAGE,
                          dyn: IntegratorConfig | None = None,
                          x0=None) -> Trajectory:
    """Replicator dynamics over roster shares.

    The fitness matrix is the roster's average-per-round score table; shares
    start uniform unless x0 is given.
    """
    matrix = roster_payoff_matrix(roster, cfg, stage)
    if x0 is None:
        x0 = np.full(len(matrix.names), 1.0 / len(matrix.names))
    return integrate_replicator(matrix.payoff, x0, dyn)
