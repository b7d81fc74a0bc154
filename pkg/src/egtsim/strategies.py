"""Iterated prisoner's dilemma strategies and their Markov-chain analysis.

Three strategy families:

  * NamedStrategy — the classic automata (AllC, AllD, Tit-for-Tat, Grim,
    Win-Stay-Lose-Shift, Random(p)).
  * MemoryOneStrategy — four cooperation probabilities conditioned on the
    previous joint move, plus an opening cooperation probability.
  * the zero-determinant extortion construction, which yields memory-one
    strategies enforcing a linear relation between long-run payoffs.

Strategies are immutable values; match state is owned by the match executor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NonErgodicError, ParameterError
from .games import IpdStageParams
from .rng import SplitMix64

C = "C"
D = "D"

_NAMED_KINDS = ("allc", "alld", "tft", "grim", "wsls", "random")


@dataclass(frozen=True)
class NamedStrategy:
    """One of the classic automata; `p` is used by Random only."""

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind not in _NAMED_KINDS:
            raise ParameterError(f"unknown strategy kind {self.kind!r}; expected one of {_NAMED_KINDS}")
        if self.kind == "random":
            if self.p is None or not (0.0 <= self.p <= 1.0):
                raise ParameterError(f"random strategy needs p in [0, 1], got {self.p}")
        elif self.p is not None:
            raise ParameterError(f"strategy {self.kind!r} takes no parameter")


ALL_C = NamedStrategy("allc")
ALL_D = NamedStrategy("alld")
TIT_FOR_TAT = NamedStrategy("tft")
GRIM = NamedStrategy("grim")
WIN_STAY_LOSE_SHIFT = NamedStrategy("wsls")


@dataclass(frozen=True)
class MemoryOneStrategy:
    """Cooperation probabilities after (own, opponent) = CC, CD, DC, DD,
    plus the probability of cooperating on the first move."""

    p_cc: float
    p_cd: float
    p_dc: float
    p_dd: float
    initial_coop: float = 1.0

    def __post_init__(self):
        for name in ("p_cc", "p_cd", "p_dc", "p_dd", "initial_coop"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ParameterError(f"{name} must lie in [0, 1], got {value!r}")

    def prob_after(self, own: str, opp: str) -> float:
        return {(C, C): self.p_cc, (C, D): self.p_cd,
                (D, C): self.p_dc, (D, D): self.p_dd}[(own, opp)]

    def vector(self) -> np.ndarray:
        return np.array([self.p_cc, self.p_cd, self.p_dc, self.p_dd])


Strategy = Union[NamedStrategy, MemoryOneStrategy]


class MatchState:
    """Move histories of one repeated-game match, as seen by one player."""

    __slots__ = ("own_history", "opponent_history")

    def __init__(self, own_history=(), opponent_history=()):
        self.own_history = list(own_history)
        self.opponent_history = list(opponent_history)
        if len(self.own_history) != len(self.opponent_history):
            raise ParameterError("histories must have equal length")

    @property
    def round_index(self) -> int:
        return len(self.own_history)

    def record(self, own: str, opp: str) -> None:
        self.own_history.append(own)
        self.opponent_history.append(opp)


def _bernoulli(p: float, rng: SplitMix64) -> str:
    return C if rng.random() < p else D


def next_move(strategy: Strategy, state: MatchState, rng: SplitMix64) -> str:
    """The strategy's move given the match history.

    Deterministic strategies never touch `rng`; stochastic ones draw exactly
    one uniform variate per call, so seeded streams stay aligned.
    """
    if isinstance(strategy, MemoryOneStrategy):
        if state.round_index == 0:
            return _bernoulli(strategy.initial_coop, rng)
        p = strategy.prob_after(state.own_history[-1], state.opponent_history[-1])
        return _bernoulli(p, rng)

    kind = strategy.kind
    if kind == "allc":
        return C
    if kind == "alld":
        return D
    if kind == "random":
        return _bernoulli(strategy.p, rng)
    if kind == "tft":
        return state.opponent_history[-1] if state.round_index else C
    if kind == "grim":
        return D if D in state.opponent_history else C
    # wsls: repeat own move after a win (opponent cooperated), flip after a loss
    if state.round_index == 0:
        return C
    if state.opponent_history[-1] == C:
        return state.own_history[-1]
    return D if state.own_history[-1] == C else C


def as_memory_one(strategy: NamedStrategy) -> MemoryOneStrategy:
    """Express a named automaton as a memory-one strategy.

    Grim is rejected: its trigger depends on the whole history, not just the
    previous round.
    """
    kind = strategy.kind
    if kind == "allc":
        return MemoryOneStrategy(1.0, 1.0, 1.0, 1.0, initial_coop=1.0)
    if kind == "alld":
        return MemoryOneStrategy(0.0, 0.0, 0.0, 0.0, initial_coop=0.0)
    if kind == "tft":
        return MemoryOneStrategy(1.0, 0.0, 1.0, 0.0, initial_coop=1.0)
    if kind == "wsls":
        return MemoryOneStrategy(1.0, 0.0, 0.0, 1.0, initial_coop=1.0)
    if kind == "random":
        p = strategy.p
        return MemoryOneStrategy(p, p, p, p, initial_coop=p)
    raise ParameterError(f"strategy {kind!r} is not memory-one")


def make_zd_extortion(chi: float, phi: float, stage: IpdStageParams = None) -> MemoryOneStrategy:
    """Zero-determinant extortion strategy with factor chi and scale phi.

    In stationary play against any opponent the resulting strategy pins the
    payoffs to (s_X - p) = chi * (s_Y - p).  Feasibility of phi depends on
    chi and the stage payoffs; infeasible pairs are rejected with the
    offending probability named.
    """
    if stage is None:
        stage = IpdStageParams()
    if not (chi > 1.0):
        raise ParameterError(f"extortion factor chi must be > 1, got {chi}")
    if not (phi > 0.0):
        raise ParameterError(f"scale phi must be > 0, got {phi}")
    t, r, p, s = stage.t, stage.r, stage.p, stage.s
    probs = {
        "p_cc": 1.0 + phi * (1.0 - chi) * (r - p),
        "p_cd": 1.0 + phi * ((s - p) - chi * (t - p)),
        "p_dc": phi * ((t - p) - chi * (s - p)),
        "p_dd": 0.0,
    }
    for name, value in probs.items():
        if not (0.0 <= value <= 1.0):
            raise ParameterError(
                f"(chi={chi}, phi={phi}) is infeasible for this stage game: "
                f"{name} = {value!r} lies outside [0, 1]"
            )
    return MemoryOneStrategy(**probs, initial_coop=1.0)


def _as_m1(strategy: Strategy) -> MemoryOneStrategy:
    if isinstance(strategy, MemoryOneStrategy):
        return strategy
    return as_memory_one(strategy)


def transition_matrix(px: Strategy, py: Strategy, noise: float = 0.0) -> np.ndarray:
    """4x4 transition matrix over joint outcomes (CC, CD, DC, DD), X's move first.

    Trembling-hand noise: each player's chosen move flips independently with
    probability `noise` before execution; strategies condition on executed
    moves.
    """
    if not (0.0 <= noise < 0.5):
        raise ParameterError(f"noise must lie in [0, 0.5), got {noise}")
    mx = _as_m1(px).vector()
    my = _as_m1(py).vector()
    # Y sees the joint outcome with its own move first: swap CD and DC.
    my = my[[0, 2, 1, 3]]
    cx = mx * (1.0 - noise) + (1.0 - mx) * noise
    cy = my * (1.0 - noise) + (1.0 - my) * noise
    m = np.empty((4, 4))
    for k in range(4):
        m[k, 0] = cx[k] * cy[k]
        m[k, 1] = cx[k] * (1.0 - cy[k])
        m[k, 2] = (1.0 - cx[k]) * cy[k]
        m[k, 3] = (1.0 - cx[k]) * (1.0 - cy[k])
    return m


def _is_irreducible(m: np.ndarray) -> bool:
    closure = (m > 0.0) | np.eye(4, dtype=bool)
    for _ in range(4):
        closure = closure | ((closure.astype(np.uint8) @ closure.astype(np.uint8)) > 0)
    return bool(closure.all())


def stationary_distribution(px: Strategy, py: Strategy, noise: float = 0.0) -> np.ndarray:
    """Stationary distribution of the joint-outcome chain.

    With noise > 0 every transition has positive probability and the chain is
    ergodic.  At noise = 0 the chain may decompose into absorbing classes; in
    that case long-run play depends on the opening moves and no single
    stationary distribution describes it, so we refuse and point callers at
    simulation.
    """
    m = transition_matrix(px, py, noise)
    if noise == 0.0 and not _is_irreducible(m):
        raise NonErgodicError(
            "the joint-outcome chain is not ergodic at noise = 0; "
            "simulate the match (tournament.play_match) and average instead"
        )
    lhs = m.T - np.eye(4)
    lhs[3, :] = 1.0
    rhs = np.array([0.0, 0.0, 0.0, 1.0])
    pi = np.linalg.solve(lhs, rhs)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def stationary_payoffs(px: Strategy, py: Strategy,
                       stage: IpdStageParams = None,
                       noise: float = 0.0) -> tuple[float, float]:
    """Per-round expected payoffs (X, Y) in the stationary regime."""
    if stage is None:
        stage = IpdStageParams()
    pi = stationary_distribution(px, py, noise)
    s_x = np.array([stage.r, stage.s, stage.t, stage.p])
    s_y = np.array([stage.r, stage.t, stage.s, stage.p])
    return float(pi @ s_x), float(pi @ s_y)
