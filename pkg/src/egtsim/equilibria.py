"""Nash equilibria and evolutionarily stable strategies for the focal games.

Covers the hawk-dove mixed ESS, pure-mutant ESS verification for symmetric
games, best-reply enumeration for 2x2 bimatrix games, and the analytic
war-of-attrition persistence-time law.  Pure functions over immutable
inputs throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .games import HawkDoveParams, MixedStrategy, PayoffBimatrix, as_probs

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class EssReport:
    """Outcome of testing a candidate against every pure mutant.

    worst_violation is the most-positive payoff advantage any mutant holds
    over the candidate (<= tol whenever is_nash).  method documents the scope
    of the check: pure mutants plus the second-order condition decide ESS
    completely for 2x2 games; for larger games the check is necessary but
    not sufficient, and is labeled as such.
    """

    candidate: MixedStrategy
    is_nash: bool
    is_ess: bool
    worst_violation: float
    tested_mutants: int
    method: str


def is_ess(a, candidate, tol: float = DEFAULT_TOL) -> EssReport:
    """Test a candidate strategy of a symmetric game for Nash and ESS.

    Nash: no pure mutant e_i earns more than the candidate against it,
    f(e_i, x) <= f(x, x) + tol.  For mutants within tol of equality, ESS
    additionally requires the candidate to beat the mutant in the mutant's
    own world: f(x, e_i) > f(e_i, e_i) - tol.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square payoff matrix, got shape {a.shape}")
    x = as_probs(candidate, a.shape[0])
    n = a.shape[0]

    ax = a @ x
    f_xx = float(x @ ax)
    worst = float(np.max(ax) - f_xx)
    nash = worst <= tol

    ess = nash
    if nash:
        xa = x @ a
        for i in range(n):
            if abs(float(ax[i]) - f_xx) <= tol:  # alternative best reply
                if not (float(xa[i]) > float(a[i, i]) - tol):
                    ess = False
                    break

    method = ("pure mutants + second-order condition (complete for 2x2)"
              if n == 2 else "pure-mutant check only")
    return EssReport(candidate=MixedStrategy(x), is_nash=nash, is_ess=ess,
                     worst_violation=worst, tested_mutants=n, method=method)


def hawk_dove_ess(params: HawkDoveParams) -> MixedStrategy:
    """The hawk-dove ESS over (Hawk, Dove).

    For v < c the indifference condition p (v-c)/2 + (1-p) v = (1-p) v/2
    gives the mixed point p = v/c; for v >= c Hawk dominates and the ESS is
    pure Hawk (the v == c boundary folds into the pure branch).
    """
    if params.v < params.c:
        p = params.v / params.c
        return MixedStrategy(np.array([p, 1.0 - p]))
    return MixedStrategy.pure(0, 2)


@dataclass(frozen=True)
class Solve2x2Result:
    """Equilibria of a 2x2 bimatrix game.

    equilibria holds (row strategy, column strategy) profiles: the pure
    profiles surviving best-reply checks plus at most one interior mixed
    profile.  degenerate is set when some player is exactly indifferent
    somewhere (equilibrium components may then form a continuum, and the
    listed profiles are not exhaustive).
    """

    equilibria: tuple[tuple[MixedStrategy, MixedStrategy], ...]
    degenerate: bool


def solve_2x2(game: PayoffBimatrix) -> Solve2x2Result:
    """Enumerate equilibria of a 2x2 bimatrix game by best-reply checks.

    The interior mixed profile comes from opponent indifference and is
    reported only when both indifference probabilities lie strictly in
    (0, 1).
    """
    a, b = game.a, game.b
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DimensionError(f"solve_2x2 needs a 2x2 game, got {a.shape} and {b.shape}")

    found: list[tuple[MixedStrategy, MixedStrategy]] = []
    degenerate = False
    for i in range(2):
        for j in range(2):
            row_edge = a[i, j] - a[1 - i, j]
            col_edge = b[i, j] - b[i, 1 - j]
            if row_edge == 0.0 or col_edge == 0.0:
                degenerate = True
            if row_edge >= 0.0 and col_edge >= 0.0:
                found.append((MixedStrategy.pure(i, 2), MixedStrategy.pure(j, 2)))

    # Row mixture x making the column player indifferent, and vice versa.
    den_x = (b[0, 0] - b[0, 1]) - (b[1, 0] - b[1, 1])
    den_y = (a[0, 0] - a[1, 0]) - (a[0, 1] - a[1, 1])
    if den_x != 0.0 and den_y != 0.0:
        x0 = (b[1, 1] - b[1, 0]) / den_x
        y0 = (a[1, 1] - a[0, 1]) / den_y
        if 0.0 < x0 < 1.0 and 0.0 < y0 < 1.0:
            found.append((MixedStrategy(np.array([x0, 1.0 - x0])),
                          MixedStrategy(np.array([y0, 1.0 - y0]))))
    elif den_x == 0.0 or den_y == 0.0:
        degenerate = True

    return Solve2x2Result(equilibria=tuple(found), degenerate=degenerate)


@dataclass(frozen=True)
class AttritionEss:
    """The symmetric war-of-attrition ESS: exponential persistence times.

    rate is the constant withdrawal hazard c/v; mean persistence is v/c.
    """

    rate: float
    mean: float

    def __post_init__(self):
        if not (self.rate > 0):
            raise ParameterError(f"hazard rate must be > 0, got {self.rate}")
        if not math.isclose(self.mean, 1.0 / self.rate, rel_tol=1e-12, abs_tol=0.0):
            raise ParameterError(
                f"mean {self.mean!r} is not the reciprocal of rate {self.rate!r}"
            )


def attrition_ess(v: float, c: float) -> AttritionEss:
    """ESS persistence-time law for resource value v and cost rate c.

    Indifference against the population requires the hazard f/(1-F) to be
    the constant c/v, i.e. persistence times are exponential with density
    (c/v) exp(-(c/v) t).
    """
    if not (v > 0):
        raise ParameterError(f"resource value v must be > 0, got {v}")
    if not (c > 0):
        raise ParameterError(f"cost rate c must be > 0, got {c}")
    rate = c / v
    return AttritionEss(rate=rate, mean=1.0 / rate)


def attrition_pure_payoff(m: float, ess: AttritionEss, v: float, c: float) -> float:
    """Expected payoff of persisting exactly m against an ESS-distributed field.

    Closed form: integrating wins (v - c t) on t < m against the exponential
    density and charging -c m when outlasted collapses to
    (v - c/rate) * (1 - exp(-rate m)), which vanishes identically at the ESS
    hazard rate = c/v.  Evaluating the general form keeps the function honest
    about near-miss hazard rates instead of hard-coding zero.
    """
    if m < 0:
        raise ParameterError(f"persistence time m must be >= 0, got {m}")
    if not (v > 0) or not (c > 0):
        raise ParameterError(f"v and c must be > 0, got v={v}, c={c}")
    if not math.isclose(ess.rate, c / v, rel_tol=1e-9, abs_tol=0.0):
        raise ParameterError(
            f"ess rate {ess.rate!r} is inconsistent with c/v = {c / v!r}"
        )
    return (v - c / ess.rate) * -math.expm1(-ess.rate * m)
