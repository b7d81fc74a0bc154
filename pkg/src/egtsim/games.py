"""Normal-form game construction and evaluation.

Payoffs are dimensionless reals.  Games are immutable after construction;
every operation here is a pure function safe to call from any thread.

PayoffBimatrix itself is a permissive container so that malformed games
(e.g. deserialized from a bad file) can be inspected: `validate_game`
reports violations as diagnostics instead of raising.  The constructors
`make_hawk_dove` / `make_ipd_stage` always produce valid games.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError

SUM_TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MixedStrategy:
    """A probability vector over pure strategies (a point on the simplex)."""

    probs: np.ndarray

    def __post_init__(self):
        p = _readonly(np.atleast_1d(self.probs))
        if p.ndim != 1 or p.size == 0:
            raise ParameterError("probs must be a non-empty vector")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ParameterError(f"probabilities must lie in [0, 1], got {p}")
        if abs(float(p.sum()) - 1.0) > SUM_TOL:
            raise ParameterError(f"probabilities must sum to 1 within {SUM_TOL}, got {p.sum()!r}")
        object.__setattr__(self, "probs", p)

    @classmethod
    def pure(cls, index: int, n: int) -> "MixedStrategy":
        p = np.zeros(n)
        p[index] = 1.0
        return cls(p)

    @classmethod
    def uniform(cls, n: int) -> "MixedStrategy":
        return cls(np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, i: int) -> float:
        return float(self.probs[i])


def as_probs(x, n: int | None = None) -> np.ndarray:
    """Coerce a MixedStrategy or sequence to a validated probability vector."""
    if not isinstance(x, MixedStrategy):
        x = MixedStrategy(np.asarray(x, dtype=float))
    if n is not None and len(x) != n:
        raise DimensionError(f"expected a strategy over {n} pure strategies, got {len(x)}")
    return x.probs


@dataclass(frozen=True)
class PayoffBimatrix:
    """Two-player normal-form game: payoff tables for row and column player.

    `a[i][j]` is the row player's payoff, `b[i][j]` the column player's.
    `symmetric` asserts b == a.T with rows == cols; `validate_game` checks
    the flag against the entries.
    """

    a: np.ndarray
    b: np.ndarray
    symmetric: bool = False
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", _readonly(np.atleast_2d(self.a)))
        object.__setattr__(self, "b", _readonly(np.atleast_2d(self.b)))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @classmethod
    def from_symmetric(cls, a, labels=None) -> "PayoffBimatrix":
        a = np.atleast_2d(np.asarray(a, dtype=float))
        game = cls(a=a, b=a.T.copy(), symmetric=True, labels=labels)
        problems = validate_game(game)
        if problems:
            raise ParameterError("; ".join(problems))
        return game


def validate_game(game: PayoffBimatrix) -> list[str]:
    """Return a list of violated invariants (empty when the game is valid).

    Diagnostics only; never raises.
    """
    problems: list[str] = []
    a, b = game.a, game.b
    if a.ndim != 2 or b.ndim != 2:
        problems.append("payoff tables must be 2-dimensional")
        return problems
    if a.shape != b.shape:
        problems.append(f"payoff tables differ in shape: a is {a.shape}, b is {b.shape}")
    if not np.all(np.isfinite(a)) or not np.all(np.isfinite(b)):
        problems.append("payoff tables must be finite")
    if game.symmetric:
        if a.shape[0] != a.shape[1]:
            problems.append(f"symmetric flag set on a non-square {a.shape} game")
        elif a.shape == b.shape:
            mismatch = np.argwhere(b != a.T)
            if mismatch.size:
                i, j = (int(v) for v in mismatch[0])
                problems.append(
                    f"symmetric flag set but b[{i}][{j}] = {b[i, j]!r} != a[{j}][{i}] = {a[j, i]!r}"
                )
    if game.labels is not None and len(game.labels) != a.shape[0]:
        problems.append(f"expected {a.shape[0]} strategy labels, got {len(game.labels)}")
    return problems


@dataclass(frozen=True)
class HawkDoveParams:
    """Resource value v and injury cost c, both strictly positive."""

    v: float
    c: float

    def __post_init__(self):
        if not (self.v > 0):
            raise ParameterError(f"resource value v must be > 0, got {self.v}")
        if not (self.c > 0):
            raise ParameterError(f"injury cost c must be > 0, got {self.c}")


@dataclass(frozen=True)
class IpdStageParams:
    """Stage payoffs (t, r, p, s): temptation, reward, punishment, sucker.

    Requires the dilemma ordering t > r > p > s and 2r > t + s (so that
    alternating exploitation cannot beat mutual cooperation).
    """

    t: float = 5.0
    r: float = 3.0
    p: float = 1.0
    s: float = 0.0

    def __post_init__(self):
        failures = [f"{name}: {lhs!r} > {rhs!r} fails"
                    for name, lhs, rhs in (("t > r", self.t, self.r),
                                           ("r > p", self.r, self.p),
                                           ("p > s", self.p, self.s),
                                           ("2r > t+s", 2 * self.r, self.t + self.s))
                    if not (lhs > rhs)]
        if failures:
            raise ParameterError("stage payoffs must satisfy " + "; ".join(failures))


DEFAULT_STAGE = IpdStageParams()


def make_hawk_dove(params: HawkDoveParams) -> PayoffBimatrix:
    """Symmetric 2x2 hawk-dove game, strategy order (Hawk, Dove).

    Hawk vs Hawk splits the resource net of injury cost, (v - c) / 2; Hawk
    takes everything from Dove; Dove vs Dove shares v with no display cost.
    """
    v, c = params.v, params.c
    a = np.array([[(v - c) / 2.0, v], [0.0, v / 2.0]])
    return PayoffBimatrix.from_symmetric(a, labels=("Hawk", "Dove"))


def make_ipd_stage(params: IpdStageParams) -> PayoffBimatrix:
    """Symmetric 2x2 one-shot stage game, strategy order (Cooperate, Defect)."""
    a = np.array([[params.r, params.s], [params.t, params.p]])
    return PayoffBimatrix.from_symmetric(a, labels=("Cooperate", "Defect"))


def expected_payoff(game: PayoffBimatrix, x, y) -> tuple[float, float]:
    """Expected payoffs (row, column) when row plays x and column plays y.

    Bilinear form: (x' a y, x' b y).
    """
    if game.a.shape != game.b.shape:
        raise DimensionError(f"malformed game: a is {game.a.shape}, b is {game.b.shape}")
    xp = as_probs(x, game.rows)
    yp = as_probs(y, game.cols)
    return float(xp @ game.a @ yp), float(xp @ game.b @ yp)
