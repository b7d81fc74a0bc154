"""Deterministic continuous-time selection dynamics.

Single-population replicator dynamics and the two-population bimatrix
variant, integrated with fixed-step classical 4th-order Runge-Kutta.  Fixed
stepping keeps trajectories bit-reproducible across runs; the step kernels
live in egtsim._kernels (compiled when available, numpy otherwise).

Integrators are pure given (inputs, config); concurrent integrations are
safe because each writes only its own Trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionError, DivergenceError, ParameterError
from .games import MixedStrategy, as_probs

RESIDUAL_TOL = 1e-9
NEG_TOL = -1e-12


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integration controls.

    dt: step size; t_end: horizon (the integrator takes round(t_end / dt)
    steps); record_every: sampling stride in steps; renormalize: project each
    post-step state back onto the simplex.
    """

    dt: float = 0.01
    t_end: float = 200.0
    record_every: int = 10
    renormalize: bool = True

    def __post_init__(self):
        if not (self.dt > 0):
            raise ParameterError(f"dt must be > 0, got {self.dt}")
        if not (self.t_end >= self.dt):
            raise ParameterError(f"t_end must be >= dt, got t_end={self.t_end}, dt={self.dt}")
        if self.record_every < 1:
            raise ParameterError(f"record_every must be >= 1, got {self.record_every}")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_end / self.dt)))


@dataclass(frozen=True)
class Trajectory:
    """Time-indexed record of one or two population states.

    x has one row per recorded time; y is present for two-population runs.
    converged is set when the final residual max |dx/dt| drops below 1e-9.
    """

    times: np.ndarray
    x: np.ndarray
    y: np.ndarray | None
    converged: bool
    final_residual: float

    def state(self, row: int = -1) -> MixedStrategy:
        return MixedStrategy(self.x[row])

    def state_y(self, row: int = -1) -> MixedStrategy:
        if self.y is None:
            raise ParameterError("single-population trajectory has no second population")
        return MixedStrategy(self.y[row])


def _square_matrix(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square payoff matrix, got shape {a.shape}")
    return a


def replicator_rhs(a, x) -> np.ndarray:
    """Replicator vector field dx_i = x_i * ((a x)_i - x' a x)."""
    a = _square_matrix(a)
    xp = as_probs(x, a.shape[0])
    ax = a @ xp
    return xp * (ax - xp @ ax)


def _raise_for_status(status: int, step: int) -> None:
    if status == 1:
        raise DivergenceError("integration produced a non-finite state", step)
    if status == 2:
        raise DivergenceError(
            f"integration drove a share below the clamping tolerance {NEG_TOL}", step
        )


def integrate_replicator(a, x0, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate single-population replicator dynamics from x0.

    Each step clamps sub-zero shares (tolerating round-off down to -1e-12)
    and renormalizes when cfg.renormalize; larger negative drift aborts with
    DivergenceError, as do NaN/Inf states.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    a = _square_matrix(a)
    x0 = as_probs(x0, a.shape[0])
    times, states, residual, status, err_step = _kernels.active.rk4_replicator(
        a, x0, cfg.dt, cfg.n_steps, cfg.record_every, cfg.renormalize
    )
    _raise_for_status(status, err_step)
    return Trajectory(times=times, x=states, y=None,
                      converged=bool(residual < RESIDUAL_TOL),
                      final_residual=float(residual))


def integrate_bimatrix(a, b, x0, y0, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate two coevolving populations against bimatrix payoffs (a, b).

    Population x plays rows earning a; population y plays columns earning b:
    dx_i = x_i ((a y)_i - x' a y), dy_j = y_j ((b' x)_j - y' b' x).
    """
    if cfg is None:
        cfg = IntegratorConfig()
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    if a.ndim != 2 or a.shape != b.shape:
        raise DimensionError(f"payoff matrices must share one shape, got {a.shape} and {b.shape}")
    x0 = as_probs(x0, a.shape[0])
    y0 = as_probs(y0, a.shape[1])
    times, xs, ys, residual, status, err_step = _kernels.active.rk4_bimatrix(
        a, b, x0, y0, cfg.dt, cfg.n_steps, cfg.record_every, cfg.renormalize
    )
    _raise_for_status(status, err_step)
    return Trajectory(times=times, x=xs, y=ys,
                      converged=bool(residual < RESIDUAL_TOL),
                      final_residual=float(residual))
