"""Pure-Python/numpy kernel backend.

Mirrors the compiled extension (`egtsim._kernels._core`) function for
function.  The stochastic kernels reproduce the compiled backend bit for bit:
the splitmix64 streams are integer-exact under numpy's wrapping uint64
arithmetic, and exponential transforms go through math.log (the same libm
call the C code makes) rather than numpy's vectorized log.  The RK4 kernels
use numpy matvecs, whose summation order may differ from the C loops in the
last ulp; callers compare those across backends with tolerances.

Status codes returned by the integrators:
    0 ok, 1 non-finite state, 2 negative share beyond -1e-12, 3 zero
    fitness denominator (Moran only).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"

NEG_TOL = -1e-12

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_DERIVE_SALT = np.uint64(0x6A09E667F3BCC909)
_U64 = np.uint64


def _mix64_vec(z):
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def _derive_vec(master: int, indices: np.ndarray) -> np.ndarray:
    # 1-element array, not a 0-d scalar: numpy warns on scalar uint64 wraparound.
    base = _mix64_vec(np.array([master], dtype=np.uint64) ^ _DERIVE_SALT)
    return _mix64_vec(base + _GOLDEN * (indices.astype(np.uint64) + _U64(1)))


def _next(state):
    state = state + _GOLDEN
    return state, _mix64_vec(state)


def _unit(z):
    return (z >> _U64(11)).astype(np.float64) * 2.0**-53


def _exp_transform(u: np.ndarray, rate: float) -> np.ndarray:
    # math.log == C log (same libm); np.log may route through SIMD variants.
    out = np.empty(u.size)
    for k in range(u.size):
        out[k] = -math.log(u[k]) / rate
    return out


# ---------------------------------------------------------------------------
# replicator integrators
# ---------------------------------------------------------------------------

def _record_count(n_steps: int, record_every: int) -> int:
    extra = 0 if n_steps % record_every == 0 else 1
    return 1 + n_steps // record_every + extra


def rk4_replicator(a, x0, dt, n_steps, record_every, renormalize):
    """Classical fixed-step RK4 for single-population replicator dynamics.

    Returns (times, states, residual, status, err_step).
    """
    a = np.ascontiguousarray(a, dtype=float)
    x = np.array(x0, dtype=float)
    n_rec = _record_count(n_steps, record_every)
    times = np.empty(n_rec)
    states = np.empty((n_rec, x.size))

    def rhs(u):
        au = a @ u
        return u * (au - u @ au)

    times[0] = 0.0
    states[0] = x
    rec = 1
    # divergence shows up as inf/nan and is reported via status, not warnings
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, n_steps + 1):
            k1 = rhs(x)
            k2 = rhs(x + (0.5 * dt) * k1)
            k3 = rhs(x + (0.5 * dt) * k2)
            k4 = rhs(x + dt * k3)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                return times[:rec], states[:rec], math.nan, 1, step
            if float(x.min()) < NEG_TOL:
                return times[:rec], states[:rec], math.nan, 2, step
            x = np.maximum(x, 0.0)
            if renormalize:
                x = x / x.sum()
            if step % record_every == 0 or step == n_steps:
                times[rec] = step * dt
                states[rec] = x
                rec += 1
    residual = float(np.max(np.abs(rhs(x))))
    return times, states, residual, 0, -1


def rk4_bimatrix(a, b, x0, y0, dt, n_steps, record_every, renormalize):
    """Coupled two-population replicator dynamics, same stepping contract.

    Returns (times, xs, ys, residual, status, err_step).
    """
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    x = np.array(x0, dtype=float)
    y = np.array(y0, dtype=float)
    n_rec = _record_count(n_steps, record_every)
    times = np.empty(n_rec)
    xs = np.empty((n_rec, x.size))
    ys = np.empty((n_rec, y.size))

    def rhs(u, w):
        au = a @ w
        bu = u @ b
        return u * (au - u @ au), w * (bu - w @ bu)

    times[0] = 0.0
    xs[0] = x
    ys[0] = y
    rec = 1
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, n_steps + 1):
            kx1, ky1 = rhs(x, y)
            kx2, ky2 = rhs(x + (0.5 * dt) * kx1, y + (0.5 * dt) * ky1)
            kx3, ky3 = rhs(x + (0.5 * dt) * kx2, y + (0.5 * dt) * ky2)
            kx4, ky4 = rhs(x + dt * kx3, y + dt * ky3)
            x = x + (dt / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4)
            y = y + (dt / 6.0) * (ky1 + 2.0 * ky2 + 2.0 * ky3 + ky4)
            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
                return times[:rec], xs[:rec], ys[:rec], math.nan, 1, step
            if float(x.min()) < NEG_TOL or float(y.min()) < NEG_TOL:
                return times[:rec], xs[:rec], ys[:rec], math.nan, 2, step
            x = np.maximum(x, 0.0)
            y = np.maximum(y, 0.0)
            if renormalize:
                x = x / x.sum()
                y = y / y.sum()
            if step % record_every == 0 or step == n_steps:
                times[rec] = step * dt
                xs[rec] = x
                ys[rec] = y
                rec += 1
    dx, dy = rhs(x, y)
    residual = float(max(np.max(np.abs(dx)), np.max(np.abs(dy))))
    return times, xs, ys, residual, 0, -1


# ---------------------------------------------------------------------------
# Moran birth-death chains
# ---------------------------------------------------------------------------

def moran_trials(a00, a01, a10, a11, n, w, init, max_steps, trials, seed, trial_offset=0):
    """Run independent Moran chains in lockstep.

    Each trial k draws from its own splitmix64 stream seeded by
    derive(seed, trial_offset + k); two uniforms are consumed per step
    (birth choice, death choice), matching the compiled per-trial loop
    exactly.  Returns (outcomes, status): outcome 0 = mutants extinct,
    1 = fixed, 2 = censored at max_steps.
    """
    idx = np.arange(trial_offset, trial_offset + trials, dtype=np.uint64)
    state = _derive_vec(seed, idx)
    i = np.full(trials, float(init))
    outcome = np.full(trials, 2, dtype=np.uint8)
    active = np.ones(trials, dtype=bool)
    nd = float(n)
    step = 0
    while step < max_steps and active.any():
        st = state[active]
        st, z1 = _next(st)
        st, z2 = _next(st)
        state[active] = st
        u1 = _unit(z1)
        u2 = _unit(z2)
        di = i[active]
        pi_a = (a00 * (di - 1.0) + a01 * (nd - di)) / (nd - 1.0)
        pi_b = (a10 * di + a11 * (nd - di - 1.0)) / (nd - 1.0)
        fa = 1.0 - w + w * pi_a
        fb = 1.0 - w + w * pi_b
        num = di * fa
        den = num + (nd - di) * fb
        if np.any(den <= 0.0):
            return outcome, 3
        birth_a = u1 < (num / den)
        death_a = u2 < (di / nd)
        di = di + (birth_a & ~death_a).astype(np.float64) - (~birth_a & death_a).astype(np.float64)
        i[active] = di
        done = (di == 0.0) | (di == nd)
        if done.any():
            act_idx = np.flatnonzero(active)
            outcome[act_idx[di == nd]] = 1
            outcome[act_idx[di == 0.0]] = 0
            active[act_idx[done]] = False
        step += 1
    return outcome, 0


# ---------------------------------------------------------------------------
# war-of-attrition contests
# ---------------------------------------------------------------------------

PERSISTENCE_PURE = 0
PERSISTENCE_EXPONENTIAL = 1


def contest_trials(kind_a, par_a, kind_b, par_b, v, c_a, c_b, trials, seed, trial_offset=0):
    """Batch of independent sealed-draw attrition contests.

    Per-contest stream draw order: player A's persistence time (if
    exponential), player B's (if exponential), then the tie coin.  The coin
    output is consumed unconditionally here but only *used* on exact ties;
    since nothing is drawn after it, non-tie contests are unaffected and the
    values agree with the one-at-a-time scalar path.

    Returns (winners, durations, payoffs_a, payoffs_b).
    """
    idx = np.arange(trial_offset, trial_offset + trials, dtype=np.uint64)
    state = _derive_vec(seed, idx)
    if kind_a == PERSISTENCE_EXPONENTIAL:
        state, z = _next(state)
        t_a = _exp_transform(1.0 - _unit(z), par_a)
    else:
        t_a = np.full(trials, float(par_a))
    if kind_b == PERSISTENCE_EXPONENTIAL:
        state, z = _next(state)
        t_b = _exp_transform(1.0 - _unit(z), par_b)
    else:
        t_b = np.full(trials, float(par_b))
    state, z_coin = _next(state)

    a_wins = t_a > t_b
    tie = t_a == t_b
    if tie.any():
        a_wins = np.where(tie, (z_coin >> _U64(63)) == _U64(0), a_wins)
    duration = np.minimum(t_a, t_b)
    pay_a = np.where(a_wins, v - c_a * duration, -c_a * duration)
    pay_b = np.where(a_wins, -c_b * duration, v - c_b * duration)
    winner = np.where(a_wins, 0, 1).astype(np.uint8)
    return winner, duration, pay_a, pay_b
