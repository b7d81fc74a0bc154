# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: tight loops behind egtsim's dynamics and
Monte Carlo modules.

Function-for-function mirror of egtsim._kernels.pure; see that module for
the semantics.  The splitmix64 streams here are bit-identical to the pure
backend's; the RK4 loops agree with the numpy fallback to the last few ulps
(summation order differs).
"""

from libc.math cimport log, fabs, isfinite, NAN
from libc.stdint cimport uint64_t, uint8_t

import numpy as np

BACKEND = "compiled"

NEG_TOL = -1e-12

cdef double _NEG_TOL = -1e-12

cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15UL
cdef uint64_t _MIX1 = 0xBF58476D1CE4E5B9UL
cdef uint64_t _MIX2 = 0x94D049BB133111EBUL
cdef uint64_t _DERIVE_SALT = 0x6A09E667F3BCC909UL
cdef double _INV53 = 1.0 / 9007199254740992.0  # 2**-53


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


cdef inline uint64_t _derive(uint64_t master, uint64_t index) noexcept nogil:
    cdef uint64_t s = _mix64(master ^ _DERIVE_SALT)
    return _mix64(s + _GOLDEN * (index + 1))


cdef inline uint64_t _next_u64(uint64_t *state) noexcept nogil:
    state[0] = state[0] + _GOLDEN
    return _mix64(state[0])


cdef inline double _unit(uint64_t *state) noexcept nogil:
    return <double>(_next_u64(state) >> 11) * _INV53


# ---------------------------------------------------------------------------
# replicator integrators
# ---------------------------------------------------------------------------

cdef void _repl_rhs(const double[:, ::1] a, double[::1] x, double[::1] out, int n) noexcept nogil:
    cdef int i, j
    cdef double mean = 0.0, acc
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += a[i, j] * x[j]
        out[i] = acc
    for i in range(n):
        mean += x[i] * out[i]
    for i in range(n):
        out[i] = x[i] * (out[i] - mean)


def _record_count(n_steps, record_every):
    extra = 0 if n_steps % record_every == 0 else 1
    return 1 + n_steps // record_every + extra


def rk4_replicator(a, x0, double dt, int n_steps, int record_every, bint renormalize):
    """Classical fixed-step RK4 for single-population replicator dynamics.

    Returns (times, states, residual, status, err_step).
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[:, ::1] am = a
    cdef int n = am.shape[0]
    n_rec = _record_count(n_steps, record_every)
    times_arr = np.empty(n_rec)
    states_arr = np.empty((n_rec, n))
    cdef double[::1] times = times_arr
    cdef double[:, ::1] states = states_arr
    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    work = np.empty((5, n))
    cdef double[:, ::1] wk = work
    cdef double[::1] k1 = wk[0], k2 = wk[1], k3 = wk[2], k4 = wk[3], xt = wk[4]
    cdef int step, i, rec = 1, status = 0, err_step = -1
    cdef double s, lo, residual

    times[0] = 0.0
    for i in range(n):
        states[0, i] = x[i]

    with nogil:
        for step in range(1, n_steps + 1):
            _repl_rhs(am, x, k1, n)
            for i in range(n):
                xt[i] = x[i] + (0.5 * dt) * k1[i]
            _repl_rhs(am, xt, k2, n)
            for i in range(n):
                xt[i] = x[i] + (0.5 * dt) * k2[i]
            _repl_rhs(am, xt, k3, n)
            for i in range(n):
                xt[i] = x[i] + dt * k3[i]
            _repl_rhs(am, xt, k4, n)
            lo = 0.0
            for i in range(n):
                x[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                if not isfinite(x[i]):
                    status = 1
                if x[i] < lo:
                    lo = x[i]
            if status:
                err_step = step
                break
            if lo < _NEG_TOL:
                status = 2
                err_step = step
                break
            s = 0.0
            for i in range(n):
                if x[i] < 0.0:
                    x[i] = 0.0
                s += x[i]
            if renormalize:
                for i in range(n):
                    x[i] = x[i] / s
            if step % record_every == 0 or step == n_steps:
                times[rec] = step * dt
                for i in range(n):
                    states[rec, i] = x[i]
                rec += 1

    if status:
        return times_arr[:rec], states_arr[:rec], NAN, status, err_step
    _repl_rhs(am, x, k1, n)
    residual = 0.0
    for i in range(n):
        if fabs(k1[i]) > residual:
            residual = fabs(k1[i])
    return times_arr, states_arr, residual, 0, -1


cdef void _bimat_rhs(const double[:, ::1] a, const double[:, ::1] b,
                     double[::1] x, double[::1] y,
                     double[::1] outx, double[::1] outy,
                     int n, int m) noexcept nogil:
    cdef int i, j
    cdef double mean, acc
    for i in range(n):
        acc = 0.0
        for j in range(m):
            acc += a[i, j] * y[j]
        outx[i] = acc
    mean = 0.0
    for i in range(n):
        mean += x[i] * outx[i]
    for i in range(n):
        outx[i] = x[i] * (outx[i] - mean)
    for j in range(m):
        acc = 0.0
        for i in range(n):
            acc += b[i, j] * x[i]
        outy[j] = acc
    mean = 0.0
    for j in range(m):
        mean += y[j] * outy[j]
    for j in range(m):
        outy[j] = y[j] * (outy[j] - mean)


def rk4_bimatrix(a, b, x0, y0, double dt, int n_steps, int record_every, bint renormalize):
    """Coupled two-population replicator dynamics, same stepping contract.

    Returns (times, xs, ys, residual, status, err_step).
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    cdef const double[:, ::1] am = a
    cdef const double[:, ::1] bm = b
    cdef int n = am.shape[0]
    cdef int m = am.shape[1]
    n_rec = _record_count(n_steps, record_every)
    times_arr = np.empty(n_rec)
    xs_arr = np.empty((n_rec, n))
    ys_arr = np.empty((n_rec, m))
    cdef double[::1] times = times_arr
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] ys = ys_arr
    x_arr = np.array(x0, dtype=np.float64)
    y_arr = np.array(y0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] y = y_arr
    workx = np.empty((5, n))
    worky = np.empty((5, m))
    cdef double[:, ::1] wx = workx
    cdef double[:, ::1] wy = worky
    cdef double[::1] kx1 = wx[0], kx2 = wx[1], kx3 = wx[2], kx4 = wx[3], xt = wx[4]
    cdef double[::1] ky1 = wy[0], ky2 = wy[1], ky3 = wy[2], ky4 = wy[3], yt = wy[4]
    cdef int step, i, j, rec = 1, status = 0, err_step = -1
    cdef double s, lo, residual

    times[0] = 0.0
    for i in range(n):
        xs[0, i] = x[i]
    for j in range(m):
        ys[0, j] = y[j]

    with nogil:
        for step in range(1, n_steps + 1):
            _bimat_rhs(am, bm, x, y, kx1, ky1, n, m)
            for i in range(n):
                xt[i] = x[i] + (0.5 * dt) * kx1[i]
            for j in range(m):
                yt[j] = y[j] + (0.5 * dt) * ky1[j]
            _bimat_rhs(am, bm, xt, yt, kx2, ky2, n, m)
            for i in range(n):
                xt[i] = x[i] + (0.5 * dt) * kx2[i]
            for j in range(m):
                yt[j] = y[j] + (0.5 * dt) * ky2[j]
            _bimat_rhs(am, bm, xt, yt, kx3, ky3, n, m)
            for i in range(n):
                xt[i] = x[i] + dt * kx3[i]
            for j in range(m):
                yt[j] = y[j] + dt * ky3[j]
            _bimat_rhs(am, bm, xt, yt, kx4, ky4, n, m)
            lo = 0.0
            for i in range(n):
                x[i] = x[i] + (dt / 6.0) * (kx1[i] + 2.0 * kx2[i] + 2.0 * kx3[i] + kx4[i])
                if not isfinite(x[i]):
                    status = 1
                if x[i] < lo:
                    lo = x[i]
            for j in range(m):
                y[j] = y[j] + (dt / 6.0) * (ky1[j] + 2.0 * ky2[j] + 2.0 * ky3[j] + ky4[j])
                if not isfinite(y[j]):
                    status = 1
                if y[j] < lo:
                    lo = y[j]
            if status:
                err_step = step
                break
            if lo < _NEG_TOL:
                status = 2
                err_step = step
                break
            s = 0.0
            for i in range(n):
                if x[i] < 0.0:
                    x[i] = 0.0
                s += x[i]
            if renormalize:
                for i in range(n):
                    x[i] = x[i] / s
            s = 0.0
            for j in range(m):
                if y[j] < 0.0:
                    y[j] = 0.0
                s += y[j]
            if renormalize:
                for j in range(m):
                    y[j] = y[j] / s
            if step % record_every == 0 or step == n_steps:
                times[rec] = step * dt
                for i in range(n):
                    xs[rec, i] = x[i]
                for j in range(m):
                    ys[rec, j] = y[j]
                rec += 1

    if status:
        return times_arr[:rec], xs_arr[:rec], ys_arr[:rec], NAN, status, err_step
    _bimat_rhs(am, bm, x, y, kx1, ky1, n, m)
    residual = 0.0
    for i in range(n):
        if fabs(kx1[i]) > residual:
            residual = fabs(kx1[i])
    for j in range(m):
        if fabs(ky1[j]) > residual:
            residual = fabs(ky1[j])
    return times_arr, xs_arr, ys_arr, residual, 0, -1


# ---------------------------------------------------------------------------
# Moran birth-death chains
# ---------------------------------------------------------------------------

def moran_trials(double a00, double a01, double a10, double a11,
                 int n, double w, int init, long max_steps,
                 long trials, seed, long trial_offset=0):
    """Independent Moran chains, one splitmix64 stream per trial.

    Returns (outcomes, status): outcome 0 = mutants extinct, 1 = fixed,
    2 = censored at max_steps.
    """
    out_arr = np.empty(trials, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef uint64_t master = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef long k, step
    cdef uint64_t st
    cdef double nd = <double>n
    cdef double di, u1, u2, pi_a, pi_b, fa, fb, num, den
    cdef int status = 0
    cdef bint birth_a, death_a

    with nogil:
        for k in range(trials):
            st = _derive(master, <uint64_t>(trial_offset + k))
            di = <double>init
            out[k] = 2
            for step in range(max_steps):
                u1 = _unit(&st)
                u2 = _unit(&st)
                pi_a = (a00 * (di - 1.0) + a01 * (nd - di)) / (nd - 1.0)
                pi_b = (a10 * di + a11 * (nd - di - 1.0)) / (nd - 1.0)
                fa = 1.0 - w + w * pi_a
                fb = 1.0 - w + w * pi_b
                num = di * fa
                den = num + (nd - di) * fb
                if den <= 0.0:
                    status = 3
                    break
                birth_a = u1 < (num / den)
                death_a = u2 < (di / nd)
                if birth_a and not death_a:
                    di = di + 1.0
                elif death_a and not birth_a:
                    di = di - 1.0
                if di == 0.0:
                    out[k] = 0
                    break
                if di == nd:
                    out[k] = 1
                    break
            if status:
                break

    return out_arr, status


# ---------------------------------------------------------------------------
# war-of-attrition contests
# ---------------------------------------------------------------------------

PERSISTENCE_PURE = 0
PERSISTENCE_EXPONENTIAL = 1


def contest_trials(int kind_a, double par_a, int kind_b, double par_b,
                   double v, double c_a, double c_b,
                   long trials, seed, long trial_offset=0):
    """Batch of independent sealed-draw attrition contests.

    Returns (winners, durations, payoffs_a, payoffs_b); see the pure backend
    for the stream-draw order contract.
    """
    win_arr = np.empty(trials, dtype=np.uint8)
    dur_arr = np.empty(trials)
    pa_arr = np.empty(trials)
    pb_arr = np.empty(trials)
    cdef uint8_t[::1] win = win_arr
    cdef double[::1] dur = dur_arr
    cdef double[::1] pa = pa_arr
    cdef double[::1] pb = pb_arr
    cdef uint64_t master = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef long k
    cdef uint64_t st
    cdef double t_a, t_b, d
    cdef bint a_wins

    with nogil:
        for k in range(trials):
            st = _derive(master, <uint64_t>(trial_offset + k))
            if kind_a == 1:
                t_a = -log(1.0 - _unit(&st)) / par_a
            else:
                t_a = par_a
            if kind_b == 1:
                t_b = -log(1.0 - _unit(&st)) / par_b
            else:
                t_b = par_b
            if t_a > t_b:
                a_wins = True
            elif t_a < t_b:
                a_wins = False
            else:
                a_wins = (_next_u64(&st) >> 63) == 0
            d = t_a if t_a < t_b else t_b
            if a_wins:
                pa[k] = v - c_a * d
                pb[k] = -c_b * d
                win[k] = 0
            else:
                pa[k] = -c_a * d
                pb[k] = v - c_b * d
                win[k] = 1
            dur[k] = d
    return win_arr, dur_arr, pa_arr, pb_arr
