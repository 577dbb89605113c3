"""Adaptive-order, adaptive-step Radau IIA integrator.

The stage equations are solved by simplified Newton iteration in the
transformed variables W = (T^-1 x I) Z, where T block-diagonalizes the
inverse coefficient matrix.  Each iteration then solves one real n x n
system with matrix (gamma/dt) I - J and (s-1)/2 real 2n x 2n systems,
optionally factored in parallel.  Step size follows a Gustafssson-style
predictive controller on the embedded error estimate; the order follows
the iteration-count moving average kappa (raise below 2.75, drop above 8,
increments of 4 so the stage count stays odd).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import linalg
from .exceptions import (
    MaxNewtonFailures,
    NonFiniteState,
    SolverFailure,
    StepSizeUnderflow,
)
from .linalg import DOUBLE_BITS
from .spectral import build_transform
from .tableau import TableauCache, get_tableau

ORDERS = (5, 9, 13, 17, 21, 25)

KAPPA_RAISE = 2.75
KAPPA_DROP = 8.0
ORDER_STEP = 4
HIST_WEIGHT = 0.8

#: Newton safety factor applied to the rtol-derived iteration tolerance
KAPPA_NEWTON = 1e-2
#: relative dt change below which an existing factorization is kept
FACT_REUSE_RTOL = 0.2
#: convergence rate above which the Jacobian is considered stale
THETA_JAC_REFRESH = 1e-3


def stages_for_order(order: int) -> int:
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order}")
    return (order + 1) // 2


@dataclass
class OdeProblem:
    """Initial value problem dy/dt = f(t, y), y(t0) = y0."""

    f: callable
    y0: np.ndarray
    t_span: tuple
    jac: callable | None = None

    def __post_init__(self):
        t0, tf = self.t_span
        if not float(tf) > float(t0):
            raise ValueError("t_span must satisfy tf > t0")

    @property
    def n(self) -> int:
        return len(self.y0)


@dataclass
class SolverOptions:
    rtol: float = 1e-6
    atol: object = 1e-8          # scalar or per-component array
    min_order: int = 5
    max_order: int = 25
    initial_order: int = 5
    max_newton_iters: int | None = None   # default 7 + (s - 3)
    dt_init: object = None
    dt_min_factor: float = 0.2
    dt_max_factor: float = 8.0
    safety: float = 0.9
    parallel_blocks: bool = False
    precision_bits: int = DOUBLE_BITS
    adaptive: bool = True        # False: fixed dt_init, no error control
    max_steps: int = 5_000_000
    cache: TableauCache | None = None

    def __post_init__(self):
        if float(self.rtol) <= 0 or np.min(np.atleast_1d(self.atol)) <= 0:
            raise ValueError("rtol and atol must be positive")
        for o in (self.min_order, self.max_order, self.initial_order):
            if o not in ORDERS:
                raise ValueError(f"orders must be in {ORDERS}, got {o}")
        if self.min_order > self.max_order:
            raise ValueError("min_order > max_order")
        if not self.adaptive and self.dt_init is None:
            raise ValueError("fixed-step mode requires dt_init")


@dataclass
class StepStats:
    n_steps: int = 0
    n_rejected: int = 0
    n_f_evals: int = 0
    n_jac_evals: int = 0
    n_lu_factorizations: int = 0
    n_newton_iters: int = 0


@dataclass
class Solution:
    ts: list
    ys: list
    stats: StepStats
    status: str
    orders: list = field(default_factory=list)

    @property
    def t_final(self):
        return self.ts[-1]

    @property
    def y_final(self):
        return self.ys[-1]


# ---------------------------------------------------------------------------
# Pure controller pieces
# ---------------------------------------------------------------------------

def adapt_order(iters: int, hist_iter: float, order: int,
                opts: SolverOptions) -> tuple[int, float]:
    """Kappa-based order selection; returns (new_order, new_hist_iter)."""
    kappa = hist_iter * HIST_WEIGHT + iters * (1.0 - HIST_WEIGHT)
    new_order = order
    if kappa < KAPPA_RAISE:
        new_order = order + ORDER_STEP
    elif kappa > KAPPA_DROP:
        new_order = order - ORDER_STEP
    new_order = min(max(new_order, opts.min_order), opts.max_order)
    return new_order, kappa


def step_size_update(err_norm: float, order: int, dt, prev_err, prev_dt,
                     opts: SolverOptions):
    """Predictive (Gustafsson) controller; elementary fallback when no
    previous accepted step is available (prev_err is None)."""
    s_emb = (order + 1) // 2     # the error estimate has order s
    k = 1.0 / (s_emb + 1)
    if err_norm <= 0:
        factor = opts.dt_max_factor
    else:
        factor = opts.safety * err_norm ** (-k)
        if prev_err is not None and prev_dt is not None:
            factor *= (prev_err / err_norm) ** k * float(dt / prev_dt)
        factor = min(max(factor, opts.dt_min_factor), opts.dt_max_factor)
    return dt * factor


def initial_dt(prob: OdeProblem, opts: SolverOptions):
    """Curvature-probe starting step (classic h-init heuristic)."""
    if opts.dt_init is not None:
        return opts.dt_init
    t0, tf = prob.t_span
    span = float(tf) - float(t0)
    y0 = np.asarray(prob.y0)
    f0 = np.asarray(prob.f(t0, y0))
    rtol = float(opts.rtol)
    atol = np.broadcast_to(np.atleast_1d(np.asarray(opts.atol, dtype=float)),
                           (len(y0),))
    sc = atol + rtol * np.abs(_floats(y0))
    d0 = math.sqrt(float(np.mean((_floats(y0) / sc) ** 2)))
    d1 = math.sqrt(float(np.mean((_floats(f0) / sc) ** 2)))
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6 * span
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, span)
    if d1 == 0.0:
        return span / 100.0
    y1 = y0 + h0 * f0
    f1 = np.asarray(prob.f(t0 + h0, y1))
    d2 = math.sqrt(float(np.mean(((_floats(f1) - _floats(f0)) / sc) ** 2))) / h0
    p = stages_for_order(opts.initial_order)  # error-controlling order
    dmax = max(d1, d2)
    if dmax <= 1e-15:
        h1 = max(1e-6 * span, h0 * 1e-3)
    else:
        h1 = (0.01 / dmax) ** (1.0 / (p + 1))
    return min(100.0 * h0, h1, span)


def _floats(vec) -> np.ndarray:
    arr = np.asarray(vec)
    if arr.dtype == object:
        return np.array([float(v) for v in arr])
    return arr.astype(float, copy=False)


# ---------------------------------------------------------------------------
# Block linear algebra
# ---------------------------------------------------------------------------

def _shifted(J: np.ndarray, shift):
    """shift * I - J in the dtype of J."""
    M = -J.copy()
    n = J.shape[0]
    for i in range(n):
        M[i, i] = M[i, i] + shift
    return M


def _pair_block(J: np.ndarray, alpha_dt, beta_dt):
    n = J.shape[0]
    M = np.zeros((2 * n, 2 * n), dtype=J.dtype)
    M[:n, :n] = _shifted(J, alpha_dt)
    M[n:, n:] = M[:n, :n]
    for i in range(n):
        M[i, n + i] = -beta_dt
        M[n + i, i] = beta_dt
    return M


def factor_blocks(gamma, pairs, J: np.ndarray, dt, parallel: bool = False):
    """LU-factor the real block and all 2n x 2n pair blocks."""
    mats = [_shifted(J, gamma / dt)]
    for alpha, beta in pairs:
        mats.append(_pair_block(J, alpha / dt, beta / dt))
    if parallel and len(mats) > 1:
        with ThreadPoolExecutor(max_workers=len(mats)) as ex:
            return list(ex.map(linalg.lu_factor, mats))
    return [linalg.lu_factor(M) for M in mats]


def solve_blocks(facts, W_rhs: np.ndarray, parallel: bool = False) -> np.ndarray:
    """Back-substitute stacked transformed right-hand sides (s, n)."""
    s, n = W_rhs.shape
    out = np.empty_like(W_rhs)

    def solve_one(j):
        if j == 0:
            return linalg.lu_solve(facts[0], W_rhs[0])
        i0 = 1 + 2 * (j - 1)
        rhs = np.concatenate([W_rhs[i0], W_rhs[i0 + 1]])
        return linalg.lu_solve(facts[j], rhs)

    nblocks = len(facts)
    if parallel and nblocks > 1:
        with ThreadPoolExecutor(max_workers=nblocks) as ex:
            results = list(ex.map(solve_one, range(nblocks)))
    else:
        results = [solve_one(j) for j in range(nblocks)]
    out[0] = results[0]
    for j in range(1, nblocks):
        i0 = 1 + 2 * (j - 1)
        out[i0] = results[j][:n]
        out[i0 + 1] = results[j][n:]
    return out


def solve_stage_system(transform, J: np.ndarray, dt, R: np.ndarray,
                       parallel: bool = False) -> np.ndarray:
    """Solve the full simplified-Newton stage system
    (a^-1/dt x I - I x J) dZ = R through the decoupled blocks.

    ``R`` is (s, n) in untransformed stage space; returns dZ of the same
    shape.  Used both by the integrator and as the fast side of the dense
    sn x sn oracle check.
    """
    facts = factor_blocks(transform.gamma, transform.pairs, J, dt, parallel)
    W = solve_blocks(facts, transform.T_inv @ R, parallel)
    return transform.T @ W


# ---------------------------------------------------------------------------
# Integrator
# ---------------------------------------------------------------------------

class _MethodData:
    """Per-(stage count, precision) immutable solver coefficients."""

    def __init__(self, s: int, bits: int, cache: TableauCache | None):
        tab = cache.get_or_build(s, bits) if cache else get_tableau(s, bits)
        tr = build_transform(tab)
        self.s = s
        self.tab = tab
        self.transform = tr
        self.c = tab.c
        self.gamma = tr.gamma
        self.pairs = tr.pairs
        self.T = tr.T
        self.T_inv = tr.T_inv
        self.a_inv = tr.a_inv
        self.e_err = (tab.b - tab.b_tilde) @ tr.a_inv
        self.b_tilde_0 = tab.b_tilde_0
        self.max_newton_iters = 7 + (s - 3)


class _Radau:
    def __init__(self, prob: OdeProblem, opts: SolverOptions):
        self.prob = prob
        self.opts = opts
        self.bits = opts.precision_bits
        self.n = prob.n
        self.eps = linalg.eps_for_bits(self.bits)
        self.stats = StepStats()
        self.rtol = float(opts.rtol)
        atol = np.atleast_1d(np.asarray(opts.atol, dtype=float))
        self.atol = np.broadcast_to(atol, (self.n,)).copy()
        self._md_cache: dict[int, _MethodData] = {}
        self._J = None
        self._jac_version = -1
        self._jac_t = None
        self._fact = None            # (dt, jac_version, s, facts)
        self._prev_stage = None      # (s, c, Z, dt)
        self._last_theta = None
        # tol_newton is calibrated so KAPPA_NEWTON * tol_newton equals the
        # classic simplified-Newton stopping threshold; the kappa order
        # thresholds assume iteration counts produced at that strictness.
        # The sqrt(rtol) term is floored at 1e-7 (its tightest value in
        # double precision): the iteration norm is already scaled by the
        # local tolerance, so tightening further only inflates iteration
        # counts and starves order raises
        tol = 100.0 * max(10.0 * self.eps / self.rtol,
                          min(0.03, max(math.sqrt(self.rtol), 1e-7)))
        self.newton_tol = KAPPA_NEWTON * tol

    # -- numeric helpers ----------------------------------------------------

    def _vec(self, values) -> np.ndarray:
        if self.bits <= DOUBLE_BITS:
            return np.asarray(values, dtype=float)
        arr = np.asarray(values, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(arr.shape):
            out[idx] = mpmath.mpf(arr[idx])
        return out

    def _zeros(self, shape) -> np.ndarray:
        if self.bits <= DOUBLE_BITS:
            return np.zeros(shape)
        out = np.empty(shape, dtype=object)
        out[...] = mpmath.mpf(0)
        return out

    def _eval_f(self, t, y) -> np.ndarray:
        self.stats.n_f_evals += 1
        return self._vec(self.prob.f(t, y))

    def _finite(self, arr) -> bool:
        if arr.dtype == object:
            return all(mpmath.isfinite(v) for v in arr.flat)
        return bool(np.all(np.isfinite(arr)))

    def _scaled_rms(self, arr, scale) -> float:
        flat = _floats(np.asarray(arr).reshape(-1))
        sc = np.tile(scale, flat.size // scale.size)
        return math.sqrt(float(np.mean((flat / sc) ** 2)))

    # -- method data / Jacobian / factorizations -----------------------------

    def _method_data(self, s: int) -> _MethodData:
        md = self._md_cache.get(s)
        if md is None:
            md = _MethodData(s, self.bits, self.opts.cache)
            self._md_cache[s] = md
        return md

    def _compute_jacobian(self, t, y):
        self.stats.n_jac_evals += 1
        self._jac_t = float(t)
        if self.prob.jac is not None:
            J = self.prob.jac(t, y)
            if self.bits <= DOUBLE_BITS:
                J = np.asarray(J, dtype=float)
            else:
                J = np.asarray(J, dtype=object)
        else:
            J = self._fd_jacobian(t, y)
        self._J = J
        self._jac_version += 1

    def _fd_jacobian(self, t, y):
        n = self.n
        f0 = self._eval_f(t, y)
        J = self._zeros((n, n))
        sq = self.eps ** 0.5
        for i in range(n):
            hi = sq * max(abs(float(y[i])), float(self.atol[i]))
            yp = y.copy()
            yp[i] = yp[i] + hi
            fi = self._eval_f(t, yp)
            for r in range(n):
                J[r, i] = (fi[r] - f0[r]) / hi
        return J

    def _ensure_factorization(self, md: _MethodData, dt):
        # keep the current factorization (foregoing up to 20% of growth)
        # when the proposal is only modestly larger; reductions and bigger
        # growth always refactor at the proposed dt
        f = self._fact
        if f is not None and f[1] == self._jac_version and f[2] == md.s:
            ratio = float(dt) / float(f[0])
            if 1.0 <= ratio <= 1.0 + FACT_REUSE_RTOL:
                return f[0], f[3]
        facts = factor_blocks(md.gamma, md.pairs, self._J, dt,
                              self.opts.parallel_blocks)
        self.stats.n_lu_factorizations += len(facts)
        self._fact = (dt, self._jac_version, md.s, facts)
        return dt, facts

    # -- stage predictor -----------------------------------------------------

    def _stage_guess(self, md: _MethodData, dt) -> np.ndarray:
        prev = self._prev_stage
        if prev is None or prev[0] != md.s:
            return self._zeros((md.s, self.n))
        _, c_old, Z_old, dt_old = prev
        if float(dt) / float(dt_old) > 2.0:
            # extrapolating a degree-s polynomial far past its data is
            # worse than starting from rest
            return self._zeros((md.s, self.n))
        s = md.s
        ratio = dt / dt_old
        # collocation polynomial through (0, 0) and (c_old, Z_old) rows,
        # extrapolated to 1 + c_new * ratio, offset to the new base point
        xs = [c_old[j] for j in range(s)]
        Z0 = self._zeros((s, self.n))
        z_end = Z_old[-1]
        for i in range(s):
            xi = 1 + md.c[i] * ratio
            # Lagrange weights over nodes {0} + xs; the node-0 value is 0
            w_total = self._zeros(s)
            for k in range(s):
                num = xi
                den = xs[k]
                for m in range(s):
                    if m != k:
                        num = num * (xi - xs[m])
                        den = den * (xs[k] - xs[m])
                w_total[k] = num / den
            row = self._zeros(self.n)
            for k in range(s):
                row = row + w_total[k] * Z_old[k]
            Z0[i] = row - z_end
        return Z0

    # -- Newton iteration ----------------------------------------------------

    def _newton(self, md: _MethodData, t, y, dt, facts, scale):
        s, n = md.s, self.n
        Z = self._stage_guess(md, dt)
        W = md.T_inv @ Z
        F = self._zeros((s, n))
        max_iters = (self.opts.max_newton_iters
                     if self.opts.max_newton_iters is not None
                     else md.max_newton_iters)
        dyno_old = None
        theta = None
        iters = 0
        converged = False
        for k in range(1, max_iters + 1):
            iters = k
            bad = False
            for i in range(s):
                F[i] = self._eval_f(t + md.c[i] * dt, y + Z[i])
                if not self._finite(F[i]):
                    bad = True
                    break
            if bad:
                break
            TF = md.T_inv @ F
            rhs = self._zeros((s, n))
            rhs[0] = TF[0] - (md.gamma / dt) * W[0]
            for j, (alpha, beta) in enumerate(md.pairs):
                i0 = 1 + 2 * j
                rhs[i0] = TF[i0] - ((alpha / dt) * W[i0] - (beta / dt) * W[i0 + 1])
                rhs[i0 + 1] = TF[i0 + 1] - ((beta / dt) * W[i0] + (alpha / dt) * W[i0 + 1])
            dW = solve_blocks(facts, rhs, self.opts.parallel_blocks)
            W = W + dW
            Z = md.T @ W
            dyno = self._scaled_rms(dW, scale)
            if not math.isfinite(dyno):
                break
            if dyno == 0.0 or (k == 1 and dyno <= self.newton_tol):
                converged = True
                break
            if dyno_old is not None:
                theta = dyno / dyno_old
                self._last_theta = theta
                if theta >= 1.0:
                    break
                eta = theta / (1.0 - theta)
                if eta * dyno <= self.newton_tol:
                    converged = True
                    break
                # hopeless: predicted terminal error still above tolerance
                if (k < max_iters and
                        theta ** (max_iters - k) / (1.0 - theta) * dyno
                        > self.newton_tol):
                    break
            dyno_old = dyno
        self.stats.n_newton_iters += iters
        return converged, iters, Z, theta

    # -- main loop -----------------------------------------------------------

    def run(self) -> Solution:
        opts = self.opts
        prob = self.prob
        bits = self.bits
        to_r = lambda x: x if bits <= DOUBLE_BITS and isinstance(x, float) \
            else linalg.to_real(x, bits)
        t = to_r(prob.t_span[0])
        tf = to_r(prob.t_span[1])
        y = self._vec(prob.y0)
        f_start = self._eval_f(t, y)
        if not self._finite(f_start):
            raise NonFiniteState("f(t0, y0) is not finite")
        span = tf - t

        order = opts.initial_order if opts.adaptive else opts.min_order
        order = min(max(order, opts.min_order), opts.max_order)
        s = stages_for_order(order)

        dt = to_r(initial_dt(prob, opts))
        if float(dt) <= 0:
            raise ValueError("dt_init must be positive")
        dt = min(dt, span)
        fixed_dt = None if opts.adaptive else dt

        ts, ys, orders = [t], [y.copy()], []
        hist_iter = 2.0
        prev_err = None
        prev_dt = None
        after_reject = True          # elementary controller on first step
        rejected_since_accept = False
        consecutive_failures = 0
        f0 = f_start
        attempts = 0
        tiny = 10.0 * self.eps

        while float(tf - t) > tiny * max(1.0, abs(float(t))):
            attempts += 1
            if attempts > opts.max_steps:
                raise SolverFailure(
                    f"exceeded {opts.max_steps} step attempts at t={float(t)}")

            remaining = tf - t
            dt_step = dt
            if float(dt_step) >= 0.98 * float(remaining):
                dt_step = remaining
            if float(dt_step) < self.eps * max(abs(float(t)), float(span)):
                raise StepSizeUnderflow(
                    f"dt={float(dt_step):g} underflowed at t={float(t)}")

            md = self._method_data(s)
            if self._J is None or self._jac_version < 0:
                self._compute_jacobian(t, y)
            dt_used, facts = self._ensure_factorization(md, dt_step)
            if float(t + dt_used) <= float(tf) or dt_used is dt_step:
                dt_step = dt_used
            else:
                self._fact = None
                dt_step, facts = self._ensure_factorization(md, dt_step)

            scale = self.atol + self.rtol * np.abs(_floats(y))
            converged, iters, Z, theta = self._newton(md, t, y, dt_step,
                                                      facts, scale)

            if not converged:
                consecutive_failures += 1
                self.stats.n_rejected += 1
                if consecutive_failures > 15:
                    raise MaxNewtonFailures(
                        f"Newton failed {consecutive_failures} times at "
                        f"t={float(t)}")
                if not opts.adaptive:
                    raise MaxNewtonFailures(
                        f"Newton failed in fixed-step mode at t={float(t)}")
                # a failed iteration counts as a maximally expensive one,
                # so kappa can demand an order drop before the retry
                if opts.min_order < opts.max_order:
                    max_iters = (opts.max_newton_iters
                                 if opts.max_newton_iters is not None
                                 else md.max_newton_iters)
                    new_order, hist_iter = adapt_order(max_iters, hist_iter,
                                                       order, opts)
                    if new_order < order:
                        order = new_order
                        s = stages_for_order(order)
                        self._prev_stage = None
                        self._fact = None
                # retry with a current Jacobian and a halved step
                if self._jac_t != float(t):
                    self._compute_jacobian(t, y)
                self._fact = None
                dt = dt_step * 0.5
                after_reject = True
                rejected_since_accept = True
                continue

            y_new = y + Z[-1]

            if opts.adaptive:
                # raw embedded difference d = e_err @ Z - dt b~0 f0, smoothed
                # by ((gamma/dt) I - J)^-1 (gamma/dt) to tame the stiff
                # overestimate; the real Newton block is already factored
                g = (md.gamma / dt_step) * (md.e_err @ Z)
                v = linalg.lu_solve(facts[0], g - f0)
                scale_acc = self.atol + self.rtol * np.maximum(
                    np.abs(_floats(y)), np.abs(_floats(y_new)))
                err = self._scaled_rms(v, scale_acc)
                if err >= 1.0 and after_reject and self._finite(v):
                    # refined second pass at the perturbed state
                    v = linalg.lu_solve(facts[0],
                                        g - self._eval_f(t, y + v))
                    err = self._scaled_rms(v, scale_acc)
                if not math.isfinite(err):
                    err = float("inf")
            else:
                err = 0.0

            if opts.adaptive and err > 1.0:
                consecutive_failures += 1
                self.stats.n_rejected += 1
                if consecutive_failures > 50:
                    raise SolverFailure(
                        f"persistent error-test failures at t={float(t)}")
                dt = step_size_update(err, order, dt_step, None, None, opts)
                after_reject = True
                rejected_since_accept = True
                if theta is not None and theta > THETA_JAC_REFRESH:
                    self._compute_jacobian(t, y)
                continue

            # accept
            if not self._finite(y_new):
                raise NonFiniteState(f"state became non-finite at t={float(t)}")
            consecutive_failures = 0
            t = t + dt_step
            y = y_new
            ts.append(t)
            ys.append(y.copy())
            orders.append(order)
            self.stats.n_steps += 1
            self._prev_stage = (md.s, md.c, Z, dt_step)

            if float(tf - t) <= tiny * max(1.0, abs(float(t))):
                break

            f0 = self._eval_f(t, y)
            if not self._finite(f0):
                raise NonFiniteState(f"f non-finite at accepted t={float(t)}")

            if opts.adaptive:
                if opts.min_order < opts.max_order:
                    new_order, hist_iter = adapt_order(iters, hist_iter,
                                                       order, opts)
                    if new_order != order:
                        order = new_order
                        s = stages_for_order(order)
                        self._prev_stage = None
                        self._fact = None
                else:
                    _, hist_iter = adapt_order(iters, hist_iter, order, opts)
                if after_reject or prev_err is None:
                    dt = step_size_update(err, order, dt_step, None, None, opts)
                    if rejected_since_accept:
                        # no growth straight after a rejection
                        dt = min(dt, dt_step)
                else:
                    dt = step_size_update(err, order, dt_step, prev_err,
                                          prev_dt, opts)
                prev_err = max(err, 1e-10)
                prev_dt = dt_step
                after_reject = False
                rejected_since_accept = False
            else:
                dt = fixed_dt

            if theta is not None and theta > THETA_JAC_REFRESH:
                self._compute_jacobian(t, y)

        return Solution(ts=ts, ys=ys, stats=self.stats, status="success",
                        orders=orders)


def solve(prob: OdeProblem, opts: SolverOptions | None = None) -> Solution:
    """Integrate the problem; raises a SolverFailure subclass on failure."""
    opts = opts or SolverOptions()
    bits = opts.precision_bits
    ctx = mpmath.workprec(bits) if bits > DOUBLE_BITS else nullcontext()
    with ctx:
        return _Radau(prob, opts).run()
