"""Acceptance suite: one test per criterion, each printing a single
PASS/FAIL line (visible in verbose runs via capture bypass)."""

import math
import time

import mpmath
import numpy as np
import pytest
from scipy.stats import spearmanr

from radau.benchmark import SweepSpec, compute_reference, emit_csv, run_sweep
from radau.problems import get_problem, problem_registry
from radau.solver import OdeProblem, SolverOptions, solve, solve_stage_system
from radau.spectral import build_transform
from radau.tableau import build_tableau, get_tableau, stability_function

ALL_STAGES = (1, 3, 5, 7, 9, 11, 13)


def _report(capsys, num, desc, ok, extra=""):
    with capsys.disabled():
        tail = f" ({extra})" if extra else ""
        print(f"\nacceptance {num} [{desc}]: {'PASS' if ok else 'FAIL'}{tail}")
    assert ok, f"acceptance criterion {num} failed: {desc} {extra}"


def test_criterion_1_tableau_identities(capsys):
    bits = 256
    budget = mpmath.mpf(2) ** -200
    t0 = time.perf_counter()
    worst = mpmath.mpf(0)
    for s in ALL_STAGES:
        tab = build_tableau(s, bits)
        with mpmath.workprec(bits + 10):
            c = [mpmath.mpf(x) for x in tab.c]
            assert c[-1] == 1
            for i in range(s):
                for k in range(1, s + 1):
                    acc = mpmath.fsum(mpmath.mpf(tab.a[i, j]) * c[j] ** (k - 1)
                                      for j in range(s))
                    worst = max(worst, abs(acc - c[i] ** k / k))
            worst = max(worst, abs(mpmath.fsum(tab.b) - 1))
            worst = max(worst, abs(mpmath.fsum(tab.b_tilde)
                                   + mpmath.mpf(tab.b_tilde_0) - 1))
            for k in range(1, 2 * s):
                acc = mpmath.fsum(mpmath.mpf(tab.b[j]) * c[j] ** (k - 1)
                                  for j in range(s))
                worst = max(worst, abs(acc - mpmath.mpf(1) / k))
    elapsed = time.perf_counter() - t0
    ok = worst < budget and elapsed < 10.0
    _report(capsys, 1, "tableau identities s=1..13 at 256-bit", ok,
            f"max residual {mpmath.nstr(worst, 3)}, {elapsed:.1f}s")


def test_criterion_2_printed_spectral_values(capsys):
    st = build_transform(get_tableau(3))
    ok = abs(st.gamma - 3.6378342527) < 1e-9
    alpha, beta = st.pairs[0]
    ok &= abs(alpha - 2.681082873627) < 1e-9
    ok &= abs(beta - 3.0504301992474) < 1e-9
    M = st.T_inv @ st.a_inv @ st.T
    printed = np.array([[3.64, 0.0, 0.0],
                        [0.0, 2.68, -3.05],
                        [0.0, 3.05, 2.68]])
    ok &= bool(np.max(np.abs(M - printed)) < 0.005)
    _report(capsys, 2, "printed eigenvalues and block-diagonal form", ok)


def test_criterion_3_stability(capsys):
    ok = True
    worst_left, worst_axis = 0.0, 0.0
    for s in ALL_STAGES:
        tab = get_tableau(s)
        left = abs(stability_function(tab, -1e8))
        worst_left = max(worst_left, left)
        ok &= left < 1e-6
        for y in (0.1, 1.0, 10.0, 100.0):
            mag = abs(stability_function(tab, 1j * y))
            worst_axis = max(worst_axis, mag)
            ok &= mag <= 1.0 + 1e-10
    _report(capsys, 3, "L-stability and imaginary-axis contraction", ok,
            f"max |R(-1e8)| {worst_left:.2e}, max axis {worst_axis:.12f}")


def test_criterion_4_convergence_order(capsys):
    t0 = time.perf_counter()
    ok = True
    details = []
    with mpmath.workprec(256):
        for s, order in ((3, 5), (5, 9)):
            errs = []
            for k in range(7):
                dt = mpmath.mpf(1) / 10 / 2 ** k
                prob = OdeProblem(f=lambda t, y: -y,
                                  y0=np.array([mpmath.mpf(1)], dtype=object),
                                  t_span=(mpmath.mpf(0), mpmath.mpf(1)))
                sol = solve(prob, SolverOptions(adaptive=False, dt_init=dt,
                                                min_order=order, max_order=order,
                                                initial_order=order,
                                                precision_bits=256))
                errs.append(abs(sol.y_final[0] - mpmath.exp(-1)))
            slopes = [float(mpmath.log(errs[i] / errs[i + 1]) / mpmath.log(2))
                      for i in range(6)]
            ok &= min(slopes) >= 2 * s - 1 - 0.25
            details.append(f"s={s}: min slope {min(slopes):.2f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30.0
    _report(capsys, 4, "fixed-step observed order at 256-bit", ok,
            "; ".join(details) + f", {elapsed:.1f}s")


def test_criterion_5_block_solve_oracle(capsys):
    tr = build_transform(get_tableau(3))
    rng = np.random.default_rng(42)
    eps = np.finfo(float).eps
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 5))
        J = rng.standard_normal((n, n))
        dt = float(10.0 ** rng.uniform(-3, 0))
        R = rng.standard_normal((3, n))
        got = solve_stage_system(tr, J, dt, R)
        M = np.kron(tr.a_inv, np.eye(n)) / dt - np.kron(np.eye(3), J)
        ref = np.linalg.solve(M, R.reshape(-1)).reshape(3, n)
        rel = np.max(np.abs(got - ref)) / max(1.0, np.max(np.abs(ref)))
        worst = max(worst, rel)
    ok = worst < 1e3 * eps
    _report(capsys, 5, "block solve vs dense stage system", ok,
            f"worst relative deviation {worst:.2e}")


def test_criterion_6_benchmark_protocols(capsys):
    t0 = time.perf_counter()
    ok = True
    details = []
    for name, named in problem_registry().items():
        pr = named.protocol
        spec = SweepSpec(problem=name, rtol_exponents=pr.rtol_exponents,
                         atol_offset=pr.atol_offset, ref_tol=pr.ref_tol)
        recs = run_sweep(spec, timed=False)
        good = [r for r in recs if r.status == "success"]
        ok &= len(good) == len(recs)
        rho = spearmanr([r.rtol for r in good],
                        [r.error for r in good]).statistic
        ok &= rho > 0
        details.append(f"{name} {len(good)}/{len(recs)} rho={rho:.2f}")
    # Robertson at rtol 1e-8 / atol 1e-13: scaled error < 1 in the
    # controller norm against the 1e-14 reference
    ref = compute_reference("robertson", 1e-14)
    sol = solve(get_problem("robertson").prob,
                SolverOptions(rtol=1e-8, atol=1e-13))
    yr = np.array([float(v) for v in ref.y_final])
    yf = np.array([float(v) for v in sol.y_final])
    scale = 1e-13 + 1e-8 * np.abs(yr)
    ctrl_err = math.sqrt(float(np.mean(((yf - yr) / scale) ** 2)))
    ok &= ctrl_err < 1.0
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300.0
    _report(capsys, 6, "appendix tolerance protocols", ok,
            "; ".join(details) + f"; robertson ctrl err {ctrl_err:.2e}, "
            f"{elapsed:.0f}s")


def test_criterion_7_order_adaptivity_value(capsys):
    prob = get_problem("hires").prob
    adaptive = solve(prob, SolverOptions(rtol=1e-10, atol=1e-12))
    fixed5 = solve(prob, SolverOptions(rtol=1e-10, atol=1e-12,
                                       min_order=5, max_order=5))
    ok = adaptive.stats.n_f_evals <= fixed5.stats.n_f_evals
    ok &= max(adaptive.orders) >= 9
    _report(capsys, 7, "adaptive order beats fixed order 5 on hires", ok,
            f"f-evals {adaptive.stats.n_f_evals} vs {fixed5.stats.n_f_evals}, "
            f"max order {max(adaptive.orders)}")


def test_criterion_8_extended_precision(capsys):
    t0 = time.perf_counter()
    ref = compute_reference("oregonator", 1e-20, precision_bits=256)
    sol = solve(get_problem("oregonator", 256).prob,
                SolverOptions(rtol=1e-16, atol=1e-20, precision_bits=256))
    with mpmath.workprec(266):
        scale = [mpmath.mpf("1e-20") * (1 + abs(v)) for v in ref.y_final]
        acc = mpmath.fsum(((a - b) / s) ** 2 for a, b, s in
                          zip(sol.y_final, ref.y_final, scale))
        err = float(mpmath.sqrt(acc / len(scale)))
    elapsed = time.perf_counter() - t0
    ok = err < 1.0 and max(sol.orders) >= 13 and elapsed < 300.0
    _report(capsys, 8, "256-bit oregonator vs 1e-20 reference", ok,
            f"scaled err {err:.2e}, max order {max(sol.orders)}, "
            f"{elapsed:.0f}s")


def test_criterion_9_determinism(capsys, tmp_path):
    spec = SweepSpec(problem="robertson", rtol_exponents=(-4, -5, -6),
                     atol_offset=-5, ref_tol=1e-14)
    files = []
    for i in range(2):
        recs = run_sweep(spec, timed=False)
        path = tmp_path / f"run{i}.csv"
        emit_csv(recs, path)
        files.append(path)

    def strip_time(path):
        rows = path.read_text().strip().splitlines()
        return [",".join(c for k, c in enumerate(r.split(",")) if k != 4)
                for r in rows]

    ok = strip_time(files[0]) == strip_time(files[1])

    prob = get_problem("hires").prob
    serial = solve(prob, SolverOptions(rtol=1e-8, atol=1e-10))
    par = solve(prob, SolverOptions(rtol=1e-8, atol=1e-10,
                                    parallel_blocks=True))
    ok &= len(serial.ts) == len(par.ts)
    ok &= all(float(a) == float(b) for a, b in zip(serial.ts, par.ts))
    for ya, yb in zip(serial.ys, par.ys):
        ok &= bool((np.asarray(ya) == np.asarray(yb)).all())
    _report(capsys, 9, "bit-identical CSVs and parallel == serial", ok)
