"""Precision-generic dense linear algebra and polynomial root finding.

All routines accept either float64 numpy arrays (53-bit working precision)
or object-dtype numpy arrays holding ``mpmath`` scalars for extended
precision.  The float64 path is delegated to LAPACK through scipy; the
object path uses straightforward partially-pivoted eliminations that work
for any scalar type supporting +,-,*,/ and abs (mpf and mpc included).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.linalg

from .exceptions import (
    DimensionMismatch,
    RootCountMismatch,
    SingularMatrix,
    SpectrumShapeViolation,
)

DOUBLE_BITS = 53


def eps_for_bits(bits: int) -> float:
    """Unit roundoff of a binary format with ``bits`` significand bits."""
    return 2.0 ** (1 - bits)


def workprec(bits: int):
    """Context manager setting the mpmath working precision in bits."""
    return mpmath.workprec(bits)


def to_real(x, bits: int):
    """Convert a scalar to the working representation for ``bits``."""
    if bits <= DOUBLE_BITS:
        return float(x)
    with mpmath.workprec(bits):
        if isinstance(x, str):
            return mpmath.mpf(x)
        return +mpmath.mpf(x)


def real_array(values, bits: int) -> np.ndarray:
    """Build a working-precision array (float64 or object of mpf)."""
    if bits <= DOUBLE_BITS:
        return np.asarray(values, dtype=float)
    with mpmath.workprec(bits):
        flat = np.asarray(values, dtype=object)
        out = np.empty(flat.shape, dtype=object)
        for idx in np.ndindex(flat.shape):
            out[idx] = +mpmath.mpf(flat[idx])
    return out


def round_to_bits(arr: np.ndarray, bits: int) -> np.ndarray:
    """Round every entry of an object array to ``bits`` significand bits."""
    if arr.dtype != object:
        return arr
    if bits <= DOUBLE_BITS:
        return arr.astype(float)
    with mpmath.workprec(bits):
        out = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(arr.shape):
            out[idx] = +arr[idx]
    return out


def as_float_array(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.array([[float(v) for v in row] for row in arr]) \
            if arr.ndim == 2 else np.array([float(v) for v in arr])
    return np.asarray(arr, dtype=float)


@dataclass
class LuFactorization:
    """Combined L\\U factors with partial-pivoting row swap indices.

    ``pivots[k]`` is the row swapped with row ``k`` during elimination,
    matching the LAPACK convention used by ``scipy.linalg.lu_factor``.
    """

    factors: np.ndarray
    pivots: np.ndarray

    @property
    def n(self) -> int:
        return self.factors.shape[0]


def _pivot_threshold(A: np.ndarray) -> float:
    n = A.shape[0]
    amax = max(float(abs(v)) for v in A.flat) if n else 0.0
    bits = DOUBLE_BITS if A.dtype != object else _infer_bits(A)
    return n * eps_for_bits(bits) * amax


def _infer_bits(A: np.ndarray) -> int:
    for v in A.flat:
        if isinstance(v, (mpmath.mpf, mpmath.mpc)):
            ctx_prec = mpmath.mp.prec
            return max(ctx_prec, 53)
    return DOUBLE_BITS


def lu_factor(A: np.ndarray) -> LuFactorization:
    """Partially pivoted LU factorization; raises on (near-)singularity."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {A.shape}")
    n = A.shape[0]
    thresh = _pivot_threshold(A)
    if A.dtype != object:
        if not np.all(np.isfinite(A)):
            raise SingularMatrix("matrix has non-finite entries")
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
        if n and np.min(np.abs(np.diag(lu))) <= thresh:
            raise SingularMatrix("pivot below singularity threshold")
        return LuFactorization(lu, piv)

    lu = A.copy()
    piv = np.zeros(n, dtype=int)
    for k in range(n):
        p = k
        pmag = abs(lu[k, k])
        for i in range(k + 1, n):
            mag = abs(lu[i, k])
            if mag > pmag:
                p, pmag = i, mag
        piv[k] = p
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
        if float(pmag) <= thresh:
            raise SingularMatrix(f"pivot {float(pmag):g} below threshold {thresh:g}")
        pivot = lu[k, k]
        for i in range(k + 1, n):
            m = lu[i, k] / pivot
            lu[i, k] = m
            if m != 0:
                for j in range(k + 1, n):
                    lu[i, j] = lu[i, j] - m * lu[k, j]
    return LuFactorization(lu, piv)


def lu_solve(fact: LuFactorization, rhs: np.ndarray) -> np.ndarray:
    """Solve A x = rhs from the factorization of A."""
    rhs = np.asarray(rhs)
    n = fact.n
    if rhs.shape[0] != n:
        raise DimensionMismatch(f"rhs length {rhs.shape[0]} != {n}")
    lu = fact.factors
    if lu.dtype != object and rhs.dtype != object:
        return scipy.linalg.lu_solve((lu, fact.pivots), rhs, check_finite=False)

    x = np.array(rhs, dtype=object, copy=True)
    for k in range(n):
        p = fact.pivots[k]
        if p != k:
            x[k], x[p] = x[p], x[k]
    for k in range(1, n):
        acc = x[k]
        for j in range(k):
            acc = acc - lu[k, j] * x[j]
        x[k] = acc
    for k in range(n - 1, -1, -1):
        acc = x[k]
        for j in range(k + 1, n):
            acc = acc - lu[k, j] * x[j]
        x[k] = acc / lu[k, k]
    return x


def mat_inverse(A: np.ndarray) -> np.ndarray:
    """Inverse via LU; raises SingularMatrix for singular input."""
    A = np.asarray(A)
    n = A.shape[0]
    fact = lu_factor(A)
    inv = np.empty((n, n), dtype=A.dtype)
    for j in range(n):
        e = np.zeros(n, dtype=A.dtype)
        e[j] = mpmath.mpf(1) if A.dtype == object else 1.0
        inv[:, j] = lu_solve(fact, e)
    return inv


# ---------------------------------------------------------------------------
# Eigen-decomposition for the "one real eigenvalue + conjugate pairs" shape
# ---------------------------------------------------------------------------

def _refine_eigenpair(A: np.ndarray, lam, vec, bits: int, complex_pair: bool):
    """Newton-polish an eigenpair via the bordered system (A-lam I)v = 0,
    e_k^T v = 1, lifting a double-precision estimate to ``bits`` bits."""
    n = A.shape[0]
    k = int(np.argmax(np.abs(vec)))
    guard = bits + 30
    with mpmath.workprec(guard):
        mk = (lambda z: mpmath.mpc(z)) if complex_pair else (lambda z: mpmath.mpf(z.real if isinstance(z, complex) else z))
        Ah = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                Ah[i, j] = mk(A[i, j]) if A.dtype != object else (mpmath.mpc(A[i, j]) if complex_pair else mpmath.mpf(A[i, j]))
        v = np.array([mk(complex(z)) for z in vec], dtype=object)
        v = v / v[k]
        lam = mk(complex(lam))
        # Newton on F(v, lam) = [(A - lam I) v ; v_k - 1]
        # quadratic convergence from ~40 correct bits doubles per step
        steps = 3 + max(0, math.ceil(math.log2(guard / 40.0)))
        for _ in range(steps + 2):
            F = Ah @ v - lam * v
            J = np.empty((n + 1, n + 1), dtype=object)
            for i in range(n):
                for j in range(n):
                    J[i, j] = Ah[i, j] - (lam if i == j else 0)
                J[i, n] = -v[i]
                J[n, i] = mk(1) if i == k else mk(0)
            J[n, n] = mk(0)
            rhs = np.empty(n + 1, dtype=object)
            rhs[:n] = -F
            rhs[n] = mk(0)
            try:
                delta = lu_solve(lu_factor(J), rhs)
            except SingularMatrix:
                break
            v = v + delta[:n]
            lam = lam + delta[n]
        return lam, v


def eig_real_plus_pairs(A: np.ndarray, bits: int | None = None):
    """Eigen-decompose a matrix whose spectrum is one real eigenvalue plus
    complex-conjugate pairs (odd dimension).

    Returns ``(gamma, pairs, eigvecs)`` where ``pairs`` is a list of
    ``(alpha, beta)`` with ``beta > 0`` sorted by ascending beta, and
    ``eigvecs`` is ``[r, w_1, w_2, ...]``: the real eigenvector (unit
    Euclidean norm, positive last component) followed by one complex
    eigenvector per pair, each scaled so its last component is exactly 1.
    """
    A = np.asarray(A)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise DimensionMismatch(f"expected square matrix, got {A.shape}")
    if n % 2 == 0:
        raise SpectrumShapeViolation(f"dimension {n} is even")
    if bits is None:
        bits = DOUBLE_BITS if A.dtype != object else _infer_bits(A)

    Af = as_float_array(A)
    w, V = np.linalg.eig(Af)
    scale = max(1.0, float(np.max(np.abs(w))))
    shape_tol = 1e-8 * scale

    real_idx = int(np.argmin(np.abs(w.imag)))
    if abs(w[real_idx].imag) > shape_tol:
        raise SpectrumShapeViolation("no real eigenvalue found")
    pair_idx = [i for i in range(n) if i != real_idx and w[i].imag > shape_tol]
    conj_idx = [i for i in range(n) if i != real_idx and w[i].imag < -shape_tol]
    if len(pair_idx) != (n - 1) // 2 or len(conj_idx) != (n - 1) // 2:
        raise SpectrumShapeViolation(
            f"expected {(n - 1) // 2} conjugate pairs, found {len(pair_idx)}"
        )
    pair_idx.sort(key=lambda i: w[i].imag)

    if bits <= DOUBLE_BITS:
        r = V[:, real_idx].real
        r = r / np.linalg.norm(r)
        if r[-1] < 0:
            r = -r
        gamma = float(w[real_idx].real)
        pairs, vecs = [], [r]
        for i in pair_idx:
            wv = V[:, i]
            if abs(wv[-1]) == 0:
                raise SpectrumShapeViolation("eigenvector has zero last component")
            wv = wv / wv[-1]
            pairs.append((float(w[i].real), float(w[i].imag)))
            vecs.append(wv)
        return gamma, pairs, vecs

    # extended precision: refine each eigenpair, then normalize
    with mpmath.workprec(bits + 30):
        lam_r, vr = _refine_eigenpair(A, w[real_idx].real, V[:, real_idx].real, bits, False)
        norm = mpmath.sqrt(mpmath.fsum(v * v for v in vr))
        vr = vr / norm
        if vr[-1] < 0:
            vr = -vr
        pairs, vecs = [], []
        for i in pair_idx:
            lam_c, vc = _refine_eigenpair(A, complex(w[i]), V[:, i], bits, True)
            vc = vc / vc[-1]
            pairs.append((lam_c.real, lam_c.imag))
            vecs.append(vc)
    with mpmath.workprec(bits):
        gamma = +lam_r
        vr = np.array([+v for v in vr], dtype=object)
        pairs = [(+a, +b) for (a, b) in pairs]
        vecs = [np.array([mpmath.mpc(+v.real, +v.imag) for v in vc], dtype=object)
                for vc in vecs]
    return gamma, pairs, [vr] + vecs


# ---------------------------------------------------------------------------
# Polynomial root finding on (0, 1]
# ---------------------------------------------------------------------------

def _horner(coeffs, x):
    """Evaluate sum(coeffs[i] * x^i) and its derivative."""
    p = 0
    dp = 0
    for c in reversed(coeffs):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def poly_roots_real(coeffs, bits: int = DOUBLE_BITS, grid: int = 0):
    """All real roots in (0, 1] of a polynomial with simple roots there.

    ``coeffs`` are ascending-power coefficients (exact integers preferred).
    Roots are isolated by sign changes on a uniform grid, then polished by
    Newton iteration at the working precision.  Raises RootCountMismatch
    if fewer roots than the polynomial degree are found.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    degree = len(coeffs) - 1
    if degree < 1:
        raise RootCountMismatch("polynomial is constant")
    if grid <= 0:
        grid = max(64, 32 * degree * degree)

    guard = bits + 30
    with mpmath.workprec(guard):
        one = mpmath.mpf(1)
        brackets = []
        xs = [one * i / grid for i in range(grid + 1)]
        vals = [_horner(coeffs, x)[0] for x in xs]
        for i in range(1, grid + 1):
            if vals[i] == 0 and xs[i] > 0:
                brackets.append((xs[i], xs[i]))
            elif vals[i - 1] * vals[i] < 0:
                brackets.append((xs[i - 1], xs[i]))
        if len(brackets) != degree and grid < 10 ** 6:
            return poly_roots_real(coeffs, bits, grid=grid * 8)
        if len(brackets) != degree:
            raise RootCountMismatch(
                f"found {len(brackets)} roots, expected {degree}"
            )
        roots = []
        max_coeff = max(abs(mpmath.mpf(c)) for c in coeffs)
        res_tol = mpmath.mpf(2) ** (-(bits - 5)) * max_coeff
        for lo, hi in brackets:
            x = (lo + hi) / 2
            # a few bisection steps to stabilize Newton's starting point
            flo = _horner(coeffs, lo)[0]
            for _ in range(8):
                fm = _horner(coeffs, x)[0]
                if fm == 0:
                    break
                if flo * fm < 0:
                    hi = x
                else:
                    lo, flo = x, fm
                x = (lo + hi) / 2
            last = None
            for _ in range(200):
                p, dp = _horner(coeffs, x)
                if dp == 0:
                    break
                step = p / dp
                x = x - step
                if last is not None and abs(step) <= abs(x) * mpmath.mpf(2) ** (-guard + 2):
                    break
                last = step
            if abs(_horner(coeffs, x)[0]) > res_tol:
                raise RootCountMismatch("Newton polish failed to converge")
            roots.append(x)
        roots.sort()
    if bits <= DOUBLE_BITS:
        return np.array([float(r) for r in roots])
    with mpmath.workprec(bits):
        return np.array([+r for r in roots], dtype=object)
