"""Radau IIA Butcher tableaus of any odd stage count at any precision.

The nodes are the roots of d^(s-1)/dx^(s-1) [x^(s-1) (x-1)^s], the
coefficient matrix follows from the collocation (simplifying) conditions
written as a Vandermonde system, and the embedded weights solve the
order-s moment equations on the same nodes.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import linalg
from .linalg import DOUBLE_BITS

#: extra significand bits carried while building, so the rounded result
#: satisfies the tableau identities to ~1 ulp at the target precision
GUARD_BITS = 64

#: largest stage count built without a conditioning warning; the
#: Vandermonde systems grow ill-conditioned beyond this
MAX_STAGES_DEFAULT = 13


def radau_poly_coeffs(s: int) -> list[int]:
    """Exact integer ascending-power coefficients of the Radau polynomial
    d^(s-1)/dx^(s-1) [x^(s-1) (x-1)^s]."""
    if s < 1:
        raise ValueError("stage count must be >= 1")
    # x^(s-1) (x-1)^s = sum_k C(s,k) (-1)^(s-k) x^(s-1+k)
    deg = 2 * s - 1
    coeffs = [0] * (deg + 1)
    for k in range(s + 1):
        coeffs[s - 1 + k] = math.comb(s, k) * (-1) ** (s - k)
    for _ in range(s - 1):  # formal differentiation
        coeffs = [i * coeffs[i] for i in range(1, len(coeffs))]
    return coeffs


def radau_nodes(s: int, precision_bits: int = DOUBLE_BITS) -> np.ndarray:
    """The s collocation nodes in (0, 1], ascending, last exactly 1."""
    _check_stages(s)
    if s == 1:
        return linalg.real_array([1.0], precision_bits)
    roots = linalg.poly_roots_real(radau_poly_coeffs(s), precision_bits)
    # x = 1 is an exact root for every s; pin it
    one = 1.0 if precision_bits <= DOUBLE_BITS else mpmath.mpf(1)
    roots[-1] = one
    return roots


def _check_stages(s: int) -> None:
    if s < 1 or s % 2 == 0:
        raise ValueError(f"stage count must be odd and positive, got {s}")


@dataclass(frozen=True)
class RadauTableau:
    """Butcher tableau of the s-stage Radau IIA method (order 2s-1).

    The embedded order-s method uses the extra abscissa 0 with weight
    ``b_tilde_0`` (the reciprocal of the real eigenvalue of a^-1) plus
    ``b_tilde`` on the collocation nodes; on the plain Radau nodes alone
    the order-s moment equations reproduce ``b`` and carry no error
    information.
    """

    s: int
    c: np.ndarray
    a: np.ndarray
    b: np.ndarray
    b_tilde: np.ndarray
    b_tilde_0: object
    precision_bits: int

    @property
    def order(self) -> int:
        return 2 * self.s - 1

    @property
    def embedded_order(self) -> int:
        return self.s


def embedded_weights(c: np.ndarray, precision_bits: int = DOUBLE_BITS,
                     b0=0) -> np.ndarray:
    """Weights of the embedded order-s quadrature on nodes ``c``:
    sum_j bt[j] c[j]^(k-1) = 1/k for k = 1..s.

    When ``b0`` is nonzero the quadrature additionally carries weight
    ``b0`` on the abscissa 0, which only enters the k = 1 equation.
    """
    s = len(c)
    guard = precision_bits + GUARD_BITS
    with mpmath.workprec(guard):
        ch = [mpmath.mpf(x) for x in c]
        M = np.empty((s, s), dtype=object)
        rhs = np.empty(s, dtype=object)
        for k in range(1, s + 1):
            rhs[k - 1] = mpmath.mpf(1) / k
            for j in range(s):
                M[k - 1, j] = ch[j] ** (k - 1)
        rhs[0] = rhs[0] - mpmath.mpf(b0)
        bt = linalg.lu_solve(linalg.lu_factor(M), rhs)
    return linalg.round_to_bits(np.asarray(bt, dtype=object), precision_bits)


def build_tableau(s: int, precision_bits: int = DOUBLE_BITS) -> RadauTableau:
    """Construct the full tableau at the requested precision."""
    _check_stages(s)
    guard = precision_bits + GUARD_BITS
    c = radau_nodes(s, guard if s > 1 else precision_bits)
    with mpmath.workprec(guard):
        ch = [mpmath.mpf(x) for x in c]
        c_powers = np.empty((s, s), dtype=object)
        c_q = np.empty((s, s), dtype=object)
        for i in range(s):
            for j in range(1, s + 1):
                c_powers[i, j - 1] = ch[i] ** (j - 1)
                c_q[i, j - 1] = c_powers[i, j - 1] * ch[i] / j
        a = c_q @ linalg.mat_inverse(c_powers)
        gamma, _, _ = linalg.eig_real_plus_pairs(linalg.mat_inverse(a), guard)
        b0 = 1 / mpmath.mpf(gamma)
    if precision_bits > DOUBLE_BITS:
        with mpmath.workprec(precision_bits):
            b_tilde_0 = +b0
    else:
        b_tilde_0 = float(b0)
    a = linalg.round_to_bits(a, precision_bits)
    c_out = linalg.round_to_bits(np.asarray(ch, dtype=object), precision_bits)
    if precision_bits <= DOUBLE_BITS:
        c_out[-1] = 1.0
    else:
        c_out[-1] = mpmath.mpf(1)
    b = a[-1]  # stiffly accurate: b is the last row, same stored values
    b_tilde = embedded_weights(c, precision_bits, b0=b0)
    return RadauTableau(s=s, c=c_out, a=a, b=b, b_tilde=b_tilde,
                        b_tilde_0=b_tilde_0, precision_bits=precision_bits)


class TableauCache:
    """Thread-safe map from (stage count, precision bits) to tableau."""

    def __init__(self):
        self._entries: dict[tuple[int, int], RadauTableau] = {}
        self._lock = threading.Lock()
        self.builds = 0  # number of actual constructions, for tests

    def __len__(self) -> int:
        return len(self._entries)

    def get_or_build(self, s: int, precision_bits: int = DOUBLE_BITS) -> RadauTableau:
        key = (s, precision_bits)
        with self._lock:
            hit = self._entries.get(key)
        if hit is not None:
            return hit
        tab = build_tableau(s, precision_bits)
        self.builds += 1
        with self._lock:
            # a concurrent first build may race; first insert wins
            return self._entries.setdefault(key, tab)

    def prewarm(self, stage_counts, precision_bits: int = DOUBLE_BITS) -> None:
        for s in stage_counts:
            self.get_or_build(s, precision_bits)


_DEFAULT_CACHE = TableauCache()


def cache_get_or_build(cache: TableauCache, s: int,
                       precision_bits: int = DOUBLE_BITS) -> RadauTableau:
    return cache.get_or_build(s, precision_bits)


def get_tableau(s: int, precision_bits: int = DOUBLE_BITS) -> RadauTableau:
    """Fetch from the process-wide cache, building on first use."""
    return _DEFAULT_CACHE.get_or_build(s, precision_bits)


def stability_function(tab: RadauTableau, z) -> complex:
    """R(z) = 1 + z b^T (I - z a)^(-1) 1, evaluated in complex arithmetic
    at the tableau's precision."""
    s = tab.s
    with mpmath.workprec(tab.precision_bits + GUARD_BITS):
        zz = mpmath.mpc(z)
        M = np.empty((s, s), dtype=object)
        for i in range(s):
            for j in range(s):
                M[i, j] = (1 if i == j else 0) - zz * mpmath.mpf(tab.a[i, j])
        ones = np.array([mpmath.mpc(1)] * s, dtype=object)
        x = linalg.lu_solve(linalg.lu_factor(M), ones)
        acc = mpmath.mpc(0)
        for i in range(s):
            acc += mpmath.mpf(tab.b[i]) * x[i]
        return complex(1 + zz * acc) if tab.precision_bits <= DOUBLE_BITS \
            else mpmath.mpc(1) + zz * acc


def _render(x, precision_bits: int) -> str:
    if precision_bits <= DOUBLE_BITS:
        return repr(float(x))
    digits = int(math.ceil(precision_bits * math.log10(2))) + 2
    return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=True)


def export_text(s: int, precision_bits: int = DOUBLE_BITS) -> str:
    """Render c, a, b, b~ plus the spectral quantities as labeled decimal
    blocks with round-trip digit count."""
    from .spectral import build_transform  # deferred: avoids import cycle

    tab = get_tableau(s, precision_bits)
    tr = build_transform(tab)
    r = lambda x: _render(x, precision_bits)
    lines = [f"# radau-iia s={s} prec={precision_bits}"]

    def block(name, arr):
        lines.append(f"[{name}]")
        arr = np.asarray(arr)
        if arr.ndim == 1:
            lines.append(" ".join(r(v) for v in arr))
        else:
            for row in arr:
                lines.append(" ".join(r(v) for v in row))

    block("c", tab.c)
    block("a", tab.a)
    block("b", tab.b)
    block("b_tilde", tab.b_tilde)
    block("gamma", [tr.gamma])
    lines.append("[alpha_beta]")
    for alpha, beta in tr.pairs:
        lines.append(f"{r(alpha)} {r(beta)}")
    block("T", tr.T)
    block("T_inv", tr.T_inv)
    return "\n".join(lines) + "\n"
