"""Real similarity transform block-diagonalizing the inverse coefficient
matrix of a Radau tableau.

With one real eigenvalue gamma and conjugate pairs alpha_j +- i beta_j,
the columns [r, u_1, v_1, u_2, v_2, ...] built from the eigenvectors give

    T^-1 a^-1 T = diag( [gamma], [[alpha_1, -beta_1], [beta_1, alpha_1]], ... )

so the stage Newton systems decouple into one real n x n block and
(s-1)/2 real 2n x 2n blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from . import linalg
from .linalg import DOUBLE_BITS
from .tableau import GUARD_BITS, RadauTableau


@dataclass(frozen=True)
class SpectralTransform:
    s: int
    gamma: object            # real eigenvalue of a^-1
    pairs: tuple             # ((alpha, beta), ...) with beta > 0, ascending beta
    T: np.ndarray
    T_inv: np.ndarray
    a_inv: np.ndarray
    precision_bits: int


def build_transform(tab: RadauTableau) -> SpectralTransform:
    s = tab.s
    bits = tab.precision_bits
    if bits <= DOUBLE_BITS:
        a_inv = linalg.mat_inverse(np.asarray(tab.a, dtype=float))
    else:
        with mpmath.workprec(bits + GUARD_BITS):
            a_hi = np.empty((s, s), dtype=object)
            for i in range(s):
                for j in range(s):
                    a_hi[i, j] = mpmath.mpf(tab.a[i, j])
            a_inv = linalg.mat_inverse(a_hi)
        a_inv = linalg.round_to_bits(a_inv, bits)

    gamma, pairs, vecs = linalg.eig_real_plus_pairs(a_inv, bits)

    if bits <= DOUBLE_BITS:
        T = np.empty((s, s), dtype=float)
        T[:, 0] = vecs[0]
        for j, w in enumerate(vecs[1:]):
            # conjugate eigenvector (alpha - i beta) yields +beta below the
            # diagonal in the 2x2 rotation block
            T[:, 1 + 2 * j] = w.real
            T[:, 2 + 2 * j] = -w.imag
        T_inv = linalg.mat_inverse(T)
    else:
        with mpmath.workprec(bits + GUARD_BITS):
            T = np.empty((s, s), dtype=object)
            for i in range(s):
                T[i, 0] = mpmath.mpf(vecs[0][i])
            for j, w in enumerate(vecs[1:]):
                for i in range(s):
                    T[i, 1 + 2 * j] = mpmath.mpf(w[i].real)
                    T[i, 2 + 2 * j] = -mpmath.mpf(w[i].imag)
            T_inv = linalg.mat_inverse(T)
        T = linalg.round_to_bits(T, bits)
        T_inv = linalg.round_to_bits(T_inv, bits)

    return SpectralTransform(s=s, gamma=gamma, pairs=tuple(pairs), T=T,
                             T_inv=T_inv, a_inv=a_inv, precision_bits=bits)


def verify_block_diagonal(st: SpectralTransform, a_inv: np.ndarray, tol) -> bool:
    """True iff T^-1 a_inv T is block diagonal with the stored gamma and
    (alpha, beta) blocks, all to within ``tol``."""
    s = st.s
    if a_inv.shape != (s, s):
        return False
    M = st.T_inv @ a_inv @ st.T
    expected = np.zeros((s, s), dtype=object)
    expected[0, 0] = st.gamma
    for j, (alpha, beta) in enumerate(st.pairs):
        i0 = 1 + 2 * j
        expected[i0, i0] = alpha
        expected[i0 + 1, i0 + 1] = alpha
        expected[i0, i0 + 1] = -beta
        expected[i0 + 1, i0] = beta
    tol = float(tol)
    for i in range(s):
        for j in range(s):
            if abs(float(M[i, j] - expected[i, j])) > tol:
                return False
    return True
