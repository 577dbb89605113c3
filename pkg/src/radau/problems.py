"""The four stiff benchmark problems: Oregonator, Robertson, Hires,
Pollution, each with analytic Jacobian, canonical parameters, and the
tolerance protocol used by the work-precision harness.

Definitions are precision-generic: right-hand sides use plain arithmetic
on the incoming state, so object-dtype (mpmath) state vectors work
unchanged.  Parameters are materialized from decimal strings at the
requested precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .exceptions import UnknownProblem
from .linalg import DOUBLE_BITS
from .solver import OdeProblem


@dataclass(frozen=True)
class SweepProtocol:
    """Appendix tolerance sweep: rtol = 10^e for e in rtol_exponents,
    atol = 10^(e + atol_offset), reference at rtol = atol = ref_tol."""

    rtol_exponents: tuple
    atol_offset: int
    ref_tol: float


@dataclass(frozen=True)
class NamedProblem:
    name: str
    prob: OdeProblem
    protocol: SweepProtocol


def _zeros_like(y, n):
    if isinstance(y, np.ndarray) and y.dtype == object:
        out = np.empty(n, dtype=object)
        out[:] = 0
        return out
    return np.zeros(n)


def _zeros_mat(y, n):
    if isinstance(y, np.ndarray) and y.dtype == object:
        out = np.empty((n, n), dtype=object)
        out[:, :] = 0
        return out
    return np.zeros((n, n))


def oregonator(precision_bits: int = DOUBLE_BITS) -> NamedProblem:
    """Field-Noyes Oregonator (3 species), t in (0, 30)."""
    k1, k2, k3 = (linalg.to_real(v, precision_bits)
                  for v in ("77.27", "8.375e-6", "0.161"))

    def f(t, y):
        y1, y2, y3 = y
        out = _zeros_like(y, 3)
        out[0] = k1 * (y2 + y1 * (1 - k2 * y1 - y2))
        out[1] = (y3 - (1 + y1) * y2) / k1
        out[2] = k3 * (y1 - y3)
        return out

    def jac(t, y):
        y1, y2, _ = y
        J = _zeros_mat(y, 3)
        J[0, 0] = k1 * (1 - 2 * k2 * y1 - y2)
        J[0, 1] = k1 * (1 - y1)
        J[1, 0] = -y2 / k1
        J[1, 1] = -(1 + y1) / k1
        J[1, 2] = 1 / k1
        J[2, 0] = k3
        J[2, 2] = -k3
        return J

    prob = OdeProblem(f=f, jac=jac,
                      y0=linalg.real_array([1.0, 2.0, 3.0], precision_bits),
                      t_span=(linalg.to_real(0, precision_bits),
                              linalg.to_real(30, precision_bits)))
    protocol = SweepProtocol(rtol_exponents=tuple(range(-5, -13, -1)),
                             atol_offset=-2, ref_tol=1e-14)
    return NamedProblem("oregonator", prob, protocol)


def robertson(precision_bits: int = DOUBLE_BITS) -> NamedProblem:
    """Robertson chemical kinetics (3 species), t in (0, 1e5)."""
    k1, k2, k3 = (linalg.to_real(v, precision_bits)
                  for v in ("0.04", "3e7", "1e4"))

    def f(t, y):
        y1, y2, y3 = y
        out = _zeros_like(y, 3)
        out[0] = -k1 * y1 + k3 * y2 * y3
        out[1] = k1 * y1 - k2 * y2 * y2 - k3 * y2 * y3
        out[2] = k2 * y2 * y2
        return out

    def jac(t, y):
        _, y2, y3 = y
        J = _zeros_mat(y, 3)
        J[0, 0] = -k1
        J[0, 1] = k3 * y3
        J[0, 2] = k3 * y2
        J[1, 0] = k1
        J[1, 1] = -2 * k2 * y2 - k3 * y3
        J[1, 2] = -k3 * y2
        J[2, 1] = 2 * k2 * y2
        return J

    prob = OdeProblem(f=f, jac=jac,
                      y0=linalg.real_array([1.0, 0.0, 0.0], precision_bits),
                      t_span=(linalg.to_real(0, precision_bits),
                              linalg.to_real(1e5, precision_bits)))
    protocol = SweepProtocol(rtol_exponents=tuple(range(-4, -9, -1)),
                             atol_offset=-5, ref_tol=1e-14)
    return NamedProblem("robertson", prob, protocol)


def hires(precision_bits: int = DOUBLE_BITS) -> NamedProblem:
    """High irradiance response of photomorphogenesis (8 species)."""
    bits = precision_bits

    def f(t, y):
        y1, y2, y3, y4, y5, y6, y7, y8 = y
        out = _zeros_like(y, 8)
        out[0] = -1.71 * y1 + 0.43 * y2 + 8.32 * y3 + 0.0007
        out[1] = 1.71 * y1 - 8.75 * y2
        out[2] = -10.03 * y3 + 0.43 * y4 + 0.035 * y5
        out[3] = 8.32 * y2 + 1.71 * y3 - 1.12 * y4
        out[4] = -1.745 * y5 + 0.43 * y6 + 0.43 * y7
        out[5] = -280.0 * y6 * y8 + 0.69 * y4 + 1.71 * y5 - 0.43 * y6 + 0.69 * y7
        out[6] = 280.0 * y6 * y8 - 1.81 * y7
        out[7] = -280.0 * y6 * y8 + 1.81 * y7
        return out

    def jac(t, y):
        y6, y8 = y[5], y[7]
        J = _zeros_mat(y, 8)
        J[0, 0] = -1.71; J[0, 1] = 0.43; J[0, 2] = 8.32
        J[1, 0] = 1.71; J[1, 1] = -8.75
        J[2, 2] = -10.03; J[2, 3] = 0.43; J[2, 4] = 0.035
        J[3, 1] = 8.32; J[3, 2] = 1.71; J[3, 3] = -1.12
        J[4, 4] = -1.745; J[4, 5] = 0.43; J[4, 6] = 0.43
        J[5, 3] = 0.69; J[5, 4] = 1.71; J[5, 5] = -280.0 * y8 - 0.43
        J[5, 6] = 0.69; J[5, 7] = -280.0 * y6
        J[6, 5] = 280.0 * y8; J[6, 6] = -1.81; J[6, 7] = 280.0 * y6
        J[7, 5] = -280.0 * y8; J[7, 6] = 1.81; J[7, 7] = -280.0 * y6
        return J

    y0 = linalg.real_array([1.0, 0, 0, 0, 0, 0, 0, 0.0057], bits)
    prob = OdeProblem(f=f, jac=jac, y0=y0,
                      t_span=(linalg.to_real(0, bits),
                              linalg.to_real("321.8122", bits)))
    protocol = SweepProtocol(rtol_exponents=tuple(range(-5, -11, -1)),
                             atol_offset=-2, ref_tol=1e-14)
    return NamedProblem("hires", prob, protocol)


# pollution rate constants, in order k1..k25
_POLLU_K = ("0.25", "26.6", "12300.0", "0.00086", "0.00082", "15000.0",
            "0.00013", "24000.0", "16500.0", "9000.0", "0.022", "12000.0",
            "1.88", "16300.0", "4.8e6", "0.00035", "0.0175", "1.0e8",
            "4.44e11", "1240.0", "2.1", "5.78", "0.0474", "1780.0", "3.12")

_POLLU_Y0 = [0.0, 0.2, 0.0, 0.04, 0.0, 0.0, 0.1, 0.3, 0.017, 0.0,
             0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.007, 0.0, 0.0, 0.0]


def pollution(precision_bits: int = DOUBLE_BITS) -> NamedProblem:
    """POLLU air pollution kinetics (20 species, 25 reactions)."""
    k = [linalg.to_real(v, precision_bits) for v in _POLLU_K]
    (k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, k13, k14,
     k15, k16, k17, k18, k19, k20, k21, k22, k23, k24, k25) = k

    def f(t, y):
        (y1, y2, y3, y4, y5, y6, y7, y8, y9, y10,
         y11, y12, y13, y14, y15, y16, y17, y18, y19, y20) = y
        r = [k1 * y1, k2 * y2 * y4, k3 * y5 * y2, k4 * y7, k5 * y7,
             k6 * y7 * y6, k7 * y9, k8 * y9 * y6, k9 * y11 * y2,
             k10 * y11 * y1, k11 * y13, k12 * y10 * y2, k13 * y14,
             k14 * y1 * y6, k15 * y3, k16 * y4, k17 * y4, k18 * y16,
             k19 * y16, k20 * y17 * y6, k21 * y19, k22 * y19,
             k23 * y1 * y4, k24 * y19 * y1, k25 * y20]
        (r1, r2, r3, r4, r5, r6, r7, r8, r9, r10, r11, r12, r13,
         r14, r15, r16, r17, r18, r19, r20, r21, r22, r23, r24, r25) = r
        out = _zeros_like(y, 20)
        out[0] = -r1 - r10 - r14 - r23 - r24 + r2 + r3 + r9 + r11 + r12 + r22 + r25
        out[1] = -r2 - r3 - r9 - r12 + r1 + r21
        out[2] = -r15 + r1 + r17 + r19 + r22
        out[3] = -r2 - r16 - r17 - r23 + r15
        out[4] = -r3 + 2 * r4 + r6 + r7 + r13 + r20
        out[5] = -r6 - r8 - r14 - r20 + r3 + 2 * r18
        out[6] = -r4 - r5 - r6 + r13
        out[7] = r4 + r5 + r6 + r7
        out[8] = -r7 - r8
        out[9] = -r12 + r7 + r9
        out[10] = -r9 - r10 + r8 + r11
        out[11] = r9
        out[12] = -r11 + r10
        out[13] = -r13 + r12
        out[14] = r14
        out[15] = -r18 - r19 + r16
        out[16] = -r20
        out[17] = r20
        out[18] = -r21 - r22 - r24 + r23 + r25
        out[19] = -r25 + r24

        return out

    def jac(t, y):
        (y1, y2, y3, y4, y5, y6, y7, y8, y9, y10,
         y11, y12, y13, y14, y15, y16, y17, y18, y19, y20) = y
        J = _zeros_mat(y, 20)
        # each reaction rate contributes its partials to every species
        # it produces or consumes
        J[0, 0] = -k1 - k10 * y11 - k14 * y6 - k23 * y4 - k24 * y19
        J[0, 1] = k2 * y4 + k3 * y5 + k9 * y11 + k12 * y10
        J[0, 3] = k2 * y2 - k23 * y1
        J[0, 4] = k3 * y2
        J[0, 5] = -k14 * y1
        J[0, 9] = k12 * y2
        J[0, 10] = -k10 * y1 + k9 * y2
        J[0, 12] = k11
        J[0, 18] = -k24 * y1 + k22
        J[0, 19] = k25
        J[1, 0] = k1
        J[1, 1] = -k2 * y4 - k3 * y5 - k9 * y11 - k12 * y10
        J[1, 3] = -k2 * y2
        J[1, 4] = -k3 * y2
        J[1, 9] = -k12 * y2
        J[1, 10] = -k9 * y2
        J[1, 18] = k21
        J[2, 0] = k1
        J[2, 2] = -k15
        J[2, 3] = k17
        J[2, 15] = k19
        J[2, 18] = k22
        J[3, 1] = -k2 * y4
        J[3, 2] = k15
        J[3, 3] = -k2 * y2 - k16 - k17 - k23 * y1
        J[3, 0] = -k23 * y4
        J[4, 1] = -k3 * y5
        J[4, 4] = -k3 * y2
        J[4, 6] = 2 * k4 + k6 * y6
        J[4, 5] = k6 * y7 + k20 * y17
        J[4, 8] = k7
        J[4, 13] = k13
        J[4, 16] = k20 * y6
        J[5, 1] = k3 * y5
        J[5, 4] = k3 * y2
        J[5, 5] = -k6 * y7 - k8 * y9 - k14 * y1 - k20 * y17
        J[5, 6] = -k6 * y6
        J[5, 8] = -k8 * y6
        J[5, 0] = -k14 * y6
        J[5, 15] = 2 * k18
        J[5, 16] = -k20 * y6
        J[6, 5] = -k6 * y7
        J[6, 6] = -k4 - k5 - k6 * y6
        J[6, 13] = k13
        J[7, 5] = k6 * y7
        J[7, 6] = k4 + k5 + k6 * y6
        J[7, 8] = k7
        J[8, 5] = -k8 * y9
        J[8, 8] = -k7 - k8 * y6
        J[9, 1] = -k12 * y10 + k9 * y11
        J[9, 8] = k7
        J[9, 9] = -k12 * y2
        J[9, 10] = k9 * y2
        J[10, 0] = -k10 * y11
        J[10, 1] = -k9 * y11
        J[10, 5] = k8 * y9
        J[10, 8] = k8 * y6
        J[10, 10] = -k9 * y2 - k10 * y1
        J[10, 12] = k11
        J[11, 1] = k9 * y11
        J[11, 10] = k9 * y2
        J[12, 0] = k10 * y11
        J[12, 10] = k10 * y1
        J[12, 12] = -k11
        J[13, 1] = k12 * y10
        J[13, 9] = k12 * y2
        J[13, 13] = -k13
        J[14, 0] = k14 * y6
        J[14, 5] = k14 * y1
        J[15, 3] = k16
        J[15, 15] = -k18 - k19
        J[16, 5] = -k20 * y17
        J[16, 16] = -k20 * y6
        J[17, 5] = k20 * y17
        J[17, 16] = k20 * y6
        J[18, 0] = -k24 * y19 + k23 * y4
        J[18, 3] = k23 * y1
        J[18, 18] = -k21 - k22 - k24 * y1
        J[18, 19] = k25
        J[19, 0] = k24 * y19
        J[19, 18] = k24 * y1
        J[19, 19] = -k25
        return J

    prob = OdeProblem(f=f, jac=jac,
                      y0=linalg.real_array(_POLLU_Y0, precision_bits),
                      t_span=(linalg.to_real(0, precision_bits),
                              linalg.to_real(60, precision_bits)))
    protocol = SweepProtocol(rtol_exponents=tuple(range(-4, -10, -1)),
                             atol_offset=-4, ref_tol=1e-14)
    return NamedProblem("pollution", prob, protocol)


_FACTORIES = {
    "oregonator": oregonator,
    "robertson": robertson,
    "hires": hires,
    "pollution": pollution,
}


def problem_registry(precision_bits: int = DOUBLE_BITS) -> dict[str, NamedProblem]:
    """All benchmark problems by name at the requested precision."""
    return {name: make(precision_bits) for name, make in _FACTORIES.items()}


def get_problem(name: str, precision_bits: int = DOUBLE_BITS) -> NamedProblem:
    try:
        make = _FACTORIES[name]
    except KeyError:
        raise UnknownProblem(
            f"unknown problem {name!r}; choose from {sorted(_FACTORIES)}"
        ) from None
    return make(precision_bits)
