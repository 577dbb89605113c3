import math

import mpmath
import numpy as np
import pytest

from radau import tableau as tb
from radau.linalg import eps_for_bits


def test_nodes_closed_forms():
    assert np.allclose(tb.radau_nodes(1), [1.0])
    s6 = math.sqrt(6.0)
    assert np.allclose(tb.radau_nodes(3), [(4 - s6) / 10, (4 + s6) / 10, 1.0])


def test_nodes_last_exactly_one():
    for s in (1, 3, 5):
        assert float(tb.radau_nodes(s)[-1]) == 1.0
    assert tb.radau_nodes(5, 256)[-1] == 1


def test_stage_count_validation():
    for bad in (0, -1, 2, 4):
        with pytest.raises(ValueError):
            tb.build_tableau(bad)


def test_three_stage_coefficients():
    tab = tb.get_tableau(3)
    a_expected = [[0.19681547722366044, -0.06553542585019838, 0.02377097434822015],
                  [0.39442431473908727, 0.29207341166522843, -0.04154875212599793],
                  [0.37640306270046725, 0.5124858261884216, 0.1111111111111111]]
    assert np.allclose(tab.a, a_expected, atol=1e-14)
    assert np.allclose(tab.b, a_expected[2], atol=1e-15)  # stiffly accurate
    assert tab.order == 5 and tab.embedded_order == 3


def test_coefficients_match_collocation_integrals():
    # independent oracle: a[i][j] = integral of the j-th Lagrange basis
    # polynomial over [0, c_i], via adaptive quadrature
    s = 5
    bits = 200
    tab = tb.build_tableau(s, bits)
    with mpmath.workprec(bits + 20):
        c = [mpmath.mpf(x) for x in tab.c]

        def lagrange(j, x):
            v = mpmath.mpf(1)
            for m in range(s):
                if m != j:
                    v *= (x - c[m]) / (c[j] - c[m])
            return v

        for i in range(s):
            for j in range(s):
                ref = mpmath.quad(lambda x, j=j: lagrange(j, x), [0, c[i]])
                assert abs(tab.a[i, j] - ref) < mpmath.mpf(2) ** -(bits - 25)


def test_embedded_weights_closed_form():
    # order-2 moment system on nodes (1/3, 1): weights (3/4, 1/4)
    bt = tb.embedded_weights(np.array([1.0 / 3.0, 1.0]))
    assert np.allclose(bt, [0.75, 0.25], atol=1e-14)


def test_embedded_weights_with_extra_abscissa():
    tab = tb.get_tableau(3)
    assert abs(tab.b_tilde_0 - 0.27488882959567734) < 1e-13
    # total weight of the extended quadrature is 1
    assert abs(tab.b_tilde_0 + np.sum(tab.b_tilde) - 1.0) < 1e-13
    # moments 2..s exact, moment s+1 genuinely wrong (order gap)
    for k in range(2, 4):
        assert abs(np.sum(tab.b_tilde * tab.c ** (k - 1)) - 1.0 / k) < 1e-13
    assert abs(np.sum(tab.b_tilde * tab.c ** 3) - 0.25) > 1e-3


@pytest.mark.parametrize("s", [1, 3, 7])
def test_simplifying_conditions(s):
    bits = 256
    tab = tb.build_tableau(s, bits)
    budget = mpmath.mpf(2) ** -200
    with mpmath.workprec(bits + 10):
        c = [mpmath.mpf(x) for x in tab.c]
        # C(s): sum_j a_ij c_j^(k-1) = c_i^k / k
        for i in range(s):
            for k in range(1, s + 1):
                acc = mpmath.fsum(mpmath.mpf(tab.a[i, j]) * c[j] ** (k - 1)
                                  for j in range(s))
                assert abs(acc - c[i] ** k / k) < budget
        # B(2s-1): sum_j b_j c_j^(k-1) = 1/k
        for k in range(1, 2 * s):
            acc = mpmath.fsum(mpmath.mpf(tab.b[j]) * c[j] ** (k - 1)
                              for j in range(s))
            assert abs(acc - mpmath.mpf(1) / k) < budget
        assert c[-1] == 1


def test_cache_semantics():
    cache = tb.TableauCache()
    assert len(cache) == 0
    t1 = tb.cache_get_or_build(cache, 3)
    assert cache.builds == 1 and len(cache) == 1
    t2 = tb.cache_get_or_build(cache, 3)
    assert t2 is t1 and cache.builds == 1
    cache.prewarm([1, 3, 5])
    assert len(cache) == 3 and cache.builds == 3


def test_stability_function_values():
    tab = tb.get_tableau(3)
    assert abs(tb.stability_function(tab, 0.0) - 1.0) < 1e-14
    # L-stable: decays at the far left, contractive on the imaginary axis
    assert abs(tb.stability_function(tab, -1e8)) < 1e-6
    for y in (0.1, 1.0, 10.0, 100.0):
        assert abs(tb.stability_function(tab, 1j * y)) <= 1.0 + 1e-10
    # matches exp(z) near the origin to the method order
    z = 1e-2
    assert abs(tb.stability_function(tab, z) - math.exp(z)) < 1e-14


def test_export_text_round_trip():
    text = tb.export_text(3, 53)
    lines = text.splitlines()
    assert lines[0] == "# radau-iia s=3 prec=53"
    assert "[a]" in lines and "[b_tilde]" in lines and "[T]" in lines
    a_at = lines.index("[a]")
    row0 = [float(v) for v in lines[a_at + 1].split()]
    tab = tb.get_tableau(3)
    assert row0 == [float(v) for v in tab.a[0]]


def test_export_text_high_precision():
    text = tb.export_text(1, 150)
    gamma_at = text.splitlines().index("[gamma]")
    val = text.splitlines()[gamma_at + 1]
    with mpmath.workprec(150):
        assert abs(mpmath.mpf(val) - 1) < mpmath.mpf(2) ** -140  # a^-1 = [[1]]


def test_rounding_to_target_precision():
    tab = tb.build_tableau(3, 100)
    # entries carry exactly the target precision, not the guard precision:
    # re-rounding at 100 bits is a no-op
    with mpmath.workprec(100):
        for v in tab.a.flat:
            assert +v == v
    assert eps_for_bits(100) < 1e-29
