import json
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from skalpha import series as S
from skalpha.errors import (
    BadConstantTerm,
    CompositionRequiresZeroConstant,
    NotNormalized,
    SeriesFormatError,
    ZeroConstantTerm,
)
from skalpha.fekete import CaratheodoryPoint, coeffs_from_p, root_transform_coeffs

Z = sp.symbols("z")


def sympy_coeffs(expr, order):
    poly = sp.series(expr, Z, 0, order + 1).removeO()
    return np.array([complex(poly.coeff(Z, n)) for n in range(order + 1)])


def test_reciprocal_small_exact():
    # 27 / (3 - 2z - z^2) = 9 + 6z + 7z^2 + ...
    s = S.reciprocal(S.TruncatedSeries([3, -2, -1]))
    assert np.allclose(27 * s.coeffs, [9, 6, 7])


def test_reciprocal_matches_sympy():
    expr = 1 / (2 + Z - 3 * Z**2 + Z**3)
    got = S.reciprocal(S.from_polynomial([2, 1, -3, 1], order=12))
    assert got.allclose(sympy_coeffs(expr, 12), atol=1e-12)


def test_log_exp_match_sympy():
    f = S.from_polynomial([1, 0.5, -0.25, 0.1], order=10)
    ref = sympy_coeffs(sp.log(1 + Z / 2 - Z**2 / 4 + Z**3 / 10), 10)
    assert S.log_unit(f).allclose(ref, atol=1e-13)
    g = S.from_polynomial([0, 1, 0.3], order=10)
    assert S.exp_zero(g).allclose(sympy_coeffs(sp.exp(Z + 3 * Z**2 / 10), 10), atol=1e-13)


def test_compose_matches_sympy():
    f = S.geometric(10)
    w = S.from_polynomial([0, 0.5, 0.25], order=10)
    ref = sympy_coeffs(1 / (1 - (Z / 2 + Z**2 / 4)), 10)
    assert S.compose(f, w).allclose(ref, atol=1e-13)


def test_compose_rejects_nonzero_constant():
    with pytest.raises(CompositionRequiresZeroConstant):
        S.compose(S.geometric(5), S.from_polynomial([0.1, 1], order=5))


def test_reciprocal_zero_constant():
    with pytest.raises(ZeroConstantTerm):
        S.reciprocal(S.TruncatedSeries([0, 1, 2]))


def test_log_requires_unit_constant():
    with pytest.raises(BadConstantTerm):
        S.log_unit(S.TruncatedSeries([2, 1]))


def test_koebe_coefficients():
    k = S.koebe(20)
    assert np.array_equal(k.coeffs.real, np.arange(21))


def test_z_log_derivative_koebe():
    # zk'/k = (1+z)/(1-z) = 1 + 2z + 2z^2 + ...
    s = S.z_log_derivative(S.koebe(16))
    assert s.allclose([1] + [2] * 15, atol=1e-12)


def test_integrate_and_derivative():
    g = S.from_polynomial([0, 2, 6, 12], order=3)
    assert S.integrate_dt_over_t(g).allclose([0, 2, 3, 4])
    assert S.derivative(S.from_polynomial([1, 1, 1, 1], order=3)).allclose([1, 2, 3])


def test_kth_root_of_koebe_k2():
    # sqrt(k(z^2)) = z/(1-z^2): odd coefficients 1
    f = S.kth_root_transform(S.koebe(10), 2)
    expected = np.zeros(f.order + 1)
    expected[1::2] = 1
    assert f.allclose(expected, atol=1e-12)


def test_evaluate_against_closed_form():
    z = 0.3 + 0.4j
    assert abs(S.koebe(200)(z) - z / (1 - z) ** 2) < 1e-12


def test_json_roundtrip():
    s = S.TruncatedSeries([1, 2j, -3.5])
    back = S.TruncatedSeries.from_json(s.to_json())
    assert np.array_equal(back.coeffs, s.coeffs)
    assert json.loads(s.to_json()) == {"order": 2, "coeffs": [[1.0, 0.0], [0.0, 2.0], [-3.5, 0.0]]}


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        '{"coeffs": [[0, 0]]}',
        '{"order": 2, "coeffs": [[0, 0], [1, 0]]}',
        '{"order": -1, "coeffs": []}',
        '{"order": 1, "coeffs": [[0, 0], [1]]}',
        '{"order": 1, "coeffs": [[0, 0], ["1", 0]]}',
        '{"order": 5000, "coeffs": []}',
    ],
)
def test_from_json_rejects(doc):
    with pytest.raises(SeriesFormatError):
        S.TruncatedSeries.from_json(doc)


def test_normalized_rejects():
    with pytest.raises(NotNormalized):
        S.NormalizedSeries([0, 2, 1])
    with pytest.raises(NotNormalized):
        S.NormalizedSeries.from_json('{"order": 1, "coeffs": [[1, 0], [1, 0]]}')


def test_series_is_immutable():
    s = S.TruncatedSeries([1, 2])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


def test_tail_estimate():
    g = S.geometric(64, 0.5)
    # true tail at r = 0.5 is sum_{n>64} 0.25^n
    est = S.tail_estimate(g, 0.5)
    assert est == pytest.approx(0.25**65 / 0.75, rel=1e-6)
    assert S.tail_estimate(S.geometric(64), 1.0) == math.inf


def test_derivation_chain_matches_fekete_closed_forms():
    # build f from a Caratheodory point, then compare its coefficients and
    # those of the root transform with the closed-form chain
    from skalpha.extremal import from_schwarz

    pt = CaratheodoryPoint.from_witness(0.3, 0.7, 2.1)
    order = 6
    p = S.TruncatedSeries([1, pt.p1, pt.p2] + [0] * (order - 2))
    # w = (p - 1)/(p + 1) to the needed order
    w = (p - 1) * S.reciprocal(p + 1)
    for alpha in (-1.0, 0.0, 0.5, 1.0):
        f = from_schwarz(alpha, w, order)
        a2, a3 = coeffs_from_p(alpha, pt)
        assert abs(f.coeffs[2] - a2) < 1e-12
        assert abs(f.coeffs[3] - a3) < 1e-12
        for k in (1, 2, 3):
            F = S.kth_root_transform(f, k)
            bk1, b2k1 = root_transform_coeffs(a2, a3, k)
            assert abs(F.coeffs[k + 1] - bk1) < 1e-12
            assert abs(F.coeffs[2 * k + 1] - b2k1) < 1e-12


coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=4, max_size=12), st.lists(coeff, min_size=4, max_size=12))
def test_mul_commutes_and_matches_convolve(a, b):
    A, B = S.TruncatedSeries(a), S.TruncatedSeries(b)
    n = min(len(a), len(b))
    ref = np.convolve(a, b)[:n]
    assert np.allclose((A * B).coeffs, ref)
    assert np.allclose((B * A).coeffs, ref)


@settings(max_examples=60, deadline=None)
@given(st.lists(coeff, min_size=3, max_size=10))
def test_reciprocal_inverts(tail):
    s = S.TruncatedSeries([1.0] + tail)
    one = s * S.reciprocal(s)
    expected = np.zeros(len(tail) + 1)
    expected[0] = 1
    assert np.allclose(one.coeffs, expected, atol=1e-8 * max(1, np.abs(one.coeffs).max()))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=0.5, allow_nan=False, allow_infinity=False), min_size=3, max_size=10))
def test_log_exp_roundtrip(tail):
    g = S.TruncatedSeries([0.0] + tail)
    assert np.allclose(S.log_unit(S.exp_zero(g)).coeffs, g.coeffs, atol=1e-10)
