import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skalpha import skcore
from skalpha.errors import DenominatorNonpositive, OutOfTheoremRange, ParameterRangeError, PoleProximity

GRID = (-2.9, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0)


def exact_b(alpha: Fraction, n: int) -> Fraction:
    # long division of 3 by 3 + (a-3)z - a z^2 in exact arithmetic
    c = [Fraction(1)]
    for k in range(1, n + 1):
        prev2 = c[k - 2] if k >= 2 else Fraction(0)
        c.append((alpha * prev2 - (alpha - 3) * c[k - 1]) / 3)
    return c[n]


@pytest.mark.parametrize("alpha", ["-29/10", "-2", "-1", "-1/2", "0", "1/2", "1"])
def test_closed_form_matches_exact_division(alpha):
    a = Fraction(alpha)
    for n in (1, 2, 3, 10, 40):
        assert skcore.q_alpha_coeff(float(a), n) == pytest.approx(float(exact_b(a, n)), rel=1e-12, abs=1e-14)


def test_known_small_coefficients():
    assert skcore.q_alpha_coeff(1, 1) == pytest.approx(2 / 3)
    assert skcore.q_alpha_coeff(1, 2) == pytest.approx(7 / 9)
    assert skcore.q_alpha_coeffs(0, 8) == pytest.approx(np.ones(9))


@pytest.mark.parametrize("alpha", GRID)
def test_recurrence_agrees_with_closed_form(alpha):
    assert np.max(np.abs(skcore.q_alpha_coeffs(alpha, 64) - skcore.q_alpha_recurrence(alpha, 64))) <= 1e-10


def test_q_alpha_is_p_b_at_minus_alpha_over_3():
    z = np.array([0.3, -0.5 + 0.2j, 0.9j])
    for a in (-2.0, 0.5, 1.0):
        assert np.allclose(skcore.q_alpha_eval(a, z), skcore.p_b_eval(-a / 3, z))


@pytest.mark.parametrize("bad", [-3.0, 1.0000001, 3.1, float("nan"), float("inf")])
def test_alpha_range(bad):
    with pytest.raises(ParameterRangeError):
        skcore.AlphaParam(bad)


def test_b_param_regimes():
    b = skcore.BParam(-1 / 3)
    assert b.interior and b.loop_free and b.univalent
    assert not skcore.BParam(1).loop_free and skcore.BParam(1).univalent
    assert not skcore.BParam(-0.5).univalent
    with pytest.raises(ParameterRangeError):
        skcore.BParam(1.5)


def test_pole_detection():
    with pytest.raises(PoleProximity):
        skcore.q_alpha_eval(1, 1.0)
    with pytest.raises(PoleProximity):
        skcore.p_b_eval(0.5, 2.0)


def test_starlike_order_exact_values():
    assert skcore.starlike_order(0) == 0.5
    assert skcore.starlike_order(1) == 0.5625
    assert skcore.starlike_order(-1) == 0


def test_starlike_order_is_p_b_lower_bound():
    for a in GRID:
        assert skcore.starlike_order(a) == pytest.approx(skcore.p_b_re_lower(-a / 3), rel=1e-12, abs=1e-12)


def test_starlike_order_vs_sampled_real_part():
    # Re q_alpha on |z| = r decreases to the bound as r -> 1, slowly unless alpha = 0
    for a in (-1.0, 0.0, 0.5, 1.0):
        gaps = [skcore.min_real_part(a, r, 8192) - skcore.starlike_order(a) for r in (0.99, 0.999, 0.9999)]
        assert all(g >= -1e-12 for g in gaps)
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 0.02


def test_q_order_values():
    assert skcore.q_order(0) == pytest.approx(0.5, abs=1e-14)
    assert skcore.q_order(1) == pytest.approx(7 / 15, abs=1e-14)
    assert skcore.q_order(0.5) == pytest.approx(44 / 93, abs=1e-14)
    with pytest.raises(OutOfTheoremRange):
        skcore.q_order(-0.5)


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 1.0])
def test_admissibility(alpha):
    rep = skcore.admissibility_check(alpha)
    assert rep.passed, rep.to_dict()
    assert rep.details["threshold_vs_starlike_order"] <= 1e-12


def test_threshold_identity_symbolic():
    # (2 - 3g) / (2(1-g)) == 9(1+a)/(2(3+a)^2) with g = q_order(a), exactly
    for a in (Fraction(0), Fraction(1, 3), Fraction(1)):
        g = (2 * a * a + 3 * a + 9) / (3 * (a * a + 3 * a + 6))
        assert (2 - 3 * g) / (2 * (1 - g)) == 9 * (1 + a) / (2 * (3 + a) ** 2)


def test_tangent_ratio_bounds_argument():
    for a in (-0.5, 0.0, 0.5, 1.0):
        for r in (0.1, 0.3, 0.5):
            try:
                t = skcore.tangent_ratio(a, r)
            except DenominatorNonpositive:
                continue
            th = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
            arg = np.abs(np.angle(skcore.q_alpha_eval(a, r * np.exp(1j * th)))).max()
            assert arg <= math.atan(t) + 1e-12


def test_tangent_ratio_breakdown():
    # the denominator at r = 1 is 3a - 3|a|, so only negative alpha breaks down inside the disk
    assert skcore.tangent_ratio_breakdown_radius(1) == 1.0
    r0 = skcore.tangent_ratio_breakdown_radius(-0.5)
    assert r0 == pytest.approx((-10.5 + math.sqrt(10.5**2 + 54)) / 3)
    with pytest.raises(DenominatorNonpositive):
        skcore.tangent_ratio(-0.5, r0 + 1e-6)
    assert skcore.tangent_ratio(-0.5, r0 - 1e-3) > 0


def test_strong_order_clamps():
    for a in (-0.5, 0.0, 0.5, 1.0):
        assert skcore.strongly_starlike_order(a) == 1.0
    with pytest.raises(OutOfTheoremRange):
        skcore.strongly_starlike_order(-1)


def test_numeric_strong_order_limits():
    o1, _ = skcore.numeric_strong_order(-1, 0.999)
    assert 0.99 <= o1 <= 1
    o2, _ = skcore.numeric_strong_order(0.0, 0.5)
    # q_0 = 1/(1-z): max |arg| on |z| = r is arcsin(r)
    assert o2 == pytest.approx(2 / math.pi * math.asin(0.5), abs=1e-10)


def test_curve_circle_for_alpha_zero():
    curve = skcore.boundary_curve(0, 0.5, 256)
    vals = np.array([c.value for c in curve])
    assert np.allclose(np.abs(vals - 4 / 3), 2 / 3, atol=1e-9)


def test_figure_point():
    curve = skcore.boundary_curve(1, 0.99, 2048)
    c = curve[1024]
    assert c.theta == pytest.approx(math.pi)
    assert c.value.real == pytest.approx(3 / (3 + 2 * 0.99 - 0.99**2), abs=1e-9)


@pytest.mark.parametrize("alpha", GRID)
def test_curve_simple(alpha):
    assert not skcore.curve_self_intersects(skcore.boundary_curve(alpha, 0.99, 2048))


def test_curve_rejects_bad_radius():
    with pytest.raises(ValueError):
        skcore.boundary_curve(1, 1.0)


def test_figure_eight_detected():
    th = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    assert skcore.curve_self_intersects(np.sin(th) + 1j * np.sin(2 * th))


def test_curve_csv_header_and_rows():
    text = skcore.curve_to_csv(skcore.boundary_curve(1, 0.5, 32))
    lines = text.splitlines()
    assert lines[0] == "theta,re,im"
    assert len(lines) == 33


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=-2.99, max_value=1.0), st.integers(min_value=1, max_value=30))
def test_coefficients_near_geometric_limit(alpha, n):
    b = skcore.q_alpha_coeff(alpha, n)
    # B_n lies between the geometric limit 3/(3+a) times (1 -/+ |a/3|^{n+1})
    lim = 3 / (3 + alpha)
    assert abs(b - lim) <= lim * abs(alpha / 3) ** (n + 1) * (1 + 1e-12) + 1e-15
