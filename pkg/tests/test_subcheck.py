import numpy as np
import pytest

from skalpha import geometry as G
from skalpha import subcheck as SC
from skalpha.errors import IllConditioned, TailTooLarge
from skalpha.extremal import extremal_series, from_schwarz, scaled_schwarz
from skalpha.series import NormalizedSeries, TruncatedSeries, geometric, identity, koebe
from skalpha.skcore import q_alpha_series

GRID = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0)
TH = np.linspace(0, 2 * np.pi, 512, endpoint=False)
CIRCLE = np.exp(1j * TH)


# geometry --------------------------------------------------------------------


def test_winding_on_circle():
    pts = np.array([0, 0.5 + 0.5j, 2, -1.5j])
    assert list(G.winding_number(CIRCLE, pts)) == [1, 1, 0, 0]
    assert list(G.winding_number(CIRCLE[::-1], pts[:1])) == [-1]


def test_winding_twice_around():
    assert G.winding_number(np.exp(2j * TH), [0.1])[0] == 2


def test_distance_to_polyline():
    d = G.distance_to_polyline(CIRCLE, [0, 2, 1])
    assert d[0] == pytest.approx(1, abs=1e-4)
    assert d[1] == pytest.approx(1, abs=1e-4)
    assert d[2] == pytest.approx(0, abs=1e-12)


def test_segments_intersect_cases():
    assert G.segments_intersect(0, 1 + 1j, 1j, 1)
    assert not G.segments_intersect(0, 1, 1j, 1 + 1j)
    # collinear touching end points
    assert G.segments_intersect(0, 1, 1, 2)


def test_self_intersection():
    assert not G.closed_polyline_self_intersects(CIRCLE)
    assert G.closed_polyline_self_intersects(np.sin(TH) + 1j * np.sin(2 * TH))
    assert not G.closed_polyline_self_intersects([0, 1, 1j])


def test_region_contains_refines_near_boundary():
    # a coarse square misses the corner region; doubling must settle the point
    inside, dist, wind = SC.region_contains(lambda t: np.exp(1j * t), 8, [0.99 + 0j, 0.0, 1.2], 1e-9)
    assert list(inside) == [True, True, False]


# membership ------------------------------------------------------------------


@pytest.mark.parametrize("alpha", GRID)
def test_extremal_is_member(alpha):
    rep = SC.membership_sk(extremal_series(alpha, 4096), alpha)
    assert rep.passed, rep.details
    assert rep.radii_tested == [0.5, 0.9, 0.99]


def test_contracted_member():
    f = from_schwarz(0.5, scaled_schwarz(200, 0.5), 200)
    rep = SC.membership_sk(f, 0.5, radii=(0.5, 0.9))
    assert rep.passed
    # strictly inside: no sample on the boundary
    assert all(d["min_distance_to_boundary"] > 1e-3 for d in rep.details)


def test_koebe_fails_with_witness_near_pi():
    rep = SC.membership_sk(koebe(4096), 1)
    assert not rep.passed
    assert rep.contained == [False, False, False]
    assert abs(rep.worst_witness["theta"] - np.pi) < 0.05
    assert rep.to_dict()["pass"] is False


def test_identity_is_member():
    f = NormalizedSeries(identity(16).coeffs)
    assert SC.membership_sk(f, -1).passed


def test_failure_is_monotone_in_radius():
    # phi_{-1} is not in SK(1); once containment fails it keeps failing
    rep = SC.membership_sk(extremal_series(-1, 4096), 1, radii=(0.2, 0.5, 0.9, 0.99))
    first = rep.contained.index(False)
    assert not any(rep.contained[first:])


def test_tail_too_large():
    with pytest.raises(TailTooLarge):
        SC.membership_sk(koebe(64), 1, radii=(0.99,))


def test_ill_conditioned_near_alpha_minus_3():
    with pytest.raises(IllConditioned):
        SC.membership_sk(extremal_series(-2.9, 4096), -2.9, radii=(0.99,))


def test_alpha_minus_2_9_fine_at_moderate_radius():
    assert SC.membership_sk(extremal_series(-2.9, 4096), -2.9, radii=(0.5, 0.9)).passed


def test_membership_q():
    rep = SC.membership_q(extremal_series(0, 4096), 0.5)
    assert rep.passed
    assert not SC.membership_q(koebe(4096), 0.5).passed


def test_subordination_q_alpha_to_itself():
    g = q_alpha_series(0.5, 4096)
    rep = SC.subordination_check(g, g)
    assert rep.passed


def test_subordination_rejects_different_centre():
    rep = SC.subordination_check(TruncatedSeries([2, 1]), q_alpha_series(1, 64))
    assert not rep.passed
    assert rep.worst_witness["reason"] == "f(0) != g(0)"


def test_subordination_contracted():
    g = geometric(4096)
    f = TruncatedSeries(geometric(4096, 0.5).coeffs)
    assert SC.subordination_check(f, g).passed
    assert not SC.subordination_check(g, f).passed


def test_max_modulus_never_fails_when_contained():
    for f, g in [(geometric(4096, 0.5), geometric(4096)), (geometric(4096), geometric(4096, 0.5))]:
        rep = SC.subordination_check(f, g)
        for d in rep.details:
            assert not (d["image_contained"] and not d["max_modulus_ok"])


@pytest.mark.parametrize("alpha,gamma", [(0.0, 0.5), (0.5, 44 / 93), (1.0, 7 / 15)])
def test_q_class_bound(alpha, gamma):
    rep = SC.q_class_check(alpha)
    assert rep.passed
    assert rep.bound == pytest.approx(gamma)


def test_half_bound_readings():
    out = SC.half_bound_readings_check()
    assert not out["re_zf_over_f_gt_0"].passed
    assert out["re_zf_over_f_gt_half"].passed


def test_membership_json_is_stable():
    rep = SC.membership_sk(extremal_series(1, 1024), 1, radii=(0.5,))
    assert rep.to_json() == SC.membership_sk(extremal_series(1, 1024), 1, radii=(0.5,)).to_json()


@pytest.mark.parametrize("alpha,r", [(-2.0, 0.99), (-2.5, 0.9), (-1.0, 0.99)])
def test_rounding_estimate_tracks_true_error(alpha, r):
    # for phi_alpha the exact zf'/f coefficients are B_n
    from skalpha.series import z_log_derivative
    from skalpha.skcore import q_alpha_coeffs

    f = extremal_series(alpha, 4096)
    s = z_log_derivative(f)
    w = r ** np.arange(s.order + 1)
    true = np.sum(np.abs(s.coeffs - q_alpha_coeffs(alpha, s.order)) * w) / np.sum(np.abs(s.coeffs) * w)
    est = SC._check_conditioning(f, s, r)
    assert true / 10 <= est <= 10 * true + 1e-15
