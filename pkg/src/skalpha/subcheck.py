"""Sampled membership and subordination tests.

For a univalent majorant ``g`` with ``f(0) = g(0)``, ``f`` is subordinate
to ``g`` on ``|z| < r`` exactly when ``f(|z| = r)`` lies in the closure of
``g(|z| < r)``.  Containment is decided by the winding number of the sampled
boundary curve ``g(r e^{i theta})`` about each value of ``f``; values within
``boundary_tol`` of the curve count as contained (the region is closed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import geometry
from .errors import DegenerateCurve, IllConditioned, TailTooLarge
from .extremal import extremal_series
from .reports import BoundReport
from .series import NormalizedSeries, TruncatedSeries, evaluate, koebe, tail_estimate, z_log_derivative
from .skcore import _alpha, q_alpha_eval, q_order

DEFAULT_RADII = (0.5, 0.9, 0.99)
DEFAULT_SAMPLES = 2048
MAX_CURVE_SAMPLES = 2**16
TAIL_TOL = 1e-8
# relative error we are willing to accept from cancellation in series evaluation
CONDITION_TOL = 1e-8
# calibrated against the exact zf'/f of the extremal functions; 1e-10 overstates by 1e10
PERTURBATION = 1e-12
_EPS = np.finfo(float).eps


@dataclass
class MembershipReport:
    radii_tested: list[float]
    contained: list[bool]
    worst_witness: dict | None
    passed: bool
    details: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "radii_tested": self.radii_tested,
            "contained": self.contained,
            "worst_witness": self.worst_witness,
            "pass": self.passed,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _witness(r: float, theta: float, value: complex, **extra) -> dict:
    d = {"radius": float(r), "theta": float(theta), "value": [float(value.real), float(value.imag)]}
    d.update(extra)
    return d


def _check_tail(s: TruncatedSeries, r: float, tol: float) -> float:
    tail = tail_estimate(s, r)
    if tail > tol:
        raise TailTooLarge(f"estimated truncation error {tail:.3g} at r={r} exceeds {tol:.1g}; raise the order")
    return tail


def _check_conditioning(f: NormalizedSeries, s: TruncatedSeries, r: float) -> float:
    """Estimated rounding error of the series ``s = zf'/f`` on ``|z| = r``.

    The first N coefficients of ``s`` depend only on the first N+1 of ``f``,
    so truncation of ``f`` is irrelevant here; what can go wrong is
    cancellation when the coefficients of ``f`` are huge.  A fixed relative
    perturbation of size PERTURBATION is pushed through the same recursion
    and the response on the circle is rescaled to machine precision.
    """
    rng = np.random.default_rng(0)
    c = f.coeffs * (1 + PERTURBATION * rng.uniform(-1.0, 1.0, f.coeffs.size))
    c[:2] = (0.0, 1.0)
    moved = z_log_derivative(NormalizedSeries(c))
    weights = r ** np.arange(s.order + 1)
    response = float(np.sum(np.abs(moved.coeffs - s.coeffs) * weights))
    scale = max(1.0, float(np.sum(np.abs(s.coeffs) * weights)))
    est = response * (_EPS / PERTURBATION) / scale
    if not est <= CONDITION_TOL:
        raise IllConditioned(
            f"estimated relative rounding error {est:.3g} of zf'/f at r={r}: double precision cannot resolve it"
        )
    return est


def region_contains(curve_fn, n_samples: int, points, boundary_tol: float = 1e-9):
    """Containment of ``points`` in the region bounded by a closed curve.

    ``curve_fn(theta)`` evaluates the boundary.  Points whose winding
    computation is ambiguous (some arg increment above pi/2) are retried
    against a doubled sampling, up to MAX_CURVE_SAMPLES.  Returns
    ``(inside, distance, winding)``.
    """
    pts = np.asarray(points, dtype=complex)
    inside = np.zeros(pts.size, dtype=bool)
    wind = np.zeros(pts.size, dtype=np.int64)
    dist = np.full(pts.size, np.inf)
    todo = np.arange(pts.size)
    n = n_samples
    while True:
        theta = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
        curve = curve_fn(theta)
        sub = pts[todo]
        d = geometry.distance_to_polyline(curve, sub)
        dist[todo] = d
        on_boundary = d <= boundary_tol * np.maximum(1.0, np.abs(sub))
        w = geometry.winding_number(curve, sub)
        wind[todo] = w
        inside[todo] = on_boundary | (w == 1)
        if n >= MAX_CURVE_SAMPLES:
            break
        inc = geometry.max_argument_increment(curve, sub)
        ambiguous = (inc > np.pi / 2) & ~on_boundary
        if not ambiguous.any():
            break
        todo = todo[ambiguous]
        n *= 2
    return inside, dist, wind


def _depth(inside, dist, vals):
    """Relative distance to the boundary: positive outside, negative inside."""
    rel = dist / np.maximum(np.abs(vals), 1e-300)
    return np.where(inside, -rel, rel)


def _values_on_circle(s: TruncatedSeries, r: float, theta: np.ndarray) -> np.ndarray:
    return evaluate(s, r * np.exp(1j * theta))


def membership_sk(
    f: NormalizedSeries,
    alpha,
    radii: Sequence[float] = DEFAULT_RADII,
    samples: int = DEFAULT_SAMPLES,
    boundary_tol: float = 1e-9,
    tail_tol: float = TAIL_TOL,
) -> MembershipReport:
    """Is ``zf'/f`` subordinate to ``q_alpha`` on each disk ``|z| < r``?"""
    a = _alpha(alpha)
    if not isinstance(f, NormalizedSeries):
        f = NormalizedSeries(f.coeffs)
    s = z_log_derivative(f)
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    contained, details = [], []
    worst = None
    worst_depth = -np.inf
    for r in radii:
        if not 0 < r < 1:
            raise ValueError("radii must lie in (0, 1)")
        gap = _check_conditioning(f, s, r)
        tail = _check_tail(s, r, tail_tol)
        boundary = q_alpha_eval(a, r * np.exp(1j * theta))
        if geometry.closed_polyline_self_intersects(boundary):
            raise DegenerateCurve(f"q_alpha boundary at r={r} self-intersects")
        vals = _values_on_circle(s, r, theta)
        inside, dist, wind = region_contains(
            lambda t: q_alpha_eval(a, r * np.exp(1j * t)), samples, vals, boundary_tol
        )
        ok = bool(inside.all())
        contained.append(ok)
        depth = _depth(inside, dist, vals)
        i = int(np.argmax(depth))
        if depth[i] > worst_depth:
            worst_depth = float(depth[i])
            worst = _witness(r, theta[i], vals[i], distance=float(dist[i]), inside=bool(inside[i]))
        details.append(
            {
                "radius": r,
                "contained": ok,
                "outside_count": int((~inside).sum()),
                "tail_estimate": tail,
                "rounding_estimate": gap,
                "min_distance_to_boundary": float(dist.min()),
            }
        )
    return MembershipReport(list(radii), contained, worst, all(contained), details)


def membership_q(
    f: NormalizedSeries,
    gamma: float,
    radii: Sequence[float] = DEFAULT_RADII,
    samples: int = DEFAULT_SAMPLES,
    tail_tol: float = TAIL_TOL,
) -> MembershipReport:
    """Sampled test of ``Re f(z)/z > gamma`` on the circles ``|z| = r``."""
    if not isinstance(f, NormalizedSeries):
        f = NormalizedSeries(f.coeffs)
    g = f.over_z()
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    contained, details = [], []
    worst, worst_margin = None, np.inf
    for r in radii:
        tail = _check_tail(g, r, tail_tol)
        vals = _values_on_circle(g, r, theta)
        i = int(np.argmin(vals.real))
        margin = float(vals.real[i] - gamma)
        contained.append(margin > 0)
        if margin < worst_margin:
            worst_margin = margin
            worst = _witness(r, theta[i], vals[i], margin=margin)
        details.append({"radius": r, "min_re": float(vals.real[i]), "margin": margin, "tail_estimate": tail})
    return MembershipReport(list(radii), contained, worst, all(contained), details)


def subordination_check(
    f: TruncatedSeries,
    g: TruncatedSeries,
    radii: Sequence[float] = DEFAULT_RADII,
    samples: int = DEFAULT_SAMPLES,
    boundary_tol: float = 1e-9,
    tail_tol: float = TAIL_TOL,
) -> MembershipReport:
    """Sampled test of ``f < g``: image containment plus the max-modulus condition."""
    if abs(f.coeffs[0] - g.coeffs[0]) > boundary_tol:
        return MembershipReport(
            [],
            [],
            {"reason": "f(0) != g(0)", "f0": [f.coeffs[0].real, f.coeffs[0].imag]},
            False,
            [{"f0_equals_g0": False}],
        )
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    contained, details = [], []
    worst, worst_depth = None, -np.inf
    for r in radii:
        _check_tail(f, r, tail_tol)
        _check_tail(g, r, tail_tol)
        boundary = _values_on_circle(g, r, theta)
        if geometry.closed_polyline_self_intersects(boundary):
            raise DegenerateCurve(f"boundary of g at r={r} self-intersects")
        vals = _values_on_circle(f, r, theta)
        inside, dist, _ = region_contains(lambda t: _values_on_circle(g, r, t), samples, vals, boundary_tol)
        max_f = float(np.abs(vals).max())
        max_g = float(np.abs(boundary).max())
        modulus_ok = max_f <= max_g * (1 + boundary_tol) + boundary_tol
        ok = bool(inside.all()) and modulus_ok
        contained.append(ok)
        depth = _depth(inside, dist, vals)
        i = int(np.argmax(depth))
        if depth[i] > worst_depth:
            worst_depth = float(depth[i])
            worst = _witness(r, theta[i], vals[i], distance=float(dist[i]), inside=bool(inside[i]))
        details.append(
            {
                "radius": r,
                "image_contained": bool(inside.all()),
                "max_modulus_ok": modulus_ok,
                "max_abs_f": max_f,
                "max_abs_g": max_g,
            }
        )
    return MembershipReport(list(radii), contained, worst, all(contained), details)


def q_class_check(
    alpha, radii: Sequence[float] = DEFAULT_RADII, order: int = 4096, samples: int = DEFAULT_SAMPLES
) -> BoundReport:
    """Test ``Re phi_alpha(z)/z > gamma(alpha)`` on the extremal function."""
    a = _alpha(alpha)
    gamma = q_order(a)
    rep = membership_q(extremal_series(a, order), gamma, radii, samples)
    min_re = min(d["min_re"] for d in rep.details)
    return BoundReport(
        claim=f"Re(phi_alpha(z)/z) > gamma(alpha) = {gamma!r} (alpha={a})",
        measured=min_re,
        bound=gamma,
        margin=min_re - gamma,
        passed=rep.passed,
        witness=rep.worst_witness,
        details={"membership": rep.to_dict()},
    )


def half_bound_readings_check(
    radii: Sequence[float] = DEFAULT_RADII, order: int = 4096, samples: int = DEFAULT_SAMPLES
) -> dict[str, MembershipReport]:
    """``Re f/z > 1/2`` under both readings of the starlike hypothesis.

    ``"re_zf_over_f_gt_0"`` tests the Koebe function (in the starlike class);
    ``"re_zf_over_f_gt_half"`` tests ``z/(1-z)`` (starlike of order 1/2).
    """
    return {
        "re_zf_over_f_gt_0": membership_q(koebe(order), 0.5, radii, samples),
        "re_zf_over_f_gt_half": membership_q(extremal_series(0.0, order), 0.5, radii, samples),
    }
