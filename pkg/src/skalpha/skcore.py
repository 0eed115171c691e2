"""Closed-form quantities attached to the kernel q_alpha and the family p_b.

    p_b(z)     = 1 / (1 - (1+b) z + b z^2)
    q_alpha(z) = 3 / (3 + (alpha-3) z - alpha z^2)  =  p_{-alpha/3}(z)

and the constants derived from them: Taylor coefficients ``B_n``, the
starlike order, the lower bound for ``Re f(z)/z``, the strong-starlikeness
order and the sampled boundary curves ``q_alpha(|z| = r)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import geometry
from .errors import (
    DenominatorNonpositive,
    OutOfTheoremRange,
    ParameterRangeError,
    PoleProximity,
)
from .reports import BoundReport
from .series import TruncatedSeries

POLE_EPS = 1e-12
# samples this close to the z = 1 pole are dropped from boundary maximizations
EXCLUSION_EPS = 1e-9

ALPHA_MIN = -3.0
ALPHA_MAX = 1.0


@dataclass(frozen=True)
class AlphaParam:
    """Parameter of the class, restricted to ``-3 < alpha <= 1``."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or not (ALPHA_MIN < a <= ALPHA_MAX):
            raise ParameterRangeError(f"alpha must lie in (-3, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    def __float__(self) -> float:
        return self.alpha


@dataclass(frozen=True)
class BParam:
    """Parameter ``b`` of the family ``p_b``, restricted to ``[-1, 1]``."""

    b: float

    def __post_init__(self):
        b = float(self.b)
        if not math.isfinite(b) or not (-1.0 <= b <= 1.0):
            raise ParameterRangeError(f"b must lie in [-1, 1], got {self.b!r}")
        object.__setattr__(self, "b", b)

    def __float__(self) -> float:
        return self.b

    @property
    def interior(self) -> bool:
        return abs(self.b) < 1

    @property
    def loop_free(self) -> bool:
        """Regime ``-1/3 <= b < 1``."""
        return -1.0 / 3.0 <= self.b < 1.0

    @property
    def univalent(self) -> bool:
        """Regime ``-1/3 <= b <= 1``."""
        return -1.0 / 3.0 <= self.b <= 1.0


@dataclass(frozen=True)
class CurveSample:
    theta: float
    value: complex
    radius: float


@dataclass(frozen=True)
class OrderBounds:
    starlike_order: float
    q_order: float | None
    strong_order: float


def _alpha(alpha) -> float:
    return AlphaParam(alpha).alpha if not isinstance(alpha, AlphaParam) else alpha.alpha


def _b(b) -> float:
    return BParam(b).b if not isinstance(b, BParam) else b.b


# the family p_b and the kernel --------------------------------------------


def p_b_eval(b, z):
    """Evaluate ``p_b`` at ``z`` (scalar or array)."""
    b = _b(b)
    z = np.asarray(z, dtype=complex)
    den = 1 - (1 + b) * z + b * z * z
    if np.any(np.abs(den) < POLE_EPS):
        raise PoleProximity("evaluation point is at a pole of p_b")
    out = 1.0 / den
    return complex(out) if out.ndim == 0 else out


def p_b_re_lower(b) -> float:
    """Lower bound ``(1-3b) / (2(1-b)^2)`` for ``Re p_b`` on the disk, ``|b| < 1``."""
    b = _b(b)
    if not abs(b) < 1:
        raise OutOfTheoremRange("the real-part bound needs |b| < 1")
    return (1 - 3 * b) / (2 * (1 - b) ** 2)


def q_alpha_denominator(alpha, z):
    a = _alpha(alpha)
    z = np.asarray(z, dtype=complex)
    return 3 + (a - 3) * z - a * z * z


def q_alpha_eval(alpha, z):
    """Evaluate the kernel ``3 / (3 + (alpha-3) z - alpha z^2)``."""
    den = q_alpha_denominator(alpha, z)
    if np.any(np.abs(den) < POLE_EPS):
        raise PoleProximity("evaluation point is at a pole of q_alpha")
    out = 3.0 / den
    return complex(out) if out.ndim == 0 else out


def q_alpha_coeff(alpha, n: int) -> float:
    """Closed-form Taylor coefficient ``B_n = 3/(3+a) [1 + (-1)^n (a/3)^{n+1}]``."""
    if n < 1:
        raise ValueError("B_n is defined for n >= 1")
    a = _alpha(alpha)
    return 3.0 / (3.0 + a) * (1.0 + (-1) ** n * (a / 3.0) ** (n + 1))


def q_alpha_coeffs(alpha, order: int) -> np.ndarray:
    """``[1, B_1, ..., B_order]`` from the closed form."""
    a = _alpha(alpha)
    n = np.arange(order + 1)
    out = 3.0 / (3.0 + a) * (1.0 + (-1.0) ** n * (a / 3.0) ** (n + 1))
    out[0] = 1.0
    return out


def q_alpha_recurrence(alpha, order: int) -> np.ndarray:
    """Taylor coefficients of ``q_alpha`` from ``3c_n + (a-3)c_{n-1} - a c_{n-2} = 0``.

    Independent of the closed form; used as its oracle.
    """
    a = _alpha(alpha)
    c = np.zeros(order + 1)
    c[0] = 1.0
    if order >= 1:
        c[1] = -(a - 3) * c[0] / 3
    for n in range(2, order + 1):
        c[n] = (a * c[n - 2] - (a - 3) * c[n - 1]) / 3
    return c


def q_alpha_series(alpha, order: int = 64) -> TruncatedSeries:
    return TruncatedSeries(q_alpha_coeffs(alpha, order))


def b2_printed(alpha) -> float:
    """The value ``(a^2 - 3a + 9)/18`` inserted for ``B_2`` in the Fekete-Szego proof."""
    a = _alpha(alpha)
    return (a * a - 3 * a + 9) / 18.0


# order constants ----------------------------------------------------------


def starlike_order(alpha) -> float:
    """``9(1+a) / (2(3+a)^2)``: lower bound for ``Re zf'/f`` on the class."""
    a = _alpha(alpha)
    return 9 * (1 + a) / (2 * (3 + a) ** 2)


def q_order(alpha) -> float:
    """``(2a^2+3a+9) / (3(a^2+3a+6))``, valid for ``0 <= alpha <= 1``."""
    a = _alpha(alpha)
    if not 0.0 <= a <= 1.0:
        raise OutOfTheoremRange(f"the Re(f/z) bound needs 0 <= alpha <= 1, got {a}")
    return (2 * a * a + 3 * a + 9) / (3 * (a * a + 3 * a + 6))


def psi(a, b, gamma: float):
    """``1 + (1-g) b / ((1-g) a + g)``."""
    return 1 + (1 - gamma) * b / ((1 - gamma) * a + gamma)


def h_ratio(rho, gamma: float):
    """``(1 + rho^2) / ((1-g)^2 rho^2 + g^2)``."""
    rho = np.asarray(rho, dtype=float)
    return (1 + rho**2) / ((1 - gamma) ** 2 * rho**2 + gamma**2)


def admissibility_check(alpha, rho_grid: Sequence[float] | None = None, tol: float = 1e-12) -> BoundReport:
    """Numerically confirm the admissibility condition behind the ``Re f/z`` bound.

    For each ``rho`` with the binding ``sigma = -(1+rho^2)/2`` this checks
    ``Re psi(i rho, sigma) <= (2-3g)/(2(1-g))`` and that ``h(rho)`` lies in
    ``[1/(1-g)^2, 1/g^2]``.  The report's margin is the worst
    ``threshold - Re psi`` over the grid.
    """
    a = _alpha(alpha)
    gamma = q_order(a)
    if rho_grid is None:
        rho_grid = np.concatenate([np.linspace(0.0, 10.0, 1001), np.geomspace(10.0, 1e6, 200)])
    rho = np.asarray(rho_grid, dtype=float)
    sigma = -(1 + rho**2) / 2
    re_psi = np.real(psi(1j * rho, sigma, gamma))
    threshold = (2 - 3 * gamma) / (2 * (1 - gamma))
    margins = threshold - re_psi
    h = h_ratio(rho, gamma)
    h_lo, h_hi = 1 / (1 - gamma) ** 2, 1 / gamma**2
    h_ok = bool(np.all((h >= h_lo - tol * h_lo) & (h <= h_hi + tol * h_hi)))
    worst = int(np.argmin(margins))
    # the threshold must coincide with the starlike order for the argument to close
    consistency = abs(threshold - starlike_order(a))
    passed = bool(margins[worst] >= -tol) and h_ok and consistency <= 1e-12
    return BoundReport(
        claim=f"Re psi(i rho, sigma) <= (2-3g)/(2(1-g)) for alpha={a}",
        measured=float(re_psi[worst]),
        bound=float(threshold),
        margin=float(margins[worst]),
        passed=passed,
        witness={"rho": float(rho[worst]), "sigma": float(sigma[worst])},
        tolerance=tol,
        details={
            "gamma": gamma,
            "h_range_ok": h_ok,
            "h_min": float(h.min()),
            "h_max": float(h.max()),
            "h_bounds": [h_lo, h_hi],
            "starlike_order": starlike_order(a),
            "threshold_vs_starlike_order": consistency,
            "grid_size": int(rho.size),
        },
    )


def tangent_ratio(alpha, r: float) -> float:
    """``(3(3-a) r + |a| r^2) / (9 - 3(3-a) r - 3|a| r^2)`` for ``0 < r < 1``."""
    a = _alpha(alpha)
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    den = 9 - 3 * (3 - a) * r - 3 * abs(a) * r * r
    if den <= 0:
        raise DenominatorNonpositive(f"denominator {den} <= 0 at r={r}, alpha={a}")
    return (3 * (3 - a) * r + abs(a) * r * r) / den


def tangent_ratio_breakdown_radius(alpha) -> float:
    """Smallest ``r`` in (0, 1] where the tangent-ratio denominator vanishes (1 if none)."""
    a = _alpha(alpha)
    # 3|a| r^2 + 3(3-a) r - 9 = 0
    qa, qb, qc = 3 * abs(a), 3 * (3 - a), -9.0
    if qa == 0:
        root = -qc / qb
    else:
        root = (-qb + math.sqrt(qb * qb - 4 * qa * qc)) / (2 * qa)
    return min(root, 1.0)


def strongly_starlike_order(alpha) -> float:
    """Strong-starlikeness order of the class for ``-1 < alpha <= 1``.

    The closed form ``(2/pi) arctan(...)`` evaluated at ``r = 1`` has a
    denominator ``3a - 3|a| <= 0``; in that case the order is the limit
    value 1.
    """
    a = _alpha(alpha)
    if not -1.0 < a <= 1.0:
        raise OutOfTheoremRange(f"strong order needs -1 < alpha <= 1, got {a}")
    num = 3 * (3 - a) + abs(a)
    den = 9 - 3 * (3 - a) - 3 * abs(a)
    if den <= 0:
        return 1.0
    return 2 / math.pi * math.atan(num / den)


def _abs_arg_q(alpha: float, r: float, theta):
    return np.abs(np.angle(q_alpha_eval(alpha, r * np.exp(1j * np.asarray(theta)))))


def numeric_strong_order(alpha, r: float, samples: int = 65536) -> tuple[float, float]:
    """``(2/pi) max_theta |arg q_alpha(r e^{i theta})|`` and the maximizing angle.

    Uniform grid followed by one bounded scalar refinement around the grid
    argmax.  Samples within EXCLUSION_EPS of the pole are skipped.
    """
    a = _alpha(alpha)
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    z = r * np.exp(1j * theta)
    den = q_alpha_denominator(a, z)
    keep = np.abs(den) >= EXCLUSION_EPS
    vals = np.full(samples, -np.inf)
    vals[keep] = np.abs(np.angle(3.0 / den[keep]))
    i = int(np.argmax(vals))
    step = 2 * np.pi / samples
    lo, hi = theta[i] - step, theta[i] + step
    res = minimize_scalar(
        lambda t: -float(_abs_arg_q(a, r, t)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-14}
    )
    best, arg = float(vals[i]), float(theta[i])
    if -res.fun > best:
        best, arg = float(-res.fun), float(res.x)
    return 2 / math.pi * best, arg


def order_bounds(alpha) -> OrderBounds:
    a = _alpha(alpha)
    qo = q_order(a) if 0.0 <= a <= 1.0 else None
    so = strongly_starlike_order(a) if a > -1.0 else 1.0
    return OrderBounds(starlike_order=starlike_order(a), q_order=qo, strong_order=so)


# boundary curves -----------------------------------------------------------


def boundary_values(alpha, r: float, samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Angles and values of ``q_alpha(r e^{i theta})`` on a uniform grid."""
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    if samples < 16:
        raise ValueError("need at least 16 samples")
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    return theta, q_alpha_eval(alpha, r * np.exp(1j * theta))


def boundary_curve(alpha, r: float, samples: int = 1024) -> list[CurveSample]:
    theta, vals = boundary_values(alpha, r, samples)
    return [CurveSample(float(t), complex(v), r) for t, v in zip(theta, vals)]


def curve_self_intersects(curve) -> bool:
    """Does the closed polyline through the samples cross itself."""
    if len(curve) and isinstance(curve[0], CurveSample):
        curve = [c.value for c in curve]
    pts = curve
    return geometry.closed_polyline_self_intersects(np.asarray(pts, dtype=complex))


def curve_to_csv(curve: Sequence[CurveSample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "re", "im"])
    for c in curve:
        w.writerow([repr(c.theta), repr(c.value.real), repr(c.value.imag)])
    return buf.getvalue()


def curve_to_json(curve: Sequence[CurveSample]) -> str:
    return json.dumps(
        [{"theta": c.theta, "re": c.value.real, "im": c.value.imag, "radius": c.radius} for c in curve]
    )


def min_real_part(alpha, r: float, samples: int = 4096) -> float:
    """Minimum of ``Re q_alpha`` over a uniform grid on ``|z| = r``."""
    _, vals = boundary_values(alpha, r, samples)
    return float(vals.real.min())
