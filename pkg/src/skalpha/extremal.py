"""The extremal function, logarithmic coefficients and their inequalities."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .errors import InsufficientTerms
from .reports import BoundReport
from .series import (
    NormalizedSeries,
    TruncatedSeries,
    exp_zero,
    identity,
    integrate_dt_over_t,
    log_unit,
    mul,
    reciprocal,
)
from .skcore import _alpha, q_alpha_coeff, q_alpha_series

PI2_6 = math.pi**2 / 6
_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class LogCoeffs:
    """``gamma_1 .. gamma_N`` with ``log f(z)/z = sum 2 gamma_n z^n``."""

    gammas: np.ndarray

    def __post_init__(self):
        arr = np.array(self.gammas, dtype=complex).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, "gammas", arr)

    def __len__(self) -> int:
        return self.gammas.size

    def __getitem__(self, n: int) -> complex:
        """1-based access: ``lc[1]`` is ``gamma_1``."""
        if n < 1:
            raise IndexError("logarithmic coefficients start at n = 1")
        return complex(self.gammas[n - 1])

    def energy(self) -> float:
        """Compensated partial sum of ``|gamma_n|^2``."""
        return math.fsum((np.abs(self.gammas) ** 2).tolist())

    def reconstruct(self) -> NormalizedSeries:
        """Normalized series whose logarithmic coefficients are these."""
        log_series = np.concatenate(([0.0], 2 * self.gammas))
        g = exp_zero(TruncatedSeries(log_series))
        return NormalizedSeries(np.concatenate(([0.0], g.coeffs)))

    def to_dict(self) -> dict:
        return {"gammas": [[float(g.real), float(g.imag)] for g in self.gammas]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "LogCoeffs":
        return cls(np.array([complex(re, im) for re, im in doc["gammas"]], dtype=complex))


@dataclass(frozen=True)
class DilogResult:
    value: float
    terms_used: int
    tail_bound: float


def schwarz_composite(alpha, w: TruncatedSeries) -> TruncatedSeries:
    """Series of ``q_alpha(w(z))`` computed from the rational form."""
    a = _alpha(alpha)
    den = 3 + (a - 3) * w - a * mul(w, w)
    return 3.0 * reciprocal(den)


def from_schwarz(alpha, w: TruncatedSeries, order: int | None = None) -> NormalizedSeries:
    """The function ``z exp int_0^z (q_alpha(w(t)) - 1)/t dt`` of the class.

    Any Schwarz function ``w`` (``w(0) = 0``, ``|w| < 1``) yields a member,
    and every member arises this way.  The result has order ``order`` (default
    ``w.order + 1``).
    """
    if order is None:
        order = w.order + 1
    if w.order < order - 1:
        raise InsufficientTerms(f"w has order {w.order}, need {order - 1}")
    w = w.truncate(order - 1)
    if abs(w.coeffs[0]) > 0:
        raise ValueError("a Schwarz function vanishes at the origin")
    log_f_over_z = integrate_dt_over_t(schwarz_composite(alpha, w) - 1.0)
    g = exp_zero(log_f_over_z)
    return NormalizedSeries(np.concatenate(([0.0], g.coeffs)))


def extremal_series(alpha, order: int = 64) -> NormalizedSeries:
    """``phi_alpha(z) = z exp int_0^z (q_alpha(t) - 1)/t dt`` to order ``order``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    log_f_over_z = integrate_dt_over_t(q_alpha_series(alpha, order - 1) - 1.0)
    g = exp_zero(log_f_over_z)
    return NormalizedSeries(np.concatenate(([0.0], g.coeffs)))


def log_coeffs(f: NormalizedSeries, n: int | None = None) -> LogCoeffs:
    """Logarithmic coefficients ``gamma_1 .. gamma_n`` of ``f`` (needs order n+1)."""
    if not isinstance(f, NormalizedSeries):
        f = NormalizedSeries(f.coeffs)
    if n is None:
        n = f.order - 1
    if n > f.order - 1:
        raise InsufficientTerms(f"gamma_{n} needs order {n + 1}, series has {f.order}")
    g = f.truncate(n + 1).over_z()
    return LogCoeffs(log_unit(g).coeffs[1:] / 2)


# dilogarithm ----------------------------------------------------------------


def dilog_tail_bound(x: float, terms: int) -> float:
    """Rigorous bound on ``|sum_{n>terms} x^n/n^2|`` for ``|x| < 1``."""
    ax = abs(x)
    if ax >= 1:
        return 1.0 / terms  # sum_{n>N} 1/n^2 < 1/N
    return ax ** (terms + 1) / ((terms + 1) ** 2 * (1 - ax))


def dilog(x: float, terms: int | None = None, target: float = 1e-17) -> DilogResult:
    """Real dilogarithm ``Li_2(x) = sum x^n/n^2`` for ``|x| <= 1``.

    Partial sums with an explicit error bound (truncation plus a rounding
    allowance).  ``x = 1`` and ``x = -1`` return the exact constants.
    """
    x = float(x)
    if abs(x) > 1:
        raise ValueError("dilog is only summed for |x| <= 1")
    if x == 1.0:
        return DilogResult(PI2_6, 0, 0.0)
    if x == -1.0:
        return DilogResult(-PI2_6 / 2, 0, 0.0)
    if x == 0.0:
        return DilogResult(0.0, 0, 0.0)
    if terms is None:
        terms = 1
        while dilog_tail_bound(x, terms) > target and terms < 10**6:
            terms *= 2
    n = np.arange(1, terms + 1, dtype=float)
    t = x**n / n**2
    value = math.fsum(t.tolist())
    rounding = 4 * _EPS * float(np.abs(t).sum()) + _EPS * abs(value)
    return DilogResult(value, int(terms), dilog_tail_bound(x, terms) + rounding)


# log-energy inequality ------------------------------------------------------


def log_energy_rhs(alpha) -> float:
    """``(3 pi^2/2 + 6a Li2(-a/3) + a^2 Li2(a^2/9)) / (4 (3+a)^2)``."""
    a = _alpha(alpha)
    li_a = dilog(-a / 3).value
    li_b = dilog(a * a / 9).value
    return (1.5 * math.pi**2 + 6 * a * li_a + a * a * li_b) / (4 * (3 + a) ** 2)


def energy_tail_interval(alpha, n: int) -> tuple[float, float]:
    """Bracket for ``sum_{k>n} B_k^2/(4k^2)``.

    Uses ``s(1 - r^{k+1}) <= |B_k| <= s(1 + r^{k+1})`` with ``s = 3/(3+a)``
    and ``r = |a|/3``; the zeta tail is exact, the geometric parts bounded.
    """
    a = _alpha(alpha)
    s2 = (3.0 / (3.0 + a)) ** 2
    r = abs(a) / 3.0
    z_tail = float(zeta(2.0, n + 1))
    if r == 0:
        return s2 * z_tail / 4, s2 * z_tail / 4
    g1 = r ** (n + 2) / ((n + 1) ** 2 * (1 - r))
    g2 = r ** (2 * n + 4) / ((n + 1) ** 2 * (1 - r * r))
    lo = s2 * max(z_tail - 2 * g1, 0.0) / 4
    hi = s2 * (z_tail + 2 * g1 + g2) / 4
    return lo, hi


def verify_log_energy(
    alpha, terms: int = 10_000, tol: float = 1e-6, f: NormalizedSeries | None = None
) -> BoundReport:
    """Check ``sum |gamma_n|^2`` against the dilogarithm bound.

    Without ``f`` the extremal function is used and the check is one of
    equality: partial sum plus the bracketed tail must match the bound to
    ``tol``.  With ``f`` only the inequality on the partial sum is checked.
    """
    a = _alpha(alpha)
    rhs = log_energy_rhs(a)
    if f is not None:
        partial = log_coeffs(f, min(terms, f.order - 1)).energy()
        return BoundReport(
            claim=f"sum |gamma_n|^2 <= log-energy bound (alpha={a})",
            measured=partial,
            bound=rhs,
            margin=rhs - partial,
            passed=partial <= rhs + tol,
            tolerance=tol,
            details={"terms": min(terms, f.order - 1), "sharpness_checked": False},
        )
    lo, hi = energy_tail_interval(a, terms)
    if hi - lo > tol / 2:
        raise InsufficientTerms(f"tail bracket width {hi - lo:.3g} exceeds tol/2 with {terms} terms")
    phi = extremal_series(a, terms + 1)
    partial = log_coeffs(phi, terms).energy()
    measured = partial + (lo + hi) / 2
    passed = abs(measured - rhs) <= tol and partial + lo <= rhs + tol
    return BoundReport(
        claim=f"sum |gamma_n(phi_alpha)|^2 equals log-energy bound (alpha={a})",
        measured=measured,
        bound=rhs,
        margin=rhs - measured,
        passed=bool(passed),
        tolerance=tol,
        details={"terms": terms, "partial": partial, "tail_lo": lo, "tail_hi": hi, "sharpness_checked": True},
    )


# per-coefficient bound ------------------------------------------------------


def per_coeff_bound_check(f: NormalizedSeries, alpha, n: int = 64, tol: float = 1e-12) -> BoundReport:
    """Check ``|gamma_k| <= (3 - alpha)/(6k)`` for ``k <= n``."""
    a = _alpha(alpha)
    n = min(n, f.order - 1)
    gam = np.abs(log_coeffs(f, n).gammas)
    k = np.arange(1, n + 1)
    bound = (3 - a) / (6 * k)
    margins = bound - gam
    worst = int(np.argmin(margins))
    return BoundReport(
        claim=f"|gamma_k| <= (3-alpha)/(6k), k <= {n} (alpha={a})",
        measured=float(gam[worst]),
        bound=float(bound[worst]),
        margin=float(margins[worst]),
        passed=bool(margins[worst] >= -tol),
        witness={"k": int(k[worst])},
        tolerance=tol,
        details={"violations": [int(x) for x in k[margins < -tol]]},
    )


# de Branges / Milin partial sums --------------------------------------------


def de_branges_partial_check(gammas: LogCoeffs, k: int, form: str = "milin", tol: float = 1e-9) -> BoundReport:
    """Weighted partial-sum inequality for the logarithmic coefficients.

    ``form="milin"``:   sum_{n<=k} (k-n+1) n |gamma_n|^2 <= sum_{n<=k} (k+1-n)/n
    ``form="printed"``: sum_{n<=k} (k-n+1)   |gamma_n|^2 <= sum_{n<=k} (k+1-n)/n

    The weighted form is the one for which rotations of the Koebe function
    give equality; the unweighted one is implied by it.
    """
    if k > len(gammas):
        raise InsufficientTerms(f"need {k} coefficients, have {len(gammas)}")
    if form not in ("milin", "printed"):
        raise ValueError("form must be 'milin' or 'printed'")
    n = np.arange(1, k + 1)
    g2 = np.abs(gammas.gammas[:k]) ** 2
    weight = (k - n + 1) * (n if form == "milin" else 1)
    lhs = math.fsum((weight * g2).tolist())
    rhs = math.fsum(((k + 1 - n) / n).tolist())
    return BoundReport(
        claim=f"de Branges partial sum ({form}), k={k}",
        measured=lhs,
        bound=rhs,
        margin=rhs - lhs,
        passed=bool(lhs <= rhs + tol),
        witness={"k": k},
        tolerance=tol,
        details={"form": form},
    )


def s_star_energy_check(gammas: LogCoeffs, tol: float = 1e-8) -> BoundReport:
    """Partial ``sum |gamma_n|^2`` against ``pi^2/6``; margin compared with the 1/n^2 tail."""
    partial = gammas.energy()
    tail = float(zeta(2.0, len(gammas) + 1))
    margin = PI2_6 - partial
    return BoundReport(
        claim="sum |gamma_n|^2 <= pi^2/6",
        measured=partial,
        bound=PI2_6,
        margin=margin,
        passed=bool(margin >= -tol),
        tolerance=tol,
        details={"zeta_tail": tail, "margin_minus_tail": margin - tail},
    )


def extremal_gamma(alpha, n: int) -> float:
    """``gamma_n(phi_alpha) = B_n/(2n)`` in closed form."""
    return q_alpha_coeff(alpha, n) / (2 * n)


def scaled_schwarz(order: int, factor: float = 0.5) -> TruncatedSeries:
    """``w(z) = factor * z``."""
    return identity(order) * factor
