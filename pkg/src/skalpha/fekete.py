"""Fekete-Szego functionals for k-th root transforms and inverse functions.

Every member of the class has ``zf'/f = q_alpha(w)`` for a Schwarz function
``w``; writing ``p = (1+w)/(1-w) = 1 + p1 z + p2 z^2 + ...`` turns the
functional into a function of the Caratheodory pair ``(p1, p2)``.  The
brute-force oracle scans that pair over convex combinations of two extreme
points ``(2x, 2x^2)``, ``|x| = 1``, which reach every boundary point of the
coefficient body.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import GridTooCoarse
from .reports import BoundReport
from .skcore import _alpha, b2_printed, q_alpha_coeff

VARIANTS = ("derived", "printed")
MU_PROBES = (0, 0.5, 1, 2, 1j, 1 + 1j, -1)


@dataclass(frozen=True)
class CaratheodoryPoint:
    p1: complex
    p2: complex
    witness: tuple[float, float, float] | None = None

    @classmethod
    def from_witness(cls, t: float, theta1: float, theta2: float) -> "CaratheodoryPoint":
        x1, x2 = np.exp(1j * theta1), np.exp(1j * theta2)
        p1 = 2 * (t * x1 + (1 - t) * x2)
        p2 = 2 * (t * x1**2 + (1 - t) * x2**2)
        return cls(complex(p1), complex(p2), (float(t), float(theta1), float(theta2)))

    def is_valid(self, tol: float = 1e-12) -> bool:
        """Membership in the coefficient body ``|p2 - p1^2/2| <= 2 - |p1|^2/2``."""
        return abs(self.p1) <= 2 + tol and abs(self.p2 - self.p1**2 / 2) <= 2 - abs(self.p1) ** 2 / 2 + tol

    def to_dict(self) -> dict:
        return {
            "p1": [self.p1.real, self.p1.imag],
            "p2": [self.p2.real, self.p2.imag],
            "witness": list(self.witness) if self.witness else None,
        }


@dataclass(frozen=True)
class FunctionalSpec:
    mu: complex
    k: int
    alpha: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        object.__setattr__(self, "alpha", _alpha(self.alpha))


@dataclass(frozen=True)
class SharpnessResult:
    alpha: float
    k: int
    mu: complex
    bound_derived: float
    bound_printed: float
    oracle_max: float
    argmax_witness: CaratheodoryPoint
    samples: int
    grid_max: float
    upper_ok: bool
    attained: bool
    printed_consistent: bool

    @property
    def passed(self) -> bool:
        return self.upper_ok and self.attained

    @property
    def discrepancy(self) -> bool:
        return not self.printed_consistent

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mu"] = [self.mu.real, self.mu.imag]
        d["argmax_witness"] = self.argmax_witness.to_dict()
        d["pass"] = self.passed
        d["discrepancy"] = self.discrepancy
        return d


def b_coeffs(alpha, variant: str = "derived") -> tuple[float, float]:
    """``(B_1, B_2)``; the printed variant swaps in ``(a^2-3a+9)/18`` for ``B_2``."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    b1 = q_alpha_coeff(alpha, 1)
    b2 = q_alpha_coeff(alpha, 2) if variant == "derived" else b2_printed(alpha)
    return b1, b2


def coeffs_from_p(alpha, point: CaratheodoryPoint, variant: str = "derived") -> tuple[complex, complex]:
    """``a2 = B1 p1/2`` and ``a3 = (B1^2+B2) p1^2/8 + B1 (p2 - p1^2/2)/4``."""
    b1, b2 = b_coeffs(alpha, variant)
    p1, p2 = point.p1, point.p2
    a2 = 0.5 * b1 * p1
    a3 = (b1 * b1 + b2) * p1 * p1 / 8 + b1 * (p2 - p1 * p1 / 2) / 4
    return complex(a2), complex(a3)


def root_transform_coeffs(a2, a3, k: int) -> tuple[complex, complex]:
    """``b_{k+1} = a2/k`` and ``b_{2k+1} = a3/k - (k-1) a2^2 / (2k^2)``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return a2 / k, a3 / k - (k - 1) * a2 * a2 / (2 * k * k)


def mu_prime(alpha, k: int, mu, variant: str = "derived") -> complex:
    """``((2mu-1) B1/k - B2/B1 + 1)/2``."""
    b1, b2 = b_coeffs(alpha, variant)
    return 0.5 * ((2 * mu - 1) / k * b1 - b2 / b1 + 1)


def fs_bound(alpha, k: int, mu, variant: str = "derived") -> float:
    """Upper bound for ``|b_{2k+1} - mu b_{k+1}^2|``.

    ``derived`` is ``(B1/2k) max{1, |2mu' - 1|}`` with the true ``B_2``;
    ``printed`` is the closed form in which ``B_2`` was taken as
    ``(a^2-3a+9)/18``.
    """
    a = _alpha(alpha)
    if variant == "printed":
        inner = (2 * mu - 1) / k * (1 - a / 3) - (a * a - 3 * a + 9) / (6 * (3 - a))
        return (3 - a) / (6 * k) * max(1.0, abs(inner))
    b1, _ = b_coeffs(a, variant)
    return b1 / (2 * k) * max(1.0, abs(2 * mu_prime(a, k, mu, variant) - 1))


def functional_value(alpha, k: int, mu, point: CaratheodoryPoint, variant: str = "derived") -> float:
    """``|b_{2k+1} - mu b_{k+1}^2|`` for the member generated by ``point``."""
    a2, a3 = coeffs_from_p(alpha, point, variant)
    bk1, b2k1 = root_transform_coeffs(a2, a3, k)
    return abs(b2k1 - mu * bk1 * bk1)


def _functional_grid(alpha, k, mu, t, th1, th2):
    b1, b2 = b_coeffs(alpha, "derived")
    x1, x2 = np.exp(1j * th1), np.exp(1j * th2)
    p1 = 2 * (t * x1 + (1 - t) * x2)
    p2 = 2 * (t * x1 * x1 + (1 - t) * x2 * x2)
    a2 = 0.5 * b1 * p1
    a3 = (b1 * b1 + b2) * p1 * p1 / 8 + b1 * (p2 - p1 * p1 / 2) / 4
    bk1 = a2 / k
    b2k1 = a3 / k - (k - 1) * a2 * a2 / (2 * k * k)
    return np.abs(b2k1 - mu * bk1 * bk1)


def _p_functional_grid(mu, t, th1, th2):
    x1, x2 = np.exp(1j * th1), np.exp(1j * th2)
    p1 = 2 * (t * x1 + (1 - t) * x2)
    p2 = 2 * (t * x1 * x1 + (1 - t) * x2 * x2)
    return np.abs(p2 - mu * p1 * p1)


@dataclass(frozen=True)
class GridSpec:
    """Witness grid: ``n_t`` values of t in [0, 1], ``n_theta`` angles each."""

    n_t: int = 101
    n_theta: int = 360
    refine: bool = True
    refine_tol: float = 1e-3

    @property
    def samples(self) -> int:
        return self.n_t * self.n_theta * self.n_theta


def _grid_max(fun, grid: GridSpec):
    """Deterministic max over the grid; ties break to the lexicographically first witness."""
    ts = np.linspace(0.0, 1.0, grid.n_t)
    th = np.linspace(0.0, 2 * np.pi, grid.n_theta, endpoint=False)
    th1, th2 = np.meshgrid(th, th, indexing="ij")
    best, arg = -np.inf, (0.0, 0.0, 0.0)
    for t in ts:
        vals = fun(t, th1, th2)
        i = int(np.argmax(vals))
        if vals.flat[i] > best:
            best = float(vals.flat[i])
            arg = (float(t), float(th1.flat[i]), float(th2.flat[i]))
    return best, arg


def _refine(fun, start, grid: GridSpec):
    def neg(x):
        t = min(max(x[0], 0.0), 1.0)
        return -float(fun(t, x[1], x[2]))

    res = minimize(neg, np.array(start), method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
    t = min(max(res.x[0], 0.0), 1.0)
    return -float(res.fun), (float(t), float(res.x[1] % (2 * np.pi)), float(res.x[2] % (2 * np.pi)))


def brute_force_max(
    alpha, k: int, mu, grid: GridSpec | None = None, upper_tol: float = 1e-6, attain_tol: float = 1e-3
) -> SharpnessResult:
    """Maximize the functional over the witness grid and compare with both bounds."""
    a = _alpha(alpha)
    grid = grid or GridSpec()
    mu = complex(mu)

    def fun(t, th1, th2):
        return _functional_grid(a, k, mu, t, th1, th2)

    grid_best, arg = _grid_max(fun, grid)
    best = grid_best
    if grid.refine:
        refined, rarg = _refine(fun, arg, grid)
        if refined - grid_best > grid.refine_tol:
            raise GridTooCoarse(f"refinement raised the max by {refined - grid_best:.3g}")
        if refined > best:
            best, arg = refined, rarg
    derived = fs_bound(a, k, mu, "derived")
    printed = fs_bound(a, k, mu, "printed")
    return SharpnessResult(
        alpha=a,
        k=k,
        mu=mu,
        bound_derived=derived,
        bound_printed=printed,
        oracle_max=best,
        argmax_witness=CaratheodoryPoint.from_witness(*arg),
        samples=grid.samples,
        grid_max=grid_best,
        upper_ok=best <= derived + upper_tol,
        attained=grid_best >= derived - attain_tol,
        printed_consistent=(best <= printed + upper_tol) and (grid_best >= printed - attain_tol),
    )


def fek_lemma_check(mu, grid: GridSpec | None = None, tol: float = 1e-3) -> BoundReport:
    """Brute-force ``max |p2 - mu p1^2|`` against ``2 max{1, |2mu - 1|}``."""
    grid = grid or GridSpec()
    mu = complex(mu)

    def fun(t, th1, th2):
        return _p_functional_grid(mu, t, th1, th2)

    best, arg = _grid_max(fun, grid)
    if grid.refine:
        refined, rarg = _refine(fun, arg, grid)
        if refined > best:
            best, arg = refined, rarg
    bound = 2 * max(1.0, abs(2 * mu - 1))
    return BoundReport(
        claim=f"|p2 - mu p1^2| <= 2 max(1, |2mu-1|), mu={_fmt_complex(mu)}",
        measured=best,
        bound=bound,
        margin=bound - best,
        passed=bool(best <= bound + 1e-9 and best >= bound - tol),
        witness=CaratheodoryPoint.from_witness(*arg).to_dict(),
        tolerance=tol,
        details={"samples": grid.samples},
    )


def inverse_coeffs(a2, a3, a4) -> tuple[complex, complex, complex]:
    """Coefficients ``b2, b3, b4`` of the inverse function."""
    return -a2, 2 * a2 * a2 - a3, -(5 * a2**3 - 5 * a2 * a3 + a4)


def inverse_b3_bound(alpha) -> float:
    """``(3-a)/6 max{1, |(5a^2-33a+45)/(6(3-a))|}``."""
    a = _alpha(alpha)
    return (3 - a) / 6 * max(1.0, abs((5 * a * a - 33 * a + 45) / (6 * (3 - a))))


def special_bound_minus_one(mu) -> float:
    """The standalone bound ``max{2/3, |8(2mu-1)/9 - 7/12|}`` stated for alpha = -1, k = 1."""
    return max(2 / 3, abs(8 * (2 * mu - 1) / 9 - 7 / 12))


def special_bound_zero(mu) -> float:
    """The standalone bound ``max{1, |2mu - 3/2|}/2`` stated for alpha = 0, k = 1."""
    return 0.5 * max(1.0, abs(2 * mu - 1.5))


def comparison_rows(results) -> list[dict]:
    rows = []
    for r in results:
        rows.append(
            {
                "alpha": r.alpha,
                "k": r.k,
                "mu": _fmt_complex(r.mu),
                "bound_derived": r.bound_derived,
                "bound_printed": r.bound_printed,
                "oracle_max": r.oracle_max,
                "pass": r.passed,
                "printed_consistent": r.printed_consistent,
            }
        )
    return rows


def comparison_csv(results) -> str:
    rows = comparison_rows(results)
    buf = io.StringIO()
    fields = ["alpha", "k", "mu", "bound_derived", "bound_printed", "oracle_max", "pass", "printed_consistent"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def _fmt_complex(z: complex) -> str:
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


def sharp_witness_point(alpha, k: int, mu) -> CaratheodoryPoint:
    """A Caratheodory pair attaining the derived bound (extremal pairs of the coefficient body)."""
    if abs(2 * mu_prime(alpha, k, mu) - 1) >= 1:
        return CaratheodoryPoint.from_witness(1.0, 0.0, 0.0)
    return CaratheodoryPoint.from_witness(0.5, 0.0, math.pi)
