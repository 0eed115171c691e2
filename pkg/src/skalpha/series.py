"""Truncated complex power series.

A :class:`TruncatedSeries` of order ``N`` holds the Taylor coefficients
``c_0 .. c_N`` of a function analytic at the origin; coefficients beyond
``N`` are unknown, not zero.  Binary operations therefore truncate to the
smaller of the two orders.

The transcendental operations (``log_unit``, ``exp_zero``, ``reciprocal``)
use the usual O(N^2) convolution recurrences obtained from ``F' = F G'``
style identities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    BadConstantTerm,
    CompositionRequiresZeroConstant,
    NonzeroConstantTerm,
    NotNormalized,
    SeriesFormatError,
    ZeroConstantTerm,
)

DEFAULT_ORDER = 64
# cap for user-supplied series; internal sums may build longer ones
MAX_ORDER = 4096
COEFF_ATOL = 1e-10

_UNDERFLOW = 1e-300
_RELATIVE_EPS = 1e-14
_UNIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Immutable Taylor polynomial ``sum_{n<=N} c_n z^n``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex).ravel()
        if arr.size == 0:
            raise SeriesFormatError("a series needs at least the constant term")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        more = ", ..." if self.order > 5 else ""
        return f"{type(self).__name__}(order={self.order}, [{head}{more}])"

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def allclose(self, other: "TruncatedSeries | Sequence[complex]", atol: float = COEFF_ATOL) -> bool:
        b = other.coeffs if isinstance(other, TruncatedSeries) else np.asarray(other, dtype=complex)
        n = min(self.coeffs.size, b.size)
        return bool(np.all(np.abs(self.coeffs[:n] - b[:n]) <= atol))

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order) + 1
            return TruncatedSeries(self.coeffs[:n] + other.coeffs[:n])
        c = self.coeffs.copy()
        c[0] += other
        return TruncatedSeries(c)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return TruncatedSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return TruncatedSeries(self.coeffs / scalar)

    def __call__(self, z):
        return evaluate(self, z)

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc) -> "TruncatedSeries":
        if not isinstance(doc, dict) or "order" not in doc or "coeffs" not in doc:
            raise SeriesFormatError("series document needs 'order' and 'coeffs'")
        order = doc["order"]
        coeffs = doc["coeffs"]
        if not isinstance(order, int) or isinstance(order, bool) or order < 0:
            raise SeriesFormatError(f"'order' must be a non-negative integer, got {order!r}")
        if order > MAX_ORDER:
            raise SeriesFormatError(f"order {order} exceeds maximum {MAX_ORDER}")
        if not isinstance(coeffs, list) or len(coeffs) != order + 1:
            raise SeriesFormatError(f"'coeffs' must be a list of length order+1 = {order + 1}")
        values = []
        for i, pair in enumerate(coeffs):
            if (
                not isinstance(pair, (list, tuple))
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
            ):
                raise SeriesFormatError(f"coefficient {i} must be a [re, im] pair of numbers")
            values.append(complex(pair[0], pair[1]))
        return cls(np.array(values, dtype=complex))

    @classmethod
    def from_json(cls, text: str) -> "TruncatedSeries":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SeriesFormatError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(doc)


class NormalizedSeries(TruncatedSeries):
    """Series of a normalized function ``z + a_2 z^2 + ...``.

    The normalization ``c_0 = 0, c_1 = 1`` is checked exactly.
    """

    def __post_init__(self):
        super().__post_init__()
        c = self.coeffs
        if c.size < 2 or c[0] != 0 or c[1] != 1:
            raise NotNormalized("normalized series need coeffs[0] = 0 and coeffs[1] = 1")

    @classmethod
    def from_series(cls, s: TruncatedSeries) -> "NormalizedSeries":
        return cls(s.coeffs)

    def over_z(self) -> TruncatedSeries:
        """Series of ``f(z)/z`` (one order lower)."""
        return TruncatedSeries(self.coeffs[1:])

    def truncate(self, order: int) -> "NormalizedSeries":
        return NormalizedSeries(super().truncate(order).coeffs)


def as_series(obj: "TruncatedSeries | Iterable[complex]") -> TruncatedSeries:
    if isinstance(obj, TruncatedSeries):
        return obj
    return TruncatedSeries(np.asarray(list(obj), dtype=complex))


# constructors -------------------------------------------------------------


def constant(value: complex, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    c = np.zeros(order + 1, dtype=complex)
    c[0] = value
    return TruncatedSeries(c)


def identity(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """The series of ``z``."""
    c = np.zeros(order + 1, dtype=complex)
    if order >= 1:
        c[1] = 1
    return TruncatedSeries(c)


def geometric(order: int = DEFAULT_ORDER, ratio: complex = 1.0) -> TruncatedSeries:
    """``1/(1 - ratio*z)``."""
    return TruncatedSeries(ratio ** np.arange(order + 1, dtype=float))


def koebe(order: int = DEFAULT_ORDER) -> NormalizedSeries:
    """The Koebe function ``z/(1-z)^2``."""
    return NormalizedSeries(np.arange(order + 1, dtype=float))


def from_polynomial(coeffs: Sequence[complex], order: int = DEFAULT_ORDER) -> TruncatedSeries:
    c = np.zeros(order + 1, dtype=complex)
    n = min(len(coeffs), order + 1)
    c[:n] = np.asarray(coeffs, dtype=complex)[:n]
    return TruncatedSeries(c)


# core operations ----------------------------------------------------------


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the shared order."""
    n = min(a.order, b.order) + 1
    return TruncatedSeries(np.convolve(a.coeffs[:n], b.coeffs[:n])[:n])


def power(a: TruncatedSeries, k: int) -> TruncatedSeries:
    if k < 0:
        raise ValueError("negative powers: use reciprocal")
    result = constant(1.0, a.order)
    base = a
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def _check_nonzero_constant(a: TruncatedSeries) -> None:
    c0 = abs(a.coeffs[0])
    # scale of the leading coefficients, not of the (possibly growing) tail
    scale = float(np.max(np.abs(a.coeffs[:9])))
    if c0 < _UNDERFLOW or c0 < _RELATIVE_EPS * scale:
        raise ZeroConstantTerm(f"constant term {a.coeffs[0]!r} is numerically zero")


def reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """Series ``b`` with ``a*b = 1`` to the order of ``a``."""
    _check_nonzero_constant(a)
    c = a.coeffs
    n_max = a.order
    b = np.zeros(n_max + 1, dtype=complex)
    b[0] = 1.0 / c[0]
    for n in range(1, n_max + 1):
        b[n] = -np.dot(c[1 : n + 1], b[n - 1 :: -1]) * b[0]
    return TruncatedSeries(b)


def log_unit(a: TruncatedSeries) -> TruncatedSeries:
    """``log a`` for a series with constant term 1; result has zero constant term."""
    c = a.coeffs
    if abs(c[0] - 1) > _UNIT_TOL:
        raise BadConstantTerm(f"log_unit needs constant term 1, got {c[0]!r}")
    n_max = a.order
    out = np.zeros(n_max + 1, dtype=complex)
    kl = np.zeros(n_max + 1, dtype=complex)  # k * L_k
    for n in range(1, n_max + 1):
        acc = n * c[n] - np.dot(kl[1:n], c[n - 1 : 0 : -1])
        kl[n] = acc / c[0]
        out[n] = kl[n] / n
    return TruncatedSeries(out)


def exp_zero(a: TruncatedSeries) -> TruncatedSeries:
    """``exp a`` for a series with zero constant term."""
    c = a.coeffs
    if abs(c[0]) > _UNIT_TOL:
        raise BadConstantTerm(f"exp_zero needs constant term 0, got {c[0]!r}")
    n_max = a.order
    kc = np.arange(n_max + 1) * c
    e = np.zeros(n_max + 1, dtype=complex)
    e[0] = 1.0
    for n in range(1, n_max + 1):
        e[n] = np.dot(kc[1 : n + 1], e[n - 1 :: -1]) / n
    return TruncatedSeries(e)


def compose(f: TruncatedSeries, w: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of ``f(w(z))``; ``w`` must vanish at the origin."""
    if abs(w.coeffs[0]) > 0:
        raise CompositionRequiresZeroConstant("inner series must have zero constant term")
    n = min(f.order, w.order)
    fc = f.coeffs[: n + 1]
    wc = w.coeffs[: n + 1]
    # Horner in the series ring; the j-th partial result only needs order n.
    acc = np.zeros(n + 1, dtype=complex)
    acc[0] = fc[n]
    for j in range(n - 1, -1, -1):
        acc = np.convolve(acc, wc)[: n + 1]
        acc[0] += fc[j]
    return TruncatedSeries(acc)


def integrate_dt_over_t(g: TruncatedSeries) -> TruncatedSeries:
    """``int_0^z g(t)/t dt`` for ``g`` vanishing at the origin."""
    if abs(g.coeffs[0]) > 0:
        raise NonzeroConstantTerm("integrand g(t)/t needs g(0) = 0")
    h = np.zeros(g.order + 1, dtype=complex)
    n = np.arange(1, g.order + 1)
    h[1:] = g.coeffs[1:] / n
    return TruncatedSeries(h)


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    """``f'`` (one order lower)."""
    if f.order == 0:
        return TruncatedSeries([0.0])
    return TruncatedSeries(f.coeffs[1:] * np.arange(1, f.order + 1))


def z_log_derivative(f: TruncatedSeries) -> TruncatedSeries:
    """Series of ``z f'(z)/f(z)`` for normalized ``f``, to order ``N-1``."""
    f = NormalizedSeries(f.coeffs) if not isinstance(f, NormalizedSeries) else f
    zfp = TruncatedSeries(f.coeffs[1:] * np.arange(1, f.order + 1))  # (z f')/z
    return mul(zfp, reciprocal(f.over_z()))


def substitute_power(f: TruncatedSeries, k: int) -> TruncatedSeries:
    """``f(z^k)``."""
    c = np.zeros(k * f.order + 1, dtype=complex)
    c[::k] = f.coeffs
    return TruncatedSeries(c)


def kth_root_transform(f: TruncatedSeries, k: int) -> TruncatedSeries:
    """``F(z) = [f(z^k)]^{1/k}`` on the principal branch with ``F'(0) = 1``.

    Computed as ``z exp(log(g(z^k))/k)`` with ``g = f/z``; the result has
    order ``k(N-1) + 1`` for ``f`` of order ``N``.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    f = NormalizedSeries(f.coeffs) if not isinstance(f, NormalizedSeries) else f
    if k == 1:
        return TruncatedSeries(f.coeffs)
    root = exp_zero(substitute_power(log_unit(f.over_z()) / k, k))
    return TruncatedSeries(np.concatenate(([0.0], root.coeffs)))


def evaluate(f: TruncatedSeries, z):
    """Horner evaluation of the truncated polynomial (scalar or array ``z``)."""
    return P.polyval(z, f.coeffs)


def tail_estimate(f: TruncatedSeries, r: float, window: int = 8) -> float:
    """Heuristic size of the omitted tail ``sum_{n>N} c_n z^n`` on ``|z| = r``.

    The growth rate is read off the maxima of the last two windows of
    coefficients and extrapolated geometrically.  Returns ``inf`` when the
    extrapolated ratio times ``r`` is not below one.
    """
    mags = np.abs(f.coeffs)
    last = float(mags[-window:].max())
    if f.order < 2 * window:
        # too short to read a growth rate; only a vanishing tail is trusted
        return 0.0 if last == 0.0 else float("inf")
    prev = float(mags[-2 * window : -window].max())
    if last == 0.0:
        return 0.0
    if prev == 0.0:
        return float("inf")
    rho = (last / prev) ** (1.0 / window) * r
    if rho >= 1.0:
        return float("inf")
    return last * r ** (f.order + 1) / (1.0 - rho)
