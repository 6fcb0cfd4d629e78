"""One-level density kernels, admissible test functions and explicit-formula sums.

Fourier convention: ``phi_hat(y) = int phi(x) exp(-2 pi i x y) dx``.  With
``S(x) = sin(2 pi x) / (2 pi x)`` the kernels are

    W(U)      = 1                      W_hat(U)      = delta_0
    W(SOeven) = 1 + S                  W_hat(SOeven) = delta_0 + chi/2
    W(SOodd)  = 1 - S + delta_0        W_hat(SOodd)  = delta_0 - chi/2 + 1
    W(O)      = 1 + delta_0 / 2        W_hat(O)      = delta_0 + 1/2
    W(Sp)     = 1 - S                  W_hat(Sp)     = delta_0 - chi/2

where ``chi`` is the indicator of ``[-1, 1]``.  Atoms are kept as explicit
masses at 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.integrate import quad
from sympy import primerange

from .errors import PlancherelMismatch

SYMMETRY_TAGS = ("U", "SOeven", "SOodd", "O", "Sp")
PLANCHEREL_TOL = 1e-5


@dataclass(frozen=True)
class SymmetryType:
    tag: str

    def __post_init__(self):
        if self.tag not in SYMMETRY_TAGS:
            raise ValueError(f"unknown symmetry type {self.tag!r}")


@dataclass(frozen=True)
class DensityKernel:
    """``continuous(x) + atom * delta_0``; ``breaks`` lists jump points of ``continuous``."""

    continuous: Callable[[np.ndarray], np.ndarray]
    atom: float
    breaks: tuple[float, ...] = ()

    def __post_init__(self):
        if self.atom < 0:
            raise ValueError("atom mass must be >= 0")


@dataclass(frozen=True)
class TestFunction:
    """An even ``phi`` with ``phi_hat`` supported in ``[-u, u]``.

    ``period`` is an optional period of the oscillation in the tail of
    ``phi``; pairing uses it to place truncation points.
    """

    phi: Callable[[np.ndarray], np.ndarray]
    phi_hat: Callable[[np.ndarray], np.ndarray]
    u: float
    even: bool = True
    period: float | None = None

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if not self.u > 0:
            raise ValueError("support radius u must be positive")
        if not self.even:
            raise ValueError("test functions must be even")


def _sinc2pi(x):
    # sin(2 pi x) / (2 pi x); np.sinc(t) = sin(pi t) / (pi t)
    return np.sinc(2.0 * np.asarray(x, dtype=float))


def _half_indicator(sign: float, const: float = 0.0):
    def f(x):
        x = np.asarray(x, dtype=float)
        return const + sign * 0.5 * (np.abs(x) <= 1.0)

    return f


def w_density(t: SymmetryType) -> DensityKernel:
    tag = t.tag
    if tag == "U":
        return DensityKernel(lambda x: np.ones_like(np.asarray(x, dtype=float)), 0.0)
    if tag == "SOeven":
        return DensityKernel(lambda x: 1.0 + _sinc2pi(x), 0.0)
    if tag == "SOodd":
        return DensityKernel(lambda x: 1.0 - _sinc2pi(x), 1.0)
    if tag == "O":
        return DensityKernel(lambda x: np.ones_like(np.asarray(x, dtype=float)), 0.5)
    return DensityKernel(lambda x: 1.0 - _sinc2pi(x), 0.0)


def w_fourier(t: SymmetryType) -> DensityKernel:
    tag = t.tag
    jumps = (-1.0, 1.0)
    if tag == "U":
        return DensityKernel(_half_indicator(0.0), 1.0)
    if tag == "SOeven":
        return DensityKernel(_half_indicator(1.0), 1.0, jumps)
    if tag == "SOodd":
        return DensityKernel(_half_indicator(-1.0, 1.0), 1.0, jumps)
    if tag == "O":
        return DensityKernel(_half_indicator(0.0, 0.5), 1.0)
    return DensityKernel(_half_indicator(-1.0), 1.0, jumps)


def fejer(u: float) -> TestFunction:
    """Fejer pair: ``phi_hat`` is the triangle of height 1 on ``[-u, u]``."""
    if not u > 0:
        raise ValueError("u must be positive")

    def phi(x):
        return u * np.sinc(u * np.asarray(x, dtype=float)) ** 2

    def phi_hat(y):
        return np.maximum(0.0, 1.0 - np.abs(np.asarray(y, dtype=float)) / u)

    return TestFunction(phi, phi_hat, float(u), True, 1.0 / u)


def _common_period(period: float | None) -> float:
    # the kernels oscillate with period 1; match it with the test function's
    if period is None:
        return 1.0
    r = Fraction(period).limit_denominator(64)
    if abs(float(r) - period) > 1e-12 * period:
        return max(1.0, period)
    # lcm(a/b, 1) = a for a/b in lowest terms
    return float(r.numerator)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


def _panel_integral(f, a: float, b: float, width: float) -> float:
    n = max(1, int(math.ceil((b - a) / width - 1e-9)))
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    return float(np.sum(half[:, None] * _GL_W[None, :] * f(x)))


def direct_side(phi: TestFunction, t: SymmetryType, levels: int = 5) -> float:
    """``int phi(x) W(x) dx`` by panel quadrature and Richardson extrapolation in 1/X.

    Truncation points are multiples of a common period of ``phi`` and the
    kernel, so the truncation error has a smooth expansion in ``1/X``.
    """
    kernel = w_density(t)
    P = _common_period(phi.period)
    f = lambda x: phi.phi(x) * kernel.continuous(x)  # noqa: E731
    width = min(P, 1.0) / 4.0
    X0 = 8.0 * P
    xs, vals, acc, prev = [], [], 0.0, 0.0
    for k in range(levels):
        X = X0 * 2**k
        acc += _panel_integral(f, prev, X, width)
        prev = X
        xs.append(1.0 / X)
        vals.append(2.0 * acc)
    # Neville extrapolation to 1/X = 0
    table = list(vals)
    for j in range(1, levels):
        for i in range(levels - 1, j - 1, -1):
            table[i] = (xs[i - j] * table[i] - xs[i] * table[i - 1]) / (xs[i - j] - xs[i])
    return table[-1] + kernel.atom * float(phi.phi(0.0))


def fourier_side(phi: TestFunction, t: SymmetryType) -> float:
    """``int phi_hat(y) W_hat(y) dy`` with the atom handled exactly."""
    kernel = w_fourier(t)
    u = phi.u
    pts = sorted({0.0, *[b for b in kernel.breaks if -u < b < u]})
    edges = [-u, *pts, u]
    g = lambda y: float(phi.phi_hat(y) * kernel.continuous(y))  # noqa: E731
    cont = math.fsum(quad(g, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)[0] for a, b in zip(edges, edges[1:]))
    return kernel.atom * float(phi.phi_hat(0.0)) + cont


def pair(phi: TestFunction, t: SymmetryType, tol: float = PLANCHEREL_TOL) -> float:
    """Fourier-side pairing, after checking it against the direct side."""
    d = direct_side(phi, t)
    f = fourier_side(phi, t)
    if not abs(d - f) <= tol:
        raise PlancherelMismatch(f"direct {d!r} vs Fourier {f!r} for {t.tag}")
    return f


def prediction(phi: TestFunction, kind: str) -> float:
    """Predicted one-level density: ``phi_hat(0) + phi(0)/2`` (spin) or ``- phi(0)/2`` (std)."""
    a, b = float(phi.phi_hat(0.0)), 0.5 * float(phi.phi(0.0))
    if kind == "spin":
        return a + b
    if kind == "std":
        return a - b
    raise ValueError(f"kind must be 'spin' or 'std', got {kind!r}")


def prime_coefficient(x, y, order: int, kind: str):
    """Per-form coefficient entering the explicit formula.

    order 1: ``a_F(p) = x + y`` or ``b_F(p) = 1 + xy``; order 2:
    ``a_F(p^2) + 1 = x^2 + y^2 - 3`` or ``b_F(p^2) - 1 = x^2 y^2 - 2x^2 - 2y^2 + 4``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if kind == "spin":
        return x + y if order == 1 else x * x + y * y - 3.0
    if kind == "std":
        return 1.0 + x * y if order == 1 else x * x * y * y - 2.0 * x * x - 2.0 * y * y + 4.0
    raise ValueError(f"kind must be 'spin' or 'std', got {kind!r}")


def primes_in_support(phi: TestFunction, log_c: float, order: int) -> list[int]:
    """Primes with ``order * log p / log_c`` strictly inside the support of ``phi_hat``."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if log_c <= 0:
        raise ValueError("log_c must be positive")
    bound = phi.u * log_c / order
    return [int(p) for p in primerange(2, int(math.exp(bound)) + 2) if math.log(p) < bound]


def prime_weights(phi: TestFunction, log_c: float, order: int) -> dict[int, float]:
    """``-2 log p / (log_c p^(order/2)) * phi_hat(order log p / log_c)`` per prime."""
    out = {}
    for p in primes_in_support(phi, log_c, order):
        lp = math.log(p)
        out[p] = -2.0 * lp / (log_c * p ** (order / 2.0)) * float(phi.phi_hat(order * lp / log_c))
    return out


def explicit_prime_sum(family, phi: TestFunction, log_c: float, order: int, kind: str) -> float:
    """Family average of the order-``order`` prime sum of the explicit formula.

    ``family`` must provide ``size`` and ``at_prime(p) -> (xs, ys)`` ordered by
    form index (raising ``MissingPrime`` when a form lacks ``p``).
    """
    weights = prime_weights(phi, log_c, order)
    if not weights or family.size == 0:
        return 0.0
    terms = []
    for p, w in weights.items():
        xs, ys = family.at_prime(p)
        terms.append(w * math.fsum(prime_coefficient(xs, ys, order, kind)))
    return math.fsum(terms) / family.size
