"""Plancherel and Sato-Tate densities, quadrature and sampling on Omega.

All densities accept scalars or numpy arrays.  Integration over Omega is
carried out in angle coordinates ``x = 2 cos(theta1)``, ``y = 2 cos(theta2)``,
where the square-root edge behaviour of the densities disappears and tensor
Gauss-Legendre converges geometrically.

Normalizations
--------------
``plancherel_density(..., normalized=False)`` is the literal displayed
formula with constant ``(p+1)**4 / (p**4 pi**2)``.  Its mass over
``[0, pi]^2`` is ``8 (1+1/p)**2 / (1+1/p**2)``, not 1.  The default
``normalized=True`` uses Macdonald's constant
``(1+1/p)**2 (1+1/p**2) / (8 pi**2)``, so the measure has total mass one.

``st_density`` likewise has mass 2 in its literal form; ``normalized=True``
halves it.  ``mu_p_density`` exposes the literal product ``f_p g+ g- mu_ST``
and its quadrature-normalized probability version.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainViolation, EnvelopeTooSmall, QuadratureNonConvergence
from .satake import OmegaPoint, _check_prime

_N_START = 16
_N_MAX = 2048


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def _sin2_half(phi):
    """|1 - e^{i phi}|^2 = 4 sin^2(phi/2)."""
    s = np.sin(0.5 * phi)
    return 4.0 * s * s


def _damped(phi, p):
    """|1 - e^{i phi}/p|^2."""
    return 1.0 - 2.0 * np.cos(phi) / p + 1.0 / (p * p)


def plancherel_constant(p: int, normalized: bool = True) -> float:
    if normalized:
        q = 1.0 / p
        return (1 + q) ** 2 * (1 + q * q) / (8 * math.pi**2)
    return (p + 1) ** 4 / (p**4 * math.pi**2)


def plancherel_density(theta1, theta2, p: int, normalized: bool = True):
    """Unramified tempered Plancherel density on ``[0, pi]^2``."""
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    phis = (2 * t1, 2 * t2, t1 + t2, t1 - t2)
    num = 1.0
    den = 1.0
    for phi in phis:
        num = num * _sin2_half(phi)
        den = den * _damped(phi, p)
    out = plancherel_constant(p, normalized) * num / den
    return out if out.ndim else float(out)


def _check_param(p) -> float:
    """Density formulas are analytic in p; any real p > 1 is accepted."""
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p!r}")
    return p


def _check_omega(x, y):
    if np.any(np.abs(x) > 2.0) or np.any(np.abs(y) > 2.0):
        raise DomainViolation("point outside Omega = [-2, 2]^2")


def _root(x):
    return np.sqrt(np.maximum(1.0 - 0.25 * x * x, 0.0))


def st_density(x, y, normalized: bool = False):
    """Sato-Tate density ``(x-y)^2/pi^2 * sqrt(1-x^2/4) sqrt(1-y^2/4)``.

    The literal density has total mass 2; ``normalized=True`` returns the
    probability density.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_omega(x, y)
    d = x - y
    out = d * d / math.pi**2 * _root(x) * _root(y)
    if normalized:
        out = 0.5 * out
    return out if out.ndim else float(out)


def _shift(p: int) -> float:
    """(sqrt(p) + 1/sqrt(p))**2 = p + 2 + 1/p."""
    return p + 2.0 + 1.0 / p


def f_p(x, y, p: int):
    c = _shift(p)
    return 1.0 / ((c - x * x) * (c - y * y))


def g_denominators(x, y, p: int):
    """Denominators of ``g_p^+`` and ``g_p^-`` as a pair."""
    c = _shift(p)
    base = c - 2.0 * (1.0 + 0.25 * x * y)
    cross = 2.0 * _root(x) * _root(y)
    return base - cross, base + cross


def g_plus(x, y, p: int):
    return 1.0 / g_denominators(x, y, p)[0]


def g_minus(x, y, p: int):
    return 1.0 / g_denominators(x, y, p)[1]


def gg_denominator_closed_form(x, y, p: int):
    """``x^2 + y^2 - xy(p + 1/p) - 4 + (p + 1/p)^2``."""
    s = p + 1.0 / p
    return x * x + y * y - x * y * s - 4.0 + s * s


def mu_p_density(x, y, p: int, normalized: bool = False):
    """Density of the vertical Sato-Tate measure ``mu_p`` on Omega.

    ``normalized=False`` gives the literal product ``f_p g+ g- mu_ST``;
    ``normalized=True`` divides by its quadrature mass.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_omega(x, y)
    dp, dm = g_denominators(x, y, p)
    out = f_p(x, y, p) / (dp * dm) * st_density(x, y)
    if normalized:
        out = out / total_mass(p, "omega")
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _angle_rule(n: int):
    """Gauss-Legendre rule on [0, pi], symmetric about pi/2 to the last bit.

    Returns ``(theta, x, s, w)`` with ``x = 2 cos(theta)`` and
    ``s = sin(theta)``; ``x`` is exactly odd and ``s, w`` exactly even under
    node reflection, so odd integrands cancel in an exact sum.
    """
    xi, w = np.polynomial.legendre.leggauss(n)
    xi = 0.5 * (xi - xi[::-1])
    w = 0.5 * (w + w[::-1])
    half = 0.5 * math.pi * xi
    theta = 0.5 * math.pi + half
    x = -2.0 * np.sin(half)
    s = np.cos(half)
    w = 0.5 * math.pi * w
    for a in (theta, x, s, w):
        a.setflags(write=False)
    return theta, x, s, w


def _exact_sum(values: np.ndarray) -> float:
    return math.fsum(values.ravel().tolist())


def _omega_tensor(n: int):
    _, x, s, w = _angle_rule(n)
    X, Y = np.meshgrid(x, x, indexing="ij")
    # dx dy = 4 sin(theta1) sin(theta2) dtheta1 dtheta2
    Wt = np.outer(w * 2 * s, w * 2 * s)
    return X, Y, Wt


def _refine(rule: Callable[[int], float], tol: float, n_start: int = _N_START, n_max: int = _N_MAX) -> float:
    n = n_start
    prev = rule(n)
    while n < n_max:
        n *= 2
        cur = rule(n)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureNonConvergence(
        f"successive refinements still differ by {abs(cur - prev):.3e} > {tol:.1e} at n={n}"
    )


@lru_cache(maxsize=256)
def total_mass(p: int, domain: str = "angles", tol: float = 1e-13) -> float:
    """Total mass of the Plancherel measure (``angles``) or of literal ``mu_p`` (``omega``).

    The angle-domain measure is the Macdonald-normalized Plancherel density
    and should integrate to one.  The omega-domain value is the literal
    normalizer of ``mu_p``; it is measured, never assumed.
    """
    _check_param(p)
    if domain == "angles":
        def rule(n):
            theta, _, _, w = _angle_rule(n)
            T1, T2 = np.meshgrid(theta, theta, indexing="ij")
            return _exact_sum(np.outer(w, w) * plancherel_density(T1, T2, p))
        scale = 1.0
    elif domain == "omega":
        def rule(n):
            X, Y, Wt = _omega_tensor(n)
            return _exact_sum(Wt * mu_p_density(X, Y, p))
        # the literal mass decays like 2/p^4; compare on a relative scale
        scale = rule(_N_START)
    else:
        raise ValueError(f"unknown domain {domain!r}")
    return _refine(rule, tol * scale)


def integrate(f: Callable, p: int, tol: float = 1e-10, n_start: int = 32) -> float:
    """``int_Omega f d mu_p`` against the normalized measure.

    ``f`` is called with two equally shaped arrays ``(x, y)`` and must
    return an array of the same shape.
    """
    _check_param(p)

    def rule(n):
        X, Y, Wt = _omega_tensor(n)
        rho = Wt * mu_p_density(X, Y, p)
        vals = np.asarray(f(X, Y), dtype=float) * np.ones_like(X)
        return _exact_sum(vals * rho) / _exact_sum(rho)

    return _refine(rule, tol, n_start=n_start)


def cdf_grid(p: int, xs, ys, nodes_per_cell: int = 16) -> np.ndarray:
    """``F[i, j] = mu_p(x <= xs[i], y <= ys[j])`` for ascending thresholds.

    Each cell between consecutive thresholds (in angle coordinates) gets its
    own Gauss-Legendre rule, so the indicator never cuts through a panel.
    """
    _check_param(p)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)

    def panels(th):
        th = np.clip(np.asarray(th), -2.0, 2.0)
        # x <= x0  <=>  theta >= arccos(x0/2); cells ordered by increasing x
        edges = np.concatenate(([math.pi], np.arccos(th / 2.0), [0.0]))
        xi, w = np.polynomial.legendre.leggauss(nodes_per_cell)
        lo, hi = edges[1:], edges[:-1]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        theta = mid[:, None] + half[:, None] * xi[None, :]
        weight = half[:, None] * w[None, :] * 2 * np.sin(theta)
        return 2 * np.cos(theta), weight

    x, wx = panels(xs)
    y, wy = panels(ys)
    m = nodes_per_cell
    X = x.ravel()[:, None]
    Y = y.ravel()[None, :]
    rho = mu_p_density(np.broadcast_to(X, (X.size, Y.size)), np.broadcast_to(Y, (X.size, Y.size)), p)
    rho = rho * wx.ravel()[:, None] * wy.ravel()[None, :]
    cells = rho.reshape(x.shape[0], m, y.shape[0], m).sum(axis=(1, 3))
    cum = np.cumsum(np.cumsum(cells, axis=0), axis=1)
    total = cum[-1, -1]
    return cum[:-1, :-1] / total


def pushforward_ratio(theta1: float, theta2: float, p: int) -> float:
    """Ratio of the pushed-forward literal Plancherel density to literal ``mu_p``.

    The ratio is constant on the regular interior; it equals ``4 (p+1)^4``.
    """
    eps = 1e-12
    if not (eps < theta1 < math.pi - eps and eps < theta2 < math.pi - eps) or abs(theta1 - theta2) <= eps:
        raise DomainViolation("pushforward ratio needs an interior regular point")
    x, y = 2 * math.cos(theta1), 2 * math.cos(theta2)
    jac = 4 * math.sin(theta1) * math.sin(theta2)
    return plancherel_density(theta1, theta2, p, normalized=False) / jac / mu_p_density(x, y, p)


# ---------------------------------------------------------------------------
# grids and sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityGrid:
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    domain: str

    def __post_init__(self):
        if self.domain not in ("angles", "omega"):
            raise ValueError(self.domain)
        if self.values.shape != (len(self.xs), len(self.ys)):
            raise ValueError("grid shape does not match its axes")
        if np.any(self.values < 0):
            raise ValueError("densities are nonnegative")


def density_grid(p: int, domain: str = "omega", n: int = 200, normalized: bool = True) -> DensityGrid:
    """Evaluate the density on a uniform ``n x n`` grid including the edges."""
    if domain == "omega":
        xs = np.linspace(-2.0, 2.0, n)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        vals = mu_p_density(X, Y, p, normalized=normalized)
    elif domain == "angles":
        xs = np.linspace(0.0, math.pi, n)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        vals = plancherel_density(X, Y, p, normalized=normalized)
    else:
        raise ValueError(domain)
    return DensityGrid(xs, xs.copy(), np.asarray(vals), domain)


@dataclass(frozen=True)
class SampleBatch:
    xs: np.ndarray
    ys: np.ndarray
    seed: int
    p: int
    acceptance_rate: float
    envelope: float = field(default=float("nan"))

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ValueError("coordinate arrays differ in length")
        if np.any(np.abs(self.xs) > 2) or np.any(np.abs(self.ys) > 2):
            raise ValueError("sample outside Omega")
        if not 0.0 < self.acceptance_rate <= 1.0:
            raise ValueError("acceptance rate must lie in (0, 1]")

    def __len__(self):
        return len(self.xs)

    @property
    def points(self) -> list[OmegaPoint]:
        return [OmegaPoint(float(a), float(b)) for a, b in zip(self.xs, self.ys)]


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & (2**64 - 1)))


def envelope_constant(p: int, n_grid: int = 512, factor: float = 1.05) -> float:
    return factor * float(density_grid(p, "omega", n_grid).values.max())


def _rejection(p: int, n: int, seed: int, envelope: float):
    rng = make_rng(seed)
    xs = np.empty(n)
    ys = np.empty(n)
    got = 0
    proposed = 0
    mass = total_mass(p, "omega")
    while got < n:
        k = max(1024, int(1.25 * (n - got) * 16 * envelope) + 1)
        u = rng.random((3, k))
        x = 4.0 * u[0] - 2.0
        y = 4.0 * u[1] - 2.0
        rho = mu_p_density(x, y, p) / mass
        top = float(rho.max())
        if top > envelope:
            raise EnvelopeTooSmall(top, envelope)
        keep = np.flatnonzero(u[2] * envelope <= rho)
        need = n - got
        take = keep[:need]
        xs[got:got + take.size] = x[take]
        ys[got:got + take.size] = y[take]
        got += take.size
        # count proposals only up to the last one this batch needed
        proposed += int(take[-1]) + 1 if take.size == need else k
    return xs, ys, n / proposed


def sample(p: int, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` i.i.d. points from normalized ``mu_p`` by rejection from uniform(Omega)."""
    _check_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    envelope = envelope_constant(p)
    for _ in range(4):
        try:
            xs, ys, rate = _rejection(p, n, seed, envelope)
            return SampleBatch(xs, ys, seed, p, min(rate, 1.0), envelope)
        except EnvelopeTooSmall as exc:
            envelope = 1.05 * max(exc.observed, envelope_constant(p, n_grid=2048))
    raise EnvelopeTooSmall(float("nan"), envelope)
