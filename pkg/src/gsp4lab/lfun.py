"""Local Euler factors, Dirichlet coefficients and conductor bookkeeping.

``Q(t)`` denotes the inverse local factor ``L_p(s)^-1`` at ``t = p^-s`` for
the normalized (unitary) parameters: degree 4 for the spinor L-function and
degree 5 for the standard one.  Power sums of the inverse roots come from the
coefficients through Newton's identities, never through root finding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from sympy import factorint

from .characters import Weight
from .errors import MissingPrime, NonRealCoordinate
from .satake import SpinParams, StandardParams, UnitaryClass, _check_prime

IMAG_TOL = 1e-10
KINDS = ("spin", "std")


@dataclass(frozen=True)
class EulerFactor:
    degree: int
    coefficients: tuple[float, ...]
    p: int

    def __post_init__(self):
        if self.degree not in (4, 5):
            raise ValueError("degree must be 4 or 5")
        if len(self.coefficients) != self.degree + 1 or self.coefficients[0] != 1.0:
            raise ValueError("need degree + 1 coefficients with c0 = 1")
        _check_prime(self.p)

    def __call__(self, t: complex) -> complex:
        return sum(c * t**i for i, c in enumerate(self.coefficients))


@dataclass(frozen=True)
class ConductorRecord:
    N: int
    q_spin_lo: int
    q_spin_hi: int
    q_std_lo: int
    q_std_hi: int


def _expand(roots: Sequence[complex], what: str) -> tuple[float, ...]:
    # np.poly gives prod(x - r) = x^n - e1 x^(n-1) + ...; prod(1 - r t) has
    # the same coefficients read in ascending powers of t.
    c = np.poly(np.asarray(roots, dtype=complex))
    scale = np.maximum(1.0, np.abs(c.real))
    if np.any(np.abs(c.imag) > IMAG_TOL * scale):
        raise NonRealCoordinate(f"{what} coefficients are not real: {c}")
    out = [float(v) for v in c.real]
    out[0] = 1.0
    return tuple(out)


def spin_euler(spin: SpinParams, p: int) -> EulerFactor:
    """``prod (1 - beta t)`` over the four spin parameters."""
    return EulerFactor(4, _expand(spin.multiset, "spin"), p)


def std_euler(std: StandardParams, p: int) -> EulerFactor:
    """``prod (1 - z t)`` over the five standard parameters."""
    return EulerFactor(5, _expand(std.values, "standard"), p)


def _inverse_series(coeffs: Sequence[float], n_max: int) -> list[float]:
    """Coefficients of ``1 / Q(t)`` up to ``t^n_max``."""
    h = [0.0] * (n_max + 1)
    h[0] = 1.0
    for n in range(1, n_max + 1):
        h[n] = -math.fsum(coeffs[k] * h[n - k] for k in range(1, min(n, len(coeffs) - 1) + 1))
    return h


def dirichlet_coeffs(factors: Mapping[int, EulerFactor], n_max: int) -> list[float]:
    """``lambda~(n)`` for ``n = 1..n_max`` (index 0 of the result is ``n = 1``)."""
    if n_max < 1:
        return []
    local: dict[int, list[float]] = {}
    out = []
    for n in range(1, n_max + 1):
        val = 1.0
        for p, k in factorint(n).items():
            if p not in factors:
                raise MissingPrime(p)
            if p not in local:
                local[p] = _inverse_series(factors[p].coefficients, int(math.log(n_max, p)) + 1)
            val *= local[p][k]
        out.append(val)
    return out


def log_deriv_coeffs(factor: EulerFactor, d_max: int) -> list[float]:
    """Power sums ``s_1..s_d_max`` of the inverse roots of ``Q`` (Newton's identities)."""
    c = factor.coefficients
    deg = factor.degree
    s: list[float] = []
    for d in range(1, d_max + 1):
        acc = -d * c[d] if d <= deg else 0.0
        acc -= math.fsum(c[i] * s[d - i - 1] for i in range(1, min(d - 1, deg) + 1))
        s.append(acc)
    return s


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


def analytic_conductor(k: Weight, q: float, kind: str) -> float:
    _check_kind(kind)
    if q < 1:
        raise ValueError("conductor must be >= 1")
    if kind == "spin":
        return float((k.k1 + k.k2) ** 2 * (k.k1 - k.k2 + 1) ** 2 * q)
    return float((k.k1 * k.k2) ** 2 * q)


def conductor_bounds(N: int, kind: str | None = None) -> ConductorRecord:
    """Proven ranges ``q(F) in [N, N^4]`` and ``q(F, St) in [N, N^28]``."""
    if kind is not None:
        _check_kind(kind)
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    N = int(N)
    return ConductorRecord(N, N, N**4, N, N**28)


def gamma_log_contrib(k: Weight, log_c: float, kind: str) -> float:
    """Archimedean term multiplying ``phi_hat(0)`` in the explicit formula."""
    _check_kind(kind)
    if log_c <= 0:
        raise ValueError("log_c must be positive")
    if kind == "spin":
        return (2 * math.log(k.k1 + k.k2) + 2 * math.log(k.k1 - k.k2 + 1)) / log_c
    return (2 * math.log(k.k1) + 2 * math.log(k.k2)) / log_c


def _tail_terms(cls: UnitaryClass, p: int, l_min: int, l_max: int) -> np.ndarray:
    if l_max < l_min:
        return np.zeros(0)
    z = np.asarray(cls.params, dtype=complex)
    ls = np.arange(l_min, l_max + 1)
    b = np.abs((z[None, :] ** ls[:, None]).sum(axis=1))
    return b * math.log(p) / p ** (ls / 2.0)


def tail_sum(cls: UnitaryClass, p: int, l_min: int = 3, l_max: int = 100) -> float:
    """``sum_{l=l_min..l_max} |b(p^l)| log p / p^(l/2)`` for the class's parameters."""
    if p != cls.p:
        raise ValueError(f"class was built at p={cls.p}, not {p}")
    return math.fsum(_tail_terms(cls, p, l_min, l_max))


def tail_partial_sums(cls: UnitaryClass, p: int, l_min: int = 3, l_max: int = 100) -> np.ndarray:
    return np.cumsum(_tail_terms(cls, p, l_min, l_max))


def tail_majorant(cls: UnitaryClass, p: int, l_min: int = 3) -> float:
    """Geometric bound ``log p * sum_i r_i^l_min / (1 - r_i)``, ``r_i = |z_i| / sqrt(p)``.

    Infinite when some parameter has modulus at least ``sqrt(p)``.
    """
    r = np.abs(np.asarray(cls.params, dtype=complex)) / math.sqrt(p)
    if np.any(r >= 1.0):
        return math.inf
    return math.log(p) * math.fsum(r**l_min / (1.0 - r))
