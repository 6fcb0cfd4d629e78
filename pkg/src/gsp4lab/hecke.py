"""Spherical Hecke eigenvalue identities at a good prime p.

Eigenvalues are normalized (``lambda'``): the Hecke operator attached to
``m`` is scaled by ``nu(m)**(-(k1+k2-3)/2)``, so that tempered forms have
spin parameters of modulus one.  With ``t1 = diag(1,1,p,p)``,
``t2 = diag(1,p,p^2,p)`` and ``R_p = K pE_4 K`` acting by ``p**-3``::

    lambda'(p)^2 - lambda'(p^2) - 1/p = p*lambda'_{t2} + 1 + p**-2
    lambda'(p^2) = lambda'_{t1^2} + lambda'_{t2} + p**-3

Two degree-two spin quantities are easy to confuse.  ``h2_spin`` is the
complete homogeneous sum ``lambda'(p^2) + 1/p`` (the Dirichlet coefficient
of the spinor L-function at p^2); ``spin_power_sum(spin, 2)`` is the power
sum that enters the logarithmic derivative.  They differ by ``b_F(p) + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import MissingEigenvalue, NonRealCoordinate
from .satake import SpinParams, StandardParams, _check_prime

IMAG_TOL = 1e-10


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        raise NonRealCoordinate(f"{what} has imaginary part {z.imag!r}")
    return float(z.real)


def spin_power_sum(spin: SpinParams, d: int) -> float:
    """``a_F(p^d)``: sum of d-th powers of the four spin parameters."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return _real(sum(b**d for b in spin.multiset), f"spin power sum of degree {d}")


def std_power_sum(std: StandardParams, d: int) -> float:
    """``b_F(p^d)``: sum of d-th powers of the five standard parameters."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return _real(sum(z**d for z in std.values), f"standard power sum of degree {d}")


def lambda_series(spin: SpinParams, n_max: int, p: int) -> np.ndarray:
    """``lambda'(p^n)`` for ``n = 0..n_max``.

    Expands ``(1 - t^2/p) / prod(1 - beta_i t)``; the reciprocal is generated
    by the linear recurrence of the elementary symmetric functions.
    """
    e = np.poly(np.array(spin.multiset))  # [1, -e1, e2, -e3, e4]
    h = np.zeros(n_max + 1, dtype=complex)
    for n in range(n_max + 1):
        acc = 1.0 if n == 0 else 0.0
        for k in range(1, min(n, 4) + 1):
            acc -= e[k] * h[n - k]
        h[n] = acc
    lam = h.copy()
    lam[2:] -= h[:-2] / p
    return np.array([_real(complex(z), f"lambda'(p^{i})") for i, z in enumerate(lam)])


@dataclass(frozen=True)
class HeckeEigSystem:
    p: int
    lam1: float | None
    lam2: float | None
    lam_t2: float | None = None
    lam_t1sq: float | None = None

    def __post_init__(self):
        _check_prime(self.p)

    @classmethod
    def from_spin(cls, spin: SpinParams, p: int) -> "HeckeEigSystem":
        _, lam1, lam2 = lambda_series(spin, 2, p)
        b1 = float(lam1 * lam1 - lam2 - 1.0 / p - 1.0)
        lam_t2 = lam_t2_from_b1(b1, p)
        return cls(p, float(lam1), float(lam2), lam_t2, float(lam2 - lam_t2 - p**-3.0))

    def require(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise MissingEigenvalue(f"{name} is required")


def b1_from_eigs(sys: HeckeEigSystem) -> float:
    """``b_F(p) = lambda'(p)^2 - lambda'(p^2) - 1/p - 1``."""
    sys.require("lam1", "lam2")
    return sys.lam1 * sys.lam1 - sys.lam2 - 1.0 / sys.p - 1.0


def lam_t2_from_b1(b1: float, p: int) -> float:
    """Invert ``b_F(p) = p * lambda'_{t2} + p**-2``."""
    return (b1 - p**-2.0) / p


def b1_from_lam_t2(lam_t2: float, p: int) -> float:
    return p * lam_t2 + p**-2.0


def b2_chain(b1: float, a2: float) -> float:
    """``b_F(p^2) = b_F(p)^2 - 2 a_F(p^2) - 2 b_F(p) - 2`` with ``a2`` the spin power sum."""
    return b1 * b1 - 2.0 * a2 - 2.0 * b1 - 2.0


def h2_spin(sys: HeckeEigSystem) -> float:
    """Complete homogeneous degree-2 spin sum, ``lambda'(p^2) + 1/p``."""
    sys.require("lam2")
    return sys.lam2 + 1.0 / sys.p


def a2_from_eigs(sys: HeckeEigSystem) -> float:
    """Degree-2 spin power sum from eigenvalues: ``lambda'(p)^2 - 2 b_F(p) - 2``."""
    return sys.lam1 * sys.lam1 - 2.0 * b1_from_eigs(sys) - 2.0


def a2_from_operators(sys: HeckeEigSystem) -> float:
    """``a_F(p^2) = lambda'_{t1^2} - (p-1) lambda'_{t2} - (1-1/p)(1+1/p^2)``."""
    sys.require("lam_t2", "lam_t1sq")
    p = sys.p
    return sys.lam_t1sq - (p - 1) * sys.lam_t2 - (1 - 1 / p) * (1 + p**-2.0)


def q_coefficients(sys: HeckeEigSystem) -> list[float]:
    """Normalized ``Q_{F,p}`` coefficients ``[1, -l1, l1^2 - l2 - 1/p, -l1, 1]``."""
    sys.require("lam1", "lam2")
    l1, l2 = sys.lam1, sys.lam2
    return [1.0, -l1, l1 * l1 - l2 - 1.0 / sys.p, -l1, 1.0]


# ---------------------------------------------------------------------------
# orbital-integral lookups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DoubleCosetIndex:
    """Index of ``K diag(p^-a1, p^-a2, p^(a1-a3), p^(a2-a3)) K``.

    ``z_val`` is the exponent in ``|z|_p = p**z_val`` (not ``ord_p z``).
    The Weyl group acts by ``a_i -> a3 - a_i`` and by swapping ``a1, a2``;
    construction stores the representative with ``a3/2 >= a1 >= a2``.
    """

    a1: int
    a2: int
    a3: int
    p: int
    z_val: int = 0

    def __post_init__(self):
        if not self.a3 >= self.a1 >= self.a2 >= 0:
            raise ValueError(f"need a3 >= a1 >= a2 >= 0, got {(self.a1, self.a2, self.a3)}")
        _check_prime(self.p)
        b1, b2 = sorted((min(self.a1, self.a3 - self.a1), min(self.a2, self.a3 - self.a2)), reverse=True)
        object.__setattr__(self, "a1", b1)
        object.__setattr__(self, "a2", b2)


def orbital_umin(idx: DoubleCosetIndex) -> Fraction:
    """Minimal-unipotent orbital integral of the double-coset indicator."""
    if idx.a3 % 2:
        return Fraction(0)
    m = idx.a3 // 2
    p = Fraction(idx.p)
    if idx.z_val != m:
        return Fraction(0)
    if idx.a1 == idx.a2 == m:
        return 1 / (1 - p**-2)
    if idx.a1 == m > idx.a2:
        return p ** (idx.a3 - 2 * idx.a2)
    return Fraction(0)


def orbital_delta1(idx: DoubleCosetIndex) -> Fraction:
    """Orbital integral at ``delta1 = diag(1,-1,1,-1)`` of the double-coset indicator."""
    if idx.a3 % 2:
        return Fraction(0)
    m = idx.a3 // 2
    p = Fraction(idx.p)
    if idx.z_val != m:
        return Fraction(0)
    if idx.a1 == idx.a2 == m:
        return Fraction(1)
    if m > idx.a1 == idx.a2:
        return p ** (idx.a3 - idx.a1 - idx.a2) * (1 - p**-2)
    return Fraction(0)


def orbital_umin_congruence(p: int, level_exp: int, z_congruent: bool) -> Fraction:
    """Orbital integral of the indicator of ``{x in K : x = 1 mod p^l}``."""
    if not z_congruent:
        return Fraction(0)
    q = Fraction(p)
    return q ** (-2 * level_exp) / (1 - q**-2)
