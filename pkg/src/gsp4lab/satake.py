"""Unramified local data for GSp(4): angles, Satake multisets and Omega coordinates.

Three coordinate systems describe the same tempered unramified class at a
prime p:

* angles ``(theta1, theta2)`` in ``[0, pi]^2``;
* the spin Satake multiset ``{a0, a0*a1, a0*a2, a0*a1*a2}`` with
  ``a0**2 * a1 * a2 == chi_p**2``, and the standard multiset
  ``{1, a1, a2, 1/a1, 1/a2}``;
* the point ``(x, y) = (2 cos theta1, 2 cos theta2)`` of ``Omega = [-2, 2]^2``.

The module also classifies spherical generic unitary standard parameters into
the four shapes S1..S4 by the p-adic sizes of their entries.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

from sympy import isprime

from .errors import NonRealCoordinate, UnclassifiableParams

ALGEBRAIC_RTOL = 1e-12
CLASSIFY_TOL = 1e-9
IMAG_TOL = 1e-8


def _check_prime(p: int) -> int:
    if int(p) != p or not isprime(int(p)):
        raise ValueError(f"p must be a prime, got {p!r}")
    return int(p)


@dataclass(frozen=True)
class SatakeAngles:
    theta1: float
    theta2: float
    p: int

    def __post_init__(self):
        for t in (self.theta1, self.theta2):
            if not 0.0 <= t <= math.pi:
                raise ValueError(f"angle {t!r} outside [0, pi]")
        _check_prime(self.p)

    def normalized(self) -> "SatakeAngles":
        """Return the representative with ``theta1 <= theta2``."""
        if self.theta1 <= self.theta2:
            return self
        return SatakeAngles(self.theta2, self.theta1, self.p)


@dataclass(frozen=True)
class SpinParams:
    """Spin Satake data ``alpha0, alpha1, alpha2`` with a fixed ``chi(p)**(1/2)``.

    The branch of the square root is the caller's choice; it is never
    recomputed from ``chi_p``.
    """

    alpha0: complex
    alpha1: complex
    alpha2: complex
    chi_p: complex = 1.0
    chi_half: complex = 1.0

    def __post_init__(self):
        lhs = self.alpha0**2 * self.alpha1 * self.alpha2
        rhs = self.chi_p**2
        if abs(lhs - rhs) > ALGEBRAIC_RTOL * max(1.0, abs(rhs)) * 10:
            raise ValueError(f"alpha0^2 alpha1 alpha2 = {lhs!r} != chi_p^2 = {rhs!r}")
        if abs(self.chi_half**2 - self.chi_p) > 10 * ALGEBRAIC_RTOL * max(1.0, abs(self.chi_p)):
            raise ValueError("chi_half is not a square root of chi_p")

    @property
    def multiset(self) -> tuple[complex, complex, complex, complex]:
        a0, a1, a2 = self.alpha0, self.alpha1, self.alpha2
        return (a0, a0 * a1, a0 * a2, a0 * a1 * a2)

    @property
    def alpha(self) -> complex:
        return self.alpha0

    @property
    def beta(self) -> complex:
        return self.alpha0 * self.alpha1


@dataclass(frozen=True)
class StandardParams:
    """The degree-5 multiset ``(1, a1, a2, 1/a1, 1/a2)``."""

    values: tuple[complex, ...]

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != 5:
            raise ValueError("standard parameters come in fives")
        if not any(abs(v - 1) <= ALGEBRAIC_RTOL * 10 for v in vals):
            raise ValueError("standard parameters must contain 1")
        if not closed_under_inversion(vals, rtol=ALGEBRAIC_RTOL * 10):
            raise ValueError("standard parameters must be closed under inversion")

    @classmethod
    def from_alphas(cls, alpha1: complex, alpha2: complex) -> "StandardParams":
        return cls((1.0, alpha1, alpha2, 1 / alpha1, 1 / alpha2))


@dataclass(frozen=True)
class OmegaPoint:
    x: float
    y: float

    @property
    def tempered(self) -> bool:
        return -2.0 <= self.x <= 2.0 and -2.0 <= self.y <= 2.0

    def swapped(self) -> "OmegaPoint":
        return OmegaPoint(self.y, self.x)


@dataclass(frozen=True)
class UnitaryClass:
    """A spherical generic unitary class, by shape.

    ``betas`` holds the real exponents (empty for S1, ``(beta,)`` for S2/S3,
    ``(beta1, beta2)`` for S4) and ``phases`` the unit-modulus parameters.
    ``params`` is the standard multiset the class describes at ``p``.
    """

    tag: str
    p: int
    betas: tuple[float, ...] = ()
    phases: tuple[complex, ...] = ()
    params: tuple[complex, ...] = field(default=(), compare=False)
    boundary: bool = False

    def __post_init__(self):
        if self.tag not in ("S1", "S2", "S3", "S4"):
            raise ValueError(f"unknown class tag {self.tag!r}")
        for ph in self.phases:
            if abs(abs(ph) - 1) > CLASSIFY_TOL:
                raise ValueError("phases must have unit modulus")
        if not self.boundary:
            _check_open_intervals(self.tag, self.betas)
        if not self.params:
            object.__setattr__(self, "params", class_params(self.tag, self.p, self.betas, self.phases))

    @property
    def exponents(self) -> tuple[float, ...]:
        """log_p of the moduli of ``params``."""
        lp = math.log(self.p)
        return tuple(math.log(abs(z)) / lp for z in self.params)


def _check_open_intervals(tag: str, betas: Sequence[float]) -> None:
    ok = True
    if tag == "S1":
        ok = len(betas) == 0
    elif tag == "S2":
        ok = len(betas) == 1 and 0 < betas[0] < 0.5
    elif tag == "S3":
        ok = len(betas) == 1 and 0 < betas[0] < 1
    elif tag == "S4":
        ok = len(betas) == 2 and 0 < betas[1] <= betas[0] < 1 and betas[0] + betas[1] < 1
    if not ok:
        raise ValueError(f"exponents {tuple(betas)} violate the {tag} constraints")


def class_params(tag: str, p: int, betas: Sequence[float], phases: Sequence[complex]) -> tuple[complex, ...]:
    """Standard Satake multiset of a class from its exponents and phases."""
    if tag == "S1":
        a1, a2 = phases
        return (1.0, a1, a2, 1 / a1, 1 / a2)
    if tag == "S2":
        (b,), (a,) = betas, phases
        q = p**b
        return (1.0, q * a, q / a, a / q, 1 / (q * a))
    if tag == "S3":
        (b,), (a,) = betas, phases
        q = p**b
        return (1.0, q, 1 / q, a, 1 / a)
    if tag == "S4":
        (b1, b2), (a,) = betas, phases
        q1, q2 = p**b1, p**b2
        return (1.0, q1 * a, q2 * a, 1 / (q1 * a), 1 / (q2 * a))
    raise ValueError(tag)


def closed_under_inversion(values: Sequence[complex], rtol: float = ALGEBRAIC_RTOL) -> bool:
    """Whether the multiset equals its image under z -> 1/z, within ``rtol``."""
    remaining = [complex(v) for v in values]
    targets = [1 / complex(v) for v in values]
    for t in targets:
        best = min(range(len(remaining)), key=lambda i: abs(remaining[i] - t), default=None)
        if best is None or abs(remaining[best] - t) > rtol * max(1.0, abs(t)):
            return False
        remaining.pop(best)
    return True


def angles_to_spin(angles: SatakeAngles) -> SpinParams:
    """Spin parameters ``{e^{+-i theta1}, e^{+-i theta2}}`` with trivial character."""
    a = cmath.exp(1j * angles.theta1)
    b = cmath.exp(1j * angles.theta2)
    # alpha = alpha0, beta = alpha0*alpha1, and alpha0*alpha1*alpha2 = 1/alpha
    return SpinParams(alpha0=a, alpha1=b / a, alpha2=1 / (a * b))


def to_omega(spin: SpinParams) -> OmegaPoint:
    ch, chi_inv = spin.chi_half, 1 / spin.chi_half
    a, b = spin.alpha, spin.beta
    x = a * chi_inv + ch / a
    y = b * chi_inv + ch / b
    for z in (x, y):
        if abs(z.imag) > IMAG_TOL:
            raise NonRealCoordinate(f"coordinate {z!r} is not real; input is not tempered")
    return OmegaPoint(x.real, y.real)


def omega_from_angles(theta1: float, theta2: float) -> OmegaPoint:
    return OmegaPoint(2 * math.cos(theta1), 2 * math.cos(theta2))


def angles_from_omega(point: OmegaPoint, p: int) -> SatakeAngles:
    t1 = math.acos(max(-1.0, min(1.0, point.x / 2)))
    t2 = math.acos(max(-1.0, min(1.0, point.y / 2)))
    return SatakeAngles(t1, t2, p)


def spin_to_standard(spin: SpinParams) -> StandardParams:
    return StandardParams.from_alphas(spin.alpha1, spin.alpha2)


def classify_unitary(params: Sequence[complex], p: int, tol: float = CLASSIFY_TOL) -> UnitaryClass:
    """Classify a standard multiset into S1..S4 by the p-adic sizes of its entries.

    Raises UnclassifiableParams when the moduli match none of the shapes.  An
    exponent sitting exactly on an interval endpoint is accepted with
    ``boundary=True``.
    """
    p = _check_prime(p)
    vals = [complex(v) for v in params]
    if len(vals) != 5:
        raise UnclassifiableParams("expected five standard parameters")
    if not closed_under_inversion(vals, rtol=tol):
        raise UnclassifiableParams("parameters are not closed under inversion")
    one = min(range(5), key=lambda i: abs(vals[i] - 1))
    if abs(vals[one] - 1) > tol:
        raise UnclassifiableParams("parameters do not contain 1")
    rest = vals[:one] + vals[one + 1:]
    lp = math.log(p)
    expo = sorted(((math.log(abs(z)) / lp, z) for z in rest), key=lambda t: -t[0])
    e = [t[0] for t in expo]

    def phase(z):
        return z / abs(z)

    if abs(e[0]) <= tol:
        # pair each unit parameter with its inverse; keep one of each pair
        reps = []
        pool = list(rest)
        while pool:
            z = pool.pop(0)
            j = min(range(len(pool)), key=lambda i: abs(pool[i] - 1 / z))
            pool.pop(j)
            reps.append(phase(z))
        return UnitaryClass("S1", p, (), tuple(reps), tuple(vals))

    if abs(e[1]) <= tol:
        beta = e[0]
        units = [z for ex, z in expo[1:3]]
        boundary = _at_bound(beta, 1.0, tol)
        return UnitaryClass("S3", p, (beta,), (phase(units[0]),), tuple(vals), boundary)

    u, v = phase(expo[0][1]), phase(expo[1][1])
    if abs(e[0] - e[1]) <= tol:
        beta = 0.5 * (e[0] + e[1])
        if abs(u - v) <= tol:
            boundary = _at_bound(2 * beta, 1.0, tol)
            return UnitaryClass("S4", p, (beta, beta), (u,), tuple(vals), boundary)
        if abs(u - v.conjugate()) <= tol:
            boundary = _at_bound(beta, 0.5, tol)
            return UnitaryClass("S2", p, (beta,), (u,), tuple(vals), boundary)
        raise UnclassifiableParams("phases of the expanding pair fit neither S2 nor S4")
    if abs(u - v) > tol:
        raise UnclassifiableParams("S4 shape requires a common phase")
    boundary = _at_bound(e[0] + e[1], 1.0, tol)
    return UnitaryClass("S4", p, (e[0], e[1]), (u,), tuple(vals), boundary)


def _at_bound(value: float, upper: float, tol: float) -> bool:
    if value < upper - tol:
        return False
    if value <= upper + tol:
        return True
    raise UnclassifiableParams(f"exponent {value!r} exceeds the unitary range {upper}")


def lrs_bound_check(params: Sequence[complex], m: int, p: int) -> bool:
    """Check ``|alpha| <= p**(1/2 - 1/(m**2+1))`` for every parameter."""
    if m < 1:
        raise ValueError("m must be >= 1")
    bound = p ** (0.5 - 1.0 / (m * m + 1)) + 1e-12
    return all(abs(complex(z)) <= bound for z in params)
