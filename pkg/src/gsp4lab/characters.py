"""Holomorphic discrete-series characters of Sp4(R) and GSp4(R).

Characters are evaluated on the four Cartan subgroups

* ``T4``: compact torus ``t4(theta1, theta2)``;
* ``T0``: split torus ``t0(a1, a2)`` and its translate ``delta1 * t0(a1, a2)``
  with ``delta1 = diag(1, -1, 1, -1)``;
* ``T1``: ``t1(a, theta)``;
* ``T2``: ``t2(a, theta)``.

Each formula is a ratio whose denominator is the Weyl denominator of the
element.  Evaluation refuses (``RegularityViolation``) when that denominator
is below ``eps`` in modulus instead of returning an amplified value.

Elements of ``-T_j`` are represented with ``negated=True``.  Their values
follow from the central element ``-1``, which acts on the minimal K-type
``(l1 + 1, l2 + 2)`` by ``(-1)**(l1 + l2 + 1)``; this agrees with the
compact-torus formula evaluated at ``theta + pi``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import OrderingViolation, RegularityViolation

REGULARITY_EPS = 1e-8


@dataclass(frozen=True)
class HCParam:
    """Harish-Chandra parameter ``(l1, l2)``, ``l1 > l2 > 0``."""

    l1: int
    l2: int

    def __post_init__(self):
        if not self.l1 > self.l2 > 0:
            raise ValueError(f"need l1 > l2 > 0, got ({self.l1}, {self.l2})")

    @property
    def weight(self) -> tuple[int, int]:
        return (self.l1 + 1, self.l2 + 2)


@dataclass(frozen=True)
class Weight:
    """Weight ``(k1, k2)`` with ``k1 >= k2 >= 3`` and similitude twist ``c``."""

    k1: int
    k2: int
    c: int = 3

    def __post_init__(self):
        if not self.k1 >= self.k2 >= 3:
            raise ValueError(f"need k1 >= k2 >= 3, got ({self.k1}, {self.k2})")

    @property
    def highest_weight(self) -> tuple[int, int]:
        return (self.k1 - 3, self.k2 - 3)

    @property
    def hc_param(self) -> HCParam:
        return HCParam(self.k1 - 1, self.k2 - 2)

    def central_character(self, z: float) -> float:
        """``chi_xi(z) = z**(2c + a + b)`` on positive scalars."""
        a, b = self.highest_weight
        return z ** (2 * self.c + a + b)


CARTAN_TAGS = ("T4", "T0", "T0_delta1", "T1", "T2")


@dataclass(frozen=True)
class CartanElement:
    """A regular element of one of the Cartan subgroups.

    ``u, v`` are ``(theta1, theta2)`` for T4, ``(a1, a2)`` for T0 and
    T0_delta1, and ``(a, theta)`` for T1 and T2.
    """

    tag: str
    u: float
    v: float
    negated: bool = False

    def __post_init__(self):
        if self.tag not in CARTAN_TAGS:
            raise ValueError(f"unknown Cartan tag {self.tag!r}")

    def __neg__(self) -> "CartanElement":
        return CartanElement(self.tag, self.u, self.v, not self.negated)

    @classmethod
    def t4(cls, theta1, theta2):
        return cls("T4", theta1, theta2)

    @classmethod
    def t0(cls, a1, a2):
        return cls("T0", a1, a2)

    @classmethod
    def t0_delta1(cls, a1, a2):
        return cls("T0_delta1", a1, a2)

    @classmethod
    def t1(cls, a, theta):
        return cls("T1", a, theta)

    @classmethod
    def t2(cls, a, theta):
        return cls("T2", a, theta)

    def is_regular(self, eps: float = REGULARITY_EPS) -> bool:
        return abs(weyl_denominator(self)) > eps


def _sgn(t: float) -> float:
    return math.copysign(1.0, t) if t else 0.0


def weyl_denominator(g: CartanElement) -> complex:
    """Denominator of the character formula for ``g`` (ignoring ``negated``)."""
    E = cmath.exp
    if g.tag == "T4":
        t1, t2 = g.u, g.v
        e = lambda t: E(1j * t)  # noqa: E731
        return (e(t1) - e(-t1)) * (e(t2) - e(-t2)) * (1 - e(t1 + t2)) * (e(-t1) - e(-t2))
    if g.tag == "T0":
        a1, a2 = g.u, g.v
        return (E(a1) - E(-a1)) * (E(a2) - E(-a2)) * (1 - E(a1 + a2)) * (E(-a1) - E(-a2))
    if g.tag == "T0_delta1":
        a1, a2 = g.u, g.v
        return (E(a1) - E(-a1)) * (-E(a2) + E(-a2)) * (1 + E(a1 + a2)) * (E(-a1) + E(-a2))
    a, th = g.u, g.v
    if g.tag == "T1":
        return (
            (E(a + 1j * th) - E(-a - 1j * th))
            * (E(a - 1j * th) - E(-a + 1j * th))
            * (1 - E(2 * a))
            * (E(-a - 1j * th) - E(-a + 1j * th))
        )
    return (E(1j * th) - E(-1j * th)) * (E(a) - E(-a)) * (1 - E(1j * th + a)) * (E(-a) - E(-1j * th))


def _numerator(l: HCParam, g: CartanElement) -> complex:
    l1, l2 = l.l1, l.l2
    E = cmath.exp
    if g.tag == "T4":
        t1, t2 = g.u, g.v
        return -E(1j * (l1 * t1 + l2 * t2)) + E(1j * (l2 * t1 + l1 * t2))
    if g.tag == "T0":
        a1, a2 = abs(g.u), abs(g.v)
        return (-E(-l1 * a1 - l2 * a2) + E(-l2 * a1 - l1 * a2)) * _sgn(g.u * g.v)
    if g.tag == "T0_delta1":
        a1, a2 = abs(g.u), abs(g.v)
        s1, s2 = (-1) ** l1, (-1) ** l2
        return (-s2 * E(-l1 * a1 - l2 * a2) + s1 * E(-l2 * a1 - l1 * a2)) * _sgn(g.u * g.v)
    a, th = g.u, g.v
    if g.tag == "T1":
        r = abs(a)
        return (-E(-l1 * (r + 1j * th) - l2 * (r - 1j * th)) + E(-l2 * (r + 1j * th) - l1 * (r - 1j * th))) * _sgn(a)
    r = abs(a)
    return (E(-l1 * r + 1j * l2 * th) - E(-l2 * r + 1j * l1 * th)) * _sgn(a)


def negation_sign(l: HCParam) -> int:
    """Value of the central character of ``D_{l1,l2}`` at ``-1``."""
    return -((-1) ** (l.l1 + l.l2))


def character_value(l: HCParam, g: CartanElement, eps: float = REGULARITY_EPS) -> complex:
    """``Theta_{l1,l2}(g)`` for a regular element ``g``."""
    den = weyl_denominator(g)
    if abs(den) <= eps:
        raise RegularityViolation(f"{g} is within {eps} of the singular set")
    if g.tag == "T0" and not abs(g.u) > abs(g.v) > 0:
        raise OrderingViolation("the split-torus formula needs |a1| > |a2| > 0")
    val = _numerator(l, g) / den
    return negation_sign(l) * val if g.negated else val


def gsp_character(
    l: HCParam,
    z: float,
    g: CartanElement,
    on_delta_component: bool = False,
    xi: Weight | None = None,
    eps: float = REGULARITY_EPS,
) -> complex:
    """Character of the holomorphic discrete series of GSp4(R) at ``z * g``.

    On ``A_G Sp4(R)`` it is ``chi_xi(z)^-1 (Theta + conj Theta)``; on the
    component of ``delta = diag(1, 1, -1, -1)`` it vanishes identically.
    """
    if z <= 0:
        raise ValueError("z must be a positive scalar")
    if xi is None:
        k1, k2 = l.weight
        xi = Weight(k1, k2)
    elif xi.hc_param != l:
        raise ValueError(f"weight {xi} does not match {l}")
    if on_delta_component:
        return 0j
    theta = character_value(l, g, eps)
    return complex(2.0 * theta.real / xi.central_character(z))


def singular_limit_delta1(l: HCParam) -> float:
    """Limit value at ``delta1`` for central ``z = 1``, constant ``2^-4 pi^-2``."""
    l1, l2 = l.l1, l.l2
    return (-1) ** l2 * l1 * l2 * (1 + (-1) ** (l1 - l2 - 1)) / (16 * math.pi**2)


def singular_limit_umin(l: HCParam) -> float:
    """Limit value at the minimal unipotent class for ``z = 1``, constant ``-2^-3 pi^-3``."""
    return -(l.l1 - l.l2) * (l.l1 + l.l2) / (8 * math.pi**3)


def dim_weyl(a: int, b: int) -> int:
    """Dimension of the irreducible Sp4 representation of highest weight ``(a, b)``."""
    if not a >= b >= 0:
        raise ValueError(f"need a >= b >= 0, got ({a}, {b})")
    num = (a - b + 1) * (a + b + 3) * (a + 2) * (b + 1)
    q, r = divmod(num, 6)
    assert r == 0, (a, b)
    return q


def formal_degree(k: Weight) -> int:
    l1, l2 = k.k1 - 1, k.k2 - 2
    return (l1 - l2) * (l1 + l2) * l1 * l2
