"""Equidistribution reports and error-budget shapes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np
from sympy import totient

from ..measures import cdf_grid, integrate
from .dataset import FamilyDataset

STANDARD_TEST_FNS: dict[str, Callable] = {
    "1": lambda x, y: np.ones_like(x),
    "x": lambda x, y: x,
    "y": lambda x, y: y,
    "xy": lambda x, y: x * y,
    "x2": lambda x, y: x * x,
}


@dataclass(frozen=True)
class ReportRow:
    name: str
    value: float
    reference: float
    abs_err: float
    std_err: float

    @property
    def difference(self) -> float:
        return self.value - self.reference

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "reference": self.reference,
                "abs_err": self.abs_err, "std_err": self.std_err}


def _named(test_fns) -> list[tuple[str, Callable]]:
    if isinstance(test_fns, Mapping):
        return list(test_fns.items())
    out = []
    for i, f in enumerate(test_fns):
        if isinstance(f, str):
            out.append((f, STANDARD_TEST_FNS[f]))
        elif isinstance(f, tuple):
            out.append(f)
        else:
            out.append((getattr(f, "__name__", f"f{i}"), f))
    return out


def equidist_report(ds: FamilyDataset, p: int, test_fns: Iterable | Mapping) -> list[ReportRow]:
    """Empirical family means against ``int f d mu_p`` with Monte-Carlo standard errors."""
    xs, ys = ds.at_prime(p)
    n = len(xs)
    rows = []
    for name, f in _named(test_fns):
        vals = np.asarray(f(xs, ys), dtype=float) * np.ones(n)
        mean = math.fsum(vals.tolist()) / n
        ref = integrate(f, p)
        se = float(np.std(vals, ddof=1)) / math.sqrt(n) if n > 1 else math.inf
        rows.append(ReportRow(name, mean, ref, abs(mean - ref), se))
    return rows


def kolmogorov_distance(xs, ys, p: int, n_thresholds: int = 81) -> float:
    """Sup over a threshold grid of ``|F_emp - F_mu_p|`` for the bivariate CDF."""
    t = np.linspace(-2.0, 2.0, n_thresholds)
    ref = cdf_grid(p, t, t)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    # point (x, y) counts at every threshold pair (i, j) with t_i >= x, t_j >= y
    ix = np.searchsorted(t, xs, side="left")
    iy = np.searchsorted(t, ys, side="left")
    counts = np.zeros((n_thresholds + 1, n_thresholds + 1))
    np.add.at(counts, (ix, iy), 1.0)
    emp = np.cumsum(np.cumsum(counts, axis=0), axis=1)[:-1, :-1] / len(xs)
    return float(np.max(np.abs(emp - ref)))


def euler_phi(N: int) -> int:
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    return int(totient(int(N)))


@dataclass(frozen=True)
class ErrorBudget:
    """Unit-constant magnitudes of the second main terms.

    Level aspect fills ``A``; weight aspect fills ``B1`` and ``B2``.  Unused
    terms are 0.
    """

    aspect: str
    A: float
    B1: float
    B2: float
    remainder: float
    kappa: float
    phi_N: int

    def __post_init__(self):
        for v in (self.A, self.B1, self.B2, self.remainder):
            if not v >= 0:
                raise ValueError("budget magnitudes must be >= 0")


def error_budget(aspect: str, p: int, kappa: float, k1: int, k2: int, N: int,
                 a: float = 1.0, b: float = 0.0, a_w: float = 1.0, b_w: float = 0.0) -> ErrorBudget:
    """Shape functions of the error terms with all O-constants set to 1.

    ``(a, b)`` are the remainder exponents in the level aspect and
    ``(a_w, b_w)`` in the weight aspect.
    """
    if not k1 >= k2 >= 3:
        raise ValueError("need k1 >= k2 >= 3")
    if N % p == 0:
        raise ValueError(f"p={p} divides N={N}")
    phi = euler_phi(N)
    pk = float(p) ** kappa
    if aspect == "level":
        A = pk * phi / N**2
        rem = float(p) ** (a * kappa + b) * phi / N**3
        return ErrorBudget(aspect, A, 0.0, 0.0, rem, kappa, phi)
    if aspect == "weight":
        B1 = pk / ((k1 - 1) * (k2 - 2))
        B2 = pk / ((k1 - k2 + 1) * (k1 + k2 - 3))
        rem = float(p) ** (a_w * kappa + b_w) / ((k1 - k2 + 1) * (k1 - 1) * (k2 - 2))
        return ErrorBudget(aspect, 0.0, B1, B2, rem, kappa, phi)
    raise ValueError(f"aspect must be 'level' or 'weight', got {aspect!r}")
