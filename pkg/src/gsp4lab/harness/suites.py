"""Invariant suites run by ``gsp4lab verify``.

Each suite returns a :class:`SuiteResult` holding report rows and a pass
flag.  Rows never carry timings, so reports are byte-identical per seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sympy import primerange

from ..characters import (
    CartanElement, HCParam, Weight, character_value, dim_weyl, formal_degree, gsp_character,
    singular_limit_delta1, singular_limit_umin,
)
from ..hecke import (
    DoubleCosetIndex, HeckeEigSystem, b1_from_eigs, b2_chain, orbital_delta1, orbital_umin, spin_power_sum,
    std_power_sum, q_coefficients,
)
from ..lfun import spin_euler, tail_majorant, tail_partial_sums
from ..measures import (
    g_denominators, gg_denominator_closed_form, integrate, make_rng, mu_p_density, st_density, total_mass,
)
from ..onelevel import SymmetryType, direct_side, fejer, fourier_side, prediction, prime_weights, explicit_prime_sum
from ..satake import SatakeAngles, UnitaryClass, angles_to_spin, spin_to_standard
from .dataset import synth_family
from .report import result
from .stats import equidist_report, kolmogorov_distance


@dataclass
class SuiteResult:
    name: str
    rows: list = field(default_factory=list)
    passed: bool = True
    notes: list = field(default_factory=list)

    def check(self, ok: bool, note: str) -> None:
        if not ok:
            self.passed = False
            self.notes.append(note)


def _sub(seed: int, k: int) -> np.random.Generator:
    return make_rng((int(seed) * 1_000_003 + k) % 2**64)


def suite_plancherel_mass(seed: int) -> SuiteResult:
    s = SuiteResult("plancherel_mass")
    for p in (2, 3, 5, 101):
        m = total_mass(p, "angles")
        s.rows.append(result(f"total_mass p={p}", m, 1.0, abs(m - 1.0)))
        s.check(abs(m - 1.0) <= 1e-6, f"p={p}: mass {m}")
    return s


def suite_denominator(seed: int) -> SuiteResult:
    s = SuiteResult("denominator_identity")
    g = np.linspace(-2.0, 2.0, 200)
    X, Y = np.meshgrid(g, g, indexing="ij")
    for p in (2, 3, 101):
        dp, dm = g_denominators(X, Y, p)
        ref = gg_denominator_closed_form(X, Y, p)
        err = float(np.max(np.abs(dp * dm - ref) / np.abs(ref)))
        s.rows.append(result(f"max rel err p={p}", err, 0.0, err))
        s.check(err < 1e-12, f"p={p}: {err}")
    return s


def sato_tate_distance(p: float, n: int = 200) -> float:
    g = np.linspace(-2.0, 2.0, n)
    X, Y = np.meshgrid(g, g, indexing="ij")
    return float(np.max(np.abs(mu_p_density(X, Y, p, normalized=True) - st_density(X, Y, normalized=True))))


def suite_sato_tate(seed: int) -> SuiteResult:
    s = SuiteResult("sato_tate_limit")
    ps = (1e2, 1e3, 1e4, 1e6)
    d = [sato_tate_distance(p) for p in ps]
    for p, v in zip(ps, d):
        s.rows.append(result(f"sup distance p={p:.0e}", v, 0.0, v))
    s.check(d[-1] < 1e-4, f"p=1e6 distance {d[-1]}")
    s.check(all(a > b for a, b in zip(d, d[1:])), f"not monotone: {d}")
    return s


def random_tempered(rng: np.random.Generator, n: int, primes=(2, 3, 5, 7, 11, 13)):
    th = rng.random((n, 2)) * math.pi
    ps = rng.choice(np.asarray(primes), n)
    return [(float(a), float(b), int(p)) for (a, b), p in zip(th, ps)]


def suite_hecke(seed: int) -> SuiteResult:
    s = SuiteResult("hecke_identities")
    errs = {"Q coefficients": 0.0, "b_F(p) = 1+xy": 0.0, "a_F(p) = x+y": 0.0, "b_F(p^2) chain": 0.0}
    for t1, t2, p in random_tempered(_sub(seed, 4), 100):
        spin = angles_to_spin(SatakeAngles(t1, t2, p))
        std = spin_to_standard(spin)
        sys = HeckeEigSystem.from_spin(spin, p)
        x, y = 2 * math.cos(t1), 2 * math.cos(t2)
        q = np.asarray(q_coefficients(sys))
        direct = np.asarray(spin_euler(spin, p).coefficients)
        errs["Q coefficients"] = max(errs["Q coefficients"], float(np.max(np.abs(q - direct))))
        errs["b_F(p) = 1+xy"] = max(errs["b_F(p) = 1+xy"], abs(b1_from_eigs(sys) - (1 + x * y)))
        errs["a_F(p) = x+y"] = max(errs["a_F(p) = x+y"], abs(spin_power_sum(spin, 1) - (x + y)))
        chain = b2_chain(std_power_sum(std, 1), spin_power_sum(spin, 2))
        errs["b_F(p^2) chain"] = max(errs["b_F(p^2) chain"], abs(chain - std_power_sum(std, 2)))
    for k, v in errs.items():
        s.rows.append(result(f"max err {k}", v, 0.0, v))
        s.check(v <= 1e-9, f"{k}: {v}")
    return s


def suite_orbital(seed: int) -> SuiteResult:
    from fractions import Fraction

    s = SuiteResult("orbital_lookups")
    golden = [
        ("umin (1,1,2) p=3", orbital_umin(DoubleCosetIndex(1, 1, 2, 3, 1)), Fraction(9, 8)),
        ("umin (1,0,2) p=5", orbital_umin(DoubleCosetIndex(1, 0, 2, 5, 1)), Fraction(25)),
        ("delta1 (1,1,2) p=7", orbital_delta1(DoubleCosetIndex(1, 1, 2, 7, 1)), Fraction(1)),
        ("delta1 (0,0,2) p=3", orbital_delta1(DoubleCosetIndex(0, 0, 2, 3, 1)), Fraction(8)),
    ]
    for name, got, want in golden:
        s.rows.append(result(name, str(got), str(want), float(abs(got - want))))
        s.check(got == want, f"{name}: {got} != {want}")
    bad = 0
    for a3 in range(1, 10, 2):
        for a1 in range(a3 + 1):
            for a2 in range(a1 + 1):
                for z in range(-1, a3 + 2):
                    for p in (2, 3):
                        idx = DoubleCosetIndex(a1, a2, a3, p, z)
                        bad += orbital_umin(idx) != 0 or orbital_delta1(idx) != 0
    s.rows.append(result("nonzero values at odd a3 <= 9", bad, 0, bad))
    s.check(bad == 0, f"{bad} nonzero odd-a3 values")
    return s


def _random_regular_t4(rng, n):
    out = []
    while len(out) < n:
        t1, t2 = (float(v) for v in rng.random(2) * 2 * math.pi)
        # keep away from the walls so that both values are well conditioned
        if CartanElement.t4(t1, t2).is_regular(1e-3):
            out.append((t1, t2))
    return out


def suite_characters(seed: int) -> SuiteResult:
    s = SuiteResult("characters")
    rng = _sub(seed, 6)
    swap_err = 0.0
    parity_err = 0.0
    gsp_parity_err = 0.0
    for i, (t1, t2) in enumerate(_random_regular_t4(rng, 100)):
        l2 = 1 + i % 4
        l = HCParam(l2 + 1 + i % 3, l2)
        v = character_value(l, CartanElement.t4(t1, t2))
        sw = character_value(l, CartanElement.t4(t2, t1))
        swap_err = max(swap_err, abs(v - sw) / max(1.0, abs(v)))
        # -t4(t1, t2) = t4(t1 + pi, t2 + pi)
        neg = character_value(l, CartanElement.t4(t1 + math.pi, t2 + math.pi))
        stated = (-1) ** (l.l1 + l.l2)
        parity_err = max(parity_err, abs(neg - stated * v) / max(1.0, abs(v)))
        g_neg = gsp_character(l, 1.0, CartanElement.t4(t1 + math.pi, t2 + math.pi))
        g_pos = gsp_character(l, 1.0, CartanElement.t4(t1, t2))
        gsp_parity_err = max(gsp_parity_err, abs(g_neg - stated * g_pos) / max(1.0, abs(g_pos)))
    s.rows.append(result("swap symmetry max rel err", swap_err, 0.0, swap_err))
    s.rows.append(result("parity (-1)^(l1+l2) max rel err", parity_err, 0.0, parity_err))
    s.rows.append(result("GSp parity (-1)^(l1+l2) max rel err", gsp_parity_err, 0.0, gsp_parity_err))
    s.check(swap_err <= 1e-10, f"swap {swap_err}")
    s.check(parity_err <= 1e-10, f"parity {parity_err}")
    s.check(gsp_parity_err <= 1e-10, f"gsp parity {gsp_parity_err}")
    delta = [gsp_character(HCParam(2, 1), z, CartanElement.t4(0.3, 1.2), on_delta_component=True)
             for z in (0.5, 1.0, 3.0)]
    dz = max(abs(v) for v in delta)
    s.rows.append(result("delta-component max |value|", dz, 0.0, dz))
    s.check(dz == 0.0, "delta component nonzero")
    lims = [
        ("delta1 limit (3,1)", singular_limit_delta1(HCParam(3, 1)), 0.0),
        ("delta1 limit (2,1)", singular_limit_delta1(HCParam(2, 1)), -1 / (4 * math.pi**2)),
        ("umin limit (2,1)", singular_limit_umin(HCParam(2, 1)), -3 / (8 * math.pi**3)),
    ]
    for name, got, want in lims:
        s.rows.append(result(name, got, want, abs(got - want)))
        s.check(abs(got - want) <= 1e-15, f"{name}: {got} vs {want}")
    return s


def suite_dimensions(seed: int) -> SuiteResult:
    s = SuiteResult("dimensions")
    for (a, b), want in (((0, 0), 1), ((1, 0), 4), ((1, 1), 5)):
        got = dim_weyl(a, b)
        s.rows.append(result(f"dim_weyl({a},{b})", got, want, abs(got - want)))
        s.check(got == want, f"dim_weyl({a},{b}) = {got}")
    bad = sum(
        formal_degree(Weight(k1, k2)) != 6 * dim_weyl(k1 - 3, k2 - 3)
        for k1 in range(3, 41) for k2 in range(3, k1 + 1)
    )
    s.rows.append(result("formal_degree != 6 dim, 3 <= k2 <= k1 <= 40", bad, 0, bad))
    s.check(bad == 0, f"{bad} weights violate the degree relation")
    return s


def suite_one_level(seed: int) -> SuiteResult:
    s = SuiteResult("one_level_density")
    phi = fejer(1.0)
    for tag, want in (("Sp", 0.5), ("O", 1.5)):
        t = SymmetryType(tag)
        d, f = direct_side(phi, t), fourier_side(phi, t)
        s.rows.append(result(f"pair fejer(1) {tag} direct", d, want, abs(d - want)))
        s.rows.append(result(f"pair fejer(1) {tag} Fourier", f, want, abs(f - want)))
        s.check(abs(d - want) <= 1e-6 and abs(f - want) <= 1e-6, f"{tag}: {d}, {f}")
    for u in (0.25, 0.5, 1.0):
        ph = fejer(u)
        gap = prediction(ph, "spin") - prediction(ph, "std") - float(ph.phi(0.0))
        s.rows.append(result(f"prediction gap - phi(0), u={u}", gap, 0.0, abs(gap)))
        s.check(gap == 0.0, f"prediction gap u={u}: {gap}")
    for u in (0.25, 0.5, 0.9):
        ph = fejer(u)
        vals = [fourier_side(ph, SymmetryType(t)) for t in ("SOeven", "SOodd", "O")]
        spread = max(vals) - min(vals)
        s.rows.append(result(f"SOeven/SOodd/O spread u={u}", spread, 0.0, spread))
        s.check(spread <= 1e-9, f"spread u={u}: {spread}")
    return s


def suite_equidistribution(seed: int, n: int = 100_000, p: int = 3) -> SuiteResult:
    s = SuiteResult("equidistribution")
    ds = synth_family([p], n, (4, 3), 1, seed)
    for row in equidist_report(ds, p, ["1", "x", "y", "xy", "x2"]):
        s.rows.append(row.as_dict())
        s.check(row.abs_err <= 4 * row.std_err, f"{row.name}: {row.abs_err} > 4 * {row.std_err}")
    xs, ys = ds.at_prime(p)
    ks = kolmogorov_distance(xs, ys, p)
    s.rows.append(result("Kolmogorov distance", ks, 0.0, ks))
    s.check(ks < 0.01, f"Kolmogorov distance {ks}")
    return s


TAIL_CLASSES = (
    ("S1", (), (complex(math.cos(0.3), math.sin(0.3)), complex(math.cos(1.1), math.sin(1.1)))),
    ("S2", (0.49,), (complex(math.cos(0.7), math.sin(0.7)),)),
    ("S3", (0.45,), (complex(math.cos(0.4), math.sin(0.4)),)),
    ("S4", (0.3, 0.15), (-1.0 + 0j,)),
)


def suite_explicit_formula(seed: int, n_forms: int = 10_000) -> SuiteResult:
    s = SuiteResult("explicit_formula")
    phi = fejer(1.0)
    log_c = math.log(100.0)
    primes = [int(p) for p in primerange(2, 98)]
    ds = synth_family(primes, n_forms, (4, 3), 1, seed)
    val = explicit_prime_sum(ds, phi, log_c, 1, "spin")
    w = prime_weights(phi, log_c, 1)
    var = math.fsum(w[p] ** 2 * integrate(lambda x, y: (x + y) ** 2, p) for p in w)
    se = math.sqrt(var / n_forms)
    s.rows.append(result("order-1 spin prime sum", val, 0.0, abs(val), se))
    s.check(abs(val) <= 3 * se, f"prime sum {val} exceeds 3 * {se}")
    for tag, betas, phases in TAIL_CLASSES:
        cls = UnitaryClass(tag, 2, betas, phases)
        part = tail_partial_sums(cls, 2, 3, 400)
        inc = np.diff(part)
        bound = max(
            part[-1] - part[i] - tail_majorant(cls, 2, 3 + i + 1) for i in range(len(part) - 1)
        )
        s.rows.append(result(f"{tag} tail partial sum l<=400", float(part[-1]), tail_majorant(cls, 2, 3),
                             max(0.0, float(bound))))
        s.check(bool(np.all(inc >= 0)), f"{tag}: partial sums decrease")
        s.check(bound <= 1e-12, f"{tag}: tail exceeds majorant by {bound}")
        s.check(part[-1] <= tail_majorant(cls, 2, 3) + 1e-12, f"{tag}: sum exceeds majorant")
    return s


SUITES = (
    suite_plancherel_mass,
    suite_denominator,
    suite_sato_tate,
    suite_hecke,
    suite_orbital,
    suite_characters,
    suite_dimensions,
    suite_one_level,
    suite_equidistribution,
    suite_explicit_formula,
)


def run_all(seed: int) -> list[SuiteResult]:
    return [suite(seed) for suite in SUITES]
