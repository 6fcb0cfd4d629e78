import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsp4lab.errors import MissingEigenvalue
from gsp4lab.hecke import (
    DoubleCosetIndex, HeckeEigSystem, a2_from_eigs, a2_from_operators, b1_from_eigs, b1_from_lam_t2, b2_chain,
    h2_spin, lam_t2_from_b1, lambda_series, orbital_delta1, orbital_umin, orbital_umin_congruence, q_coefficients,
    spin_power_sum, std_power_sum,
)
from gsp4lab.measures import make_rng
from gsp4lab.satake import SatakeAngles, angles_to_spin, spin_to_standard

PI = math.pi
interior = st.floats(0.0, PI, allow_nan=False)
primes = st.sampled_from([2, 3, 5, 7, 11, 101])


def spin_at(t1, t2, p=2):
    return angles_to_spin(SatakeAngles(t1, t2, p))


def elementary(vals):
    """e1, e2 by explicit enumeration."""
    e1 = sum(vals)
    e2 = sum(vals[i] * vals[j] for i in range(len(vals)) for j in range(i + 1, len(vals)))
    return e1, e2


def test_lambda_series_examples():
    assert lambda_series(spin_at(0.3, 1.0), 0, 2)[0] == 1.0
    lam = lambda_series(spin_at(PI / 2, PI / 2), 2, 2)
    assert lam[1] == pytest.approx(0.0, abs=1e-15)
    assert lam[2] == pytest.approx(-2.5, abs=1e-14)
    assert lambda_series(spin_at(0.0, 0.0), 1, 2)[1] == pytest.approx(4.0, abs=1e-14)


def test_lambda_series_against_long_division():
    spin = spin_at(0.7, 2.1, 3)
    lam = lambda_series(spin, 12, 3)
    q = np.poly(np.array(spin.multiset)).real  # prod(1 - beta t), ascending in t
    num = np.zeros(13)
    num[0], num[2] = 1.0, -1.0 / 3
    # series s with q * s = num, solved term by term
    s = np.zeros(13)
    for n in range(13):
        s[n] = num[n] - sum(q[k] * s[n - k] for k in range(1, min(n, 4) + 1))
    assert np.allclose(lam, s, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(interior, interior, primes)
def test_newton_oracle(t1, t2, p):
    spin = spin_at(t1, t2, p)
    e1, e2 = elementary(list(spin.multiset))
    lam = lambda_series(spin, 2, p)
    assert lam[2] == pytest.approx((e1 * e1 - e2).real - 1 / p, rel=1e-9, abs=1e-9)
    assert lam[1] == pytest.approx(spin_power_sum(spin, 1), abs=1e-10)


def test_power_sum_examples():
    std = spin_to_standard(spin_at(PI / 2, PI / 2))
    assert std_power_sum(std, 1) == pytest.approx(1.0, abs=1e-14)
    assert std_power_sum(std, 2) == pytest.approx(5.0, abs=1e-14)
    with pytest.raises(ValueError):
        spin_power_sum(spin_at(0.1, 0.2), 0)


@settings(max_examples=100, deadline=None)
@given(interior, interior, primes)
def test_b1_and_chain_identities(t1, t2, p):
    x, y = 2 * math.cos(t1), 2 * math.cos(t2)
    spin = spin_at(t1, t2, p)
    std = spin_to_standard(spin)
    sys = HeckeEigSystem.from_spin(spin, p)
    assert b1_from_eigs(sys) == pytest.approx(std_power_sum(std, 1), abs=1e-9)
    assert b1_from_eigs(sys) == pytest.approx(1 + x * y, abs=1e-9)
    assert spin_power_sum(spin, 1) == pytest.approx(x + y, abs=1e-12)
    a2 = spin_power_sum(spin, 2)
    assert a2 == pytest.approx(x * x + y * y - 4, abs=1e-12)
    assert a2_from_eigs(sys) == pytest.approx(a2, abs=1e-9)
    assert b2_chain(b1_from_eigs(sys), a2) == pytest.approx(std_power_sum(std, 2), abs=1e-9)
    assert b2_chain(b1_from_eigs(sys), a2) == pytest.approx((x * x - 2) * (y * y - 2) + 1, abs=1e-9)
    # h2 and the power sum differ by b_F(p) + 1
    assert h2_spin(sys) - a2 == pytest.approx(b1_from_eigs(sys) + 1, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(interior, interior, primes)
def test_operator_form_of_a2(t1, t2, p):
    # with b_F(p) = p lambda'_t2 + p^-2 the operator expression reproduces the power sum
    spin = spin_at(t1, t2, p)
    sys = HeckeEigSystem.from_spin(spin, p)
    assert a2_from_operators(sys) == pytest.approx(spin_power_sum(spin, 2), abs=1e-9)
    # second Hecke relation: lambda'(p^2) = lambda'_t1^2 + lambda'_t2 + p^-3
    assert sys.lam2 == pytest.approx(sys.lam_t1sq + sys.lam_t2 + p**-3, abs=1e-12)


def test_b1_examples_and_missing():
    sys = HeckeEigSystem(2, 0.0, -2.5)
    assert b1_from_eigs(sys) == pytest.approx(1.0)
    assert b1_from_eigs(HeckeEigSystem.from_spin(spin_at(0.0, 0.0), 2)) == pytest.approx(5.0)
    with pytest.raises(MissingEigenvalue):
        b1_from_eigs(HeckeEigSystem(2, 0.0, None))
    with pytest.raises(MissingEigenvalue):
        a2_from_operators(HeckeEigSystem(2, 0.0, -2.5))


def test_lam_t2_inversion():
    assert lam_t2_from_b1(1.0, 2) == pytest.approx(0.375)
    assert lam_t2_from_b1(3**-2, 3) == 0.0
    rng = make_rng(1)
    for b1 in rng.uniform(-3, 5, 20):
        assert b1_from_lam_t2(lam_t2_from_b1(b1, 5), 5) == pytest.approx(b1, abs=1e-14)


def test_b2_chain_examples():
    assert b2_chain(1.0, -4.0) == 5.0
    assert b2_chain(5.0, 8.0) == -3.0


def test_q_coefficients_palindromic_and_match():
    rng = make_rng(7)
    for t1, t2 in rng.uniform(0, PI, (100, 2)):
        spin = spin_at(t1, t2, 5)
        q = np.asarray(q_coefficients(HeckeEigSystem.from_spin(spin, 5)))
        direct = np.poly(np.array(spin.multiset)).real
        assert np.max(np.abs(q - direct)) < 1e-10
        assert np.allclose(q, q[::-1], atol=1e-12)


def test_orbital_golden_values():
    assert orbital_umin(DoubleCosetIndex(1, 1, 2, 3, 1)) == Fraction(9, 8)
    assert orbital_umin(DoubleCosetIndex(1, 0, 2, 5, 1)) == 25
    assert orbital_umin(DoubleCosetIndex(1, 1, 3, 7, 1)) == 0
    assert orbital_delta1(DoubleCosetIndex(1, 1, 2, 7, 1)) == 1
    assert orbital_delta1(DoubleCosetIndex(0, 0, 2, 3, 1)) == 8
    assert orbital_delta1(DoubleCosetIndex(2, 1, 4, 3, 2)) == 0


def test_orbital_central_mismatch_and_weyl_action():
    assert orbital_umin(DoubleCosetIndex(1, 1, 2, 3, 0)) == 0
    # a_i -> a3 - a_i: (2, 0, 2) and (0, 0, 2) represent cosets of the same Weyl orbit shape
    assert DoubleCosetIndex(2, 0, 2, 3, 1).a1 == 0
    assert orbital_delta1(DoubleCosetIndex(2, 2, 2, 3, 1)) == 8
    with pytest.raises(ValueError):
        DoubleCosetIndex(1, 2, 3, 3)
    with pytest.raises(ValueError):
        DoubleCosetIndex(1, 0, 2, 4)


def test_orbital_odd_a3_vanish():
    for a3 in range(1, 10, 2):
        for a1 in range(a3 + 1):
            for a2 in range(a1 + 1):
                for z in range(a3 + 2):
                    idx = DoubleCosetIndex(a1, a2, a3, 5, z)
                    assert orbital_umin(idx) == 0 and orbital_delta1(idx) == 0


def test_orbital_congruence():
    assert orbital_umin_congruence(3, 1, True) == Fraction(1, 9) / Fraction(8, 9)
    assert orbital_umin_congruence(3, 1, False) == 0
