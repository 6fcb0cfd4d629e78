import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsp4lab.errors import NonRealCoordinate, UnclassifiableParams
from gsp4lab.satake import (
    SatakeAngles, SpinParams, StandardParams, UnitaryClass, angles_to_spin, classify_unitary,
    closed_under_inversion, lrs_bound_check, spin_to_standard, to_omega,
)

PI = math.pi
angle = st.floats(0.0, PI, allow_nan=False)
interior = st.floats(0.01, PI - 0.01, allow_nan=False)


def same_multiset(a, b, tol=1e-12):
    a, b = list(a), list(b)
    for z in a:
        j = min(range(len(b)), key=lambda i: abs(b[i] - z))
        if abs(b[j] - z) > tol:
            return False
        b.pop(j)
    return not b


def test_angles_validated():
    with pytest.raises(ValueError):
        SatakeAngles(-0.1, 1.0, 2)
    with pytest.raises(ValueError):
        SatakeAngles(1.0, 1.0, 4)


@pytest.mark.parametrize("t1, t2, p, expect", [
    (PI / 2, PI / 2, 2, [1j, -1j, 1j, -1j]),
    (0.0, PI, 3, [1, 1, -1, -1]),
    (PI / 3, PI / 4, 5, [cmath.exp(1j * PI / 3), cmath.exp(-1j * PI / 3),
                         cmath.exp(1j * PI / 4), cmath.exp(-1j * PI / 4)]),
])
def test_angles_to_spin(t1, t2, p, expect):
    spin = angles_to_spin(SatakeAngles(t1, t2, p))
    assert same_multiset(spin.multiset, expect)


def test_spin_invariant_enforced():
    with pytest.raises(ValueError):
        SpinParams(1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        SpinParams(1.0, 1.0, 1.0, chi_p=1.0, chi_half=-1j)


def test_nontrivial_character_to_omega():
    # chi(p) = -1 with the branch chi^(1/2) = i; alpha0^2 a1 a2 = 1
    a, b = cmath.exp(0.4j), cmath.exp(0.7j)
    spin = SpinParams(alpha0=1j * a, alpha1=b / a, alpha2=-1 / (a * b), chi_p=-1.0, chi_half=1j)
    pt = to_omega(spin)
    assert pt.x == pytest.approx(2 * math.cos(0.4), abs=1e-12)
    assert pt.y == pytest.approx(2 * math.cos(0.7), abs=1e-12)


@pytest.mark.parametrize("t1, t2, x, y", [
    (PI / 2, PI / 2, 0.0, 0.0), (0.0, 0.0, 2.0, 2.0), (PI / 3, PI / 2, 1.0, 0.0),
])
def test_to_omega(t1, t2, x, y):
    pt = to_omega(angles_to_spin(SatakeAngles(t1, t2, 7)))
    assert pt.x == pytest.approx(x, abs=1e-12)
    assert pt.y == pytest.approx(y, abs=1e-12)


def test_to_omega_rejects_nontempered():
    spin = SpinParams(2.0, 1.0, 0.25)
    with pytest.raises(NonRealCoordinate):
        to_omega(SpinParams(2j, 1.0, -0.25))
    assert to_omega(spin).x == pytest.approx(2.5)


@pytest.mark.parametrize("t1, t2, expect", [
    (PI / 2, PI / 2, [1, 1, -1, 1, -1]),
    (0.0, PI, [1, -1, -1, -1, -1]),
    (0.0, 0.0, [1, 1, 1, 1, 1]),
])
def test_spin_to_standard(t1, t2, expect):
    std = spin_to_standard(angles_to_spin(SatakeAngles(t1, t2, 3)))
    assert same_multiset(std.values, expect)


def test_standard_invariants():
    with pytest.raises(ValueError):
        StandardParams((2, 2, 0.5, 0.5, 3))
    with pytest.raises(ValueError):
        StandardParams((1, 2, 3, 0.5, 0.5))


def test_classify_examples():
    p = 3
    ph = cmath.exp(0.8j)
    s1 = classify_unitary([1, ph, cmath.exp(1.9j), 1 / ph, cmath.exp(-1.9j)], p)
    assert s1.tag == "S1"
    q = p**0.3
    s2 = classify_unitary([1, q * ph, q / ph, ph / q, 1 / (q * ph)], p)
    assert s2.tag == "S2" and s2.betas[0] == pytest.approx(0.3, abs=1e-12)
    s3 = classify_unitary([1, p**0.5, p**-0.5, ph, 1 / ph], p)
    assert s3.tag == "S3" and s3.betas[0] == pytest.approx(0.5, abs=1e-12)
    s4 = classify_unitary(UnitaryClass("S4", p, (0.4, 0.2), (-1.0,)).params, p)
    assert s4.tag == "S4" and s4.betas == pytest.approx((0.4, 0.2), abs=1e-12)


def test_classify_boundary_and_failures():
    p = 5
    ph = cmath.exp(0.3j)
    q = p**0.5
    c = classify_unitary([1, q * ph, q / ph, ph / q, 1 / (q * ph)], p)
    assert c.tag == "S2" and c.boundary
    with pytest.raises(UnclassifiableParams):
        classify_unitary([1, p**1.5, p**-1.5, 1, 1], p)
    with pytest.raises(UnclassifiableParams):
        classify_unitary([1, 2, 2, 3, 3], p)


def test_unitary_class_intervals():
    with pytest.raises(ValueError):
        UnitaryClass("S2", 2, (0.6,), (1.0,))
    with pytest.raises(ValueError):
        UnitaryClass("S4", 2, (0.6, 0.5), (1.0,))
    assert closed_under_inversion(UnitaryClass("S3", 2, (0.9,), (1j,)).params)


def test_lrs_bound():
    assert lrs_bound_check([1, 1j, -1j, 1, 1], 4, 2)
    assert not lrs_bound_check([2**0.5], 4, 2)
    assert lrs_bound_check([2**0.4], 5, 2)


@settings(max_examples=100, deadline=None)
@given(interior, interior)
def test_round_trip_is_s1(t1, t2):
    std = spin_to_standard(angles_to_spin(SatakeAngles(t1, t2, 5)))
    assert classify_unitary(std.values, 5).tag == "S1"


@settings(max_examples=100, deadline=None)
@given(angle, angle)
def test_omega_symmetries(t1, t2):
    pt = to_omega(angles_to_spin(SatakeAngles(t1, t2, 2)))
    sw = to_omega(angles_to_spin(SatakeAngles(t2, t1, 2)))
    assert (sw.x, sw.y) == pytest.approx((pt.y, pt.x), abs=1e-12)
    # conjugating the spin parameters leaves (x, y) fixed
    spin = angles_to_spin(SatakeAngles(t1, t2, 2))
    conj = SpinParams(spin.alpha0.conjugate(), spin.alpha1.conjugate(), spin.alpha2.conjugate())
    c = to_omega(conj)
    assert (c.x, c.y) == pytest.approx((pt.x, pt.y), abs=1e-12)
    assert (pt.x, pt.y) == pytest.approx((2 * math.cos(t1), 2 * math.cos(t2)), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(interior, interior)
def test_standard_has_single_one(t1, t2):
    if abs(t1 - t2) < 1e-3 or abs(t1 + t2 - PI) < 1e-3:
        return
    vals = np.asarray(spin_to_standard(angles_to_spin(SatakeAngles(t1, t2, 2))).values)
    assert int(np.sum(np.abs(vals - 1) < 1e-9)) == 1
