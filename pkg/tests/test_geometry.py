import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helicoid_lab.errors import InvalidScaleError
from helicoid_lab.geometry import (
    VERTICAL,
    ConformalMetric,
    CoverPoint,
    KillingField,
    MoebiusMap,
    apply_involution,
    blowup_map,
    continued_argument,
    cover_exp,
    cover_log,
    killing_at,
    rotation_E_to_X,
)

moduli = st.floats(1e-3, 1e3)
args = st.floats(-20.0, 20.0)


@given(moduli, args)
def test_cover_log_exp_roundtrip(m, a):
    p = CoverPoint(m, a)
    q = cover_exp(cover_log(p))
    assert math.isclose(q.modulus, m, rel_tol=1e-12)
    assert math.isclose(q.argument, a, abs_tol=1e-12)


@given(moduli, args)
def test_involutions_are_involutions(m, a):
    p = CoverPoint(m, a)
    for which in ("conjugate", "invert"):
        q = apply_involution(apply_involution(p, which), which)
        assert math.isclose(q.modulus, m, rel_tol=1e-12) and q.argument == a


def test_sheets_are_distinct():
    a, b = CoverPoint(1.0, 0.5), CoverPoint(1.0, 0.5 + 2 * math.pi)
    assert abs(a.z - b.z) < 1e-15 and a != b


def test_cover_point_rejects_zero_and_bad_argument():
    with pytest.raises(ValueError):
        CoverPoint.from_complex(0)
    with pytest.raises(ValueError):
        CoverPoint.from_complex(1j, argument=0.0)
    assert CoverPoint.from_complex(1j, argument=5 * math.pi / 2).argument == 5 * math.pi / 2


def test_continued_argument_follows_a_full_turn():
    theta = np.linspace(0, 4 * math.pi, 400)
    arg = continued_argument(np.exp(1j * theta), 0.0)
    assert np.allclose(arg, theta)


def test_spherical_factor_and_euclidean_limit():
    m = ConformalMetric.spherical(2.0)
    assert m.factor(0) == pytest.approx(2.0)
    assert m.factor(2.0) == pytest.approx(1.0)
    e = ConformalMetric.euclidean()
    assert e.is_euclidean and np.all(e.factor(np.array([0, 5j])) == 1)
    # large radius approaches a constant factor 2
    assert ConformalMetric.spherical(1e8).factor(3 + 4j) == pytest.approx(2.0)


def test_log_gradient_matches_finite_differences():
    m = ConformalMetric.spherical(1.3)
    z, h = 0.4 - 0.7j, 1e-6
    gx, gy = m.log_gradient(z)
    fx = (np.log(m.factor(z + h)) - np.log(m.factor(z - h))) / (2 * h)
    fy = (np.log(m.factor(z + 1j * h)) - np.log(m.factor(z - 1j * h))) / (2 * h)
    assert gx == pytest.approx(fx, abs=1e-8) and gy == pytest.approx(fy, abs=1e-8)
    rho = 0.8
    assert m.radial_log_derivative(rho) == pytest.approx(rho * m.log_gradient(rho)[0])


def test_killing_fields_at_origin_and_vertical():
    r = 1.5
    assert killing_at(KillingField("X", r), 0) == 0.5
    assert killing_at(KillingField("Y", r), 0) == 0.5j
    assert killing_at(KillingField("E", r), 0) == 0
    assert killing_at(KillingField("vertical"), 1 + 1j) == VERTICAL
    with pytest.raises(ValueError):
        KillingField("Z")


def test_killing_fields_are_isometries():
    # Killing equation for a conformal metric: Re(chi') = -chi . grad log lambda
    r = 1.5
    m = ConformalMetric.spherical(r)
    z, h = 0.3 + 0.8j, 1e-6
    for kind in "XYE":
        chi = KillingField(kind, r)
        dchi = (chi(z + h) - chi(z - h)) / (2 * h)
        gx, gy = m.log_gradient(z)
        c = complex(chi(z))
        assert dchi.real == pytest.approx(-(c.real * gx + c.imag * gy), abs=1e-8)


def test_rotation_maps_E_to_X():
    r = 1.7
    phi = rotation_E_to_X(r)
    z = np.array([0.3 + 0.2j, 1 + 1j, -2 + 0.5j])
    pushed = phi.pushforward(KillingField("E", r))(z)
    assert np.allclose(pushed, KillingField("X", r)(z), atol=1e-12)


def test_blowup_map():
    for mu in (0.5, 1.0, 1e-3):
        b = blowup_map(mu)
        assert abs(b(1j)) < 1e-15
        assert abs(b.derivative(1j)) == pytest.approx(1 / (2 * mu))
    with pytest.raises(InvalidScaleError):
        blowup_map(0.0)


def test_moebius_inverse_and_compose():
    f = MoebiusMap.from_coefficients(1, 2j, 3, 4)
    z = np.array([0.1, 1 + 1j, -2j])
    assert np.allclose(f.inverse()(f(z)), z)
    assert np.allclose(f.compose(f.inverse())(z), z)
    with pytest.raises(ValueError):
        MoebiusMap.from_coefficients(1, 2, 2, 4)
