import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from helicoid_lab.errors import NotRepresentableError, OutsideHalfplaneError, PoleEvaluationError
from helicoid_lab.geometry import CoverPoint
from helicoid_lab.harmonic import (
    barrier_polar,
    barrier_values,
    chi_derivative_bounds,
    cutoff_chi,
    fit_positive_harmonic,
    h_pole,
    h_pole_dz,
    h_pole_values,
    supersolution_check,
    barrier_properties,
    barrier_sum_check,
    positive_harmonic_model,
)

lm = st.floats(-2.5, 2.5)
upper = st.floats(0.05, 3.0)


@settings(max_examples=60)
@given(lm, upper, lm, st.floats(0.05, 9.0))
def test_h_pole_symmetries(pl, pa, zl, za):
    assume(abs(complex(pl, pa) - complex(zl, za)) > 1e-3 and abs(complex(-pl, pa) - complex(zl, za)) > 1e-3)
    p = CoverPoint(math.exp(pl), pa)
    h = h_pole_values(p, math.exp(zl), za)
    assert h > 0
    assert abs(h_pole_values(p, math.exp(zl), -za) + h) <= 1e-12 * max(1, abs(h))
    p_inv = CoverPoint(math.exp(-pl), pa)
    assert abs(h_pole_values(p, math.exp(-zl), za) - h_pole_values(p_inv, math.exp(zl), za)) <= 1e-12 * max(1, abs(h))


def test_h_pole_vanishes_on_positive_axis_and_is_harmonic():
    p = CoverPoint(1.3, 0.8)
    assert h_pole_values(p, np.array([0.2, 1.0, 7.0]), np.zeros(3)) == pytest.approx(0, abs=1e-15)
    # harmonic in (log r, theta): five point Laplacian ~ h^2
    s, th, d = 0.4, 2.0, 1e-3
    f = lambda a, b: h_pole_values(p, math.exp(a), b)
    lap = (f(s + d, th) + f(s - d, th) + f(s, th + d) + f(s, th - d) - 4 * f(s, th)) / d ** 2
    assert abs(lap) < 1e-5
    with pytest.raises(PoleEvaluationError):
        h_pole(p, p)


def test_h_pole_dz_matches_finite_difference():
    p = CoverPoint(2.0, math.pi / 2)
    z, d = 0.7 + 0.9j, 1e-6
    f = lambda w: h_pole_values(p, abs(w), np.angle(w))
    fz = 0.5 * ((f(z + d) - f(z - d)) - 1j * (f(z + 1j * d) - f(z - 1j * d))) / (2 * d)
    assert abs(h_pole_dz(p, z) - fz) < 1e-8


@pytest.mark.parametrize("t", [1e-2, 1e-4, 1e-6])
def test_barrier_closed_forms_agree_and_properties(t):
    r = np.exp(np.linspace(-3, 3, 30))
    th = np.linspace(0.01, 20, 30)
    R, TH = np.meshgrid(r, th)
    assert np.allclose(barrier_values(t, R, TH), barrier_polar(t, R, TH), rtol=1e-12, atol=1e-12)
    props = barrier_properties(t, 60, 60)
    assert len(props) >= 6  # inversion symmetry and the Neumann condition are reported separately
    assert all(v["pass"] for v in props.values())


def test_barrier_domain():
    with pytest.raises(OutsideHalfplaneError):
        barrier_values(0.1, 1.0, -0.1)
    with pytest.raises(ValueError):
        barrier_values(1.5, 1.0, 1.0)


def test_cutoff_and_derivative_bounds():
    assert cutoff_chi(0.5) == 1.0 and cutoff_chi(math.pi) == 1.0
    assert cutoff_chi(2 * math.pi) == 0.0 and cutoff_chi(10.0) == 0.0
    d1, d2 = chi_derivative_bounds()
    assert d1 <= 2 and d2 <= 8


def test_supersolution_and_barrier_sum():
    l2 = supersolution_check()
    assert l2["pass"]
    assert l2["min_ratio"] >= 0.95
    l5 = barrier_sum_check(1e-12, 0.4, 0.1, (0.5j, 2j))
    assert l5["pass"]


def test_positive_harmonic_fit_recovers_coefficients(rng):
    poles = [0.5j, 1 + 2j]
    z = rng.uniform(-3, 3, 200) + 1j * rng.uniform(0.05, 4, 200)
    z = z[np.min([np.abs(z - q) for q in poles], axis=0) > 0.1]
    u = positive_harmonic_model(z, 0.7, poles, [2.0, 0.0])
    fit = fit_positive_harmonic(z, u, poles)
    assert fit.c0 == pytest.approx(0.7, abs=1e-9)
    assert np.allclose(fit.coefficients, [2.0, 0.0], atol=1e-9)
    with pytest.raises(NotRepresentableError):
        fit_positive_harmonic(z, positive_harmonic_model(z, 0.7, poles, [2.0, -1.0]), poles)


def test_h_pole_discrete_laplacian_is_second_order():
    p = CoverPoint(1.5, 1.0)
    x, y = 0.3, 1.2  # euclidean point away from p and conj(p)

    def lap(d):
        f = lambda a, b: h_pole_values(p, abs(complex(a, b)), np.angle(complex(a, b)))
        return (f(x + d, y) + f(x - d, y) + f(x, y + d) + f(x, y - d) - 4 * f(x, y)) / d ** 2

    ratio = lap(0.02) / lap(0.01)
    assert 4 * 0.8 <= ratio <= 4 * 1.2


def test_fit_examples():
    z = np.array([0.3 + 0.5j, -1 + 2j, 2 + 0.1j, 0.5 + 3j, -0.2 + 0.3j])
    fit = fit_positive_harmonic(z, z.imag, [])
    assert fit.c0 == pytest.approx(1) and fit.residual < 1e-12 and fit.coefficients.size == 0
    u = positive_harmonic_model(z, 0.0, [1j], [2.0])
    fit = fit_positive_harmonic(z, u, [1j])
    assert fit.c0 == pytest.approx(0, abs=1e-12) and fit.coefficients[0] == pytest.approx(2)
    fit = fit_positive_harmonic(z, u + z.imag, [1j])
    assert fit.c0 == pytest.approx(1) and fit.coefficients[0] == pytest.approx(2)
