import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helicoid_lab.complexkit import (
    Contour,
    cauchy_transform_of_domain,
    check_real_residue,
    contour_integral,
    first_minus_coefficients,
    laurent_decompose,
    log_difference,
    pompeiu_eval,
    residue_log_pole,
    residue_log_pole_numeric,
    trapezoid,
)
from helicoid_lab.domains import AnnularDomain, Circle
from helicoid_lab.errors import (
    InvalidDomainError,
    NearBoundaryEvaluation,
    QuadratureFailure,
    SingularConfigurationError,
)


@pytest.mark.parametrize("k", range(-4, 4))
def test_monomials(k):
    val = contour_integral(lambda z: z ** k, Contour(0, 1.3))
    expected = 2j * math.pi if k == -1 else 0
    assert abs(val - expected) < 1e-12


def test_orientation_reverses_sign():
    f = lambda z: 1 / (z - 0.2)
    c = Contour(0, 1.0)
    assert abs(contour_integral(f, c) + contour_integral(f, c.reversed())) < 1e-12


def test_quadrature_failure_reports_node():
    with pytest.raises(QuadratureFailure) as exc, np.errstate(all="ignore"):
        trapezoid(lambda z: 1 / (z - 1.0), Contour(0, 1.0), 8)
    assert exc.value.node_index == 0


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_residue_identities_property(lm, a):
    p = math.exp(lm) * complex(math.cos(a), math.sin(a))
    assert abs(residue_log_pole_numeric(p) - p) < 1e-8
    assert abs(residue_log_pole_numeric(p, 2, "sphere") - residue_log_pole(p, 2, "sphere")) < 1e-8


def test_residue_examples():
    assert residue_log_pole(2.0) == 2.0
    assert residue_log_pole(2.0, 2, "sphere") == pytest.approx(-5 / 8)
    assert abs(residue_log_pole_numeric(1j) - 1j) < 1e-10
    with pytest.raises(SingularConfigurationError):
        residue_log_pole(0)


def test_log_difference_is_continuous_along_a_turn():
    c = Contour(0, 1.0)
    z, _ = c.nodes(400)
    d = log_difference(z, -1.0 + 0j, p_arg=math.pi)
    assert np.max(np.abs(np.diff(d.imag))) < 0.05


def test_cauchy_transform_matches_quadrature():
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0.4, 0.2),))
    z = -0.3 + 0.2j
    # oracle: polar midpoint rule around z minus the hole
    from helicoid_lab.complexkit import _area_rule
    pts, w = _area_rule(dom, 0.002)
    num = np.sum(w / (pts - z))
    assert abs(num - cauchy_transform_of_domain(dom, z)) < 5e-3


def test_pompeiu_reconstructs_nonholomorphic():
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0.4, 0.2),))
    f = lambda z: np.abs(z) ** 2 + z ** 2
    fzb = lambda z: np.asarray(z, dtype=complex)
    z = -0.3 + 0.2j
    assert abs(pompeiu_eval(f, dom, z, fzb) - f(z)) < 1e-4
    with pytest.raises(NearBoundaryEvaluation):
        pompeiu_eval(f, dom, 0.9999, fzb)


def test_laurent_rational_exact():
    dom = AnnularDomain(Circle(0, 2.0), (Circle(0.8, 0.3), Circle(-0.6 + 0.7j, 0.25)))
    f = lambda z: 2 / (z - 0.8) + 1j / (z + 0.6 - 0.7j) ** 2 + z ** 3
    dec = laurent_decompose(f, dom, f_zbar=lambda z: np.zeros(np.shape(z), dtype=complex))
    zs = np.array([0.1, -1 + 0.2j, 1.2j, 1.5])
    assert np.max(np.abs(dec(zs) - f(zs))) < 1e-9
    assert abs(dec.minus_coeffs[0][0] - 2) < 1e-12
    assert abs(dec.minus_coeffs[1][1] - 1j) < 1e-12
    assert np.allclose(first_minus_coefficients(f, dom), [2, 0], atol=1e-12)


def test_domain_rejects_overlapping_holes():
    with pytest.raises(InvalidDomainError):
        AnnularDomain(Circle(0, 2.0), (Circle(0.5, 0.3), Circle(0.9, 0.3)))


def test_real_residue_vanishes_but_not_for_complex():
    dom = AnnularDomain(Circle(0, 2.0), (Circle(0.8, 0.3),))
    u = lambda z: 3 * np.log(np.abs(z - 0.8)) + np.asarray(z).real ** 3
    assert check_real_residue(u, dom) < 1e-10
    # u_z = -i/(z - q) is not a gradient of a real function: Im a_1 = -1
    assert check_real_residue(None, dom, u_z=lambda z: -1j / (z - 0.8)) == pytest.approx(1.0)
