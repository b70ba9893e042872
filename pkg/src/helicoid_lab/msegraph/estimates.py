"""Empirical interior estimates and height-estimate experiments on solved graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..complexkit import Contour
from ..domains import AnnularDomain
from ..errors import EstimateInapplicable, HypothesisViolation, InvalidRingsError
from .grids import GraphFunction
from .solver import catenoid_profile

GRADIENT_SLACK = 1e-3  # discretisation allowance in the |grad_g f|_g <= 1 clause
SETUP_LAMBDA = 4.0  # default for the existence constant lambda of the neck setup


def neck_hole_height(r: float, lam: float = SETUP_LAMBDA) -> float:
    """Catenoid height r cosh^{-1}(2 lam) used as constant Dirichlet data on neck holes."""
    return float(r * math.acosh(2 * lam))


def empirical_schauder(f: GraphFunction, t: float, interior_only: bool = True):
    """(sup d|grad f|/t, sup d^4 |Laplacian f|/t^3) over nodes with d(z) >= t.

    Derivatives are euclidean; d is the distance to the boundary of f's domain.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    fx, fy, lap = f.euclidean_gradient_on_grid()
    d = f.distance_to_boundary()
    inside = d > 0
    grad = np.hypot(fx, fy)
    if np.max(np.abs(f.values[inside])) > t * (1 + 1e-12):
        raise EstimateInapplicable("|f| <= t fails")
    if np.max(grad[inside]) > 1 + GRADIENT_SLACK:
        raise EstimateInapplicable("|grad f| <= 1 fails")
    sel = d >= t
    if not f.grid.periodic_v:
        sel[:, :2] = sel[:, -2:] = False
    sel[:2, :] = sel[-2:, :] = False
    if not sel.any():
        return 0.0, 0.0
    return (float(np.max(d[sel] * grad[sel]) / t),
            float(np.max(d[sel] ** 4 * np.abs(lap[sel])) / t ** 3))


def height_bound(phi: float, r1: float, r2: float) -> float:
    return math.sqrt(2) / math.pi * phi * math.log(r2 / r1)


def height2_bound(phi: float, r1: float, r2: float, r1p: float, r2p: float) -> float:
    return math.sqrt(8) * phi * math.sqrt(math.log(r2 / r1)) / math.sqrt(math.log(r2p / r1p))


@dataclass(frozen=True)
class HeightCheck:
    h: float
    phi: float
    bound: float
    passed: bool

    def __iter__(self):
        return iter((self.h, self.phi, self.bound, self.passed))


def catenoid_height_instance(r1: float = 1.0, r2: float = math.exp(4)) -> HeightCheck:
    """Closed-form instance f = cosh^{-1}|z| - cosh^{-1} r2 on r1 < |z| < r2 (flux 2 pi)."""
    h = float(catenoid_profile(r2) - catenoid_profile(r1))
    phi = 2 * math.pi
    b = height_bound(phi, r1, r2)
    return HeightCheck(h, phi, b, h <= b)


def _const_bc(bc, clause):
    if callable(bc) or isinstance(bc, str) or bc is None:
        raise HypothesisViolation(f"boundary data is not constant ({clause})", clause=clause)
    return float(bc)


def height_check(domain: AnnularDomain, solution: GraphFunction, r1: float | None = None,
                 r2: float | None = None) -> HeightCheck:
    """Depth, flux and height bound for a solved instance, after checking the hypotheses.

    r1 defaults to the radius of the first hole and r2 to the radius of the
    smallest disk about the first hole's centre containing the outer circle.
    Coordinates are centred at the first hole.
    """
    if not domain.holes:
        raise HypothesisViolation("at least one hole is needed", clause="domain")
    c1, rho1 = domain.holes[0].center, domain.holes[0].radius
    r1 = rho1 if r1 is None else r1
    r2 = abs(domain.outer.center - c1) + domain.outer.radius if r2 is None else r2
    if not 0 < r1 < r2:
        raise HypothesisViolation("need 0 < r1 < r2", clause="radii")
    if r1 > rho1 * (1 + 1e-12):
        raise HypothesisViolation("D(0, r1) is not contained in the first hole", clause="radii")
    if abs(domain.outer.center - c1) + domain.outer.radius > r2 * (1 + 1e-12):
        raise HypothesisViolation("the outer disk is not contained in D(0, r2)", clause="radii")

    if _const_bc(domain.outer_bc, "1") != 0.0:
        raise HypothesisViolation("f must vanish on the outer boundary", clause="1")
    h = -_const_bc(domain.hole_bcs[0], "2")
    if h < 0:
        raise HypothesisViolation("f must be a negative constant on the first hole", clause="2")
    for i, bc in enumerate(domain.hole_bcs[1:], start=2):
        v = _const_bc(bc, "3")
        if not -2 * h <= v <= 0:
            raise HypothesisViolation(f"hole {i} value {v} outside [-2h, 0]", clause="3")
    if h == 0 and np.allclose(solution.values, 0.0):
        return HeightCheck(0.0, 0.0, 0.0, True)

    grid = solution.grid
    # (4): f does not decrease when moving off each hole into the domain
    for i, hole in enumerate(domain.holes, start=1):
        cell = float(grid.radial_step(hole.center + hole.radius))
        ring = Contour(hole.center, hole.radius + 3 * cell)
        z, _ = ring.nodes(256)
        z = z[domain.distance_to_boundary(z) >= 2 * cell]
        if z.size == 0:
            continue
        fx, fy = solution.gradient(z)
        e = (z - hole.center) / np.abs(z - hole.center)
        outward_derivative = fx * e.real + fy * e.imag
        if np.min(outward_derivative) < -1e-6:
            raise HypothesisViolation(f"conormal sign fails on hole {i}", clause="4")
    # (5)
    fx, fy, _ = solution.euclidean_gradient_on_grid()
    zg = grid.points()
    inside = domain.distance_to_boundary(zg) > 2 * grid.cell_size(zg)
    g = np.hypot(fx, fy) / solution.metric.factor(zg)
    if np.max(g[inside]) > 1 + GRADIENT_SLACK:
        raise HypothesisViolation(f"sup |grad_g f|_g = {np.max(g[inside]):.4f} > 1", clause="5")

    from ..flux import vertical_flux  # local import: flux depends on this package

    cell = float(grid.radial_step(domain.outer.center + domain.outer.radius))
    gamma = Contour(domain.outer.center, domain.outer.radius - 3 * cell)
    phi = vertical_flux(solution, gamma).value
    b = height_bound(phi, r1, r2)
    return HeightCheck(h, phi, b, h <= b)


def ring_integral(solution, domain, p: complex, r: float, n: int = 512) -> float:
    """int over C(p, r) intersected with the domain of |df| (euclidean), as int rho r dtheta."""
    theta = 2 * math.pi * (np.arange(n) + 0.5) / n
    z = p + r * np.exp(1j * theta)
    inside = domain.contains(z)
    if not inside.any():
        return 0.0
    rho = np.zeros(n)
    fx, fy = solution.gradient(z[inside])
    rho[inside] = np.hypot(fx, fy)
    return float(np.sum(rho) * r * 2 * math.pi / n)


def ring_gradient_search(solution: GraphFunction, p: complex, r1p: float, r2p: float,
                         n_radii: int = 200, n_theta: int = 512, domain=None):
    """Radius in [r1p, r2p] minimising the ring integral of |df|, and that minimum."""
    domain = solution.domain if domain is None else domain
    if not 0 < r1p < r2p:
        raise InvalidRingsError("need 0 < r1' < r2'")
    radii = np.geomspace(r1p, r2p, n_radii)
    meets = [domain.contains(p + r * np.exp(2j * np.pi * np.arange(64) / 64)).any() for r in (r1p, r2p)]
    if not all(meets):
        raise InvalidRingsError("a bounding ring does not meet the domain")
    values = np.array([ring_integral(solution, domain, p, r, n_theta) for r in radii])
    k = int(np.argmin(values))
    return float(radii[k]), float(values[k])
