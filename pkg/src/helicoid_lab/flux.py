"""Fluxes of Killing fields across closed curves on minimal graphs.

Conventions: ``nu`` is the euclidean exterior normal with (gamma', nu)
negatively oriented, so for a counterclockwise circle the vertical flux is

    int (f_x dy - f_y dx) / W,     W = sqrt(1 + |grad f|^2 / lambda^2).

For a horizontal Killing field chi (a complex number field) the flux is

    Re int [ lambda^2 chi / W (dy + i dx) + chi / W (f_y + i f_x)(f_x dx + f_y dy) ],

whose small-gradient expansion is -Im int 2 (f_z)^2 chi dz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .complexkit import Contour
from .errors import InvalidContourError, OverlappingNecksError, WrongFieldKindError
from .geometry import ConformalMetric, KillingField, continued_argument
from .msegraph.grids import GraphFunction

DEFAULT_NODES = 512
NODE_PHASE = math.sqrt(2) - 1


@dataclass(frozen=True)
class FluxResult:
    value: float
    method: Literal["exact-integrand", "quadratic-expansion"]
    contour_id: str
    alternate: float = math.nan

    @property
    def discrepancy(self) -> float:
        return abs(self.value - self.alternate)


class AnalyticGraph:
    """A graph given by closed-form derivatives, usable wherever a GraphFunction is."""

    def __init__(self, gradient: Callable, metric: ConformalMetric = ConformalMetric(), value: Callable | None = None):
        self._gradient = gradient
        self.metric = metric
        self._value = value

    def gradient(self, z, argument=None):
        fx, fy = self._gradient(np.asarray(z, dtype=complex))
        shape = np.shape(z)
        return np.broadcast_to(fx, shape).astype(float), np.broadcast_to(fy, shape).astype(float)

    @classmethod
    def from_fz(cls, fz: Callable, metric: ConformalMetric = ConformalMetric()):
        """From the Wirtinger derivative f_z (f real): f_x = 2 Re f_z, f_y = -2 Im f_z."""
        def grad(z):
            w = fz(z)
            return 2 * np.real(w), -2 * np.imag(w)
        return cls(grad, metric)


def contour_id(gamma: Contour) -> str:
    c = gamma.center
    return f"C({c.real:.6g}{c.imag:+.6g}i,{gamma.radius:.6g},{gamma.orientation})"


def _check_contour(f, gamma: Contour, z, argument):
    if not isinstance(f, GraphFunction):
        return
    grid = f.grid
    if f.domain is not None:
        if hasattr(f.domain, "r_in"):
            d = f.domain.distance_to_boundary(z, argument)
        else:
            d = f.domain.distance_to_boundary(z)
        if np.any(d < grid.radial_step(z)):
            raise InvalidContourError(f"contour {contour_id(gamma)} comes within one grid cell of the boundary")
    uq, vq = grid.to_grid_coords(z, argument)
    inside = (uq >= grid.u[0] + grid.hu) & (uq <= grid.u[-1] - grid.hu)
    if not grid.periodic_v:
        inside &= (vq >= grid.v[0] + grid.hv) & (vq <= grid.v[-1] - grid.hv)
    if not np.all(inside):
        raise InvalidContourError(f"contour {contour_id(gamma)} leaves the grid")


def _sample(f, gamma: Contour, n: int | None, center_argument: float | None):
    n = gamma.node_count if n is None else n
    if gamma.phase == 0.0:
        # generic offset so that contour nodes never sit on grid nodes
        gamma = Contour(gamma.center, gamma.radius, gamma.orientation, n, NODE_PHASE * 2 * math.pi / n)
    z, dz = gamma.nodes(n)
    argument = None
    if center_argument is not None:
        argument = continued_argument(z, center_argument)
    _check_contour(f, gamma, z, argument)
    fx, fy = f.gradient(z, argument)
    lam = f.metric.factor(z)
    W = np.sqrt(1 + (fx * fx + fy * fy) / lam ** 2)
    return z, dz, fx, fy, lam, W


def vertical_flux(f, gamma: Contour, n: int | None = DEFAULT_NODES, center_argument: float | None = None,
                  method: str = "exact-integrand") -> FluxResult:
    """Flux of the vertical Killing field; ``alternate`` holds the complex form Im int 2 f_z dz."""
    z, dz, fx, fy, lam, W = _sample(f, gamma, n, center_argument)
    dx, dy = dz.real, dz.imag
    exact = float(np.sum((fx * dy - fy * dx) / W))
    fz = 0.5 * (fx - 1j * fy)
    linear = float(np.imag(np.sum(2 * fz * dz)))
    if method == "exact-integrand":
        return FluxResult(exact, "exact-integrand", contour_id(gamma), linear)
    if method == "quadratic-expansion":
        return FluxResult(linear, "quadratic-expansion", contour_id(gamma), exact)
    raise ValueError(f"unknown method {method!r}")


def horizontal_flux(f, chi: KillingField, gamma: Contour, n: int | None = DEFAULT_NODES,
                    center_argument: float | None = None, method: str = "quadratic-expansion") -> FluxResult:
    """Flux of a horizontal Killing field; ``alternate`` holds the other method's value."""
    if not chi.is_horizontal:
        raise WrongFieldKindError("horizontal_flux needs a horizontal Killing field")
    z, dz, fx, fy, lam, W = _sample(f, gamma, n, center_argument)
    dx, dy = dz.real, dz.imag
    c = chi(z)
    exact = float(np.real(np.sum(lam ** 2 * c / W * (dy + 1j * dx)
                                 + c / W * (fy + 1j * fx) * (fx * dx + fy * dy))))
    fz = 0.5 * (fx - 1j * fy)
    quad = float(-np.imag(np.sum(2 * fz * fz * c * dz)))
    if method == "quadratic-expansion":
        return FluxResult(quad, "quadratic-expansion", contour_id(gamma), exact)
    if method == "exact-integrand":
        return FluxResult(exact, "exact-integrand", contour_id(gamma), quad)
    raise ValueError(f"unknown method {method!r}")


def sup_gradient_on(f, gamma: Contour, n: int = DEFAULT_NODES, center_argument: float | None = None) -> float:
    z, _, fx, fy, _, _ = _sample(f, gamma, n, center_argument)
    return float(np.max(np.hypot(fx, fy)))


def expansion_constant(f, chi: KillingField, gamma: Contour, n: int = DEFAULT_NODES,
                       center_argument: float | None = None) -> float:
    """|exact - quadratic| / (sup|grad f|^4 length), the empirical constant of the quartic remainder."""
    r = horizontal_flux(f, chi, gamma, n, center_argument)
    g = sup_gradient_on(f, gamma, n, center_argument)
    if g == 0:
        return 0.0
    return r.discrepancy / (g ** 4 * gamma.length)


def homology_tolerance(coarse, fine, gamma: Contour, field: KillingField | None = None,
                       n: int = DEFAULT_NODES) -> float:
    """Grid + quadrature error estimate of a flux on ``gamma``.

    Grid error: difference between two resolutions of the same solution.
    Quadrature error: difference between n and 2n contour nodes.
    """
    def value(f, m):
        if field is None or not field.is_horizontal:
            return vertical_flux(f, gamma, m).value
        return horizontal_flux(f, field, gamma, m, method="exact-integrand").value

    return abs(value(coarse, n) - value(fine, n)) + abs(value(fine, n) - value(fine, 2 * n))


def neck_flux_model(cfg, i: int, eps: float, t: float) -> float:
    """Model vertical flux on C(p_i, eps): 2 pi t/|log t| times the weights of the necks inside.

    Necks within ``eps`` of p_i form its cluster and their fluxes add. A neck
    at distance in [eps, 2 eps) makes the circle ambiguous and is an error.
    """
    if not 0 < t < 1:
        raise ValueError("pitch t must lie in (0, 1)")
    if not eps > 0:
        raise ValueError("eps must be positive")
    pos = np.asarray(cfg.points, dtype=complex)
    w = np.asarray(cfg.weights, dtype=float)
    d = np.abs(pos - pos[i])
    cluster = d < eps
    if np.any((d >= eps) & (d < 2 * eps)):
        raise OverlappingNecksError(f"eps={eps} is too large to isolate neck {i}")
    return float(2 * math.pi * np.sum(w[cluster]) * t / abs(math.log(t)))
