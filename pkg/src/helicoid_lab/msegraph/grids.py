"""Structured grids in conformal coordinates and graph functions sampled on them.

Two coordinate systems are supported. Both are conformal images of the
z-plane, so the minimal surface equation keeps its form with the conformal
factor multiplied by |dz/dw|:

* ``CartesianGrid``: w = z.
* ``LogPolarGrid``: w = s + i*theta with z = exp(w). arg z is a grid
  coordinate, so the helicoid height (t/2pi) arg z is linear in it, and the
  theta direction may run over more than one turn of the universal cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.interpolate import RectBivariateSpline

from ..domains import AnnularDomain, Circle
from ..errors import InvalidDomainError
from ..geometry import ConformalMetric


class _Grid:
    u: np.ndarray
    v: np.ndarray
    periodic_v: bool = False

    @property
    def shape(self):
        return (self.u.size, self.v.size)

    @property
    def hu(self) -> float:
        return float(self.u[1] - self.u[0])

    @property
    def hv(self) -> float:
        return float(self.v[1] - self.v[0])

    @property
    def spacing(self) -> float:
        """Largest euclidean cell size (used for 'one grid cell' distance checks)."""
        scale = self.scale()
        return float(np.max(scale) * max(self.hu, self.hv))

    def cell_size(self, z):
        """Local euclidean cell size at ``z``."""
        z = np.asarray(z, dtype=complex)
        h = max(self.hu, self.hv)
        return np.abs(z) * h if isinstance(self, LogPolarGrid) else np.full(z.shape, h)

    def radial_step(self, z):
        """Euclidean step across circles centred at the origin (log-polar), else the cell size."""
        z = np.asarray(z, dtype=complex)
        if isinstance(self, LogPolarGrid):
            return np.abs(z) * self.hu
        return self.cell_size(z)


@dataclass(frozen=True, eq=False)
class CartesianGrid(_Grid):
    x: np.ndarray
    y: np.ndarray

    @property
    def u(self):
        return self.x

    @property
    def v(self):
        return self.y

    @classmethod
    def for_domain(cls, domain: AnnularDomain, h: float, pad: int = 2) -> "CartesianGrid":
        c, R = domain.outer.center, domain.outer.radius
        n = int(math.ceil((2 * R) / h)) + 2 * pad
        half = 0.5 * n * h
        x = c.real - half + h * np.arange(n + 1)
        y = c.imag - half + h * np.arange(n + 1)
        return cls(x, y)

    @classmethod
    def box(cls, x0, x1, y0, y1, nx, ny) -> "CartesianGrid":
        return cls(np.linspace(x0, x1, nx + 1), np.linspace(y0, y1, ny + 1))

    def points(self):
        X, Y = np.meshgrid(self.x, self.y, indexing="ij")
        return X + 1j * Y

    def arguments(self):
        return np.angle(self.points())

    def scale(self):
        return np.ones(self.shape)

    def scale_log_gradient(self):
        z = np.zeros(self.shape)
        return z, z.copy()

    def to_grid_coords(self, z, argument=None):
        z = np.asarray(z, dtype=complex)
        return z.real, z.imag

    def z_derivatives(self, fu, fv, z, argument=None):
        """Euclidean (f_x, f_y) from grid-coordinate derivatives."""
        return fu, fv


@dataclass(frozen=True, eq=False)
class LogPolarGrid(_Grid):
    s: np.ndarray
    theta: np.ndarray
    periodic: bool = False

    @property
    def u(self):
        return self.s

    @property
    def v(self):
        return self.theta

    @property
    def periodic_v(self):
        return self.periodic

    @classmethod
    def annulus(cls, r_in: float, r_out: float, ns: int, ntheta: int, phase: float = 0.0):
        s = np.linspace(math.log(r_in), math.log(r_out), ns + 1)
        theta = phase + 2 * math.pi * np.arange(ntheta) / ntheta
        return cls(s, theta, True)

    @classmethod
    def sector(cls, r_in, r_out, theta_min, theta_max, ns, ntheta):
        s = np.linspace(math.log(r_in), math.log(r_out), ns + 1)
        theta = np.linspace(theta_min, theta_max, ntheta + 1)
        return cls(s, theta, False)

    @property
    def r(self):
        return np.exp(self.s)

    def points(self):
        S, T = np.meshgrid(self.s, self.theta, indexing="ij")
        return np.exp(S + 1j * T)

    def arguments(self):
        _, T = np.meshgrid(self.s, self.theta, indexing="ij")
        return T

    def scale(self):
        S, _ = np.meshgrid(self.s, self.theta, indexing="ij")
        return np.exp(S)

    def scale_log_gradient(self):
        ones = np.ones(self.shape)
        return ones, np.zeros(self.shape)

    def to_grid_coords(self, z, argument=None):
        z = np.asarray(z, dtype=complex)
        arg = np.angle(z) if argument is None else np.asarray(argument, dtype=float)
        if self.periodic:
            arg = self.theta[0] + np.mod(arg - self.theta[0], 2 * math.pi)
        return np.log(np.abs(z)), arg

    def z_derivatives(self, fu, fv, z, argument=None):
        # f_z = f_w / z with f_w = (f_s - i f_theta)/2, and f_x - i f_y = 2 f_z
        z = np.asarray(z, dtype=complex)
        two_fz = (fu - 1j * fv) / z
        return two_fz.real, -two_fz.imag


Grid = Union[CartesianGrid, LogPolarGrid]


def grid_derivatives(values, grid: Grid):
    """(f_u, f_v, f_uu, f_vv, f_uv) on all nodes.

    Fourth-order centred differences where the stencil fits (periodic wrap in
    v when the grid is periodic), second-order one-sided at the edges.
    """
    f = np.asarray(values, dtype=float)
    hu, hv = grid.hu, grid.hv

    def d1(a, h, axis, periodic):
        if periodic:
            return (-np.roll(a, -2, axis) + 8 * np.roll(a, -1, axis) - 8 * np.roll(a, 1, axis)
                    + np.roll(a, 2, axis)) / (12 * h)
        out = np.gradient(a, h, axis=axis, edge_order=2)
        sl = [slice(None)] * 2
        sl[axis] = slice(2, -2)
        out[tuple(sl)] = ((-np.roll(a, -2, axis) + 8 * np.roll(a, -1, axis) - 8 * np.roll(a, 1, axis)
                           + np.roll(a, 2, axis)) / (12 * h))[tuple(sl)]
        return out

    def d2(a, h, axis, periodic):
        c4 = (-np.roll(a, -2, axis) + 16 * np.roll(a, -1, axis) - 30 * a + 16 * np.roll(a, 1, axis)
              - np.roll(a, 2, axis)) / (12 * h * h)
        if periodic:
            return c4
        out = np.gradient(np.gradient(a, h, axis=axis, edge_order=2), h, axis=axis, edge_order=2)
        sl = [slice(None)] * 2
        sl[axis] = slice(1, -1)
        c2 = (np.roll(a, -1, axis) - 2 * a + np.roll(a, 1, axis)) / (h * h)
        out[tuple(sl)] = c2[tuple(sl)]
        sl[axis] = slice(2, -2)
        out[tuple(sl)] = c4[tuple(sl)]
        return out

    fu = d1(f, hu, 0, False)
    fv = d1(f, hv, 1, grid.periodic_v)
    fuu = d2(f, hu, 0, False)
    fvv = d2(f, hv, 1, grid.periodic_v)
    fuv = d1(fu, hv, 1, grid.periodic_v)
    return fu, fv, fuu, fvv, fuv


@dataclass(frozen=True)
class CoverSector:
    """Region r_in < |z| < r_out, theta_min < arg z < theta_max of the universal cover.

    Boundary conditions are given per edge (keys ``inner``, ``outer``,
    ``theta_min``, ``theta_max``): a float, a callable ``(z, argument)`` or
    ``"neumann"``.
    """

    r_in: float
    r_out: float
    theta_min: float
    theta_max: float
    bcs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.r_in < self.r_out:
            raise InvalidDomainError("need 0 < r_in < r_out")
        if not self.theta_min < self.theta_max:
            raise InvalidDomainError("need theta_min < theta_max")

    def distance_to_boundary(self, z, argument=None):
        z = np.asarray(z, dtype=complex)
        arg = np.angle(z) if argument is None else np.asarray(argument, dtype=float)
        r = np.abs(z)
        d = np.minimum(r - self.r_in, self.r_out - r)
        for edge in (self.theta_min, self.theta_max):
            phi = np.abs(arg - edge)
            d = np.minimum(d, np.where(phi < math.pi / 2, r * np.sin(np.minimum(phi, math.pi / 2)), r))
        inside = (arg > self.theta_min) & (arg < self.theta_max)
        return np.where(inside, d, -np.abs(d))


class GraphFunction:
    """Scalar field on a grid representing a (candidate) minimal graph."""

    def __init__(self, values, grid: Grid, metric: ConformalMetric, domain=None, meta=None):
        self.values = np.array(values, dtype=float)
        if self.values.shape != grid.shape:
            raise ValueError(f"values shape {self.values.shape} does not match grid {grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("graph function values must be finite")
        self.grid = grid
        self.metric = metric
        self.domain = domain
        self.meta = dict(meta or {})
        self._splines = None

    @classmethod
    def from_function(cls, fn: Callable, grid: Grid, metric: ConformalMetric, domain=None, **meta):
        """Sample ``fn(z, argument)`` on the grid nodes."""
        vals = fn(grid.points(), grid.arguments())
        return cls(np.broadcast_to(np.asarray(vals, dtype=float), grid.shape), grid, metric, domain, meta)

    def copy(self, values=None):
        return GraphFunction(self.values if values is None else values, self.grid, self.metric,
                             self.domain, self.meta)

    def derivatives(self):
        return grid_derivatives(self.values, self.grid)

    def _build_splines(self):
        fu, fv, *_ = self.derivatives()
        u, v = self.grid.u, self.grid.v
        arrays = (self.values, fu, fv)
        if self.grid.periodic_v:
            pad = 4
            period = 2 * math.pi
            v = np.concatenate([v[-pad:] - period, v, v[:pad] + period])
            arrays = tuple(np.concatenate([a[:, -pad:], a, a[:, :pad]], axis=1) for a in arrays)
        self._splines = tuple(RectBivariateSpline(u, v, a, kx=3, ky=3, s=0) for a in arrays)

    def interpolate(self, z, argument=None):
        """(f, f_x, f_y) at arbitrary points by bicubic interpolation of the grid derivatives."""
        if self._splines is None:
            self._build_splines()
        z = np.asarray(z, dtype=complex)
        uq, vq = self.grid.to_grid_coords(z, argument)
        f = self._splines[0].ev(uq, vq)
        fu = self._splines[1].ev(uq, vq)
        fv = self._splines[2].ev(uq, vq)
        fx, fy = self.grid.z_derivatives(fu, fv, z, argument)
        return f, fx, fy

    def gradient(self, z, argument=None):
        _, fx, fy = self.interpolate(z, argument)
        return fx, fy

    def euclidean_gradient_on_grid(self):
        fu, fv, fuu, fvv, _ = self.derivatives()
        z = self.grid.points()
        fx, fy = self.grid.z_derivatives(fu, fv, z)
        lap = (fuu + fvv) / self.grid.scale() ** 2
        return fx, fy, lap

    def distance_to_boundary(self):
        z = self.grid.points()
        if self.domain is None:
            raise ValueError("graph function has no domain attached")
        if isinstance(self.domain, CoverSector):
            return self.domain.distance_to_boundary(z, self.grid.arguments())
        return self.domain.distance_to_boundary(z)

    def to_csv_rows(self):
        """(u, v, value) rows; for log-polar grids u = s = log r and v = theta."""
        U, V = np.meshgrid(self.grid.u, self.grid.v, indexing="ij")
        return np.column_stack([U.ravel(), V.ravel(), self.values.ravel()])
