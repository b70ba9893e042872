"""Contour quadrature, residues of log-poles, Cauchy-Pompeiu and Laurent
decompositions for C^1 (not necessarily holomorphic) functions.

Integrals over circles use the trapezoid rule, which converges geometrically
for integrands analytic in a neighbourhood of the circle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .domains import AnnularDomain, Circle
from .errors import (
    InvalidDomainError,
    NearBoundaryEvaluation,
    QuadratureFailure,
    SingularConfigurationError,
)

log = logging.getLogger(__name__)

QUAD_TOL = 1e-11
MAX_NODES = 2 ** 16
COEFF_CUTOFF = 1e-14


@dataclass(frozen=True)
class Contour:
    center: complex
    radius: float
    orientation: Literal["ccw", "cw"] = "ccw"
    node_count: int = 64
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError("contour radius must be positive")
        if self.orientation not in ("ccw", "cw"):
            raise ValueError("orientation must be 'ccw' or 'cw'")
        if self.node_count < 1:
            raise ValueError("node_count must be positive")

    @property
    def sign(self) -> int:
        return 1 if self.orientation == "ccw" else -1

    @property
    def length(self) -> float:
        return 2 * np.pi * self.radius

    def nodes(self, n: int | None = None):
        """Nodes in traversal order and the matching weights dz (trapezoid rule)."""
        n = self.node_count if n is None else n
        theta = self.phase + self.sign * 2 * np.pi * np.arange(n) / n
        e = np.exp(1j * theta)
        z = self.center + self.radius * e
        dz = self.sign * 1j * self.radius * e * (2 * np.pi / n)
        return z, dz

    def reversed(self) -> "Contour":
        return Contour(self.center, self.radius, "cw" if self.orientation == "ccw" else "ccw",
                       self.node_count, self.phase)


def _sample(f, z):
    vals = np.asarray(f(z), dtype=complex)
    if vals.shape != z.shape:
        vals = np.broadcast_to(vals, z.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise QuadratureFailure(f"non-finite integrand at node {k} (z={z[k]!r})", node_index=k)
    return vals


def trapezoid(f: Callable, c: Contour, n: int | None = None) -> complex:
    """Fixed-node trapezoid value of the contour integral of f dz."""
    z, dz = c.nodes(n)
    return complex(np.sum(_sample(f, z) * dz))


def _trapezoid_with_magnitude(f, c: Contour, n: int):
    z, dz = c.nodes(n)
    vals = _sample(f, z)
    return complex(np.sum(vals * dz)), float(np.sum(np.abs(vals) * np.abs(dz)))


def contour_integral(f: Callable, c: Contour, tol: float = QUAD_TOL, max_nodes: int = MAX_NODES,
                     full_output: bool = False):
    """Integral of f dz over ``c`` with node doubling until successive values agree.

    Agreement means a change below ``tol * max(1, int |f| |dz|)``.

    ``f`` receives the nodes as an ordered array along the contour, so branch
    choices can be made by continuation (see :func:`log_difference`).
    """
    n = max(int(c.node_count), 4)
    prev, mag = _trapezoid_with_magnitude(f, c, n)
    diff = np.inf
    while n < max_nodes:
        n *= 2
        cur, mag = _trapezoid_with_magnitude(f, c, n)
        diff = abs(cur - prev)
        prev = cur
        # tolerance is relative to the size of the integrand (int |f| |dz|), floor 1
        if diff < tol * max(1.0, mag):
            break
    else:
        log.warning("contour_integral hit the node cap (%d) with last change %.3e", max_nodes, diff)
    if full_output:
        return prev, {"nodes": n, "last_change": diff}
    return prev


def log_difference(z, p, p_arg: float | None = None):
    """log z - log p on the universal cover, with arg z continued from arg p.

    ``z`` is an ordered path (contour nodes). ``p_arg`` is the chosen
    determination of arg p (principal by default).
    """
    z = np.asarray(z, dtype=complex)
    p = complex(p)
    if p_arg is None:
        p_arg = float(np.angle(p))
    raw = np.unwrap(np.angle(z))
    # start on the sheet nearest to p
    shift = 2 * np.pi * np.round((p_arg - raw[0]) / (2 * np.pi))
    return (np.log(np.abs(z)) - np.log(abs(p))) + 1j * (raw + shift - p_arg)


def residue_log_pole(p: complex, order: int = 1, prefactor: Literal["one", "sphere"] = "one") -> complex:
    """Closed-form residues at p of (log z - log p)^-1 and of (1-z^2)/(4z^2) (log z - log p)^-2."""
    p = complex(p)
    if p == 0:
        raise SingularConfigurationError("the log-pole residues are undefined at p = 0")
    if order == 1 and prefactor == "one":
        return p
    if order == 2 and prefactor == "sphere":
        return -(1 + p * p) / (4 * p)
    raise ValueError("supported: (order=1, prefactor='one') and (order=2, prefactor='sphere')")


def residue_log_pole_numeric(p: complex, order: int = 1, prefactor: str = "one",
                             radius: float | None = None) -> complex:
    """Same residues by contour quadrature around p (branch continued from arg p)."""
    p = complex(p)
    if p == 0:
        raise SingularConfigurationError("p = 0")
    radius = 0.3 * abs(p) if radius is None else radius
    if order == 1 and prefactor == "one":
        def integrand(z):
            return 1.0 / log_difference(z, p)
    elif order == 2 and prefactor == "sphere":
        def integrand(z):
            return (1 - z * z) / (4 * z * z) / log_difference(z, p) ** 2
    else:
        raise ValueError("unsupported residue kind")
    return contour_integral(integrand, Contour(p, radius, node_count=32)) / (2j * np.pi)


# --- area quadrature ---------------------------------------------------------

def _area_rule(domain: AnnularDomain, h: float, sub: int = 8):
    """Midpoint nodes/weights for the domain; cells cut by a circle are subsampled."""
    c, R = domain.outer.center, domain.outer.radius
    n = int(np.ceil(2 * R / h))
    xs = c.real - R + h * (np.arange(n) + 0.5)
    ys = c.imag - R + h * (np.arange(n) + 0.5)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    W = (X + 1j * Y).ravel()
    d = np.abs(domain.distance_to_boundary(W))
    cut = d < h * np.sqrt(0.5) + 1e-15
    full = ~cut & domain.contains(W)
    pts = [W[full]]
    wts = [np.full(full.sum(), h * h)]
    off = h * ((np.arange(sub) + 0.5) / sub - 0.5)
    ox, oy = np.meshgrid(off, off, indexing="ij")
    offsets = (ox + 1j * oy).ravel()
    sub_pts = (W[cut][:, None] + offsets[None, :]).ravel()
    keep = domain.contains(sub_pts)
    pts.append(sub_pts[keep])
    wts.append(np.full(keep.sum(), (h / sub) ** 2))
    return np.concatenate(pts), np.concatenate(wts)


def cauchy_transform_of_domain(domain: AnnularDomain, z: complex) -> complex:
    """Exact value of the area integral of 1/(w - z) over the domain, z inside."""
    c = domain.outer.center
    val = -np.pi * np.conj(z - c)
    for hole in domain.holes:
        val -= np.pi * hole.radius ** 2 / (hole.center - z)
    return complex(val)


class AreaTerm:
    """z -> (1/2 pi i) * integral of f_zbar(w)/(w - z) dw ^ d(conj w), i.e. -(1/pi) * area integral.

    The integrand is split as (g(w) - g(z))/(w - z) + g(z)/(w - z); the second
    piece is integrated exactly, the first (bounded) piece by the midpoint rule.
    """

    def __init__(self, f_zbar: Callable, domain: AnnularDomain, h: float):
        self.f_zbar = f_zbar
        self.domain = domain
        self.h = h
        self.points, self.weights = _area_rule(domain, h)
        self.values = np.asarray(f_zbar(self.points), dtype=complex)
        self.vanishes = bool(np.max(np.abs(self.values), initial=0.0) == 0.0)

    def __call__(self, z):
        z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(z_arr.shape, dtype=complex)
        for k, zk in enumerate(z_arr):
            if self.vanishes:
                out[k] = 0
                continue
            gz = complex(np.asarray(self.f_zbar(np.array([zk])), dtype=complex)[0])
            diff = self.points - zk
            near = np.abs(diff) < 1e-12 * max(1.0, abs(zk))
            diff[near] = 1.0
            integrand = np.where(near, 0.0, (self.values - gz) / diff)
            total = np.sum(integrand * self.weights) + gz * cauchy_transform_of_domain(self.domain, zk)
            out[k] = -total / np.pi
        return out[0] if np.ndim(z) == 0 else out


def _default_h(domain: AnnularDomain) -> float:
    return domain.outer.radius / 200


def _check_interior(domain: AnnularDomain, z: complex, h: float):
    if domain.distance_to_boundary(z) < h:
        raise NearBoundaryEvaluation(f"z={z!r} is within one grid cell ({h:g}) of the boundary")


def pompeiu_eval(f: Callable, domain: AnnularDomain, z: complex, f_zbar: Callable | None = None,
                 h: float | None = None) -> complex:
    """Cauchy-Pompeiu reconstruction of f(z) from boundary values and f_zbar.

    Boundary term: outer circle counter-clockwise, holes clockwise.
    """
    h = _default_h(domain) if h is None else h
    z = complex(z)
    _check_interior(domain, z, h)
    total = 0j
    for k, circle in enumerate(domain.components):
        c = Contour(circle.center, circle.radius, "ccw" if k == 0 else "cw", node_count=64)
        total += contour_integral(lambda w: f(w) / (w - z), c)
    total /= 2j * np.pi
    if f_zbar is None:
        f_zbar = numerical_zbar(f)
    return total + complex(AreaTerm(f_zbar, domain, h)(z))


def numerical_zbar(f: Callable, step: float = 1e-4) -> Callable:
    """d/d(conj z) by fourth-order central differences."""

    def deriv(z):
        z = np.asarray(z, dtype=complex)

        def d(direction):
            s = step * direction
            return (-f(z + 2 * s) + 8 * f(z + s) - 8 * f(z - s) + f(z - 2 * s)) / (12 * step)

        return 0.5 * (d(1.0) + 1j * d(1j))

    return deriv


def numerical_z(f: Callable, step: float = 1e-3) -> Callable:
    """d/dz by fourth-order central differences."""

    def deriv(z):
        z = np.asarray(z, dtype=complex)

        def d(direction):
            s = step * direction
            return (-f(z + 2 * s) + 8 * f(z + s) - 8 * f(z - s) + f(z - 2 * s)) / (12 * step)

        return 0.5 * (d(1.0) - 1j * d(1j))

    return deriv


# --- Laurent-type decomposition ----------------------------------------------

def _circle_fft(f, circle: Circle, n: int):
    theta = 2 * np.pi * np.arange(n) / n
    vals = _sample(f, circle.center + circle.radius * np.exp(1j * theta))
    return vals


def _plus_coeffs(f, circle: Circle, n: int):
    vals = _circle_fft(f, circle, n)
    k = np.arange(n // 2)
    return np.fft.fft(vals)[: n // 2] / n / circle.radius ** k


def _minus_coeffs(f, circle: Circle, n: int):
    vals = _circle_fft(f, circle, n)
    k = np.arange(1, n // 2)
    # a_k = r^k * mean(f e^{ik theta}); ifft already divides by n
    return np.fft.ifft(vals)[1: n // 2] * circle.radius ** k


def _adaptive(coeff_fn, f, circle, start=64, cap=2 ** 14, tol=1e-13):
    n = start
    prev = coeff_fn(f, circle, n)
    while n < cap:
        n *= 2
        cur = coeff_fn(f, circle, n)
        m = len(prev)
        if np.max(np.abs(cur[:m] - prev)) < tol * max(1.0, np.max(np.abs(cur[:m]))):
            return cur, n
        prev = cur
    return prev, n


def _truncate(coeffs, scale, cutoff=COEFF_CUTOFF):
    """Drop the tail once |a_k| * scale^k stays below the cutoff."""
    mags = np.abs(coeffs) * scale
    big = np.flatnonzero(mags >= cutoff)
    if big.size == 0:
        return coeffs[:0]
    return coeffs[: big[-1] + 1]


@dataclass
class LaurentDecomposition:
    center: complex
    plus_coeffs: np.ndarray
    hole_centers: list
    minus_coeffs: list
    area_term: Callable
    metadata: dict = field(default_factory=dict)

    def plus(self, z):
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z - self.center, self.plus_coeffs)

    def minus(self, i: int, z):
        z = np.asarray(z, dtype=complex)
        coeffs = self.minus_coeffs[i]
        if coeffs.size == 0:
            return np.zeros(z.shape, dtype=complex)
        w = 1.0 / (z - self.hole_centers[i])
        return w * np.polynomial.polynomial.polyval(w, coeffs)

    def __call__(self, z):
        total = self.plus(z)
        for i in range(len(self.minus_coeffs)):
            total = total + self.minus(i, z)
        return total + self.area_term(z)


def laurent_decompose(f: Callable, domain: AnnularDomain, f_zbar: Callable | None = None,
                      h: float | None = None, cutoff: float = COEFF_CUTOFF) -> LaurentDecomposition:
    """Split f into f+ (holomorphic in the outer disk), one f_i- per hole, and the area term.

    Coefficients are contour integrals on the domain's own circles.
    """
    for i, a in enumerate(domain.holes):
        for j in range(i):
            b = domain.holes[j]
            if abs(a.center - b.center) <= a.radius + b.radius:
                raise InvalidDomainError(f"holes {j} and {i} overlap")
    h = _default_h(domain) if h is None else h
    plus, n_plus = _adaptive(_plus_coeffs, f, domain.outer)
    plus = _truncate(plus, domain.outer.radius ** np.arange(plus.size), cutoff)
    minus, n_minus = [], []
    for hole in domain.holes:
        a, n = _adaptive(_minus_coeffs, f, hole)
        minus.append(_truncate(a, hole.radius ** -np.arange(1, a.size + 1, dtype=float), cutoff))
        n_minus.append(n)
    if f_zbar is None:
        f_zbar = numerical_zbar(f)
    area = AreaTerm(f_zbar, domain, h)
    meta = {"coefficient_cutoff": cutoff, "nodes_outer": n_plus, "nodes_holes": n_minus, "area_h": h}
    return LaurentDecomposition(domain.outer.center, plus, [c.center for c in domain.holes], minus, area, meta)


def first_minus_coefficients(f: Callable, domain: AnnularDomain):
    """a_{i,1} = (1/2 pi i) * contour integral of f over hole i (ccw), for each hole."""
    out = []
    for hole in domain.holes:
        out.append(contour_integral(f, Contour(hole.center, hole.radius, node_count=64)) / (2j * np.pi))
    return np.array(out)


def check_real_residue(u: Callable, domain: AnnularDomain, u_z: Callable | None = None) -> float:
    """max_i |Im a_{i,1}| for f = du/dz; vanishes for every real-valued u."""
    if u_z is None:
        u_z = numerical_z(lambda z: np.asarray(u(z), dtype=float).astype(complex))
    a1 = first_minus_coefficients(u_z, domain)
    return float(np.max(np.abs(a1.imag), initial=0.0))
