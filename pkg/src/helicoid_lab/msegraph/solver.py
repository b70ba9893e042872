"""Damped Newton solver for the minimal graph equation on a structured grid."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..domains import NEUMANN, AnnularDomain
from ..errors import IllPosedProblemError, InvalidDomainError, NonConvergenceError
from ..geometry import ConformalMetric
from .grids import CartesianGrid, CoverSector, GraphFunction, LogPolarGrid
from .residual import StencilOps, grid_metric, mse_operator

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
MAX_ITER = 100


@dataclass
class SolveReport:
    residual_norm: float
    newton_iterations: int
    max_gradient: float
    residual_history: list = field(default_factory=list)
    converged: bool = True
    max_principle_ok: bool | None = None
    flux_by_component: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "residual_norm": self.residual_norm,
            "newton_iterations": self.newton_iterations,
            "max_gradient": self.max_gradient,
            "converged": self.converged,
            "max_principle_ok": self.max_principle_ok,
            "flux_by_component": dict(self.flux_by_component),
        }


def _bc_values(bc, z, arg):
    if callable(bc):
        return np.broadcast_to(np.asarray(bc(z, arg), dtype=float), z.shape)
    return np.full(z.shape, float(bc))


def boundary_setup(domain, grid):
    """Dirichlet mask, Dirichlet values and the set of Neumann grid edges."""
    z, arg = grid.points(), grid.arguments()
    mask = np.zeros(grid.shape, dtype=bool)
    values = np.zeros(grid.shape)
    neumann = set()

    if isinstance(grid, LogPolarGrid):
        if isinstance(domain, AnnularDomain):
            if len(domain.holes) != 1 or domain.outer.center != 0 or domain.holes[0].center != 0:
                raise InvalidDomainError("log-polar grids need an annulus centred at the origin")
            if not grid.periodic:
                raise InvalidDomainError("an annulus needs a periodic log-polar grid")
            edges = {"u0": domain.hole_bcs[0], "u1": domain.outer_bc}
            r_in, r_out = domain.holes[0].radius, domain.outer.radius
        elif isinstance(domain, CoverSector):
            b = domain.bcs
            edges = {"u0": b.get("inner"), "u1": b.get("outer"),
                     "v0": b.get("theta_min"), "v1": b.get("theta_max")}
            r_in, r_out = domain.r_in, domain.r_out
            if grid.periodic or not (np.isclose(grid.theta[0], domain.theta_min)
                                     and np.isclose(grid.theta[-1], domain.theta_max)):
                raise InvalidDomainError("grid does not span the cover sector")
        else:
            raise InvalidDomainError(f"unsupported domain type {type(domain).__name__}")
        if not (np.isclose(math.exp(grid.s[0]), r_in) and np.isclose(math.exp(grid.s[-1]), r_out)):
            raise InvalidDomainError("grid radii do not match the domain")
        index = {"u0": (0, slice(None)), "u1": (-1, slice(None)),
                 "v0": (slice(None), 0), "v1": (slice(None), -1)}
        # corners belong to the radial edges; theta edges are set first
        for name in ("v0", "v1", "u0", "u1"):
            if name not in edges:
                continue
            bc = edges[name]
            if bc is None:
                raise InvalidDomainError(f"missing boundary condition on edge {name}")
            if bc == NEUMANN:
                neumann.add(name)
                continue
            sl = index[name]
            mask[sl] = True
            values[sl] = _bc_values(bc, z[sl], arg[sl])
        if len(neumann) == len(edges):
            raise IllPosedProblemError("all boundary components carry Neumann conditions")
        return mask, values, neumann

    if not isinstance(domain, AnnularDomain):
        raise InvalidDomainError("cartesian grids need an AnnularDomain")
    if any(bc == NEUMANN for bc in domain.boundary_conditions):
        if all(bc == NEUMANN for bc in domain.boundary_conditions):
            raise IllPosedProblemError("all boundary components carry Neumann conditions")
        raise InvalidDomainError("Neumann conditions on cartesian grids are not supported; "
                                 "use a log-polar grid")
    comp = domain.component_of(z)
    for k, bc in enumerate(domain.boundary_conditions):
        if bc is None:
            raise InvalidDomainError(f"missing boundary condition on component {k}")
        sel = comp == k
        mask[sel] = True
        values[sel] = _bc_values(bc, z[sel], arg[sel])
    edge = np.zeros(grid.shape, dtype=bool)
    edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
    if np.any(edge & ~mask):
        raise InvalidDomainError("cartesian grid does not cover the domain with a margin")
    return mask, values, neumann


def _harmonic_lift(values, mask, dvals, ops, keep, dirichlet_rows):
    """Initial guess plus the discrete harmonic extension of its boundary mismatch.

    Overwriting only the Dirichlet nodes would put a one-cell jump into the
    guess, from which Newton can land on a spurious steep discrete branch.
    """
    mismatch = np.where(mask, dvals - values, 0.0)
    if not np.any(mismatch):
        return np.array(values, dtype=float)
    lap = ops.ops["uu"] + ops.ops["vv"]
    A = (keep @ lap + dirichlet_rows).tocsc()
    corr = spla.spsolve(A, mismatch.ravel()).reshape(mask.shape)
    return np.where(mask, dvals, values + corr)


def _assemble(f, ops, mask, dvals, minv2, a, b):
    d = ops.apply(f)
    E, P = mse_operator(d, minv2, a, b)
    F = np.where(mask, f - dvals, E)
    J = None
    for k, op in ops.ops.items():
        term = sp.diags(P[k].ravel()) @ op
        J = term if J is None else J + term
    return F, J, d


def solve_graph(domain, metric: ConformalMetric, initial: GraphFunction,
                tol: float = RESIDUAL_TOL, max_iter: int = MAX_ITER):
    """Solve the minimal graph equation with the domain's boundary conditions.

    The unknowns are all grid nodes. Dirichlet nodes (boundary rows, and for
    cartesian grids every node outside the domain) carry ``f - g = 0``; all
    other nodes carry the second-order discrete equation, with Neumann edges
    handled by ghost reflection. Newton steps are halved until the sup-norm of
    the residual decreases.

    Returns ``(GraphFunction, SolveReport)``.
    """
    grid = initial.grid
    mask, dvals, neumann = boundary_setup(domain, grid)
    ops = StencilOps(grid, tuple(neumann))
    if np.any(~ops.valid & ~mask):
        raise InvalidDomainError("equation rows reach outside the grid")
    minv2, a, b = grid_metric(grid, metric)
    flat_mask = mask.ravel()
    dirichlet_rows = sp.diags(flat_mask.astype(float))
    keep = sp.diags((~flat_mask).astype(float))
    f = _harmonic_lift(initial.values, mask, dvals, ops, keep, dirichlet_rows)

    history = []
    F, J, _ = _assemble(f, ops, mask, dvals, minv2, a, b)
    norm = float(np.max(np.abs(F)))
    history.append(norm)
    it = 0
    while norm >= tol and it < max_iter:
        A = (keep @ J + dirichlet_rows).tocsc()
        step = spla.spsolve(A, -F.ravel()).reshape(grid.shape)
        tau = 1.0
        while True:
            trial = f + tau * step
            F_new, J_new, _ = _assemble(trial, ops, mask, dvals, minv2, a, b)
            new_norm = float(np.max(np.abs(F_new)))
            if np.isfinite(new_norm) and (new_norm < norm or tau < 1e-4):
                break
            tau *= 0.5
        f, F, J, norm = trial, F_new, J_new, new_norm
        it += 1
        history.append(norm)
        log.debug("newton %d: |F| = %.3e (tau=%g)", it, norm, tau)

    report = SolveReport(residual_norm=norm, newton_iterations=it, max_gradient=0.0,
                         residual_history=history, converged=norm < tol)
    if not report.converged:
        raise NonConvergenceError(
            f"Newton stopped at |F| = {norm:.3e} after {it} iterations", report=report)

    sol = GraphFunction(f, grid, metric, domain, {"solver": "newton"})
    fx, fy, _ = sol.euclidean_gradient_on_grid()
    interior = ~mask
    lam = metric.factor(grid.points())
    report.max_gradient = float(np.max(np.hypot(fx, fy)[interior] / lam[interior])) if interior.any() else 0.0
    if not neumann:
        lo, hi = dvals[mask].min(), dvals[mask].max()
        slack = 1e-9 * max(1.0, abs(lo), abs(hi))
        report.max_principle_ok = bool(f.min() >= lo - slack and f.max() <= hi + slack)
    if isinstance(domain, AnnularDomain):
        report.flux_by_component = _component_fluxes(sol, domain)
    return sol, report


def _component_fluxes(sol, domain):
    """Vertical flux on a circle three cells inside each boundary component (ccw)."""
    from ..complexkit import Contour
    from ..errors import InvalidContourError
    from ..flux import vertical_flux

    out = {}
    circles = [("outer", domain.outer, -3)] + [(f"hole{i}", h, 3) for i, h in enumerate(domain.holes, 1)]
    for name, circ, off in circles:
        cell = float(sol.grid.radial_step(circ.center + circ.radius))
        try:
            out[name] = vertical_flux(sol, Contour(circ.center, circ.radius + off * cell)).value
        except (InvalidContourError, ValueError):
            out[name] = None
    return out


def catenoid_profile(r):
    """Upper half of the euclidean catenoid, cosh^{-1} |z| for |z| >= 1."""
    return np.arccosh(np.asarray(r, dtype=float))


def solve_catenoid_annulus(r_in: float, r_out: float, ns: int, ntheta: int = 16, **kw):
    """Euclidean catenoid on an annulus with Dirichlet data from the closed form."""
    dom = AnnularDomain.annulus(r_in, r_out, inner_bc=float(catenoid_profile(r_in)),
                                outer_bc=float(catenoid_profile(r_out)))
    grid = LogPolarGrid.annulus(r_in, r_out, ns, ntheta)
    s = grid.s[:, None]
    lin = np.broadcast_to(catenoid_profile(r_in) + (s - s[0]) / (s[-1] - s[0])
                          * (catenoid_profile(r_out) - catenoid_profile(r_in)), grid.shape)
    init = GraphFunction(lin, grid, ConformalMetric.euclidean(), dom)
    return solve_graph(dom, ConformalMetric.euclidean(), init, **kw)
