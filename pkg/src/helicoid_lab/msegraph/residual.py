"""Second-order discretisation of the minimal surface equation in a conformal metric.

In conformal coordinates w = u + i v with metric Lambda^2 |dw|^2 the graph
equation reads

    (1 + f_v^2/Lambda^2) f_uu + (1 + f_u^2/Lambda^2) f_vv - 2 f_u f_v f_uv / Lambda^2
        + (f_u^2 + f_v^2)(a f_u + b f_v) / Lambda^2 = 0,

with (a, b) the gradient of log Lambda. Dividing the left-hand side by
|dz/dw|^2 gives the residual in z units, independent of the grid.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..geometry import ConformalMetric
from .grids import CartesianGrid, GraphFunction, LogPolarGrid

EDGES = ("u0", "u1", "v0", "v1")


def grid_metric(grid, metric: ConformalMetric):
    """(Lambda^{-2}, a, b): inverse squared conformal factor and its log-gradient in grid coordinates."""
    z = grid.points()
    lam = metric.factor(z) * grid.scale()
    if isinstance(grid, LogPolarGrid):
        a = metric.radial_log_derivative(np.abs(z)) + 1.0
        b = np.zeros(grid.shape)
    else:
        a, b = metric.log_gradient(z)
    return lam ** -2, a, b


class StencilOps:
    """Sparse second-order difference operators on the flattened grid.

    Neighbour lookup wraps in periodic directions and mirrors across edges
    listed in ``neumann`` (the ghost node equals its reflection). Rows whose
    stencil would leave the grid are flagged in ``valid``.
    """

    def __init__(self, grid, neumann=()):
        self.grid = grid
        nu, nv = grid.shape
        self.shape = (nu, nv)
        self.n = nu * nv
        I, J = np.meshgrid(np.arange(nu), np.arange(nv), indexing="ij")
        self.valid = np.ones(self.shape, dtype=bool)

        def nb(di, dj):
            ii, jj = I + di, J + dj
            ok = np.ones(self.shape, dtype=bool)
            if "u0" in neumann:
                ii = np.where(ii < 0, -ii, ii)
            if "u1" in neumann:
                ii = np.where(ii > nu - 1, 2 * (nu - 1) - ii, ii)
            if grid.periodic_v:
                jj = np.mod(jj, nv)
            else:
                if "v0" in neumann:
                    jj = np.where(jj < 0, -jj, jj)
                if "v1" in neumann:
                    jj = np.where(jj > nv - 1, 2 * (nv - 1) - jj, jj)
            ok &= (ii >= 0) & (ii < nu) & (jj >= 0) & (jj < nv)
            self.valid &= ok
            return np.where(ok, ii * nv + jj, 0)

        hu, hv = grid.hu, grid.hv
        stencils = {
            "u": [((1, 0), 1 / (2 * hu)), ((-1, 0), -1 / (2 * hu))],
            "v": [((0, 1), 1 / (2 * hv)), ((0, -1), -1 / (2 * hv))],
            "uu": [((1, 0), 1 / hu ** 2), ((0, 0), -2 / hu ** 2), ((-1, 0), 1 / hu ** 2)],
            "vv": [((0, 1), 1 / hv ** 2), ((0, 0), -2 / hv ** 2), ((0, -1), 1 / hv ** 2)],
            "uv": [((1, 1), 1 / (4 * hu * hv)), ((1, -1), -1 / (4 * hu * hv)),
                   ((-1, 1), -1 / (4 * hu * hv)), ((-1, -1), 1 / (4 * hu * hv))],
        }
        rows = (I * nv + J).ravel()
        self.ops = {}
        cols_cache = {}
        for name, st in stencils.items():
            r, c, w = [], [], []
            for off, weight in st:
                if off not in cols_cache:
                    cols_cache[off] = nb(*off).ravel()
                r.append(rows)
                c.append(cols_cache[off])
                w.append(np.full(rows.size, weight))
            self.ops[name] = sp.csr_matrix(
                (np.concatenate(w), (np.concatenate(r), np.concatenate(c))), shape=(self.n, self.n)
            )

    def apply(self, values):
        f = np.asarray(values, dtype=float).ravel()
        return {k: (op @ f).reshape(self.shape) for k, op in self.ops.items()}


def mse_operator(d, minv2, a, b):
    """Residual and its partial derivatives with respect to (f_u, f_v, f_uu, f_vv, f_uv)."""
    fu, fv, fuu, fvv, fuv = d["u"], d["v"], d["uu"], d["vv"], d["uv"]
    g2 = fu * fu + fv * fv
    drift = a * fu + b * fv
    E = ((1 + minv2 * fv * fv) * fuu + (1 + minv2 * fu * fu) * fvv
         - 2 * minv2 * fu * fv * fuv + minv2 * g2 * drift)
    partials = {
        "uu": 1 + minv2 * fv * fv,
        "vv": 1 + minv2 * fu * fu,
        "uv": -2 * minv2 * fu * fv,
        "u": 2 * minv2 * (fu * fvv - fv * fuv + fu * drift) + minv2 * g2 * a,
        "v": 2 * minv2 * (fv * fuu - fu * fuv + fv * drift) + minv2 * g2 * b,
    }
    return E, partials


def mse_residual(f: GraphFunction, neumann=()) -> np.ndarray:
    """Pointwise residual of the minimal surface equation, in z units.

    Nodes where the centred stencil is unavailable (non-periodic edges that are
    not Neumann) are NaN.
    """
    ops = StencilOps(f.grid, neumann)
    minv2, a, b = grid_metric(f.grid, f.metric)
    E, _ = mse_operator(ops.apply(f.values), minv2, a, b)
    E = E / f.grid.scale() ** 2
    return np.where(ops.valid, E, np.nan)


def residual_sup(f: GraphFunction, margin: int = 1) -> float:
    """Sup-norm of the residual over nodes at least ``margin`` cells from the grid edge."""
    res = mse_residual(f)
    sl = slice(margin, -margin) if margin > 0 else slice(None)
    inner = res[sl, :] if f.grid.periodic_v else res[sl, sl]
    return float(np.nanmax(np.abs(inner)))
