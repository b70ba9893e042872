"""Verification suites: each returns named checks (value, bound, pass) and data tables.

Suites are pure functions of their parameters; the same parameters give the
same numbers bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import forces as fz
from .complexkit import (
    Contour,
    check_real_residue,
    laurent_decompose,
    residue_log_pole,
    residue_log_pole_numeric,
)
from .domains import AnnularDomain, Circle
from .flux import expansion_constant, homology_tolerance, horizontal_flux, vertical_flux
from .geometry import ConformalMetric, CoverPoint, KillingField
from .harmonic import (
    chi_derivative_bounds,
    h_pole_values,
    supersolution_check,
    barrier_properties,
    barrier_sum_check,
)
from .msegraph import (
    CartesianGrid,
    GraphFunction,
    LogPolarGrid,
    catenoid_height_instance,
    catenoid_profile,
    height2_bound,
    height_check,
    mse_residual,
    ring_gradient_search,
    solve_catenoid_annulus,
    solve_graph,
)


@dataclass
class Check:
    name: str
    value: float
    bound: float
    relation: str  # "<", "<=", ">", ">=", "in" (bound is then [lo, hi])
    passed: bool
    note: str = ""

    def as_dict(self):
        return {"name": self.name, "value": _num(self.value), "bound": _num(self.bound),
                "relation": self.relation, "passed": bool(self.passed), "note": self.note}


@dataclass
class Table:
    description: str
    columns: list
    rows: list = field(default_factory=list)


@dataclass
class SuiteResult:
    name: str
    params: dict
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name, value, bound, relation, note=""):
        value = float(value) if not isinstance(value, (list, tuple)) else value
        ok = _compare(value, bound, relation)
        self.checks.append(Check(name, value, bound, relation, ok, note))
        return ok

    def as_dict(self):
        return {"suite": self.name, "params": self.params, "passed": self.passed,
                "checks": [c.as_dict() for c in self.checks]}


def _num(x):
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    x = float(x)
    return x if math.isfinite(x) else repr(x)


def _compare(v, b, rel):
    if rel == "<":
        return bool(v < b)
    if rel == "<=":
        return bool(v <= b)
    if rel == ">":
        return bool(v > b)
    if rel == ">=":
        return bool(v >= b)
    if rel == "in":
        return bool(b[0] <= v <= b[1])
    if rel == "==":
        return bool(v == b)
    raise ValueError(rel)


def _orders(errors):
    return [math.log2(a / b) if a > 0 and b > 0 else math.nan for a, b in zip(errors, errors[1:])]


# --- residues and Laurent ------------------------------------------------------

def residues_suite(seed: int = 7, count: int = 50, tol: float = 1e-8) -> SuiteResult:
    res = SuiteResult("residues", {"seed": seed, "count": count, "tol": tol})
    rng = np.random.default_rng(seed)
    mods = np.exp(rng.uniform(math.log(0.1), math.log(10.0), count))
    args = rng.uniform(-math.pi, math.pi, count)
    table = Table("contour residues vs closed forms; identity 1: Res (log z - log p)^-1 = p, "
                  "identity 2: Res (1-z^2)/(4z^2) (log z - log p)^-2 = -(1+p^2)/(4p)",
                  ["identity", "p_re", "p_im", "numeric_re", "numeric_im", "closed_re", "closed_im",
                   "error", "bound"])
    worst = {1: 0.0, 2: 0.0}
    for m, a in zip(mods, args):
        p = m * np.exp(1j * a)
        for ident, (order, pref) in ((1, (1, "one")), (2, (2, "sphere"))):
            num = residue_log_pole_numeric(p, order, pref)
            exact = residue_log_pole(p, order, pref)
            err = abs(num - exact)
            worst[ident] = max(worst[ident], err)
            table.rows.append([ident, p.real, p.imag, num.real, num.imag, exact.real, exact.imag, err, tol])
    res.check("residue identity 1 max error", worst[1], tol, "<")
    res.check("residue identity 2 max error", worst[2], tol, "<")
    res.check("Res at p=2 of (log z - log 2)^-1", abs(residue_log_pole_numeric(2.0) - 2.0), tol, "<")
    res.check("Res at p=2 of prefactor form (= -5/8)",
              abs(residue_log_pole_numeric(2.0, 2, "sphere") + 0.625), tol, "<")
    res.tables["residues"] = table
    return res


def laurent_suite(seed: int = 7, tol: float = 1e-9, real_tol: float = 1e-10) -> SuiteResult:
    res = SuiteResult("laurent", {"seed": seed, "tol": tol, "real_tol": real_tol})
    rng = np.random.default_rng(seed)
    dom = AnnularDomain(Circle(0, 2.0), (Circle(0.8, 0.3), Circle(-0.6 + 0.7j, 0.25)))
    table = Table("Laurent reconstruction of rational functions (area term vanishes)",
                  ["trial", "max_error", "bound"])
    worst = 0.0
    for trial in range(3):
        q1 = dom.holes[0].center + 0.1 * rng.standard_normal() + 0.1j * rng.standard_normal()
        q2 = dom.holes[1].center + 0.08 * (rng.standard_normal() + 1j * rng.standard_normal())
        a, b, c = rng.standard_normal(3) + 1j * rng.standard_normal(3)

        def f(z, q1=q1, q2=q2, a=a, b=b, c=c):
            return a / (z - q1) + b / (z - q2) ** 2 + c * z ** 3 + 1.0

        dec = laurent_decompose(f, dom, f_zbar=lambda z: np.zeros(np.shape(z), dtype=complex))
        r = np.sqrt(rng.uniform(0.0, 1.0, 400)) * 1.9
        zs = r * np.exp(1j * rng.uniform(0, 2 * math.pi, 400))
        zs = zs[dom.distance_to_boundary(zs) > 0.05]
        err = float(np.max(np.abs(dec(zs) - f(zs))))
        worst = max(worst, err)
        table.rows.append([trial, err, tol])
    res.check("Laurent reconstruction max error (rational)", worst, tol, "<")

    worst_im = 0.0
    real_table = Table("Im a_{i,1} of u_z for real u = sum alpha_i log|z - q_i| + x^2 y",
                       ["trial", "max_abs_im_a1", "bound"])
    for trial in range(5):
        alphas = rng.standard_normal(2)
        qs = [h.center for h in dom.holes]

        def u_z(z, alphas=alphas, qs=qs):
            z = np.asarray(z, dtype=complex)
            out = sum(al / (2 * (z - q)) for al, q in zip(alphas, qs))
            x, y = z.real, z.imag
            return out + 0.5 * (2 * x * y - 1j * x * x)  # (u_x - i u_y)/2 for x^2 y

        def u(z, alphas=alphas, qs=qs):
            z = np.asarray(z, dtype=complex)
            return sum(al * np.log(np.abs(z - q)) for al, q in zip(alphas, qs)) + z.real ** 2 * z.imag

        im = check_real_residue(u, dom, u_z=u_z)
        worst_im = max(worst_im, im)
        real_table.rows.append([trial, im, real_tol])
    res.check("max |Im a_{i,1}| for gradients of real functions", worst_im, real_tol, "<")
    res.tables["laurent_reconstruction"] = table
    res.tables["real_residue"] = real_table
    return res


# --- barriers -------------------------------------------------------------------

def barriers_suite(seed: int = 7, ts=(1e-2, 1e-4, 1e-6), samples: int = 10000) -> SuiteResult:
    res = SuiteResult("barriers", {"seed": seed, "ts": list(ts), "samples": samples})
    table = Table("properties of the barrier H_t on sample grids", ["t", "property", "value", "bound", "pass"])
    for t in ts:
        props = barrier_properties(t)
        for name, d in props.items():
            table.rows.append([t, name, d["value"], d["bound"], d["pass"]])
            res.checks.append(Check(f"H_t {name} (t={t:g})", d["value"], d["bound"],
                                    ">=" if name in ("positivity", "lower_bound_on_r_eq_t", "large_argument_bound")
                                    else "<=", bool(d["pass"])))
    l2 = supersolution_check()
    res.check("supersolution: min Lap(g_n) / (4/delta^4)", l2["min_ratio"], l2["required_ratio"], ">=")
    res.check("g_n <= (C2+N)/t^(2 alpha)", l2["max_g"], l2["g_bound"], "<=")
    d1, d2 = chi_derivative_bounds()
    res.check("|chi'| bound", d1, 2.0, "<=")
    res.check("|chi''| bound", d2, 8.0, "<=")
    for t in (1e-10, 1e-20):
        l5 = barrier_sum_check(t, 0.4, 0.1, (0.5j, 2j))
        res.check(f"barrier sum bound on the shrunken set (t={t:g})", l5["max_barrier"], l5["bound"], "<=")

    rng = np.random.default_rng(seed)
    n = samples
    pm = np.exp(rng.uniform(-2, 2, n))
    pa = rng.uniform(0.05, math.pi - 0.05, n)
    zm = np.exp(rng.uniform(-2, 2, n))
    za = rng.uniform(0.05, 3 * math.pi, n)
    err_conj, err_inv, min_pos = 0.0, 0.0, math.inf
    for k in range(n):
        p = CoverPoint(pm[k], pa[k])
        h = h_pole_values(p, zm[k], za[k])
        err_conj = max(err_conj, abs(h_pole_values(p, zm[k], -za[k]) + h))
        p_inv = CoverPoint(1 / pm[k], pa[k])  # 1/conj(p) on the cover
        err_inv = max(err_inv, abs(h_pole_values(p, 1 / zm[k], za[k]) - h_pole_values(p_inv, zm[k], za[k])))
        min_pos = min(min_pos, h)
    res.check("h_p(conj z) = -h_p(z)", err_conj, 1e-12, "<=")
    res.check("h_p(1/conj z) = h_{1/conj p}(z)", err_inv, 1e-12, "<=")
    res.check("h_p > 0 for arg p, arg z > 0", min_pos, 0.0, ">")
    res.tables["barrier_properties"] = table
    return res


# --- PDE ------------------------------------------------------------------------

def _helicoid_orders(radius: float, refine: int, t: float = 0.3, n0: int = 8):
    metric = ConformalMetric.spherical(radius)
    errs = []
    for k in range(refine + 1):
        n = n0 * 2 ** k
        g = CartesianGrid.box(1.0, 2.0, -0.5, 0.5, n, n)
        f = GraphFunction.from_function(lambda z, a: t / (2 * math.pi) * np.angle(z), g, metric)
        r = mse_residual(f)[:: 2 ** k, :: 2 ** k][1:-1, 1:-1]  # shared coarse nodes
        errs.append(float(np.max(np.abs(r))))
    return errs


def pde_suite(exact: str = "both", refine: int = 3, order_tol: float = 0.25,
              flux_tol: float = 1e-4) -> SuiteResult:
    res = SuiteResult("pde", {"exact": exact, "refine": refine, "order_tol": order_tol, "flux_tol": flux_tol})
    band = [2 - order_tol, 2 + order_tol]
    if exact in ("helicoid", "both"):
        table = Table("helicoid (t/2pi) arg z residual in the spherical metric on [1,2]x[-1/2,1/2]",
                      ["radius", "n", "sup_residual", "order", "order_lo", "order_hi"])
        for R in (0.5, 1.0, 2.0):
            errs = _helicoid_orders(R, refine)
            orders = [math.nan] + _orders(errs)
            for k, (e, o) in enumerate(zip(errs, orders)):
                table.rows.append([R, 8 * 2 ** k, e, o, band[0], band[1]])
            res.check(f"helicoid residual order (r={R:g})", orders[-1], band, "in")
        # exactness on log-polar grids: arg z is a grid coordinate there
        g = LogPolarGrid.sector(0.5, 2.0, -1.0, 8.0, 16, 64)
        f = GraphFunction.from_function(lambda z, a: 0.3 / (2 * math.pi) * a, g, ConformalMetric.spherical(1.0))
        res.check("helicoid residual on log-polar cover grid", float(np.nanmax(np.abs(mse_residual(f)))),
                  1e-10, "<")
        res.tables["helicoid_convergence"] = table
    if exact in ("catenoid", "both"):
        table = Table("solved euclidean catenoid on 1.1<=|z|<=3 vs cosh^-1|z|",
                      ["ns", "newton_iterations", "residual_norm", "max_error", "order", "order_lo",
                       "order_hi", "vertical_flux", "flux_error", "flux_bound"])
        errs, fluxes = [], []
        for k in range(refine + 1):
            ns = 16 * 2 ** k
            sol, rep = solve_catenoid_annulus(1.1, 3.0, ns, 32)
            err = float(np.max(np.abs(sol.values - catenoid_profile(np.abs(sol.grid.points())))))
            errs.append(err)
            phi = vertical_flux(sol, Contour(0, 2.0)).value
            fluxes.append(phi)
            o = _orders(errs)[-1] if k else math.nan
            table.rows.append([ns, rep.newton_iterations, rep.residual_norm, err, o, band[0], band[1],
                               phi, abs(phi - 2 * math.pi), flux_tol])
            if rep.max_principle_ok is not None:
                res.check(f"maximum principle (catenoid ns={ns})", float(rep.max_principle_ok), 1.0, "==")
        res.check("solved catenoid error order", _orders(errs)[-1], band, "in")
        res.check("catenoid vertical flux - 2pi (finest)", abs(fluxes[-1] - 2 * math.pi), flux_tol, "<")
        # closed-form catenoid sampled on cartesian grids: residual O(h^2)
        cerr = []
        for k in range(refine + 1):
            n = 8 * 2 ** k
            g = CartesianGrid.box(1.2, 2.2, 0.2, 1.2, n, n)
            f = GraphFunction.from_function(lambda z, a: np.arccosh(np.abs(z)), g, ConformalMetric())
            cerr.append(float(np.max(np.abs(mse_residual(f)[:: 2 ** k, :: 2 ** k][1:-1, 1:-1]))))
        res.check("closed-form catenoid residual order", _orders(cerr)[-1], band, "in")
        res.tables["catenoid_convergence"] = table
    if exact not in ("helicoid", "catenoid", "both"):
        raise ValueError(f"unknown exact solution {exact!r}")
    return res


# --- height ---------------------------------------------------------------------

def _solve(dom, metric, grid):
    return solve_graph(dom, metric, GraphFunction(np.zeros(grid.shape), grid, metric, dom))


def height_instances(h: float = 0.02):
    """Solved instances satisfying the height-estimate hypotheses."""
    out = []
    r1, r2 = 1.5, 20.0
    dom = AnnularDomain.annulus(r1, r2, inner_bc=float(np.arccosh(r1) - np.arccosh(r2)), outer_bc=0.0)
    sol, _ = _solve(dom, ConformalMetric(), LogPolarGrid.annulus(r1, r2, 128, 32))
    out.append(("catenoid annulus 1.5<|z|<20 (euclidean)", dom, sol, (2 * r1, 0.5 * r2)))
    sph = ConformalMetric.spherical(1.0)
    for depth, second in ((0.05, -0.05), (0.08, -0.12)):
        dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1), Circle(0.5, 0.08)), 0.0, (-depth, second))
        sol, _ = _solve(dom, sph, CartesianGrid.for_domain(dom, h))
        out.append((f"two holes, spherical r=1, h={depth:g}, second={second:g}", dom, sol, (0.15, 0.35)))
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1),), 0.0, (0.0,))
    sol, _ = _solve(dom, sph, CartesianGrid.for_domain(dom, h))
    out.append(("f = 0 degenerate", dom, sol, (0.15, 0.35)))
    return out


def height_suite(grid_h: float = 0.02) -> SuiteResult:
    res = SuiteResult("height", {"grid_h": grid_h})
    table = Table("height estimate h <= (sqrt2/pi) phi log(r2/r1) and ring bound",
                  ["instance", "h", "phi", "height_bound", "ring_radius", "ring_integral", "ring_bound"])
    inst = catenoid_height_instance()
    res.check("analytic catenoid h (r1=1, r2=e^4)", inst.h, [4.693 - 1e-3, 4.693 + 1e-3], "in")
    res.check("analytic catenoid height bound holds", inst.h, inst.bound, "<=")
    table.rows.append(["analytic catenoid r1=1 r2=e^4", inst.h, inst.phi, inst.bound, math.nan, math.nan, math.nan])
    for name, dom, sol, (r1p, r2p) in height_instances(grid_h):
        hc = height_check(dom, sol)
        res.check(f"height bound: {name}", hc.h, hc.bound, "<=")
        c1 = dom.holes[0].center
        r1 = dom.holes[0].radius
        r2 = abs(dom.outer.center - c1) + dom.outer.radius
        r, val = ring_gradient_search(sol, c1, r1p, r2p)
        rb = height2_bound(hc.phi, r1, r2, r1p, r2p)
        res.check(f"ring bound: {name}", val, rb, "<=")
        table.rows.append([name, hc.h, hc.phi, hc.bound, r, val, rb])
    res.tables["height"] = table
    return res


# --- flux -----------------------------------------------------------------------

def _two_hole(depth, h, metric):
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1), Circle(0.5, 0.08)), 0.0, (-depth, -depth))
    sol, _ = _solve(dom, metric, CartesianGrid.for_domain(dom, h))
    return sol


def flux_suite(grid_h: float = 0.02, eps_sweep=(0.1, 0.05, 0.025), radius: float = 1.0,
               kill_tol: float = 1e-10, k_stability: float = 0.5) -> SuiteResult:
    res = SuiteResult("flux", {"grid_h": grid_h, "eps_sweep": list(eps_sweep), "radius": radius,
                               "kill_tol": kill_tol, "k_stability": k_stability})
    metric = ConformalMetric.spherical(radius)
    fields = [None] + [KillingField(k, radius) for k in "XYE"]
    coarse = _two_hole(0.1, grid_h, metric)
    fine = _two_hole(0.1, grid_h / 2, metric)
    table = Table("homology invariance of fluxes (exact integrand) on the two-hole solve",
                  ["field", "contour_a", "contour_b", "flux_a", "flux_b", "difference", "tolerance"])
    pairs = [(Contour(0.5, 0.15), Contour(0.5, 0.2)), (Contour(0, 0.3), Contour(0, 0.25)),
             (Contour(0, 0.75), Contour(0, 0.85))]
    for k in fields:
        label = "vertical" if k is None else k.kind
        for ga, gb in pairs:
            if k is None:
                fa, fb = vertical_flux(fine, ga).value, vertical_flux(fine, gb).value
            else:
                fa = horizontal_flux(fine, k, ga, method="exact-integrand").value
                fb = horizontal_flux(fine, k, gb, method="exact-integrand").value
            tol = homology_tolerance(coarse, fine, ga, k) + homology_tolerance(coarse, fine, gb, k)
            table.rows.append([label, ga.radius, gb.radius, fa, fb, abs(fa - fb), tol])
            res.check(f"homology invariance {label} r={ga.radius:g}/{gb.radius:g} about {ga.center:g}",
                      abs(fa - fb), tol, "<=")
    res.tables["homology"] = table

    ktable = Table("expansion constant K = |exact - quadratic| / (sup|grad f|^4 length), contour C(0.5, 0.2)",
                   ["grid_h", "eps", "field", "K", "ratio_lo", "ratio_hi"])
    Ks = {}
    for h in (grid_h, grid_h / 2):
        vals = []
        for e in eps_sweep:
            sol = _two_hole(e, h, metric)
            for k in fields[1:]:
                K = expansion_constant(sol, k, Contour(0.5, 0.2))
                vals.append(K)
                ktable.rows.append([h, e, k.kind, K, 1 - k_stability, 1 + k_stability])
        Ks[h] = max(vals)
    ratio = Ks[grid_h / 2] / Ks[grid_h]
    res.check("fitted K stable under refinement (ratio)", ratio, [1 - k_stability, 1 + k_stability], "in",
              note=f"K={Ks[grid_h]:.6g} (h), {Ks[grid_h / 2]:.6g} (h/2)")
    res.tables["expansion_constant"] = ktable

    odd = AnnularDomain(Circle(0, 1.0), (Circle(0.4j, 0.1), Circle(-0.4j, 0.1)), 0.0, (0.05, -0.05))
    sol, _ = _solve(odd, metric, CartesianGrid.for_domain(odd, grid_h))
    chi = KillingField("Y", radius)
    kill = 0.0
    for g in (Contour(0, 0.7, phase=math.pi / 512), Contour(0.5, 0.2, phase=math.pi / 512),
              Contour(-0.5, 0.25, phase=math.pi / 512)):
        r = horizontal_flux(sol, chi, g, 512)
        kill = max(kill, abs(r.value), abs(r.alternate))
    res.check("chi_Y flux of conjugation-odd graph on real-axis-symmetric contours", kill, kill_tol, "<")
    return res


# --- forces ---------------------------------------------------------------------

def forces_suite(seed: int = 7, n: int | None = None, trials: int = 10000, cases=("case1", "case2", "case3b"),
                 route_tol: float = 1e-9, route_configs: int = 20, scan_rows: bool = True) -> SuiteResult:
    res = SuiteResult("forces", {"seed": seed, "n": n, "trials": trials, "cases": list(cases),
                                 "route_tol": route_tol, "route_configs": route_configs,
                                 "scan_rows": scan_rows})
    rng = np.random.default_rng(seed)
    route = Table("closed form vs contour route (relative error w.r.t. max(1,|F|))",
                  ["case", "config", "neck", "closed_form", "contour", "rel_error", "bound"])
    scans = {}
    for case in cases:
        worst = 0.0
        for k in range(route_configs):
            m = int(rng.integers(2 if case == "case3b" else 1, 5))
            cfg = fz.sample_configuration(case, m, rng)
            for i in range(cfg.n):
                a = fz._force(cfg, i)
                b = fz.force_via_contour(cfg, i)
                err = abs(a - b) / max(1.0, abs(a))
                worst = max(worst, err)
                route.rows.append([case, k, i, a, b, err, route_tol])
        res.check(f"route equivalence {case}", worst, route_tol, "<=")
        n_case = n if n is not None else (2 if case == "case1" else 3)
        rep = fz.equilibrium_scan(case, n_case, trials, seed, keep_rows=scan_rows)
        scans[case] = rep
        if scan_rows:
            k = range(1, n_case + 1)
            st = Table(f"{case} equilibrium scan, seed {seed}; margin is the force on the lowest neck",
                       [f"y{j}" for j in k] + [f"c{j}" for j in k] + [f"F{j}" for j in k]
                       + ["margin", "margin_lower_bound"])
            st.rows = [r + [0.0] for r in rep.rows]
            res.tables[f"scan_{case}"] = st
        res.check(f"equilibrium scan {case} N={n_case}: min F at lowest neck", rep.min_margin, 0.0, ">",
                  note=f"{trials} trials")
        if case == "case2":
            res.check("case2: min (F_1 - c_1^2)", rep.extra["min_F1_minus_c1_squared"], 0.0, ">=")
    res.tables["route_equivalence"] = route

    if "case1" in cases:
        eq = fz.force_via_contour(fz.NeckConfiguration((1.0,), (1.0,)), 0)
        res.check("N=1, y=1 equilibrium force (contour)", abs(eq), 1e-12, "<")
        res.check("N=1, y=1 equilibrium force (closed form)",
                  abs(fz.force_case1(fz.NeckConfiguration((1.0,), (1.0,)))), 1e-12, "<")
        sym = fz.NeckConfiguration((0.3, 0.8, 1.25, 1 / 0.3), (1.0, 2.0, 2.0, 1.0))
        fv = fz.force_vector(sym).forces
        res.check("inversion symmetry F_i = -F_{N+1-i}", float(np.max(np.abs(fv + fv[::-1]))), 1e-12, "<=")
        worst = 0.0
        for k in range(route_configs):
            cfg = fz.sample_configuration("case1", int(rng.integers(1, 5)), rng)
            for i in range(cfg.n):
                a, b = fz.residue_hand_expansion(cfg, i), fz.residue_via_quadrature(cfg, i)
                worst = max(worst, abs(a - b) / max(1.0, abs(a)))
        res.check("residue hand expansion vs quadrature", worst, 1e-9, "<=")

        cfg = fz.NeckConfiguration((0.5, 2.0), (1.0, 3.0), 0.0, "case1")
        sweep = [1e-3, 1e-4, 1e-5, 1e-6]
        rows = fz.cross_term_decay(sweep + [1e-8], cfg)
        ratios = [abs(r["cross_normalised"]) for r in rows[:4]]
        mono = all(b < a for a, b in zip(ratios, ratios[1:]))
        res.check("cross term / (t/|log t|)^2 decreasing over the sweep", float(mono), 1.0, "==")
        res.check("quadratic term limit vs force_case1 at t=1e-8 (relative)", rows[-1]["relative_error"],
                  1e-6, "<")
        res.check("residue-free check int (1-z^2)/z^2 over C(p1, eps)",
                  abs(fz.residue_free_check(0.5j, 0.2)), 1e-12, "<")
        ct = Table("cross-term decay for y=(0.5,2), c=(1,3)",
                   ["t", "cross", "cross_normalised", "quadratic", "quadratic_normalised", "closed_form",
                    "relative_error", "bound_at_t_1e-8"])
        ct.rows = [[r[c] for c in ct.columns[:-1]] + [1e-6] for r in rows]
        res.tables["cross_term_decay"] = ct
    scan_table = Table("equilibrium scans", ["case", "n", "trials", "seed", "min_margin", "bound"])
    for case, rep in scans.items():
        scan_table.rows.append([case, rep.n, rep.trials, rep.seed, rep.min_margin, 0.0])
    res.tables["equilibrium_scans"] = scan_table
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "residues": residues_suite,
    "laurent": laurent_suite,
    "barriers": barriers_suite,
    "pde": pde_suite,
    "height": height_suite,
    "flux": flux_suite,
    "forces": forces_suite,
}
