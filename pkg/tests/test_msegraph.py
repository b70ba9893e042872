import math

import numpy as np
import pytest

from helicoid_lab.complexkit import Contour
from helicoid_lab.domains import NEUMANN, AnnularDomain, Circle
from helicoid_lab.errors import (
    EstimateInapplicable,
    HypothesisViolation,
    IllPosedProblemError,
    InvalidDomainError,
    InvalidRingsError,
    NonConvergenceError,
)
from helicoid_lab.flux import vertical_flux
from helicoid_lab.geometry import ConformalMetric
from helicoid_lab.msegraph import (
    CartesianGrid,
    CoverSector,
    GraphFunction,
    LogPolarGrid,
    catenoid_height_instance,
    catenoid_profile,
    empirical_schauder,
    height_bound,
    height_check,
    mse_residual,
    neck_hole_height,
    ring_gradient_search,
    solve_catenoid_annulus,
    solve_graph,
)

SPH = ConformalMetric.spherical(1.0)
EUC = ConformalMetric.euclidean()


def _zero(grid, metric=SPH, domain=None):
    return GraphFunction(np.zeros(grid.shape), grid, metric, domain)


def test_constant_and_plane_residuals():
    g = CartesianGrid.box(-1, 1, -1, 1, 16, 16)
    assert np.nanmax(np.abs(mse_residual(GraphFunction(np.full(g.shape, 3.0), g, SPH)))) == 0
    plane = GraphFunction.from_function(lambda z, a: 0.3 * z.real - 0.2 * z.imag, g, EUC)
    assert np.nanmax(np.abs(mse_residual(plane))) < 1e-12


def test_plane_is_not_minimal_in_the_spherical_metric():
    g = CartesianGrid.box(0.2, 1, 0.2, 1, 16, 16)
    plane = GraphFunction.from_function(lambda z, a: 0.3 * z.real, g, SPH)
    assert np.nanmax(np.abs(mse_residual(plane))) > 1e-3


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
def test_helicoid_second_order_on_cartesian_grids(radius):
    metric = ConformalMetric.spherical(radius)
    errs = []
    for k in range(3):
        n = 8 * 2 ** k
        g = CartesianGrid.box(1.0, 2.0, -0.5, 0.5, n, n)
        f = GraphFunction.from_function(lambda z, a: 0.3 / (2 * math.pi) * np.angle(z), g, metric)
        errs.append(np.max(np.abs(mse_residual(f)[:: 2 ** k, :: 2 ** k][1:-1, 1:-1])))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(np.abs(ratios - 4) <= 1.0)


def test_catenoid_residual_second_order():
    errs = []
    for k in range(3):
        n = 8 * 2 ** k
        g = CartesianGrid.box(1.2, 2.2, 0.2, 1.2, n, n)
        f = GraphFunction.from_function(lambda z, a: np.arccosh(np.abs(z)), g, EUC)
        errs.append(np.max(np.abs(mse_residual(f)[:: 2 ** k, :: 2 ** k][1:-1, 1:-1])))
    assert 3.0 <= errs[1] / errs[2] <= 5.0


def test_zero_dirichlet_gives_zero():
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0.3, 0.1),), 0.0, (0.0,))
    grid = CartesianGrid.for_domain(dom, 0.05)
    sol, rep = solve_graph(dom, SPH, _zero(grid, SPH, dom))
    assert np.all(sol.values == 0) and rep.newton_iterations == 0


def test_solved_catenoid_converges_to_closed_form():
    errs = []
    for ns in (16, 32, 64):
        sol, rep = solve_catenoid_annulus(1.2, 4.0, ns, 16)
        assert rep.converged and rep.residual_norm < 1e-10 and rep.max_principle_ok
        errs.append(np.max(np.abs(sol.values - catenoid_profile(np.abs(sol.grid.points())))))
    assert 3.0 <= errs[1] / errs[2] <= 5.0
    assert vertical_flux(sol, Contour(0, 2.0)).value == pytest.approx(2 * math.pi, abs=1e-3)
    assert set(rep.flux_by_component) == {"outer", "hole1"}


def test_helicoid_strip_solve_on_cover_sector():
    t = 0.4
    hel = lambda z, a: t / (2 * math.pi) * a
    dom = CoverSector(0.5, 2.0, -1.0, 8.0, {k: hel for k in ("inner", "outer", "theta_min", "theta_max")})
    grid = LogPolarGrid.sector(0.5, 2.0, -1.0, 8.0, 16, 64)
    sol, rep = solve_graph(dom, SPH, _zero(grid, SPH, dom))
    assert np.max(np.abs(sol.values - hel(None, grid.arguments()))) < 1e-9


def test_neumann_sides_on_cover_sector():
    # helicoid: radial derivative vanishes, so Neumann data on the circles is exact
    t = 0.4
    hel = lambda z, a: t / (2 * math.pi) * a
    dom = CoverSector(0.5, 2.0, 0.1, 3.0, {"inner": NEUMANN, "outer": NEUMANN, "theta_min": hel, "theta_max": hel})
    grid = LogPolarGrid.sector(0.5, 2.0, 0.1, 3.0, 16, 32)
    sol, _ = solve_graph(dom, SPH, _zero(grid, SPH, dom))
    assert np.max(np.abs(sol.values - hel(None, grid.arguments()))) < 1e-8
    bad = CoverSector(0.5, 2.0, 0.1, 3.0, {k: NEUMANN for k in ("inner", "outer", "theta_min", "theta_max")})
    with pytest.raises(IllPosedProblemError):
        solve_graph(bad, SPH, _zero(grid, SPH, bad))


def test_domain_grid_mismatch():
    dom = AnnularDomain(Circle(0, 2.0), (Circle(0.5, 0.3),), 0.0, (1.0,))
    with pytest.raises(InvalidDomainError):
        solve_graph(dom, EUC, _zero(LogPolarGrid.annulus(0.3, 2.0, 8, 16), EUC, dom))
    with pytest.raises(InvalidDomainError):
        solve_graph(dom, EUC, _zero(CartesianGrid.box(-1, 1, -1, 1, 8, 8), EUC, dom))


def test_nonconvergence_carries_report():
    dom = AnnularDomain.annulus(1.2, 4.0, inner_bc=0.0, outer_bc=1.5)
    grid = LogPolarGrid.annulus(1.2, 4.0, 16, 16)
    with pytest.raises(NonConvergenceError) as exc:
        solve_graph(dom, EUC, _zero(grid, EUC, dom), max_iter=1)
    assert len(exc.value.report.residual_history) == 2


def test_discrete_conservation_of_vertical_flux():
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1), Circle(0.5, 0.08)), 0.0, (-0.05, -0.05))
    grids = [CartesianGrid.for_domain(dom, h) for h in (0.04, 0.02)]
    sols = [solve_graph(dom, SPH, _zero(g, SPH, dom))[0] for g in grids]
    a = vertical_flux(sols[1], Contour(0, 0.7)).value
    b = vertical_flux(sols[1], Contour(0, 0.85)).value
    grid_error = abs(vertical_flux(sols[0], Contour(0, 0.7)).value - a)
    assert abs(a - b) <= 10 * grid_error
    # homology: outer flux equals the sum over the two holes
    h1 = vertical_flux(sols[1], Contour(0, 0.25)).value
    h2 = vertical_flux(sols[1], Contour(0.5, 0.18)).value
    assert abs(a - (h1 + h2)) <= 10 * grid_error


def test_empirical_schauder_examples():
    dom = CoverSector(0.5, 2.0, -math.pi, math.pi)
    grid = LogPolarGrid.sector(0.5, 2.0, -math.pi, math.pi, 32, 64)
    assert empirical_schauder(_zero(grid, SPH, dom), 0.1) == (0.0, 0.0)
    vals = []
    for t in (0.1, 0.05, 0.025):
        f = GraphFunction.from_function(lambda z, a: t / (2 * math.pi) * a, grid, SPH, dom)
        vals.append(empirical_schauder(f, t))
    g, l = np.array(vals).T
    assert g.max() <= 2 * g.min()
    assert l.max() <= 2 * max(l.min(), 1e-12) or l.max() < 1e-10
    with pytest.raises(EstimateInapplicable):
        f = GraphFunction.from_function(lambda z, a: a, grid, SPH, dom)
        empirical_schauder(f, 0.1)


def test_height_analytic_and_degenerate():
    inst = catenoid_height_instance()
    assert inst.h == pytest.approx(4.693, abs=1e-3)
    assert inst.bound == pytest.approx(11.31, abs=1e-2) and inst.passed
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1),), 0.0, (0.0,))
    grid = CartesianGrid.for_domain(dom, 0.05)
    sol, _ = solve_graph(dom, SPH, _zero(grid, SPH, dom))
    assert tuple(height_check(dom, sol)) == (0.0, 0.0, 0.0, True)
    assert ring_gradient_search(sol, 0, 0.2, 0.5)[1] == 0.0


def test_height_on_solved_catenoid():
    r1, r2 = 1.5, 20.0
    dom = AnnularDomain.annulus(r1, r2, inner_bc=float(np.arccosh(r1) - np.arccosh(r2)), outer_bc=0.0)
    grid = LogPolarGrid.annulus(r1, r2, 96, 16)
    sol, _ = solve_graph(dom, EUC, _zero(grid, EUC, dom))
    h, phi, bound, ok = height_check(dom, sol)
    assert ok and phi == pytest.approx(2 * math.pi, rel=1e-3)
    assert bound == pytest.approx(height_bound(phi, r1, r2))


def test_height_hypothesis_clauses():
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1),), 0.2, (-0.1,))
    grid = CartesianGrid.for_domain(dom, 0.05)
    sol = _zero(grid, SPH, dom)
    with pytest.raises(HypothesisViolation) as exc:
        height_check(dom, sol)
    assert exc.value.clause == "1"
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1), Circle(0.5, 0.08)), 0.0, (-0.1, -0.3))
    with pytest.raises(HypothesisViolation) as exc:
        height_check(dom, sol)
    assert exc.value.clause == "3"
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1),), 0.0, (0.1,))
    with pytest.raises(HypothesisViolation) as exc:
        height_check(dom, sol)
    assert exc.value.clause == "2"


def test_ring_search_invalid_rings():
    dom = AnnularDomain(Circle(0, 1.0), (Circle(0, 0.1),), 0.0, (0.0,))
    sol = _zero(CartesianGrid.for_domain(dom, 0.05), SPH, dom)
    with pytest.raises(InvalidRingsError):
        ring_gradient_search(sol, 0, 0.5, 0.2)
    with pytest.raises(InvalidRingsError):
        ring_gradient_search(sol, 0, 0.02, 0.05)


def test_neck_hole_height():
    assert neck_hole_height(0.1) == pytest.approx(0.1 * math.acosh(8))


def test_csv_rows_shape():
    grid = LogPolarGrid.annulus(1.0, 2.0, 4, 8)
    rows = _zero(grid).to_csv_rows()
    assert rows.shape == (grid.shape[0] * grid.shape[1], 3)
