"""Minimal graph equation: grids, residual, Newton solver and estimates."""

from .estimates import (
    HeightCheck,
    catenoid_height_instance,
    empirical_schauder,
    height2_bound,
    height_bound,
    height_check,
    neck_hole_height,
    ring_gradient_search,
)
from .grids import CartesianGrid, CoverSector, GraphFunction, LogPolarGrid
from .residual import mse_residual, residual_sup
from .solver import SolveReport, catenoid_profile, solve_catenoid_annulus, solve_graph

__all__ = [
    "CartesianGrid",
    "CoverSector",
    "GraphFunction",
    "HeightCheck",
    "LogPolarGrid",
    "SolveReport",
    "catenoid_height_instance",
    "catenoid_profile",
    "empirical_schauder",
    "height2_bound",
    "height_bound",
    "height_check",
    "mse_residual",
    "neck_hole_height",
    "residual_sup",
    "ring_gradient_search",
    "solve_catenoid_annulus",
    "solve_graph",
]
