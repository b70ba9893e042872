"""Planar multiply-connected domains: a disk with finitely many disks removed."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InvalidDomainError

NEUMANN = "neumann"
BoundaryCondition = Union[float, str, None]


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise InvalidDomainError(f"circle radius must be positive, got {self.radius!r}")

    def signed_distance(self, z):
        """Positive outside the circle, negative inside."""
        return np.abs(np.asarray(z) - self.center) - self.radius

    def points(self, n: int, phase: float = 0.0):
        theta = phase + 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * theta)


@dataclass(frozen=True)
class AnnularDomain:
    """Outer disk minus holes; each boundary component carries a condition.

    A condition is a float (Dirichlet value), ``"neumann"`` (zero normal
    derivative) or ``None`` when the domain is used purely geometrically.
    """

    outer: Circle
    holes: tuple = ()
    outer_bc: BoundaryCondition = None
    hole_bcs: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        bcs = tuple(self.hole_bcs) if self.hole_bcs else (None,) * len(self.holes)
        if len(bcs) != len(self.holes):
            raise InvalidDomainError("one boundary condition per hole is required")
        object.__setattr__(self, "hole_bcs", bcs)
        for i, h in enumerate(self.holes):
            if abs(h.center - self.outer.center) + h.radius >= self.outer.radius:
                raise InvalidDomainError(f"hole {i} is not strictly inside the outer circle")
            for j in range(i):
                g = self.holes[j]
                if abs(h.center - g.center) <= h.radius + g.radius:
                    raise InvalidDomainError(f"holes {j} and {i} overlap")

    @classmethod
    def annulus(cls, r_in: float, r_out: float, center: complex = 0j, inner_bc=None, outer_bc=None):
        return cls(Circle(center, r_out), (Circle(center, r_in),), outer_bc, (inner_bc,))

    @property
    def components(self):
        """Boundary circles, outer first."""
        return (self.outer,) + self.holes

    @property
    def boundary_conditions(self):
        return (self.outer_bc,) + self.hole_bcs

    def contains(self, z):
        z = np.asarray(z)
        inside = np.abs(z - self.outer.center) < self.outer.radius
        for h in self.holes:
            inside &= np.abs(z - h.center) > h.radius
        return inside

    def distance_to_boundary(self, z):
        z = np.asarray(z)
        d = self.outer.radius - np.abs(z - self.outer.center)
        for h in self.holes:
            d = np.minimum(d, np.abs(z - h.center) - h.radius)
        return d

    def component_of(self, z):
        """Index of the boundary component whose excluded region contains ``z`` (-1 if inside)."""
        z = np.asarray(z)
        out = np.full(z.shape, -1, dtype=int)
        out[np.abs(z - self.outer.center) >= self.outer.radius] = 0
        for i, h in enumerate(self.holes):
            out[np.abs(z - h.center) <= h.radius] = i + 1
        return out
