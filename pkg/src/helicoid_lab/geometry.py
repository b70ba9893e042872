"""Conformal model of S^2(r) x R, its Killing fields, and the universal cover of C*.

A point of the universal cover is stored as (modulus, argument) with the
argument never reduced modulo 2*pi, so that one full turn around the origin
lands on a different sheet.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidScaleError

__all__ = [
    "CoverPoint",
    "ConformalMetric",
    "KillingField",
    "MoebiusMap",
    "VERTICAL",
    "cover_log",
    "cover_exp",
    "apply_involution",
    "killing_at",
    "blowup_map",
    "continued_argument",
]


@dataclass(frozen=True)
class CoverPoint:
    modulus: float
    argument: float

    def __post_init__(self):
        if not (self.modulus > 0 and math.isfinite(self.modulus)):
            raise ValueError(f"modulus must be positive and finite, got {self.modulus!r}")
        if not math.isfinite(self.argument):
            raise ValueError("argument must be finite")

    @classmethod
    def from_complex(cls, z: complex, argument: float | None = None) -> "CoverPoint":
        """Lift ``z`` to the cover; the principal argument is used unless one is given."""
        z = complex(z)
        if z == 0:
            raise ValueError("0 has no lift to the universal cover")
        if argument is None:
            argument = cmath.phase(z)
        elif abs(cmath.exp(1j * argument) - z / abs(z)) > 1e-9:
            raise ValueError("argument is not a determination of arg z")
        return cls(abs(z), float(argument))

    @property
    def z(self) -> complex:
        return self.modulus * cmath.exp(1j * self.argument)

    def conjugate(self) -> "CoverPoint":
        return CoverPoint(self.modulus, -self.argument)

    def invert(self) -> "CoverPoint":
        return CoverPoint(1.0 / self.modulus, self.argument)


def cover_log(p: CoverPoint) -> complex:
    return complex(math.log(p.modulus), p.argument)


def cover_exp(w: complex) -> CoverPoint:
    """Inverse of :func:`cover_log`."""
    return CoverPoint(math.exp(w.real), w.imag)


def apply_involution(p: CoverPoint, which: Literal["conjugate", "invert"]) -> CoverPoint:
    if which == "conjugate":
        return p.conjugate()
    if which == "invert":
        return p.invert()
    raise ValueError(f"unknown involution {which!r}")


def continued_argument(z, anchor: CoverPoint | float):
    """Arguments of the samples ``z`` obtained by continuity from ``anchor``.

    ``z`` is an ordered 1-D path (e.g. contour nodes). The first sample takes the
    determination closest to the anchor's argument; the rest follow by unwrapping,
    so no principal-branch jump is ever introduced.
    """
    z = np.asarray(z, dtype=complex)
    anchor_arg = anchor.argument if isinstance(anchor, CoverPoint) else float(anchor)
    raw = np.unwrap(np.angle(z))
    shift = 2 * np.pi * np.round((anchor_arg - raw[0]) / (2 * np.pi))
    return raw + shift


@dataclass(frozen=True)
class ConformalMetric:
    """lambda^2 |dz|^2 with lambda = 2 r^2 / (r^2 + |z|^2); radius=inf is euclidean."""

    radius: float = math.inf

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive (or inf)")

    @property
    def is_euclidean(self) -> bool:
        return math.isinf(self.radius)

    @classmethod
    def euclidean(cls) -> "ConformalMetric":
        return cls(math.inf)

    @classmethod
    def spherical(cls, radius: float) -> "ConformalMetric":
        return cls(float(radius))

    def factor(self, z):
        z = np.asarray(z)
        if self.is_euclidean:
            return np.ones(z.shape)
        r2 = self.radius ** 2
        return 2 * r2 / (r2 + np.abs(z) ** 2)

    def log_gradient(self, z):
        """(d/dx log lambda, d/dy log lambda) at ``z``."""
        z = np.asarray(z, dtype=complex)
        if self.is_euclidean:
            zero = np.zeros(z.shape)
            return zero, zero.copy()
        denom = self.radius ** 2 + np.abs(z) ** 2
        return -2 * z.real / denom, -2 * z.imag / denom

    def radial_log_derivative(self, rho):
        """rho * d/drho log lambda, the log-polar (s = log rho) derivative."""
        rho = np.asarray(rho, dtype=float)
        if self.is_euclidean:
            return np.zeros(rho.shape)
        return -2 * rho ** 2 / (self.radius ** 2 + rho ** 2)


VERTICAL = "vertical"


@dataclass(frozen=True)
class KillingField:
    kind: Literal["vertical", "X", "Y", "E"]
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in ("vertical", "X", "Y", "E"):
            raise ValueError(f"unknown Killing field {self.kind!r}")
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def is_horizontal(self) -> bool:
        return self.kind != "vertical"

    def __call__(self, z):
        """Horizontal field as a complex array (vectorised)."""
        if not self.is_horizontal:
            raise ValueError("the vertical field has no complex representation")
        z = np.asarray(z, dtype=complex)
        inv_r2 = 0.0 if math.isinf(self.radius) else 1.0 / self.radius ** 2
        if self.kind == "X":
            return 0.5 * (1 + z * z * inv_r2)
        if self.kind == "Y":
            return 0.5j * (1 - z * z * inv_r2)
        if math.isinf(self.radius):
            return np.zeros(z.shape, dtype=complex)
        return 1j * z / self.radius


def killing_at(k: KillingField, z: complex):
    """Value of ``k`` at ``z``: a complex number, or ``VERTICAL`` for the unit vertical field."""
    if not k.is_horizontal:
        return VERTICAL
    return complex(k(complex(z)))


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d), stored with a d - b c = 1."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_coefficients(cls, a, b, c, d) -> "MoebiusMap":
        det = complex(a) * complex(d) - complex(b) * complex(c)
        if det == 0:
            raise ValueError("degenerate Moebius map (ad - bc = 0)")
        s = cmath.sqrt(det)
        return cls(complex(a) / s, complex(b) / s, complex(c) / s, complex(d) / s)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = (self.a * z + self.b) / (self.c * z + self.d)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        out = 1.0 / (self.c * z + self.d) ** 2
        return complex(out) if out.ndim == 0 else out

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self o other."""
        return MoebiusMap.from_coefficients(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def pushforward(self, field):
        """Vector field phi_* X, i.e. z -> phi'(phi^-1 z) X(phi^-1 z)."""
        inv = self.inverse()

        def pushed(z):
            w = inv(z)
            return self.derivative(w) * field(w)

        return pushed


def rotation_E_to_X(radius: float) -> MoebiusMap:
    """Rotation by pi/2 about the x-axis, mapping the equator E onto the circle X."""
    return MoebiusMap.from_coefficients(radius, 1j * radius ** 2, 1j, radius)


def blowup_map(mu: float) -> MoebiusMap:
    """z -> phi(z)/mu with phi(z) = (z - i)/(1 - i z), the blow-up at i."""
    if not (mu > 0 and math.isfinite(mu)):
        raise InvalidScaleError(f"blow-up scale must be positive, got {mu!r}")
    return MoebiusMap.from_coefficients(1.0 / mu, -1j / mu, -1j, 1.0)
