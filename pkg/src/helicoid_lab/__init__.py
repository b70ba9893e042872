"""Numerical laboratory for minimal graphs, Killing-field fluxes and neck force balance."""

__version__ = "0.1.0"

from . import complexkit, domains, errors, flux, forces, geometry, harmonic, msegraph  # noqa: E402,F401

__all__ = ["complexkit", "domains", "errors", "flux", "forces", "geometry", "harmonic", "msegraph",
           "__version__"]
