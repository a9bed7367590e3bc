"""Spectral tools for the cubic Szegő equation on the circle.

The forward map sends a generic rational symbol to its action-angle
coordinates ``(lambda, mu, phi, theta)``; the inverse map rebuilds the
symbol from them.  The flow is linear in the angles, which gives an exact
solver next to a direct RK4 integrator.
"""
from .errors import NotGeneric, SzegoError
from .flow import integrate_direct, solve_exact
from .hankel import SpectralCoordinates, spectral_data
from .inverse_hankel import build_selfadjoint, build_symbol, verify_singular_values
from .symbol import FourierSymbol, RationalSymbol, expand_rational, functionals, szego_nonlinearity
from .transform import inverse_model, reconstruct_coeffs, reconstruct_rational

__all__ = [
    "FourierSymbol",
    "NotGeneric",
    "RationalSymbol",
    "SpectralCoordinates",
    "SzegoError",
    "build_selfadjoint",
    "build_symbol",
    "expand_rational",
    "functionals",
    "integrate_direct",
    "inverse_model",
    "reconstruct_coeffs",
    "reconstruct_rational",
    "solve_exact",
    "spectral_data",
    "szego_nonlinearity",
    "verify_singular_values",
]
