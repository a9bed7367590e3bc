"""Seeded generators of generic test data.

Random rational symbols are drawn with poles in a disc and then screened
for numerical genericity: samples whose spectrum is nearly degenerate are
redrawn, because the action-angle coordinates are ill-conditioned there.
"""
from __future__ import annotations

import numpy as np

from .errors import NotGeneric
from .hankel import SpectralCoordinates, spectral_data
from .symbol import FourierSymbol, RationalSymbol, expand_rational
from .transform import inverse_model, nu_from_actions

L2SQ = 0.5


def conditioning_margin(s: SpectralCoordinates) -> float:
    """Smallest relative separation in ``lambda_1^2 > mu_1^2 > ... > 0`` and
    in the normalization constraints."""
    seq = np.empty(2 * s.rank + 1)
    seq[0:-1:2] = s.lam**2
    seq[1:-1:2] = s.mu**2
    seq[-1] = 0.0
    gaps = -np.diff(seq) / seq[0]
    return float(min(np.min(gaps), np.min(s.nu), 1.0 - np.sum(s.nu**2)))


def random_rational(rng: np.random.Generator, N: int, pole_radius: float = 0.8) -> RationalSymbol:
    radii = pole_radius * np.sqrt(rng.uniform(0.05, 1.0, N))
    poles = radii * np.exp(2j * np.pi * rng.uniform(size=N))
    den = np.array([1.0 + 0j])
    for p in poles:
        den = np.convolve(den, [1.0, -p])
    num = rng.normal(size=N) + 1j * rng.normal(size=N)
    return RationalSymbol(num, den)


def random_generic_symbol(
    rng: np.random.Generator,
    N: int,
    M: int = 128,
    pole_radius: float = 0.8,
    margin: float = 1e-7,
    max_tries: int = 1000,
) -> tuple[RationalSymbol, FourierSymbol, SpectralCoordinates]:
    """Draw a rank-``N`` rational symbol, scaled to ``||u||^2 = 1/2``, whose
    spectral data clear ``margin``."""
    for _ in range(max_tries):
        r = random_rational(rng, N, pole_radius)
        u = expand_rational(r, M)
        scale = np.sqrt(L2SQ) / u.norm()
        r = RationalSymbol(r.num * scale, r.den)
        u = expand_rational(r, M).resized(M)
        try:
            s = spectral_data(u)
        except NotGeneric:
            continue
        if s.rank == N and conditioning_margin(s) >= margin:
            return r, u, s
    raise RuntimeError(f"no generic rank-{N} sample after {max_tries} draws")


def random_actions(rng: np.random.Generator, N: int, top: float = 2.0, margin: float = 0.05) -> tuple[np.ndarray, np.ndarray]:
    """Strictly interlaced ``lambda_1 > mu_1 > ... > mu_N > 0`` with
    relative separations at least ``margin``."""
    while True:
        seq = np.sort(rng.uniform(0.0, top, 2 * N))[::-1]
        full = np.append(seq, 0.0)
        if np.min(-np.diff(full)) >= margin * top:
            return seq[0::2].copy(), seq[1::2].copy()


def random_angles(rng: np.random.Generator, N: int) -> tuple[np.ndarray, np.ndarray]:
    return rng.uniform(-np.pi, np.pi, N), rng.uniform(-np.pi, np.pi, N)


def random_flow_symbol(
    rng: np.random.Generator,
    N: int,
    M: int = 128,
    pole_radius: float = 0.7,
    horizon: float = 10.0,
    radius_cap: float = 0.85,
    max_tries: int = 1000,
) -> tuple[RationalSymbol, FourierSymbol, SpectralCoordinates]:
    """Like :func:`random_generic_symbol`, but also rejects data whose poles
    approach the unit circle before ``horizon``; a truncated Galerkin system
    of length ``M`` cannot resolve those."""
    from .flow import max_pole_modulus

    times = np.linspace(0.0, horizon, 201)
    for _ in range(max_tries):
        r, u, s = random_generic_symbol(rng, N, M, pole_radius)
        if max_pole_modulus(s, times) <= radius_cap:
            return r, u, s
    raise RuntimeError(f"no admissible rank-{N} flow sample after {max_tries} draws")


def random_targets(
    rng: np.random.Generator,
    N: int,
    top: float = 1.5,
    signed: bool = False,
    radius_cap: float = 0.95,
    max_tries: int = 1000,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Interlaced actions with angles, screened so that the reconstructed
    sequence decays like ``radius_cap^n`` or faster.

    With ``signed`` the angles are drawn from ``{0, pi}``, which encodes the
    sign pattern of a real self-adjoint target.
    """
    for _ in range(max_tries):
        lam, mu = random_actions(rng, N, top)
        if signed:
            phi = np.pi * rng.integers(0, 2, N)
            theta = np.pi * rng.integers(0, 2, N)
        else:
            phi, theta = random_angles(rng, N)
        s = SpectralCoordinates(lam, mu, nu_from_actions(lam, mu), phi, theta)
        if inverse_model(s).spectral_radius <= radius_cap:
            return lam, mu, phi, theta
    raise RuntimeError(f"no rank-{N} target with spectral radius <= {radius_cap} after {max_tries} draws")
