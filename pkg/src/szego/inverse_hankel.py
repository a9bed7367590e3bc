"""Hankel matrices with prescribed spectra.

Given interlaced ``lambda_1 > mu_1 > ... > lambda_N > mu_N > 0`` and angles,
``c_n = X A^n Y`` yields ``Gamma_c`` with singular values ``lambda`` and
``Gamma~_c`` with singular values ``mu``.  Real sequences with prescribed
signed eigenvalues come from angles restricted to ``{0, pi}``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InterlacingViolated, NotReal
from .hankel import RANK_TOL, SpectralCoordinates, build_pair, hermitian_eig
from .symbol import DEFAULT_TAIL_TOL, FourierSymbol
from .transform import auto_length, check_interlacing, inverse_model, nu_from_actions, reconstruct_coeffs


def build_symbol(lam, mu, phi, theta, M: int | None = None, tol: float = DEFAULT_TAIL_TOL) -> FourierSymbol:
    """Sequence whose Hankel and shifted Hankel matrices have rank ``N`` and
    singular values ``lam`` and ``mu``.

    With ``M=None`` the length is the smallest power of two whose tail
    estimate is below ``tol``.
    """
    lam, mu = check_interlacing(lam, mu)
    phi = np.broadcast_to(np.asarray(phi, dtype=float), lam.shape)
    theta = np.broadcast_to(np.asarray(theta, dtype=float), lam.shape)
    s = SpectralCoordinates(lam, mu, nu_from_actions(lam, mu), phi, theta)
    model = inverse_model(s)
    if M is None:
        M = auto_length(model, tol)
    return reconstruct_coeffs(model, M)


def build_selfadjoint(zeta, gamma, M: int | None = None, tol: float = DEFAULT_TAIL_TOL) -> FourierSymbol:
    """Real sequence with ``Gamma_c`` eigenvalues ``zeta`` and ``Gamma~_c``
    eigenvalues ``gamma`` (signed, ``|zeta_1| > |gamma_1| > ... > 0``)."""
    zeta = np.asarray(zeta, dtype=float).ravel()
    gamma = np.asarray(gamma, dtype=float).ravel()
    if np.any(zeta == 0) or np.any(gamma == 0):
        raise InterlacingViolated("eigenvalues must be nonzero")
    phi = np.where(zeta > 0, 0.0, np.pi)
    theta = np.where(gamma > 0, 0.0, np.pi)
    u = build_symbol(np.abs(zeta), np.abs(gamma), phi, theta, M, tol)
    residue = float(np.max(np.abs(u.coeffs.imag)))
    if residue > 1e-8:
        raise NotReal(f"imaginary residue {residue:.3e} in a self-adjoint reconstruction")
    return FourierSymbol(u.coeffs.real, u.truncation_tol)


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    rank_gamma: int
    rank_shifted: int
    deviation_gamma: float
    deviation_shifted: float
    tol: float

    @property
    def deviation(self) -> float:
        return max(self.deviation_gamma, self.deviation_shifted)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "rank_gamma": self.rank_gamma,
            "rank_shifted": self.rank_shifted,
            "deviation_gamma": self.deviation_gamma,
            "deviation_shifted": self.deviation_shifted,
            "tol": self.tol,
        }


def _singular_values(vals: np.ndarray, scale: float, rank_tol: float) -> np.ndarray:
    return np.sqrt(vals[vals > rank_tol * scale])


def _compare(found: np.ndarray, target: np.ndarray) -> float:
    n = max(found.size, target.size)
    a = np.zeros(n)
    b = np.zeros(n)
    a[: found.size] = found
    b[: target.size] = np.sort(target)[::-1]
    return float(np.max(np.abs(a - b))) if n else 0.0


def verify_singular_values(c: FourierSymbol, lam, mu, tol: float = 1e-8, rank_tol: float = RANK_TOL) -> VerificationReport:
    """Compare the positive singular values of ``Gamma_c`` and ``Gamma~_c``
    with targets; ranks must agree and deviations stay within ``tol``."""
    lam = np.asarray(lam, dtype=float).ravel()
    mu = np.asarray(mu, dtype=float).ravel()
    pair = build_pair(c)
    vals_h = hermitian_eig(pair.h2).values
    vals_k = hermitian_eig(pair.k2).values
    scale = max(float(vals_h[0]), np.finfo(float).tiny)
    sv_h = _singular_values(vals_h, scale, rank_tol)
    sv_k = _singular_values(vals_k, scale, rank_tol)
    dev_h = _compare(sv_h, lam)
    dev_k = _compare(sv_k, mu)
    passed = sv_h.size == lam.size and sv_k.size == mu.size and max(dev_h, dev_k) <= tol
    return VerificationReport(passed, int(sv_h.size), int(sv_k.size), dev_h, dev_k, tol)


def signed_eigenvalues(c: FourierSymbol, rank: int) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero eigenvalues of the real symmetric ``Gamma_c`` and ``Gamma~_c``,
    ordered by decreasing modulus."""
    pair = build_pair(c)
    out = []
    for G in (pair.gamma.real, pair.gamma_shifted.real):
        vals = np.linalg.eigvalsh(G)
        out.append(vals[np.argsort(-np.abs(vals), kind="stable")][:rank])
    return out[0], out[1]
