"""Inverse of the action-angle map: ``u(z) = X (I - zA)^{-1} Y``.

Also the generating function ``J(x) = ((I - x H_u^2)^{-1} 1 | 1)`` in its
resolvent, sum and product forms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InterlacingViolated, NearPole, SpectralRadiusExceeded
from .hankel import SpectralCoordinates, build_pair
from .symbol import DEFAULT_TAIL_TOL, FourierSymbol, RationalSymbol

POLE_GUARD = 1e-8


def check_interlacing(lam, mu) -> tuple[np.ndarray, np.ndarray]:
    lam = np.asarray(lam, dtype=float).ravel()
    mu = np.asarray(mu, dtype=float).ravel()
    if lam.size != mu.size or lam.size == 0:
        raise InterlacingViolated("lambda and mu must be nonempty and of equal length")
    seq = np.empty(2 * lam.size)
    seq[0::2] = lam
    seq[1::2] = mu
    if not np.all(np.isfinite(seq)) or np.any(np.diff(seq) >= 0) or seq[-1] <= 0:
        raise InterlacingViolated(
            "need lambda_1 > mu_1 > lambda_2 > ... > lambda_N > mu_N > 0, got "
            + ", ".join(f"{x:.6g}" for x in seq)
        )
    return lam, mu


def nu_from_actions(lam, mu) -> np.ndarray:
    """Normalization constants from the actions alone."""
    lam, mu = check_interlacing(lam, mu)
    l2, m2 = lam**2, mu**2
    out = np.empty(lam.size)
    for j in range(lam.size):
        prod = 1.0 - m2[j] / l2[j]
        for k in range(lam.size):
            if k != j:
                prod *= (l2[j] - m2[k]) / (l2[j] - l2[k])
        out[j] = np.sqrt(prod)
    return out


def b_product_form(lam, mu) -> np.ndarray:
    lam, mu = check_interlacing(lam, mu)
    l2, m2 = lam**2, mu**2
    out = np.empty(lam.size)
    for ell in range(lam.size):
        prod = 1.0 / (l2[ell] - m2[ell])
        for k in range(lam.size):
            if k != ell:
                prod *= (m2[ell] - m2[k]) / (m2[ell] - l2[k])
        out[ell] = prod
    return out


def b_from_actions(lam, mu, nu) -> np.ndarray:
    """``b_l = ||g_l||^2 = sum_j lambda_j^2 nu_j^2 / (lambda_j^2 - mu_l^2)^2``."""
    lam, mu = check_interlacing(lam, mu)
    nu = np.asarray(nu, dtype=float)
    l2, m2 = lam**2, mu**2
    return np.sum((l2 * nu**2)[:, None] / (l2[:, None] - m2[None, :]) ** 2, axis=0)


@dataclass(frozen=True)
class InverseModel:
    X: np.ndarray
    Y: np.ndarray
    A: np.ndarray
    b: np.ndarray

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.A))))

    def to_json(self) -> dict:
        pair = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        return {
            "X": [pair(z) for z in self.X],
            "Y": [pair(z) for z in self.Y],
            "A": [[pair(z) for z in row] for row in self.A],
        }


def a_matrix(lam, mu, nu, b, phi, theta) -> np.ndarray:
    """Compressed-shift matrix in the basis ``e^{i phi_j / 2} e_j``.

    ``phi`` and ``theta`` may carry a leading batch axis, in which case a
    stack of matrices is returned.
    """
    l2, m2 = lam**2, mu**2
    # weight[j, k, l] = lambda_k nu_j nu_k mu_l / (b_l (l2_j - m2_l)(l2_k - m2_l))
    d = 1.0 / (l2[:, None] - m2[None, :])
    weight = (
        (nu[:, None, None] * d[:, None, :])
        * (lam * nu)[None, :, None]
        * d[None, :, :]
        * (mu / b)[None, None, :]
    )
    phase_k = np.exp(-1j * np.asarray(phi))
    phase_l = np.exp(-1j * np.asarray(theta))
    return np.einsum("jkl,...k,...l->...jk", weight, phase_k, phase_l)


def inverse_model(s: SpectralCoordinates) -> InverseModel:
    lam, mu = check_interlacing(s.lam, s.mu)
    nu = nu_from_actions(lam, mu)
    b = b_from_actions(lam, mu, nu)
    N = lam.size
    l2, m2 = lam**2, mu**2
    A = np.zeros((N, N), dtype=complex)
    for j in range(N):
        for k in range(N):
            acc = 0j
            for ell in range(N):
                acc += (
                    lam[k] * nu[j] * nu[k] * np.exp(-1j * (s.phi[k] + s.theta[ell])) * mu[ell]
                    / (b[ell] * (l2[j] - m2[ell]) * (l2[k] - m2[ell]))
                )
            A[j, k] = acc
    X = lam * nu * np.exp(-1j * s.phi)
    Y = nu.astype(complex)
    return InverseModel(X, Y, A, b)


def _check_radius(m: InverseModel):
    rho = m.spectral_radius
    if rho >= 1.0:
        raise SpectralRadiusExceeded(f"spectral radius of A is {rho:.6g}")
    return rho


def reconstruct_coeffs(m: InverseModel, M: int) -> FourierSymbol:
    """``c_n = X A^n Y`` for ``n < M``."""
    _check_radius(m)
    c = np.empty(M, dtype=complex)
    v = m.Y.copy()
    for n in range(M):
        c[n] = m.X @ v
        v = m.A @ v
    return FourierSymbol(c, _model_tail(m, M))


def _model_tail(m: InverseModel, M: int) -> float:
    rho = m.spectral_radius
    if rho == 0.0:
        return 0.0
    # Gelfand-type estimate |c_n| <= |X| |A^M| |Y| rho^(n-M)
    power = np.linalg.matrix_power(m.A, M)
    head = np.linalg.norm(m.X) * np.linalg.norm(power, 2) * np.linalg.norm(m.Y)
    return float(head**2 / (1.0 - rho**2))


def auto_length(m: InverseModel, tol: float = DEFAULT_TAIL_TOL, minimum: int = 64, cap: int = 4096) -> int:
    """Smallest power-of-two length (at least ``minimum``) whose tail
    estimate is below ``tol``.

    Raises :class:`SpectralRadiusExceeded` when even ``cap`` coefficients
    leave a tail above ``tol``; a silently truncated sequence would fail
    verification for reasons unrelated to the data.
    """
    _check_radius(m)
    M = minimum
    while _model_tail(m, M) > tol:
        if M >= cap:
            raise SpectralRadiusExceeded(
                f"spectral radius {m.spectral_radius:.6g} needs more than {cap} coefficients for tail {tol:g}"
            )
        M *= 2
    return M


def _poly_mul(p, q):
    return np.convolve(p, q)


def _char_poly_and_adjugate(A: np.ndarray):
    """Faddeev-LeVerrier: ``det(I - zA) = sum_k d_k z^k`` and
    ``adj(I - zA) = sum_k B_k z^k``."""
    N = A.shape[0]
    eye = np.eye(N, dtype=complex)
    # det(sI - A) = s^N + a_1 s^{N-1} + ... + a_N
    coeffs = [1.0 + 0j]
    Mk = eye.copy()
    mats = [Mk]
    for k in range(1, N + 1):
        AM = A @ Mk
        ak = -np.trace(AM) / k
        coeffs.append(ak)
        Mk = AM + ak * eye
        mats.append(Mk)
    # adj(sI - A) = sum_{k=0}^{N-1} mats[k] s^{N-1-k}; substitute s = 1/z
    den = np.array(coeffs)
    adj = mats[:N]
    return den, adj


def reconstruct_rational(m: InverseModel) -> RationalSymbol:
    """``u = X adj(I - zA) Y / det(I - zA)``."""
    _check_radius(m)
    den, adj = _char_poly_and_adjugate(m.A)
    # det(I - zA) = z^N det(z^{-1} I - A) has coefficient a_k on z^k,
    # adj(I - zA) = z^{N-1} adj(z^{-1} I - A) has coefficient mats[k] on z^k
    num = np.array([m.X @ Bk @ m.Y for Bk in adj])
    return RationalSymbol(num, den)


def sigma_of(m: InverseModel) -> complex:
    """Coefficient ``sigma(u)`` in ``u = A(z) / (1 - sigma z + z^2 R(z))``."""
    return complex(np.trace(m.A))


def generating_J(u: FourierSymbol, x: float) -> float:
    """Resolvent form ``((I - x H_u^2)^{-1} 1 | 1)``."""
    pair = build_pair(u)
    rhs = np.zeros(u.M, dtype=complex)
    rhs[0] = 1.0
    lhs = np.eye(u.M) - x * pair.h2
    w = np.linalg.solve(lhs, rhs)
    if not np.all(np.isfinite(w)):
        raise NearPole(f"x = {x} hits a pole of J")
    return float(w[0].real)


def _pole_guard(lam_sq, x):
    dist = np.abs(1.0 - lam_sq * x)
    if np.any(dist < POLE_GUARD):
        raise NearPole(f"x = {x} within {POLE_GUARD} of 1/lambda_j^2")


def generating_J_product(lam, mu, x: float) -> float:
    lam_sq = np.asarray(lam, dtype=float) ** 2
    mu_sq = np.asarray(mu, dtype=float) ** 2
    _pole_guard(lam_sq, x)
    return float(np.prod((1.0 - mu_sq * x) / (1.0 - lam_sq * x)))


def generating_J_sum(lam, nu, x: float) -> float:
    """``1 + x sum_j lambda_j^2 nu_j^2 / (1 - lambda_j^2 x)``."""
    lam_sq = np.asarray(lam, dtype=float) ** 2
    nu_sq = np.asarray(nu, dtype=float) ** 2
    _pole_guard(lam_sq, x)
    return float(1.0 + x * np.sum(lam_sq * nu_sq / (1.0 - lam_sq * x)))


def generating_J_partial_fractions(lam, nu, x: float) -> float:
    """``1 - sum nu_j^2 + sum nu_j^2 / (1 - lambda_j^2 x)``."""
    lam_sq = np.asarray(lam, dtype=float) ** 2
    nu_sq = np.asarray(nu, dtype=float) ** 2
    _pole_guard(lam_sq, x)
    return float(1.0 - np.sum(nu_sq) + np.sum(nu_sq / (1.0 - lam_sq * x)))


def log_derivative_J(lam, mu, x: float) -> float:
    """``J'(x)/J(x) = sum_j lambda_j^2/(1 - lambda_j^2 x) - mu_j^2/(1 - mu_j^2 x)``."""
    lam_sq = np.asarray(lam, dtype=float) ** 2
    mu_sq = np.asarray(mu, dtype=float) ** 2
    _pole_guard(lam_sq, x)
    return float(np.sum(lam_sq / (1.0 - lam_sq * x) - mu_sq / (1.0 - mu_sq * x)))
