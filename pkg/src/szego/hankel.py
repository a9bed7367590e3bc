"""Hankel matrices of a symbol and the spectral data of ``H_u`` and ``K_u``.

``H_u h = Pi(u conj(h))`` acts on coefficient vectors as ``Gamma @ conj(h)``
with ``Gamma[n, p] = c_{n+p}``; ``K_u = H_u S`` uses the shifted matrix with
entries ``c_{n+p+1}``.  Both are antilinear, so their squares
``Gamma Gamma^*`` and ``Gamma~ Gamma~^*`` are the Hermitian operators whose
eigenvalues are ``lambda_j^2`` and ``mu_m^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.signal

from .errors import IntervalFailure, NoConvergence, NotGeneric
from .symbol import FourierSymbol

RANK_TOL = 1e-10
GAP_TOL = 1e-9


def wrap_angle(x):
    """Reduce angles to ``(-pi, pi]``."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2.0 * np.pi)


@dataclass(frozen=True)
class HankelPair:
    gamma: np.ndarray
    gamma_shifted: np.ndarray
    h2: np.ndarray
    k2: np.ndarray


def hankel_matrix(c: np.ndarray, shift: int = 0) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    first = np.zeros(c.size, dtype=complex)
    first[: c.size - shift] = c[shift:]
    return scipy.linalg.hankel(first, np.zeros(c.size, dtype=complex))


def build_pair(u: FourierSymbol) -> HankelPair:
    gamma = hankel_matrix(u.coeffs)
    shifted = hankel_matrix(u.coeffs, 1)
    # conj(Gamma) = Gamma^* because Gamma is complex symmetric
    h2 = gamma @ gamma.conj()
    k2 = shifted @ shifted.conj()
    return HankelPair(gamma, shifted, 0.5 * (h2 + h2.conj().T), 0.5 * (k2 + k2.conj().T))


def apply_h(u: FourierSymbol, h: np.ndarray) -> np.ndarray:
    """``H_u(h) = Pi(u conj(h))``, computed as a correlation of coefficients."""
    c = u.coeffs
    h = np.asarray(h, dtype=complex)
    if h.size != c.size:
        raise ValueError(f"vector length {h.size} does not match symbol length {c.size}")
    # (H_u h)_n = sum_p c_{n+p} conj(h_p); scipy switches to FFTs for long inputs
    return scipy.signal.correlate(c, h, mode="full")[c.size - 1 :]


def apply_k(u: FourierSymbol, h: np.ndarray) -> np.ndarray:
    """``K_u(h) = H_u(z h)``."""
    c = u.coeffs
    h = np.asarray(h, dtype=complex)
    if h.size != c.size:
        raise ValueError(f"vector length {h.size} does not match symbol length {c.size}")
    shifted = np.concatenate([c[1:], [0.0]])
    return scipy.signal.correlate(shifted, h, mode="full")[c.size - 1 :]


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivots) / np.where(pivots == 0, 1.0, pivots))


def _check_hermitian(P: np.ndarray) -> np.ndarray:
    P = np.asarray(P, dtype=complex)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(P)))) if P.size else 1.0
    if np.max(np.abs(P - P.conj().T), initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian")
    return P


def hermitian_eig(P: np.ndarray, method: str = "lapack") -> EigenSystem:
    """Full eigendecomposition, values descending, each vector's
    largest-modulus entry made real positive.

    ``method="jacobi"`` runs the cyclic Jacobi iteration instead of LAPACK.
    """
    P = _check_hermitian(P)
    if method == "jacobi":
        values, vectors = jacobi_eig(P)
    elif method == "lapack":
        values, vectors = np.linalg.eigh(P)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(values, kind="stable")[::-1]
    return EigenSystem(np.asarray(values)[order], _fix_phases(vectors[:, order]))


def jacobi_eig(P: np.ndarray, max_sweeps: int = 100, tol: float = 1e-13):
    """Cyclic Jacobi iteration for a Hermitian matrix.

    Returns unsorted ``(values, vectors)``.  Each rotation removes the phase
    of the pivot with a diagonal unitary, then applies the real rotation.
    """
    A = np.array(P, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    target = tol * max(np.linalg.norm(A), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.linalg.norm(A) ** 2 - np.sum(np.abs(np.diag(A)) ** 2), 0.0))
        if off <= target:
            return np.real(np.diag(A)).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                e = apq / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                U = np.array([[c, s], [-s * e.conjugate(), c * e.conjugate()]])
                cols = [p, q]
                A[:, cols] = A[:, cols] @ U
                A[cols, :] = U.conj().T @ A[cols, :]
                A[p, q] = A[q, p] = 0.0
                V[:, cols] = V[:, cols] @ U
    raise NoConvergence(f"Jacobi iteration exceeded {max_sweeps} sweeps")


@dataclass(frozen=True)
class SpectralCoordinates:
    """Actions and angles of a generic finite-rank symbol.

    ``lam``/``mu`` are the singular values of ``H_u``/``K_u`` (descending),
    ``nu`` the norms of the projections of 1 onto the eigenspaces of
    ``H_u^2``, and ``phi``/``theta`` the angles ``arg(1|e_j)^2`` and
    ``arg(u|f_m)^2`` in ``(-pi, pi]``.
    """

    lam: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    phi: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        for name in ("lam", "mu", "nu", "phi", "theta"):
            arr = np.array(getattr(self, name), dtype=float).ravel()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = self.lam.size
        if any(getattr(self, k).size != n for k in ("mu", "nu", "phi", "theta")):
            raise ValueError("spectral arrays must be index-aligned")

    @property
    def rank(self) -> int:
        return self.lam.size

    @property
    def actions(self) -> tuple[np.ndarray, np.ndarray]:
        """``(I, L) = (2 lambda^2, 2 mu^2)``."""
        return 2.0 * self.lam**2, 2.0 * self.mu**2

    def replace(self, **changes) -> SpectralCoordinates:
        fields = {k: getattr(self, k) for k in ("lam", "mu", "nu", "phi", "theta")}
        fields.update(changes)
        return SpectralCoordinates(**fields)

    def to_json(self) -> dict:
        return {
            "lambda": self.lam.tolist(),
            "mu": self.mu.tolist(),
            "nu": self.nu.tolist(),
            "phi": self.phi.tolist(),
            "theta": self.theta.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> SpectralCoordinates:
        lam = np.asarray(obj["lambda"], dtype=float)
        mu = np.asarray(obj["mu"], dtype=float)
        if "nu" in obj:
            nu = np.asarray(obj["nu"], dtype=float)
        else:
            from .transform import nu_from_actions

            nu = nu_from_actions(lam, mu)
        return cls(lam, mu, nu, obj.get("phi", np.zeros_like(lam)), obj.get("theta", np.zeros_like(lam)))


def _leading_rank(values: np.ndarray, scale: float, rank_tol: float) -> int:
    return int(np.count_nonzero(values > rank_tol * scale))


def _check_gaps(sq: np.ndarray, scale: float, gap_tol: float, label: str):
    gaps = -np.diff(sq)
    if gaps.size and np.min(gaps) < gap_tol * scale:
        j = int(np.argmin(gaps))
        raise NotGeneric(
            f"multiple eigenvalue of {label}",
            f"gap {gaps[j]:.3e} between eigenvalues {j + 1} and {j + 2}",
        )


def phase_fixed_eigenvectors(u: FourierSymbol, vectors: np.ndarray, sv: np.ndarray, shift: bool = False) -> np.ndarray:
    """Rotate each eigenvector ``v`` of the squared operator so that
    ``H_u e = lambda e`` (or ``K_u f = mu f`` when ``shift``)."""
    apply = apply_k if shift else apply_h
    out = np.empty_like(vectors)
    for j in range(vectors.shape[1]):
        v = vectors[:, j]
        w = apply(u, v)
        rot = np.vdot(v, w) / sv[j]
        out[:, j] = np.exp(0.5j * np.angle(rot)) * v
    return out


def spectral_data(u: FourierSymbol, rank_tol: float = RANK_TOL, gap_tol: float = GAP_TOL) -> SpectralCoordinates:
    """Forward map: symbol to ``(lambda, mu, nu, phi, theta)``.

    Raises :class:`NotGeneric` naming the violated condition when the
    spectrum is not simple, ``1`` lies in the range of ``H_u``, or the
    interlacing fails.
    """
    pair = build_pair(u)
    eh = hermitian_eig(pair.h2)
    ek = hermitian_eig(pair.k2)
    scale = float(eh.values[0])
    if scale <= 0.0:
        raise NotGeneric("zero symbol", "H_u vanishes")
    N = _leading_rank(eh.values, scale, rank_tol)
    Nk = _leading_rank(ek.values, scale, rank_tol)
    if Nk != N:
        raise NotGeneric(
            "rank of K_u differs from rank of H_u",
            f"rank H_u = {N}, rank K_u = {Nk}: some mu_m = 0, 1 lies in the range of H_u",
        )
    lam_sq = eh.values[:N]
    mu_sq = ek.values[:N]
    _check_gaps(lam_sq, scale, gap_tol, "H_u^2")
    _check_gaps(mu_sq, scale, gap_tol, "K_u^2")

    V = eh.vectors[:, :N]
    nu = np.abs(V[0, :])
    if np.min(nu) <= rank_tol:
        j = int(np.argmin(nu))
        raise NotGeneric("nu_j vanishes", f"nu_{j + 1} = {nu[j]:.3e}")
    if np.sum(nu**2) >= 1.0 - rank_tol:
        raise NotGeneric("sum of nu_j^2 not below 1", f"sum = {np.sum(nu**2):.15g}")
    inter = np.empty(2 * N)
    inter[0::2] = lam_sq
    inter[1::2] = mu_sq
    if np.any(np.diff(inter) >= 0):
        raise NotGeneric("interlacing lambda_1 > mu_1 > ... > mu_N > 0 fails")

    lam = np.sqrt(lam_sq)
    mu = np.sqrt(mu_sq)
    E = phase_fixed_eigenvectors(u, V, lam)
    phi = wrap_angle(np.angle(np.conj(E[0, :]) ** 2))

    theta = np.empty(N)
    coeff_u = V.conj().T @ u.coeffs
    for m in range(N):
        g = V @ (coeff_u / (lam_sq - mu_sq[m]))
        gamma_m = np.vdot(g, apply_k(u, g)) / np.vdot(g, g).real
        theta[m] = -np.angle(gamma_m / mu[m])
    return SpectralCoordinates(lam, mu, nu, phi, wrap_angle(theta))


def theta_by_phase_fix(u: FourierSymbol, rank: int) -> np.ndarray:
    """Second route to ``theta_m = arg(u|f_m)^2`` through phase-fixed
    eigenvectors of ``K_u^2``."""
    pair = build_pair(u)
    ek = hermitian_eig(pair.k2)
    mu = np.sqrt(ek.values[:rank])
    F = phase_fixed_eigenvectors(u, ek.vectors[:, :rank], mu, shift=True)
    # F^* u lists (u|f_m)
    return wrap_angle(np.angle((F.conj().T @ u.coeffs) ** 2))


def secular_function(sigma: float, lam_sq: np.ndarray, nu_sq: np.ndarray) -> float:
    return float(np.sum(lam_sq * nu_sq / (lam_sq - sigma)) - 1.0)


def secular_mu(lam_sq, nu_sq, rtol: float = 1e-14) -> np.ndarray:
    """Roots ``mu_m^2`` of ``sum_j lambda_j^2 nu_j^2 / (lambda_j^2 - s) = 1``,
    one in each interval ``(lambda_{m+1}^2, lambda_m^2)`` with
    ``lambda_{N+1} = 0``; returned descending, index-aligned with lambda."""
    lam_sq = np.asarray(lam_sq, dtype=float)
    nu_sq = np.asarray(nu_sq, dtype=float)
    if lam_sq.shape != nu_sq.shape or lam_sq.ndim != 1:
        raise ValueError("lambda^2 and nu^2 must be equal-length vectors")
    if np.any(np.diff(lam_sq) >= 0) or np.any(lam_sq <= 0):
        raise ValueError("lambda^2 must be positive and strictly decreasing")
    if np.any(nu_sq <= 0):
        raise ValueError("nu^2 must be positive")
    N = lam_sq.size
    uppers = lam_sq
    lowers = np.append(lam_sq[1:], 0.0)
    roots = np.empty(N)
    for m in range(N):
        lo, hi = lowers[m], uppers[m]
        f_lo = -np.inf if m < N - 1 else secular_function(0.0, lam_sq, nu_sq)
        if f_lo >= 0:
            raise IntervalFailure(f"no sign change on (0, lambda_N^2): value at 0 is {f_lo:.3e}")
        for _ in range(400):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if secular_function(mid, lam_sq, nu_sq) < 0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= rtol * hi:
                break
        root = 0.5 * (lo + hi)
        if not (lowers[m] < root < uppers[m]):
            raise IntervalFailure(f"root {m + 1} collapsed onto an interval endpoint")
        roots[m] = root
    return roots
