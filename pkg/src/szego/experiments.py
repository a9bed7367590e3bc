"""Stability and instability computations.

Perturbed Blaschke products ``phi + eps`` and the two-mode beat of
``J_1 = (u|1)``; the trace functional ``sigma(u) = tr A`` along exact
orbits; the lower bound on ``Tr(A)`` from the moments ``(A^k e|e)``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .errors import DegenerateFrequencies, PoleOutsideDisc, ResonantFrequencies, SingularGram
from .hankel import SpectralCoordinates, build_pair
from .symbol import FourierSymbol, RationalSymbol, expand_rational
from .transform import a_matrix, b_from_actions, check_interlacing, nu_from_actions


def blaschke_q(p) -> complex:
    """``q = (1|phi) = (-1)^{N-1} p_1 ... p_{N-1}``."""
    p = np.asarray(p, dtype=complex).ravel()
    return complex((-1) ** p.size * np.prod(p)) if p.size else 1.0 + 0j


def rotate_to_nonnegative_q(p) -> tuple[np.ndarray, float]:
    """Rotate the zeros ``p_j -> e^{i g} p_j`` so that ``q >= 0``.

    The rotation is a symmetry of the equation (combined with a phase), so
    it does not change the dynamics of ``|J_1|``.
    """
    p = np.asarray(p, dtype=complex).ravel()
    q = blaschke_q(p)
    if p.size == 0 or abs(q) == 0:
        return p, 0.0
    g = -np.angle(q) / p.size
    return p * np.exp(1j * g), float(g)


def blaschke_rational(p) -> RationalSymbol:
    p = np.asarray(p, dtype=complex).ravel()
    num = np.array([1.0 + 0j])
    den = np.array([1.0 + 0j])
    for pj in p:
        num = np.convolve(num, [-np.conj(pj), 1.0])
        den = np.convolve(den, [1.0, -pj])
    return RationalSymbol(num, den)


def perturbed_blaschke(p, eps: float, M: int = 64, normalize: bool = True) -> FourierSymbol:
    """Coefficients of ``phi + eps`` with ``phi = prod (z - conj p_j)/(1 - p_j z)``.

    With ``normalize`` the zeros are first rotated so that ``q >= 0``.
    """
    p = np.asarray(p, dtype=complex).ravel()
    if np.any(np.abs(p) >= 1.0):
        raise PoleOutsideDisc("Blaschke parameters need |p_j| < 1")
    if normalize:
        p, _ = rotate_to_nonnegative_q(p)
    phi = expand_rational(blaschke_rational(p), M)
    c = phi.coeffs.copy()
    c[0] += eps
    return FourierSymbol(c, phi.truncation_tol)


def beat_eigenvalues(q: float, eps: float) -> tuple[float, float]:
    root = np.sqrt(1.0 + eps * q + 0.25 * eps**2)
    return 1.0 + eps * (q + 0.5 * eps + root), 1.0 + eps * (q + 0.5 * eps - root)


def beat_eigenvalues_matrix(q: float, eps: float) -> tuple[float, float]:
    """Eigenvalues of ``H^2`` restricted to ``span(1, phi)``: identity plus
    the rank-two perturbation in that basis."""
    Mq = np.array([[eps * q + eps**2, eps + eps**2 * q], [eps, eps * q]])
    vals = np.sort(np.linalg.eigvals(np.eye(2) + Mq).real)[::-1]
    return float(vals[0]), float(vals[1])


def beat_coefficients(q: float, eps: float) -> tuple[float, float]:
    """``gamma_+ + gamma_- = q + eps`` and
    ``gamma_+/r_+ + gamma_-/r_- = q/(1 + eps q)``."""
    rp, rm = beat_eigenvalues(q, eps)
    if rp - rm < 1e-12:
        raise DegenerateFrequencies(f"r_+ - r_- = {rp - rm:.3e}")
    lhs = np.array([[1.0, 1.0], [1.0 / rp, 1.0 / rm]])
    rhs = np.array([q + eps, q / (1.0 + eps * q)])
    gp, gm = np.linalg.solve(lhs, rhs)
    return float(gp), float(gm)


def j1_closed_form(q: float, eps: float, t):
    """``J_1(t) = gamma_+ e^{-i r_+ t} + gamma_- e^{-i r_- t}``."""
    rp, rm = beat_eigenvalues(q, eps)
    gp, gm = beat_coefficients(q, eps)
    t = np.asarray(t, dtype=float)
    return gp * np.exp(-1j * rp * t) + gm * np.exp(-1j * rm * t)


def average_j1_sq(q: float, s: float) -> float:
    """Small-``eps`` limit of ``(eps/s) int_0^{s/eps} |J_1|^2 dt``."""
    if s <= 0:
        raise ValueError("s must be positive")
    return 0.5 * (1.0 + q**2) - (1.0 - q**2) * np.sin(2.0 * s) / (4.0 * s)


def empirical_average_j1_sq(q: float, eps: float, s: float, n: int = 100_001) -> float:
    """Trapezoid estimate of ``(eps/s) int_0^{s/eps} |J_1|^2 dt``."""
    t = np.linspace(0.0, s / eps, n)
    vals = np.abs(j1_closed_form(q, eps, t)) ** 2
    return float(trapezoid(vals, t) * eps / s)


def instability_excursion(q: float, eps: float, s: float, n: int = 20_001) -> float:
    """``sup_{t <= s/eps} | |J_1(t)|^2 - q^2 |``."""
    t = np.linspace(0.0, s / eps, n)
    return float(np.max(np.abs(np.abs(j1_closed_form(q, eps, t)) ** 2 - q**2)))


@dataclass
class InstabilityRun:
    q: float
    epsilon: float
    r_plus: float
    r_minus: float
    gamma_plus: float
    gamma_minus: float
    times: np.ndarray
    j1_series: np.ndarray
    averages: dict = field(default_factory=dict)

    def summary(self, s: float) -> dict:
        return {
            "q": self.q,
            "epsilon": self.epsilon,
            "r_plus": self.r_plus,
            "r_minus": self.r_minus,
            "gamma_plus": self.gamma_plus,
            "gamma_minus": self.gamma_minus,
            "horizon": s,
            "f_of_s": average_j1_sq(self.q, s),
            "empirical_avg": self.averages[s],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "re_J1", "im_J1", "abs_J1_sq"])
        for t, j in zip(self.times, self.j1_series):
            w.writerow([repr(float(t)), repr(float(j.real)), repr(float(j.imag)), repr(float(abs(j) ** 2))])
        return buf.getvalue()


def run_instability(q: float, eps: float, s: float, samples: int = 1001) -> InstabilityRun:
    rp, rm = beat_eigenvalues(q, eps)
    gp, gm = beat_coefficients(q, eps)
    t = np.linspace(0.0, s / eps, samples)
    run = InstabilityRun(q, eps, rp, rm, gp, gm, t, j1_closed_form(q, eps, t))
    run.averages[s] = empirical_average_j1_sq(q, eps, s)
    return run


def _phase_velocities(s: SpectralCoordinates) -> np.ndarray:
    return (s.lam[:, None] ** 2 - s.mu[None, :] ** 2).ravel()


def check_nonresonant(s: SpectralCoordinates, tol: float = 1e-10):
    w = np.sort(_phase_velocities(s))
    if w.size > 1 and np.min(np.diff(w)) < tol:
        raise ResonantFrequencies(f"phase velocities lambda_j^2 - mu_l^2 coincide within {tol}")


def sigma_drift(s: SpectralCoordinates, t_grid) -> np.ndarray:
    """``sigma(u(t)) = tr A(t)`` along the exact orbit through ``s``."""
    lam, mu = check_interlacing(s.lam, s.mu)
    check_nonresonant(s)
    nu = nu_from_actions(lam, mu)
    b = b_from_actions(lam, mu, nu)
    t = np.asarray(t_grid, dtype=float)
    phi = s.phi[None, :] + t[:, None] * lam**2
    theta = s.theta[None, :] - t[:, None] * mu**2
    A = a_matrix(lam, mu, nu, b, phi, theta)
    return np.trace(A, axis1=-2, axis2=-1)


def sigma_mean_square_limit(s: SpectralCoordinates) -> float:
    """``sum_{j,l} lambda_j^2 nu_j^4 mu_l^2 / (b_l^2 (lambda_j^2 - mu_l^2)^4)``,
    the long-time mean of ``|sigma|^2`` for pairwise distinct velocities."""
    lam, mu = check_interlacing(s.lam, s.mu)
    check_nonresonant(s)
    nu = nu_from_actions(lam, mu)
    b = b_from_actions(lam, mu, nu)
    l2, m2 = lam**2, mu**2
    terms = (l2 * nu**4)[:, None] * (m2 / b**2)[None, :] / (l2[:, None] - m2[None, :]) ** 4
    return float(np.sum(terms))


def time_mean_sigma_sq(s: SpectralCoordinates, T: float, n: int) -> float:
    t = np.linspace(0.0, T, n)
    return float(trapezoid(np.abs(sigma_drift(s, t)) ** 2, t) / T)


def sigma_of_rational(r: RationalSymbol) -> complex:
    """Minus the ``z`` coefficient of the normalized denominator."""
    return complex(-r.den[1]) if r.den.size > 1 else 0j


def kshift_moments(u: FourierSymbol, count: int) -> np.ndarray:
    """``(K_u^{2k} u | u)`` for ``k = 0..count-1``."""
    k2 = build_pair(u).k2
    v = u.coeffs.astype(complex)
    out = np.empty(count)
    w = v.copy()
    for k in range(count):
        out[k] = np.vdot(v, w).real
        w = k2 @ w
    return out


def trace_lower_bound(gram_moments, N: int, cond_limit: float = 1e14) -> float:
    """Lower bound on ``Tr(A)`` from ``m_k = (A^k e|e)``, ``k = 0..2N-1``.

    Solves ``m_{N+k} = sum_j (-1)^{j-1} sigma_j m_{N-j+k}`` (``k < N``) by
    Cramer's rule and returns ``sigma_1``.
    """
    m = np.asarray(gram_moments, dtype=float)
    if m.size < 2 * N:
        raise ValueError(f"need {2 * N} moments, got {m.size}")
    G = np.array([[m[N - 1 - j + k] for j in range(N)] for k in range(N)])
    rhs = m[N : 2 * N]
    det = np.linalg.det(G)
    if det == 0 or np.linalg.cond(G) > cond_limit:
        raise SingularGram("moment matrix is singular: e, Ae, ..., A^{N-1}e dependent")
    G1 = G.copy()
    G1[:, 0] = rhs
    return float(np.linalg.det(G1) / det)


def momentum_lower_bound(u: FourierSymbol, N: int) -> float:
    """Lower bound on ``M(u) = Tr(K_u^2)`` using ``A = K_u^2`` and ``e = u``."""
    return trace_lower_bound(kshift_moments(u, 2 * N), N)


def torus_moments(lam, mu, n_max: int) -> np.ndarray:
    """``j_{2n}`` for ``n = 1..n_max`` written in the actions ``I = 2 lambda^2``,
    ``L = 2 mu^2``."""
    lam, mu = check_interlacing(lam, mu)
    I, L = 2.0 * lam**2, 2.0 * mu**2
    out = np.zeros(n_max)
    for n in range(1, n_max + 1):
        acc = 0.0
        for j in range(I.size):
            term = 2.0 ** (-n) * I[j] ** n * (1.0 - L[j] / I[j])
            for k in range(I.size):
                if k != j:
                    term *= (L[k] - I[j]) / (I[k] - I[j])
            acc += term
        out[n - 1] = acc
    return out
