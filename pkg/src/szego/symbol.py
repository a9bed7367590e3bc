"""Hardy-space symbols: truncated Fourier sequences and rational functions.

A symbol ``u(z) = sum_k c_k z^k`` is stored through its nonnegative Fourier
coefficients.  Inner products are linear in the first slot,
``(f|g) = sum_k f_k conj(g_k)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft
import scipy.signal

from .errors import DenominatorRootInsideDisc, SzegoError

DEFAULT_M = 64
DEFAULT_TAIL_TOL = 1e-12
ROOT_MARGIN = 1e-8
MAX_M = 1 << 16


def _as_complex(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FourierSymbol:
    """First ``M`` Fourier coefficients of ``u`` plus a bound on the
    discarded squared l2 tail."""

    coeffs: np.ndarray
    truncation_tol: float = 0.0

    def __post_init__(self):
        c = _as_complex(self.coeffs)
        if c.size < 1:
            raise ValueError("a symbol needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("symbol coefficients must be finite")
        if self.truncation_tol < 0:
            raise ValueError("truncation_tol must be nonnegative")
        object.__setattr__(self, "coeffs", c)

    @property
    def M(self) -> int:
        return self.coeffs.size

    def __len__(self) -> int:
        return self.coeffs.size

    def resized(self, M: int) -> FourierSymbol:
        """Zero-pad or cut to length ``M``; cutting adds the dropped mass to
        the tail bound."""
        c = self.coeffs
        if M >= c.size:
            return FourierSymbol(np.concatenate([c, np.zeros(M - c.size)]), self.truncation_tol)
        dropped = float(np.sum(np.abs(c[M:]) ** 2))
        return FourierSymbol(c[:M], self.truncation_tol + dropped)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def to_json(self) -> dict:
        return {
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
            "truncation_tol": float(self.truncation_tol),
        }

    @classmethod
    def from_json(cls, obj: dict) -> FourierSymbol:
        coeffs = [complex(re, im) for re, im in obj["coeffs"]]
        return cls(coeffs, float(obj.get("truncation_tol", 0.0)))


@dataclass(frozen=True)
class RationalSymbol:
    """``u = A/B`` with ``B(0) = 1`` and no zero of ``B`` in the closed disc.

    Coefficient arrays are in increasing powers of ``z``.
    """

    num: np.ndarray
    den: np.ndarray = field(default_factory=lambda: np.ones(1))
    check: bool = True

    def __post_init__(self):
        num = np.trim_zeros(_as_complex(self.num), "b")
        den = np.trim_zeros(_as_complex(self.den), "b")
        if num.size == 0:
            num = _as_complex([0.0])
        if den.size == 0 or den[0] == 0:
            raise ValueError("denominator must have a nonzero constant term")
        if den[0] != 1:
            num = _as_complex(num / den[0])
            den = _as_complex(den / den[0])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if self.check:
            roots = self.den_roots()
            if roots.size and np.min(np.abs(roots)) <= 1.0 + ROOT_MARGIN:
                raise DenominatorRootInsideDisc(
                    f"denominator root of modulus {np.min(np.abs(roots)):.6g} <= 1"
                )

    @property
    def degree(self) -> int:
        """Rank N of the Hankel operator when num and den are coprime."""
        return max(self.num.size, self.den.size - 1)

    def den_roots(self) -> np.ndarray:
        if self.den.size <= 1:
            return np.zeros(0, dtype=complex)
        # np.roots wants decreasing powers; it solves via the companion matrix
        return np.roots(self.den[::-1])

    def pole_radius(self) -> float:
        """``max |root of B|^-1``, zero for polynomials."""
        roots = self.den_roots()
        return 0.0 if roots.size == 0 else float(1.0 / np.min(np.abs(roots)))

    def __call__(self, z):
        return np.polyval(self.num[::-1], z) / np.polyval(self.den[::-1], z)

    def to_json(self) -> dict:
        return {
            "num": [[float(z.real), float(z.imag)] for z in self.num],
            "den": [[float(z.real), float(z.imag)] for z in self.den],
        }

    @classmethod
    def from_json(cls, obj: dict) -> RationalSymbol:
        return cls(
            [complex(re, im) for re, im in obj["num"]],
            [complex(re, im) for re, im in obj["den"]],
        )


def symbol_from_json(obj: dict) -> FourierSymbol:
    """Accept either serialized form and return Fourier coefficients."""
    if "coeffs" in obj:
        return FourierSymbol.from_json(obj)
    if "num" in obj:
        return expand_rational(RationalSymbol.from_json(obj))
    raise SzegoError("symbol JSON needs 'coeffs' or 'num'/'den'")


def _series_division(num: np.ndarray, den: np.ndarray, M: int) -> np.ndarray:
    c = np.zeros(M, dtype=complex)
    a = np.zeros(M, dtype=complex)
    a[: min(M, num.size)] = num[:M]
    for k in range(M):
        acc = a[k]
        for j in range(1, min(k, den.size - 1) + 1):
            acc -= den[j] * c[k - j]
        c[k] = acc
    return c


def _tail_estimate(c: np.ndarray, rho: float, exact_from: int | None) -> float:
    M = c.size
    if exact_from is not None and M >= exact_from:
        return 0.0
    if rho == 0.0:
        return 0.0
    ks = np.arange(M // 2, M)
    mags = np.abs(c[ks])
    live = mags > 0
    if not np.any(live):
        return 0.0
    # log domain: both |c_k| and rho^k underflow for small pole radii
    log_scale = np.max(np.log(mags[live]) - ks[live] * np.log(rho))
    return float(np.exp(2.0 * (log_scale + M * np.log(rho))) / (1.0 - rho**2))


def expand_rational(r: RationalSymbol, M: int = DEFAULT_M, tol: float = DEFAULT_TAIL_TOL) -> FourierSymbol:
    """Taylor coefficients of ``A/B`` at 0, enlarging ``M`` until the
    geometric tail estimate is below ``tol``."""
    if M < 1:
        raise ValueError("M must be positive")
    rho = r.pole_radius()
    if rho >= 1.0 - ROOT_MARGIN:
        raise DenominatorRootInsideDisc(f"pole radius {rho:.6g} not below 1")
    exact_from = r.num.size if r.den.size == 1 else None
    while True:
        c = _series_division(r.num, r.den, M)
        tail = _tail_estimate(c, rho, exact_from)
        if tail <= tol or M >= MAX_M:
            return FourierSymbol(c, tail)
        M *= 2


def default_length(r: RationalSymbol, tol: float = DEFAULT_TAIL_TOL) -> int:
    return max(DEFAULT_M, expand_rational(r, 8, tol).M)


def evaluate(u: FourierSymbol, z: complex) -> complex:
    """Horner evaluation of the truncated series; ``|z| <= 1`` expected.

    The truncation error is at most ``sqrt(truncation_tol / (1 - |z|^2))``.
    """
    acc = 0j
    for ck in u.coeffs[::-1]:
        acc = acc * z + ck
    return complex(acc)


def szego_nonlinearity(u: FourierSymbol) -> FourierSymbol:
    """``Pi(|u|^2 u)`` truncated to the input length.

    Output coefficient k is ``sum_{a+b-c=k} c_a c_b conj(c_c)``.
    """
    return FourierSymbol(cubic_term(u.coeffs))


DIRECT_CUBIC_MAX = 256


def cubic_term(c: np.ndarray) -> np.ndarray:
    """Array-level ``Pi(|u|^2 u)`` used in the integrator's inner loop.

    Up to ``DIRECT_CUBIC_MAX`` coefficients the sums are formed directly;
    longer vectors use a grid of ``2M`` points, which is alias-free for the
    retained frequencies ``0..M-1``.
    """
    M = c.size
    if M <= DIRECT_CUBIC_MAX:
        return np.correlate(np.convolve(c, c), c, mode="valid")[:M]
    L = 2 * M
    vals = scipy.fft.ifft(c, n=L) * L
    vals = np.abs(vals) ** 2 * vals
    return scipy.fft.fft(vals)[:M] / L


@dataclass(frozen=True)
class SymbolFunctionals:
    l2sq: float
    momentum: float
    energy: float
    moments: tuple[float, ...]

    def moment(self, n: int) -> float:
        """``J_{2n}``, 1-based as in ``J_2, J_4, ...``."""
        return self.moments[n - 1]

    @property
    def energy_identity_gap(self) -> float:
        return abs(self.energy - (2.0 * self.moment(2) - self.moment(1) ** 2))


def momentum(u: FourierSymbol) -> float:
    k = np.arange(u.M)
    return float(np.sum(k * np.abs(u.coeffs) ** 2))


def energy(u: FourierSymbol) -> float:
    """``||u||_{L^4}^4`` as the l2 norm squared of the coefficients of ``u^2``."""
    sq = scipy.signal.convolve(u.coeffs, u.coeffs)
    return float(np.sum(np.abs(sq) ** 2))


def functionals(u: FourierSymbol, n_max: int = 4) -> SymbolFunctionals:
    """Conserved quantities ``||u||^2``, ``M(u)``, ``E(u)`` and the moments
    ``J_{2n} = (H_u^{2n} 1 | 1)`` for ``n = 1..n_max``."""
    from .hankel import apply_h

    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    h = np.zeros(u.M, dtype=complex)
    h[0] = 1.0
    moments = []
    for _ in range(n_max):
        h = apply_h(u, apply_h(u, h))
        moments.append(float(h[0].real))
    return SymbolFunctionals(
        l2sq=float(np.sum(np.abs(u.coeffs) ** 2)),
        momentum=momentum(u),
        energy=energy(u),
        moments=tuple(moments),
    )
