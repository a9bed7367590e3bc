"""Cubic Szegő flow ``i u_t = Pi(|u|^2 u)``.

Two independent solvers: the exact one moves the angles linearly
(``phi_j' = lambda_j^2``, ``theta_m' = -mu_m^2``) and reconstructs the
symbol; the direct one integrates the truncated coefficient system with
classical RK4.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StepRejected
from .hankel import SpectralCoordinates, spectral_data, wrap_angle
from .symbol import FourierSymbol, SymbolFunctionals, cubic_term, functionals
from .transform import inverse_model, reconstruct_coeffs

OVERFLOW_GUARD = 1e8


def evolve_angles(s: SpectralCoordinates, t: float) -> SpectralCoordinates:
    if t == 0:
        return s
    return s.replace(
        phi=wrap_angle(s.phi + s.lam**2 * t),
        theta=wrap_angle(s.theta - s.mu**2 * t),
    )


def solve_exact(u0: FourierSymbol, t: float, M: int | None = None) -> FourierSymbol:
    s = spectral_data(u0)
    return reconstruct_coeffs(inverse_model(evolve_angles(s, t)), M or u0.M)


@dataclass
class TrajectoryRecord:
    times: np.ndarray
    symbols: list[FourierSymbol]
    invariants_series: list[SymbolFunctionals]
    l2_deviation: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.symbols) != self.times.size or len(self.invariants_series) != self.times.size:
            raise ValueError("trajectory series are not index-aligned")
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def coefficient_array(self) -> np.ndarray:
        return np.stack([u.coeffs for u in self.symbols])

    def distance_to(self, other: TrajectoryRecord) -> np.ndarray:
        a, b = self.coefficient_array(), other.coefficient_array()
        M = min(a.shape[1], b.shape[1])
        return np.linalg.norm(a[:, :M] - b[:, :M], axis=1)

    def to_csv(self, fh: io.TextIOBase | None = None) -> str:
        M = self.symbols[0].M
        buf = fh or io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["t"]
        for k in range(M):
            header += [f"re_c{k}", f"im_c{k}"]
        header += ["J2", "J4", "M", "E"]
        if self.l2_deviation is not None:
            header.append("l2_deviation")
        writer.writerow(header)
        for i, t in enumerate(self.times):
            row = [repr(float(t))]
            for z in self.symbols[i].coeffs:
                row += [repr(float(z.real)), repr(float(z.imag))]
            f = self.invariants_series[i]
            row += [repr(f.moment(1)), repr(f.moment(2)), repr(f.momentum), repr(f.energy)]
            if self.l2_deviation is not None:
                row.append(repr(float(self.l2_deviation[i])))
            writer.writerow(row)
        return buf.getvalue() if fh is None else ""

    def manifest(self) -> str:
        return json.dumps(self.params, sort_keys=True, indent=2)


def _record(times, symbols) -> TrajectoryRecord:
    return TrajectoryRecord(times, symbols, [functionals(u, 2) for u in symbols])


def exact_trajectory(u0: FourierSymbol, times, M: int | None = None) -> TrajectoryRecord:
    """Exact solution sampled at ``times``; the spectral data is computed once."""
    s = spectral_data(u0)
    M = M or u0.M
    symbols = [reconstruct_coeffs(inverse_model(evolve_angles(s, t)), M) for t in times]
    rec = _record(times, symbols)
    rec.params = {"method": "exact", "M": M, "rank": s.rank}
    return rec


def _rhs(c: np.ndarray) -> np.ndarray:
    return -1j * cubic_term(c)


def integrate_direct(u0: FourierSymbol, T: float, dt: float, record_every: int = 1) -> TrajectoryRecord:
    """Fixed-step RK4 for ``c' = -i Pi(|u|^2 u)`` on ``M`` coefficients.

    Samples are taken every ``record_every`` steps; the last sample is at
    ``floor(T/dt) * dt``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if T < 0:
        raise ValueError("T must be nonnegative")
    steps = int(math.floor(T / dt + 1e-9))
    c = u0.coeffs.copy()
    times = [0.0]
    symbols = [u0]
    for n in range(1, steps + 1):
        k1 = _rhs(c)
        k2 = _rhs(c + 0.5 * dt * k1)
        k3 = _rhs(c + 0.5 * dt * k2)
        k4 = _rhs(c + dt * k3)
        c = c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(c)) or np.max(np.abs(c)) > OVERFLOW_GUARD:
            raise StepRejected(f"coefficients left the overflow guard at step {n}")
        if n % record_every == 0 or n == steps:
            times.append(n * dt)
            symbols.append(FourierSymbol(c.copy(), u0.truncation_tol))
    rec = _record(times, symbols)
    rec.params = {"method": "direct", "M": u0.M, "dt": dt, "T": T, "record_every": record_every}
    return rec


@dataclass(frozen=True)
class DriftReport:
    J2: float
    J4: float
    M: float
    E: float

    def max(self) -> float:
        return max(self.J2, self.J4, self.M, self.E)

    def as_dict(self) -> dict:
        return {"J2": self.J2, "J4": self.J4, "M": self.M, "E": self.E}


def conserved_report(tr: TrajectoryRecord) -> DriftReport:
    """Max relative drift ``|Q(t) - Q(0)| / |Q(0)|`` per conserved quantity."""
    if not tr.invariants_series:
        raise ValueError("empty trajectory")
    series = {
        "J2": [f.moment(1) for f in tr.invariants_series],
        "J4": [f.moment(2) for f in tr.invariants_series],
        "M": [f.momentum for f in tr.invariants_series],
        "E": [f.energy for f in tr.invariants_series],
    }
    out = {}
    for name, vals in series.items():
        vals = np.asarray(vals)
        ref = abs(vals[0])
        dev = np.max(np.abs(vals - vals[0]))
        out[name] = float(dev / ref) if ref > 0 else float(dev)
    return DriftReport(**out)


def unwrap_angles(series: np.ndarray) -> np.ndarray:
    """Nearest-branch continuation along axis 0."""
    return np.unwrap(np.asarray(series, dtype=float), axis=0)


def angle_rates(tr: TrajectoryRecord) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares slopes of unwrapped ``phi_j(t)`` and ``theta_m(t)``
    extracted from ``spectral_data`` along a trajectory."""
    coords = [spectral_data(u) for u in tr.symbols]
    phi = unwrap_angles(np.stack([s.phi for s in coords]))
    theta = unwrap_angles(np.stack([s.theta for s in coords]))
    t = tr.times
    design = np.vstack([t, np.ones_like(t)]).T
    phi_rate = np.linalg.lstsq(design, phi, rcond=None)[0][0]
    theta_rate = np.linalg.lstsq(design, theta, rcond=None)[0][0]
    return phi_rate, theta_rate


def max_pole_modulus(s: SpectralCoordinates, times) -> float:
    """Largest ``1/|pole|`` of ``u(t)`` over ``times``: the spectral radius of
    the reconstruction matrix, which controls the truncation length needed."""
    return max(inverse_model(evolve_angles(s, t)).spectral_radius for t in times)
