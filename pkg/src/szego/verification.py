"""Seeded property suites driven by ``szego verify``.

Each case draws its own generator from ``(seed, index)`` so results do not
depend on execution order or on the number of worker processes.
"""
from __future__ import annotations

import numpy as np

from .experiments import torus_moments
from .flow import conserved_report, exact_trajectory, integrate_direct
from .hankel import spectral_data, wrap_angle
from .inverse_hankel import build_symbol
from .samples import random_flow_symbol, random_generic_symbol, random_targets
from .symbol import functionals
from .transform import (
    generating_J,
    generating_J_partial_fractions,
    generating_J_product,
    generating_J_sum,
    inverse_model,
    log_derivative_J,
    reconstruct_coeffs,
)

X_POINTS = (-1.0, 0.1, 0.3)


def case_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def coordinate_distance(a, b) -> float:
    return float(
        max(
            np.max(np.abs(a.lam - b.lam)),
            np.max(np.abs(a.mu - b.mu)),
            np.max(np.abs(a.nu - b.nu)),
            np.max(np.abs(wrap_angle(a.phi - b.phi))),
            np.max(np.abs(wrap_angle(a.theta - b.theta))),
        )
    )


def roundtrip_case(seed: int, index: int, M: int = 128, tol: float = 1e-7) -> dict:
    N = 1 + index % 6
    _, u, s = random_generic_symbol(case_rng(seed, index), N, M)
    v = reconstruct_coeffs(inverse_model(s), M)
    symbol_err = float(np.linalg.norm(v.coeffs - u.coeffs) / u.norm())
    coord_err = coordinate_distance(spectral_data(v), s)
    return {
        "case": index,
        "rank": N,
        "symbol_error": symbol_err,
        "coordinate_error": coord_err,
        "passed": symbol_err <= tol and coord_err <= tol,
    }


def trace_case(seed: int, index: int, M: int = 128, tol: float = 1e-9, h: float = 1e-6, tol_log: float = 1e-4) -> dict:
    N = 1 + index % 6
    _, u, s = random_generic_symbol(case_rng(seed, index), N, M)
    form_err = 0.0
    log_err = 0.0
    for x in X_POINTS:
        forms = [
            generating_J(u, x),
            generating_J_sum(s.lam, s.nu, x),
            generating_J_partial_fractions(s.lam, s.nu, x),
            generating_J_product(s.lam, s.mu, x),
        ]
        scale = max(1.0, abs(forms[0]))
        form_err = max(form_err, (max(forms) - min(forms)) / scale)
        J0 = generating_J(u, x)
        numeric = (generating_J(u, x + h) - generating_J(u, x - h)) / (2 * h) / J0
        exact = log_derivative_J(s.lam, s.mu, x)
        log_err = max(log_err, abs(numeric - exact) / max(1.0, abs(exact)))
    return {
        "case": index,
        "rank": N,
        "form_error": float(form_err),
        "log_derivative_error": float(log_err),
        "passed": form_err <= tol and log_err <= tol_log,
    }


def torus_case(seed: int, index: int, tol: float = 1e-8) -> dict:
    rng = case_rng(seed, index)
    N = 1 + index % 4
    lam, mu, phi, theta = random_targets(rng, N, top=1.0)
    u = build_symbol(lam, mu, phi, theta)
    got = np.array(functionals(u, 2 * N).moments)
    want = torus_moments(lam, mu, 2 * N)
    err = float(np.max(np.abs(got - want) / np.maximum(1.0, np.abs(want))))
    return {"case": index, "rank": N, "moment_error": err, "passed": err <= tol}


def conservation_case(
    seed: int,
    index: int,
    M: int = 128,
    horizon: float = 2.0,
    dt: float = 1e-3,
    drift_tol: float = 1e-7,
    distance_tol: float = 1e-5,
) -> dict:
    N = 1 + index % 3
    _, u, _ = random_flow_symbol(case_rng(seed, index), N, M, horizon=horizon)
    direct = integrate_direct(u, horizon, dt, record_every=max(1, int(round(0.1 / dt))))
    exact = exact_trajectory(u, direct.times)
    dist = float(np.max(direct.distance_to(exact)))
    drift_direct = conserved_report(direct).max()
    drift_exact = conserved_report(exact).max()
    return {
        "case": index,
        "rank": N,
        "max_distance": dist,
        "drift_direct": drift_direct,
        "drift_exact": drift_exact,
        "passed": dist <= distance_tol and max(drift_direct, drift_exact) <= drift_tol,
    }


SUITES = {
    "roundtrip": roundtrip_case,
    "trace": trace_case,
    "torus": torus_case,
    "conservation": conservation_case,
}
