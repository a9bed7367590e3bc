import numpy as np
import pytest

from szego.errors import InterlacingViolated, SpectralRadiusExceeded
from szego.hankel import build_pair, spectral_data, wrap_angle
from szego.inverse_hankel import build_selfadjoint, build_symbol, signed_eigenvalues, verify_singular_values
from szego.samples import random_targets
from szego.symbol import FourierSymbol


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_rank_one_closed_forms(sign):
    c = build_selfadjoint([2.0], [sign * 1.0], M=64)
    np.testing.assert_allclose(c.coeffs, 1.5 * (sign * 0.5) ** np.arange(64), atol=1e-12)
    assert np.all(c.coeffs.imag == 0)
    general = build_symbol([2.0], [1.0], [0.0], [0.0 if sign > 0 else np.pi], M=64)
    np.testing.assert_allclose(general.coeffs, c.coeffs, atol=1e-12)


def test_build_symbol_against_svd(rng):
    for N in range(1, 5):
        lam, mu, phi, theta = random_targets(rng, N)
        c = build_symbol(lam, mu, phi, theta)
        rep = verify_singular_values(c, lam, mu)
        assert rep.passed, rep.as_dict()
        # independent check through a plain SVD of both matrices
        pair = build_pair(c)
        np.testing.assert_allclose(np.linalg.svd(pair.gamma, compute_uv=False)[:N], lam, atol=1e-8)
        np.testing.assert_allclose(np.linalg.svd(pair.gamma_shifted, compute_uv=False)[:N], mu, atol=1e-8)
        back = spectral_data(c)
        assert np.max(np.abs(wrap_angle(back.phi - phi))) < 1e-6
        assert np.max(np.abs(wrap_angle(back.theta - theta))) < 1e-6


def test_selfadjoint_signed_spectra(rng):
    for N in range(1, 5):
        lam, mu, phi, theta = random_targets(rng, N, signed=True)
        zeta = np.where(phi == 0, lam, -lam)
        gamma = np.where(theta == 0, mu, -mu)
        c = build_selfadjoint(zeta, gamma)
        ev_h, ev_k = signed_eigenvalues(c, N)
        np.testing.assert_allclose(ev_h, zeta, atol=1e-8)
        np.testing.assert_allclose(ev_k, gamma, atol=1e-8)


def test_selfadjoint_two_by_two_example():
    zeta, gamma = [2.0, 0.5], [1.0, 0.25]
    c = build_selfadjoint(zeta, gamma)
    ev_h, ev_k = signed_eigenvalues(c, 2)
    np.testing.assert_allclose(ev_h, zeta, atol=1e-8)
    np.testing.assert_allclose(ev_k, gamma, atol=1e-8)


def test_selfadjoint_is_deterministic():
    a = build_selfadjoint([2.0, -0.5], [1.0, 0.25])
    b = build_selfadjoint([2.0, -0.5], [1.0, 0.25])
    np.testing.assert_array_equal(a.coeffs, b.coeffs)


def test_torus_sweep_keeps_spectra():
    lam, mu = np.array([1.2, 0.6]), np.array([0.9, 0.3])
    grid = np.linspace(-np.pi, np.pi, 3, endpoint=False)
    checked = 0
    for a in grid:
        for b in grid:
            try:
                c = build_symbol(lam, mu, [a, -b], [b, a])
            except SpectralRadiusExceeded:
                continue
            assert verify_singular_values(c, lam, mu).passed
            checked += 1
    assert checked >= 5


def test_two_by_two_closed_form():
    # Gamma = [[0.1, 1], [1, 0]] has Gamma Gamma^* eigenvalues 1.005 +- sqrt(0.010025)
    c = FourierSymbol([0.1, 1.0, 0.0, 0.0])
    lam = np.sqrt([1.005 + np.sqrt(0.010025), 1.005 - np.sqrt(0.010025)])
    assert verify_singular_values(c, lam, [1.0]).passed


def test_verification_detects_tampering():
    c = build_selfadjoint([2.0], [1.0], M=64)
    rep = verify_singular_values(c, [2.0], [1.0])
    assert rep.passed and rep.deviation <= 1e-10
    tampered = c.coeffs.copy()
    tampered[3] += 1e-3
    bad = verify_singular_values(FourierSymbol(tampered), [2.0], [1.0])
    assert not bad.passed and bad.deviation >= 1e-4


def test_verification_detects_rank_mismatch():
    c = build_selfadjoint([2.0], [1.0], M=64)
    rep = verify_singular_values(c, [2.0, 0.5], [1.0, 0.2])
    assert not rep.passed and rep.rank_gamma == 1
    assert rep.as_dict()["rank_shifted"] == 1


def test_invalid_targets_rejected():
    with pytest.raises(InterlacingViolated):
        build_selfadjoint([1.0], [0.0])
    with pytest.raises(InterlacingViolated):
        build_symbol([1.0], [1.0], [0.0], [0.0])
    with pytest.raises(InterlacingViolated):
        build_selfadjoint([1.0, 2.0], [0.5, 0.1])


def test_slow_decay_is_reported():
    # lambda close to mu leaves a pole near the circle; the tail cannot reach 1e-12 in 4096 terms
    with pytest.raises(SpectralRadiusExceeded):
        build_symbol([1.0], [0.9999], [0.0], [0.0])


def test_signed_eigenvalues_of_known_sequence():
    ev_h, ev_k = signed_eigenvalues(FourierSymbol(1.5 * (-0.5) ** np.arange(64)), 1)
    assert ev_h[0] == pytest.approx(2.0) and ev_k[0] == pytest.approx(-1.0)
