import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szego.errors import InterlacingViolated, NearPole
from szego.hankel import SpectralCoordinates, spectral_data, wrap_angle
from szego.samples import random_actions, random_angles
from szego.symbol import expand_rational
from szego.transform import (
    a_matrix,
    auto_length,
    b_from_actions,
    b_product_form,
    check_interlacing,
    generating_J,
    generating_J_partial_fractions,
    generating_J_product,
    generating_J_sum,
    inverse_model,
    log_derivative_J,
    nu_from_actions,
    reconstruct_coeffs,
    reconstruct_rational,
    sigma_of,
)


def coords(lam, mu, phi=None, theta=None):
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    phi = np.zeros_like(lam) if phi is None else np.asarray(phi, dtype=float)
    theta = np.zeros_like(lam) if theta is None else np.asarray(theta, dtype=float)
    return SpectralCoordinates(lam, mu, nu_from_actions(lam, mu), phi, theta)


def test_interlacing_checks():
    check_interlacing([2.0, 1.0], [1.5, 0.5])
    for lam, mu in [([1.0], [1.0]), ([1.0, 2.0], [0.5, 0.1]), ([2.0, 1.0], [1.5, 0.0]), ([1.0], [])]:
        with pytest.raises(InterlacingViolated):
            check_interlacing(lam, mu)


def test_rank_one_inverse_closed_form():
    # lambda = 4/3, mu = 2/3 comes from 1/(1 - z/2)
    m = inverse_model(coords([4 / 3], [2 / 3]))
    u = reconstruct_coeffs(m, 64)
    np.testing.assert_allclose(u.coeffs, 0.5 ** np.arange(64), atol=1e-14)
    assert sigma_of(m) == pytest.approx(0.5)


def test_b_forms_agree(rng):
    for N in range(1, 6):
        lam, mu = random_actions(rng, N)
        nu = nu_from_actions(lam, mu)
        np.testing.assert_allclose(b_from_actions(lam, mu, nu), b_product_form(lam, mu), rtol=1e-10)


def test_nu_matches_forward_map(generic_suite):
    for _, _, s in generic_suite[:18]:
        np.testing.assert_allclose(nu_from_actions(s.lam, s.mu), s.nu, atol=1e-9)


def test_vectorized_matrix_matches_loops(generic_suite):
    s = generic_suite[5][2]
    lam, mu = s.lam, s.mu
    nu = nu_from_actions(lam, mu)
    b = b_from_actions(lam, mu, nu)
    np.testing.assert_allclose(a_matrix(lam, mu, nu, b, s.phi, s.theta), inverse_model(s).A, atol=1e-12)
    stack = a_matrix(lam, mu, nu, b, np.stack([s.phi, s.phi]), np.stack([s.theta, s.theta]))
    assert stack.shape == (2, s.rank, s.rank)


def test_roundtrip_on_suite(generic_suite):
    for _, u, s in generic_suite:
        v = reconstruct_coeffs(inverse_model(s), u.M)
        assert np.linalg.norm(v.coeffs - u.coeffs) <= 1e-7 * u.norm()


def test_rational_form_matches_series(generic_suite):
    for r, u, s in generic_suite[:12]:
        rat = reconstruct_rational(inverse_model(s))
        back = expand_rational(rat, u.M).resized(u.M)
        np.testing.assert_allclose(back.coeffs, u.coeffs, atol=1e-9)
        assert rat.den.size - 1 <= s.rank
        np.testing.assert_allclose(sorted(np.abs(rat.den_roots())), sorted(np.abs(r.den_roots())), rtol=1e-6)


def test_sigma_is_minus_linear_denominator_coefficient(generic_suite):
    for _, _, s in generic_suite[:12]:
        m = inverse_model(s)
        assert abs(sigma_of(m) + reconstruct_rational(m).den[1]) < 1e-9


def test_auto_length_meets_tail():
    m = inverse_model(coords([4 / 3], [2 / 3]))
    M = auto_length(m, 1e-12)
    assert reconstruct_coeffs(m, M).truncation_tol <= 1e-12


def test_generating_forms_rank_one():
    lam, mu, nu = np.array([4 / 3]), np.array([2 / 3]), np.array([np.sqrt(3) / 2])
    x = 0.3
    want = (1 - mu[0] ** 2 * x) / (1 - lam[0] ** 2 * x)
    assert generating_J_product(lam, mu, x) == pytest.approx(want, rel=1e-14)
    assert generating_J_sum(lam, nu, x) == pytest.approx(want, rel=1e-14)
    assert generating_J_partial_fractions(lam, nu, x) == pytest.approx(want, rel=1e-14)


def test_generating_forms_on_suite(generic_suite):
    for _, u, s in generic_suite[:18]:
        for x in (-1.0, 0.1, 0.3):
            ref = generating_J(u, x)
            for val in (
                generating_J_sum(s.lam, s.nu, x),
                generating_J_partial_fractions(s.lam, s.nu, x),
                generating_J_product(s.lam, s.mu, x),
            ):
                assert abs(val - ref) <= 1e-9 * max(1.0, abs(ref))


def test_log_derivative_by_differences(generic_suite):
    _, u, s = generic_suite[2]
    h = 1e-6
    for x in (-1.0, 0.1, 0.3):
        num = (generating_J(u, x + h) - generating_J(u, x - h)) / (2 * h) / generating_J(u, x)
        assert num == pytest.approx(log_derivative_J(s.lam, s.mu, x), rel=1e-4)


def test_near_pole_raises():
    with pytest.raises(NearPole):
        generating_J_product(np.array([2.0]), np.array([1.0]), 0.25)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_forward_of_inverse_property(N, seed):
    rng = np.random.default_rng(seed)
    lam, mu = random_actions(rng, N, top=1.0, margin=0.08)
    phi, theta = random_angles(rng, N)
    s = coords(lam, mu, phi, theta)
    m = inverse_model(s)
    back = spectral_data(reconstruct_coeffs(m, auto_length(m)))
    np.testing.assert_allclose(back.lam, lam, atol=1e-8)
    np.testing.assert_allclose(back.mu, mu, atol=1e-8)
    assert np.max(np.abs(wrap_angle(back.phi - phi))) < 1e-6
    assert np.max(np.abs(wrap_angle(back.theta - theta))) < 1e-6
