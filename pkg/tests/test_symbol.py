import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szego.errors import DenominatorRootInsideDisc
from szego.symbol import (
    FourierSymbol,
    RationalSymbol,
    cubic_term,
    energy,
    evaluate,
    expand_rational,
    functionals,
    momentum,
    symbol_from_json,
    szego_nonlinearity,
)


def brute_cubic(c):
    """Triple loop over a + b - d = k."""
    M = len(c)
    out = np.zeros(M, dtype=complex)
    for a in range(M):
        for b in range(M):
            for d in range(M):
                k = a + b - d
                if 0 <= k < M:
                    out[k] += c[a] * c[b] * np.conj(c[d])
    return out


def long_division(num, den, M):
    """Coefficients of num/den by repeated subtraction of shifted den."""
    rem = np.zeros(M + len(den), dtype=complex)
    rem[: len(num)] = num
    out = np.zeros(M, dtype=complex)
    for k in range(M):
        q = rem[k] / den[0]
        out[k] = q
        rem[k : k + len(den)] -= q * np.asarray(den)
    return out


def test_geometric_series_expansion():
    u = expand_rational(RationalSymbol([1.0], [1.0, -0.5]), 64)
    np.testing.assert_allclose(u.coeffs, 0.5 ** np.arange(u.M), atol=1e-15)
    assert u.truncation_tol <= 1e-12


def test_expansion_matches_long_division(rng):
    num = rng.normal(size=3) + 1j * rng.normal(size=3)
    den = np.array([1.0, -0.3 + 0.2j, 0.1j])
    u = expand_rational(RationalSymbol(num, den), 64)
    np.testing.assert_allclose(u.coeffs, long_division(num, den, u.M), atol=1e-13)


def test_expansion_grows_length_for_slow_decay():
    u = expand_rational(RationalSymbol([1.0], [1.0, -0.97]), 64, tol=1e-12)
    assert u.M > 64
    assert u.truncation_tol <= 1e-12


def test_polynomial_has_no_tail():
    u = expand_rational(RationalSymbol([1.0, 2.0, 3.0]), 8)
    assert u.truncation_tol == 0.0
    np.testing.assert_array_equal(u.coeffs[:3], [1, 2, 3])


def test_denominator_root_inside_disc_rejected():
    with pytest.raises(DenominatorRootInsideDisc):
        RationalSymbol([1.0], [1.0, -1.0])
    with pytest.raises(DenominatorRootInsideDisc):
        RationalSymbol([1.0], [1.0, 0.0, -1.2])


def test_denominator_normalized():
    r = RationalSymbol([2.0], [2.0, -1.0])
    assert r.den[0] == 1
    assert r.num[0] == 1
    assert r.pole_radius() == pytest.approx(0.5)


def test_nonlinearity_against_triple_loop(rng):
    c = (rng.normal(size=9) + 1j * rng.normal(size=9)) * 0.7 ** np.arange(9)
    np.testing.assert_allclose(szego_nonlinearity(FourierSymbol(c)).coeffs, brute_cubic(c), atol=1e-13)


def test_fft_path_agrees_with_direct_sums(rng):
    M = 600
    c = (rng.normal(size=M) + 1j * rng.normal(size=M)) * 0.99 ** np.arange(M)
    direct = np.correlate(np.convolve(c, c), c, mode="valid")[:M]
    fast = cubic_term(c)
    assert np.max(np.abs(fast - direct)) <= 1e-12 * np.max(np.abs(direct))


def test_traveling_wave_nonlinearity():
    # summing the geometric series in sum_{a+b-d=k} p^{a+b+d} gives the closed form
    p = 0.5
    u = expand_rational(RationalSymbol([1.0], [1.0, -p]), 64)
    k = np.arange(u.M)
    expected = (k + 1 + p**2 / (1 - p**2)) * p**k / (1 - p**2)
    np.testing.assert_allclose(szego_nonlinearity(u).coeffs.real, expected, atol=1e-12)


def test_functionals_of_geometric_symbol():
    u = expand_rational(RationalSymbol([1.0], [1.0, -0.5]), 128)
    f = functionals(u, 2)
    assert f.l2sq == pytest.approx(4 / 3, abs=1e-12)
    assert f.moment(1) == pytest.approx(4 / 3, abs=1e-12)
    assert f.moment(2) == pytest.approx(64 / 27, abs=1e-12)
    assert f.momentum == pytest.approx(4 / 9, abs=1e-12)
    assert f.energy == pytest.approx(80 / 27, abs=1e-12)
    assert f.energy_identity_gap < 1e-12


def test_energy_matches_quadrature(rng):
    c = (rng.normal(size=16) + 1j * rng.normal(size=16)) * 0.6 ** np.arange(16)
    theta = 2 * np.pi * np.arange(256) / 256
    vals = np.polyval(c[::-1], np.exp(1j * theta))
    assert energy(FourierSymbol(c)) == pytest.approx(np.mean(np.abs(vals) ** 4), rel=1e-12)


def test_momentum_weights_by_index():
    assert momentum(FourierSymbol([1.0, 0.0, 2.0])) == pytest.approx(8.0)


def test_evaluate_matches_rational():
    r = RationalSymbol([1.0, 0.5j], [1.0, -0.3])
    u = expand_rational(r, 128)
    z = 0.4 * np.exp(0.7j)
    assert abs(evaluate(u, z) - r(z)) < 1e-13


def test_resize_records_dropped_mass():
    u = FourierSymbol([1.0, 1.0, 1.0])
    v = u.resized(1)
    assert v.truncation_tol == pytest.approx(2.0)
    assert u.resized(5).M == 5


def test_json_roundtrip_both_forms():
    r = RationalSymbol([1.0, 2j], [1.0, -0.25])
    assert np.allclose(RationalSymbol.from_json(json.loads(json.dumps(r.to_json()))).den, r.den)
    u = expand_rational(r, 32)
    back = symbol_from_json(json.loads(json.dumps(u.to_json())))
    np.testing.assert_array_equal(back.coeffs, u.coeffs)
    np.testing.assert_allclose(symbol_from_json(r.to_json()).coeffs[:32], u.coeffs)


def test_invalid_symbols():
    with pytest.raises(ValueError):
        FourierSymbol([])
    with pytest.raises(ValueError):
        FourierSymbol([np.nan])
    with pytest.raises(ValueError):
        FourierSymbol([1.0], -1.0)


coeff = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=1, max_size=7))
def test_nonlinearity_property(values):
    c = np.array(values, dtype=complex)
    np.testing.assert_allclose(cubic_term(c), brute_cubic(c), atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=2, max_size=10))
def test_energy_identity_property(values):
    # E = 2 J_4 - J_2^2 holds for every finite coefficient vector padded enough
    c = np.array(values, dtype=complex) * 0.5
    u = FourierSymbol(np.concatenate([c, np.zeros(2 * len(c))]))
    f = functionals(u, 2)
    assert f.energy_identity_gap <= 1e-10 * max(1.0, f.energy)


def test_tiny_pole_radius_stops_at_requested_length():
    # coefficients underflow to zero long before M; the tail estimate must stay finite
    u = expand_rational(RationalSymbol([1.0], [1.0, -1e-3]), 256)
    assert u.M == 256
    assert u.truncation_tol == 0.0
