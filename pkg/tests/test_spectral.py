import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logsob import (Domain, ParameterError, SeminormParams, compute_spectrum, constant,
                    equivalence_ratio, gaussian, kernel_moment, lp_norm, plancherel_seminorm_sq,
                    sample, spectral_x_norm, trig_poly, x_seminorm)
from logsob.spectral import moment_rows, moment_scheme, spectrum_rows
from oracles import gaussian_hat_sq, spectral_gaussian_mp

GAUSS_DOM = Domain(1, 8.0, 2048)


def test_zero_function_has_zero_spectrum():
    spec = compute_spectrum(sample(constant(0.0), Domain(1, 1.0, 64)))
    assert not np.any(spec.power)
    assert plancherel_seminorm_sq(sample(constant(0.0), Domain(1, 1.0, 64)), 0.5) == 0.0


def test_spectrum_rejects_bad_input():
    with pytest.raises(ParameterError):
        compute_spectrum(sample(gaussian(), Domain(1, 1.0, 48)))
    with pytest.raises(ParameterError):
        compute_spectrum(sample(gaussian(), Domain(1, 1.0, 64)), pad=3)
    with pytest.raises(ParameterError):
        spectral_x_norm(sample(gaussian(), Domain(1, 1.0, 64)), 0.0)


def test_frequency_grid():
    spec = compute_spectrum(sample(gaussian(), GAUSS_DOM), pad=2)
    assert spec.dxi == pytest.approx(math.pi / (2 * GAUSS_DOM.L))
    assert spec.xi[len(spec.xi) // 2] == 0.0


def test_gaussian_transform():
    spec = compute_spectrum(sample(gaussian(1.0), GAUSS_DOM))
    assert np.max(np.abs(spec.power - gaussian_hat_sq(spec.xi))) <= 1e-6


def test_gaussian_spectral_norm_golden():
    got = spectral_x_norm(sample(gaussian(1.0), GAUSS_DOM), 0.5)
    assert got == pytest.approx(spectral_gaussian_mp(0.5), rel=0.01)


def test_band_limited_tail_is_empty():
    # one cosine at frequency pi/4 sits exactly on a DFT bin of the 16-wide box,
    # so nothing reaches |xi| > 1 and the log weight adds nothing
    f = sample(trig_poly(0, 1, omega=math.pi / 4, window="none"), Domain(1, 8.0, 256))
    got = spectral_x_norm(f, 0.5, pad=1)
    assert got == pytest.approx(lp_norm(f, 2) ** 2, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31), st.integers(1, 8), st.sampled_from([1, 2, 4]), st.sampled_from([1, 2]))
def test_plancherel(seed, degree, pad, d):
    dom = Domain(d, 1.0, 64 if d == 1 else 32)
    f = sample(trig_poly(seed, degree), dom)
    spec = compute_spectrum(f, pad)
    assert abs(spec.l2_sq() - lp_norm(f, 2) ** 2) <= 1e-10 * lp_norm(f, 2) ** 2


def test_spectrum_rows_shape():
    rows = list(spectrum_rows(sample(gaussian(0.2), Domain(1, 1.0, 32)), 0.5, pad=1))
    assert len(rows) == 32 and len(rows[0]) == 3


def test_moment_at_zero_and_even():
    assert kernel_moment(0.0, 0.5) == 0.0
    xi = np.array([0.3, 2.0, 17.0, 250.0])
    sch = moment_scheme(250.0)
    assert np.array_equal(kernel_moment(xi, 0.5, sch), kernel_moment(-xi, 0.5, sch))


def test_moment_monotone_along_ray():
    xi = np.linspace(0, 200, 2001)
    I = kernel_moment(xi, 0.5)
    assert np.all(np.diff(I) >= -1e-6 * I[1:])


def test_moment_bands_1d():
    gamma = 0.5
    low = np.linspace(0.05, 1.0, 20)
    q_low = kernel_moment(low, gamma) / low ** 2
    high = np.geomspace(math.e ** 2, 1e4, 20)
    q_high = kernel_moment(high, gamma) / np.log(high) ** (2 * gamma)
    assert q_low.max() / q_low.min() <= 3.0
    assert q_high.max() / q_high.min() <= 1.5


def test_moment_2d_is_radial():
    sch = moment_scheme(20.0, d=2, n_theta=64)
    a = kernel_moment(np.array([[10.0, 0.0]]), 0.5, sch)
    b = kernel_moment(np.array([[0.0, 10.0]]), 0.5, sch)
    c = kernel_moment(np.array([[10 / math.sqrt(2), 10 / math.sqrt(2)]]), 0.5, sch)
    assert b == pytest.approx(a, rel=1e-6) and c == pytest.approx(a, rel=1e-3)


def test_moment_rejects_other_radii():
    with pytest.raises(ParameterError):
        kernel_moment(1.0, 0.5, moment_scheme(1.0, R=0.25), radius=0.25)
    with pytest.raises(ParameterError):
        kernel_moment(1.0, 0.0)


def test_moment_rows():
    rows = moment_rows(np.array([0.5, 3.0]), 0.5)
    assert math.isnan(rows[0][3]) and rows[1][3] > 0


def test_plancherel_recomputation_matches_seminorm():
    f = sample(gaussian(1.0), GAUSS_DOM)
    S = x_seminorm(f, SeminormParams(gamma=0.5, p=2))
    assert plancherel_seminorm_sq(f, 0.5) == pytest.approx(S ** 2, rel=0.05)


def test_equivalence_ratio_gaussian_and_refinement():
    g = gaussian(0.25)
    a = equivalence_ratio(sample(g, Domain(1, 2.0, 512)), 0.5)
    b = equivalence_ratio(sample(g, Domain(1, 2.0, 1024)), 0.5)
    assert 0 < a < 25 and abs(a / b - 1) <= 0.02
    with pytest.raises(ParameterError):
        equivalence_ratio(sample(constant(0.0), Domain(1, 1.0, 64)), 0.5)
