import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logsob import KernelSpec, ParameterError, build_radial_scheme, kernel_mass, kernel_mass_exact
from logsob.quadrature import LOG_KERNEL_RADIUS, check_compatible

R = LOG_KERNEL_RADIUS


def test_scheme_construction_1d():
    sch = build_radial_scheme(1e-3, R, n_r=64)
    assert sch.n_theta == 2 and sch.nodes.shape == (64,)
    assert np.all(np.diff(sch.nodes) > 0)
    assert sch.r_min < sch.nodes[0] and sch.nodes[-1] < R
    assert np.sum(sch.angular_weights) == 2.0


def test_scheme_construction_2d():
    sch = build_radial_scheme(1e-3, R, n_r=64, n_theta=16, d=2)
    assert np.sum(sch.angular_weights) == pytest.approx(2 * math.pi, rel=1e-14)
    assert np.allclose(np.linalg.norm(sch.directions, axis=1), 1.0)


@pytest.mark.parametrize("kw", [dict(r_min=0.0, R=R), dict(r_min=0.5, R=0.4),
                                dict(r_min=1e-3, R=R, n_r=4), dict(r_min=1e-3, R=R, n_theta=3)])
def test_scheme_rejects(kw):
    with pytest.raises(ParameterError):
        build_radial_scheme(**kw)


def test_kernel_spec_rejects():
    with pytest.raises(ParameterError):
        KernelSpec("log_kernel", gamma=-0.1)
    with pytest.raises(ParameterError):
        KernelSpec("log_kernel", gamma=0.5, R=1.5)
    with pytest.raises(ParameterError):
        KernelSpec("frac_kernel", s=0.0)
    with pytest.raises(ParameterError):
        check_compatible(KernelSpec("log_kernel", gamma=0.5), build_radial_scheme(1e-3, 0.25))


def test_smooth_radial_refinement():
    g = lambda r: np.exp(-r) * (1 + r)
    ref = build_radial_scheme(1e-3, R, n_r=4096).integrate_radial(g)
    a = build_radial_scheme(1e-3, R, n_r=128).integrate_radial(g)
    b = build_radial_scheme(1e-3, R, n_r=512).integrate_radial(g)
    assert abs(a - b) / abs(ref) <= 1e-4
    assert abs(b - ref) <= abs(a - ref)


def test_kernel_mass_closed_form_example():
    # p gamma = 1 in 1-D: mass = 2 (log(1/r_min) - log 3)
    spec = KernelSpec("log_kernel", d=1, gamma=0.5, p=2.0)
    sch = build_radial_scheme(1e-3, R, n_r=128)
    exact = 2 * (math.log(1e3) - math.log(3))
    assert kernel_mass_exact(spec, 1e-3) == pytest.approx(exact, rel=1e-14)
    assert kernel_mass(spec, sch) == pytest.approx(exact, rel=5e-3)


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("gamma", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_kernel_mass_grid(d, gamma, p):
    spec = KernelSpec("log_kernel", d=d, gamma=gamma, p=p)
    exact = kernel_mass_exact(spec, 1e-4)
    coarse = kernel_mass(spec, build_radial_scheme(1e-4, R, n_r=128, d=d))
    fine = kernel_mass(spec, build_radial_scheme(1e-4, R, n_r=256, d=d))
    assert fine == pytest.approx(exact, rel=5e-3)
    e1, e2 = abs(coarse - exact), abs(fine - exact)
    if e1 > 1e-12 * exact:
        assert e1 / max(e2, 1e-300) >= 2.0


def test_frac_kernel_mass():
    spec = KernelSpec("frac_kernel", d=1, p=2.0, s=0.5, R=4.0)
    sch = build_radial_scheme(1e-3, 4.0, n_r=256)
    assert kernel_mass(spec, sch) == pytest.approx(kernel_mass_exact(spec, 1e-3), rel=5e-3)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 2.0), st.floats(1.0, 3.0), st.floats(1e-6, 1e-2))
def test_mass_monotone_in_gamma_and_rmin(gamma, p, r_min):
    a = kernel_mass_exact(KernelSpec("log_kernel", gamma=gamma, p=p), r_min)
    b = kernel_mass_exact(KernelSpec("log_kernel", gamma=gamma * 1.1, p=p), r_min)
    c = kernel_mass_exact(KernelSpec("log_kernel", gamma=gamma, p=p), r_min / 2)
    assert b > a > 0 and c > a


@pytest.mark.parametrize("gamma,p", [(0.5, 1.0), (0.5, 2.0), (1.0, 1.5)])
def test_mass_divergence_rate(gamma, p):
    # the mass grows like log(1/r_min)^(p gamma) as r_min -> 0; the r_min-free
    # offset from the outer radius is added back so the fit sees the pure power
    r_mins = [2.0 ** -k for k in (100, 200, 400, 800)]
    spec = KernelSpec("log_kernel", gamma=gamma, p=p)
    offset = 2.0 / (p * gamma) * math.log(1 / R) ** (p * gamma)
    masses = [kernel_mass(spec, build_radial_scheme(r, R, n_r=256)) + offset for r in r_mins]
    t = np.log([math.log(1 / r) for r in r_mins])
    slope = np.polyfit(t, np.log(masses), 1)[0]
    assert slope == pytest.approx(p * gamma, rel=0.05)
