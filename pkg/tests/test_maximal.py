import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logsob import (Domain, ParameterError, SampledFunction, SeminormParams, constant, gaussian,
                    hajlasz_check, hl_maximal, holder_pair_ratio, indicator_ball, lusin_converse_seminorm,
                    lusin_functional, lusin_pair_ratio, make_pairs, phi_star, frac_functional, sample,
                    step_sum, trig_poly, w_seminorm, x_seminorm)
from logsob.experiments import linear_fit
from logsob.maximal import (CandidateWitness, ball_offsets, best_constant_witness, constant_witness,
                            dyadic_radii, lipschitz_converse_witness, lipschitz_witness)
from oracles import all_radii_average_max, brute_inner_sum_1d, frac_density, log_density

P = SeminormParams
D1 = Domain(1, 1.0, 512)


def _lipschitz_constant(g, L=1.0):
    x = np.linspace(-L, L, 20001)[:, None]
    return 1.01 * float(np.max(np.abs(g.gradient(x))))


def test_functionals_vanish_on_constants():
    for d in (1, 2):
        f = sample(constant(0.0), Domain(d, 1.0, 32))
        assert not np.any(lusin_functional(f, P(gamma=0.5, p=2)).values)
        assert not np.any(frac_functional(f, P(s=0.5, p=2)).values)
        assert not np.any(phi_star(f, 1.0).values)
        assert not np.any(hl_maximal(f).values)


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("p", [1.0, 2.0])
def test_fubini_identities(d, p):
    dom = Domain(d, 1.0, 256 if d == 1 else 32)
    f = sample(gaussian(0.2), dom)
    a = lusin_functional(f, P(gamma=0.5, p=p)).lp_norm(p)
    assert a == pytest.approx(x_seminorm(f, P(gamma=0.5, p=p)), rel=1e-10)
    b = frac_functional(f, P(s=0.5, p=p)).lp_norm(p)
    assert b == pytest.approx(w_seminorm(f, P(s=0.5, p=p)), rel=1e-10)


def test_lusin_profile_against_brute_force():
    g = indicator_ball(0.125)
    Lf = lusin_functional(sample(g, D1), P(gamma=0.5, p=1))
    _, inner = brute_inner_sum_1d(g, D1, log_density(0.5, 1), 1 / 3)
    fine = inner.reshape(-1, 2).mean(axis=1)
    coarse = Lf.at(D1.points())
    assert np.sum(np.abs(coarse - fine)) / np.sum(fine) <= 0.03
    # the peak sits on the jump in both profiles
    assert abs(int(np.argmax(coarse)) - 224) <= 1 or abs(int(np.argmax(coarse)) - 287) <= 1


def test_frac_profile_against_brute_force():
    g = gaussian(0.25)
    Df = frac_functional(sample(g, D1), P(s=0.5, p=2))
    _, inner = brute_inner_sum_1d(g, D1, frac_density(0.5, 2), 4.0, np.square)
    fine = inner.reshape(-1, 2).mean(axis=1)
    coarse = Df.at(D1.points()) ** 2
    assert np.max(np.abs(coarse - fine) / fine) <= 0.03


def test_dyadic_radii_and_offsets():
    dom = Domain(1, 1.0, 64)
    r = dyadic_radii(dom)
    assert r[0] == dom.spacing and r[-1] <= 2.0 and len(r) == 7
    assert len(ball_offsets(1.0, 1)) == 1 and len(ball_offsets(2.0, 1)) == 3
    assert len(ball_offsets(2.0, 2)) == 9      # |m|^2 < 4: the 3x3 block without the axis tips
    assert len(ball_offsets(2.5, 2)) == 21


def test_hl_maximal_constant_and_oracle():
    dom = Domain(1, 1.0, 128)
    f = sample(constant(2.0), dom)
    assert hl_maximal(f).values.max() == pytest.approx(2.0)
    g = sample(indicator_ball(0.3), dom)
    oracle = all_radii_average_max(g.values, dom.spacing, dyadic_radii(dom))
    assert np.allclose(hl_maximal(g).values, oracle, rtol=0, atol=1e-12)


def test_hl_maximal_2d_oracle():
    dom = Domain(2, 1.0, 16)
    rng = np.random.default_rng(3)
    f = SampledFunction(dom, rng.normal(size=dom.shape))
    got = hl_maximal(f).values
    a = np.abs(f.values)
    P_ = np.pad(a, 64)
    want = a.copy()
    for r in dyadic_radii(dom)[1:]:
        offs = ball_offsets(r / dom.spacing, 2)
        acc = sum(P_[64 + m[0]:64 + m[0] + 16, 64 + m[1]:64 + m[1] + 16] for m in offs)
        want = np.maximum(want, acc / len(offs))
    assert np.allclose(got, want, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31), st.sampled_from([1, 2]))
def test_hl_maximal_dominates(seed, d):
    dom = Domain(d, 1.0, 32 if d == 1 else 16)
    f = SampledFunction(dom, np.random.default_rng(seed).normal(size=dom.shape))
    assert np.all(hl_maximal(f).values >= np.abs(f.values) - 1e-15)


def test_phi_star_oracle_1d():
    dom = Domain(1, 1.0, 64)
    f = sample(trig_poly(1, 4), dom)
    radii = dyadic_radii(dom)
    oracle = all_radii_average_max(f.values, dom.spacing, radii,
                                   lambda c, nb, r: np.log1p(np.abs(nb - c) / r))
    assert np.allclose(phi_star(f, 1.0).values, oracle, atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_phi_star_lipschitz_bound(seed):
    g = trig_poly(seed, 4)
    K = _lipschitz_constant(g)
    ph = phi_star(sample(g, D1), 1.0)
    assert ph.values.max() <= math.log1p(K)


@pytest.mark.parametrize("seed", range(3))
def test_phi_star_below_twice_maximal_witness(seed):
    # g = log(1 + K) certifies a K-Lipschitz f vanishing at the support edge (s = 1)
    g = trig_poly(seed, 4)
    K = _lipschitz_constant(g)
    f = sample(g, D1)
    w = lipschitz_witness(D1, K)
    assert hajlasz_check(f, w, 1.0).ratio <= 1.0
    assert np.all(phi_star(f, 1.0).values <= 2 * hl_maximal(w.g).values + 1e-12)


def test_phi_star_step_sum_grows_linearly():
    dom = Domain(1, 2.0, 2048)
    Ms = [2, 4, 8, 16]
    vals = [phi_star(sample(step_sum(M), dom), 1.0).lp_norm(1) for M in Ms]
    fit = linear_fit(Ms, vals)
    assert fit["slope"] > 0 and fit["r2"] > 0.9


def test_phi_star_rejects():
    f = sample(gaussian(), Domain(1, 1.0, 32))
    with pytest.raises(ParameterError):
        phi_star(f, 1.5)
    with pytest.raises(ParameterError):
        phi_star(f, 0.5, q=0.5)


def test_make_pairs_properties():
    pairs = make_pairs(D1, 2000, seed=7)
    d = pairs.distances()
    assert np.all(np.abs(pairs.x) < 1) and np.all(np.abs(pairs.y) <= 1)
    assert d.min() >= pairs.delta_min * (1 - 1e-12) and d.max() < 1 / 36
    again = make_pairs(D1, 2000, seed=7)
    assert np.array_equal(pairs.x, again.x) and np.array_equal(pairs.y, again.y)
    with pytest.raises(ParameterError):
        make_pairs(D1, 10, delta_min=0.1, delta_max=0.05)
    coarse = make_pairs(Domain(1, 1.0, 64), 10)
    assert coarse.delta_min < coarse.delta_max


def test_lusin_ratio_constant_skips_everything():
    f = sample(constant(0.0), D1)
    r = lusin_pair_ratio(f, P(gamma=0.5, p=2), pairs=make_pairs(D1, 500))
    assert r.ratio == 0.0 and r.skipped == 500 and r.violations == 0


def test_lusin_ratio_stable_across_seeds():
    f = sample(gaussian(0.25), D1)
    Lf = lusin_functional(f, P(gamma=0.5, p=2))
    vals = [lusin_pair_ratio(f, P(gamma=0.5, p=2), pairs=make_pairs(D1, 5000, seed=s), L=Lf).ratio
            for s in range(3)]
    assert max(vals) / min(vals) <= 1.2


def test_lusin_ratio_indicator_finite():
    f = sample(indicator_ball(0.25), D1)
    r = lusin_pair_ratio(f, P(gamma=0.5, p=1))
    assert math.isfinite(r.ratio) and r.violations == 0


def test_lusin_ratio_rejects_far_pairs():
    pairs = make_pairs(D1, 10, delta_max=0.1)
    with pytest.raises(ParameterError):
        lusin_pair_ratio(sample(gaussian(), D1), P(gamma=0.5, p=2), pairs=pairs)


def test_holder_ratio():
    f = sample(gaussian(0.25), D1)
    Df = frac_functional(f, P(s=0.5, p=2))
    vals = [holder_pair_ratio(f, P(s=0.5, p=2), pairs=make_pairs(D1, 5000, seed=s), D=Df).ratio
            for s in range(3)]
    assert max(vals) / min(vals) <= 1.2
    assert holder_pair_ratio(sample(constant(0.0), D1), P(s=0.5, p=2)).ratio == 0.0
    for seed in range(5):
        r = holder_pair_ratio(sample(trig_poly(seed, 6), D1), P(s=0.5, p=2))
        assert math.isfinite(r.ratio)


def test_empty_pairs_raise():
    pairs = make_pairs(D1, 0)
    with pytest.raises(ParameterError):
        lusin_pair_ratio(sample(gaussian(0.25), D1), P(gamma=0.5, p=2), pairs=pairs)


def test_hajlasz_zero_and_indicator():
    f = sample(constant(0.0), D1)
    assert hajlasz_check(f, constant_witness(D1, 0.0), 0.5).ratio == 0.0
    # a witness growing like log(1/dist) to the jump set
    ind = sample(indicator_ball(0.25), D1)
    x = D1.axis()
    dist = np.abs(np.abs(x) - 0.25)
    w = CandidateWitness(SampledFunction(D1, np.log1p(1.0 / np.maximum(dist, D1.spacing))), "hajlasz")
    r = hajlasz_check(ind, w, 0.5)
    assert r.ratio <= 1.0 and r.clamped == 0
    # a witness that is zero near the jump fails with an explicit violation count
    r0 = hajlasz_check(ind, constant_witness(D1, 0.0), 0.5)
    assert r0.ratio == math.inf and r0.violations > 0


def test_hajlasz_rejects_role():
    f = sample(gaussian(), D1)
    with pytest.raises(ParameterError):
        hajlasz_check(f, lipschitz_converse_witness(D1, 1.0, 0.5), 1.0)


def test_exp_clamp_counted():
    f = sample(gaussian(0.25), D1)
    r = hajlasz_check(f, constant_witness(D1, 400.0), 1.0, make_pairs(D1, 100))
    assert r.clamped == 100 and r.ratio < 1e-100


def test_converse_zero():
    f = sample(constant(0.0), D1)
    res = lusin_converse_seminorm(f, constant_witness(D1, 0.0, "lusin_converse"), 1.0, 0.5, P(p=2))
    assert res.seminorm_p == 0.0 and res.bound == 0.0 and res.hypothesis_ok


def test_converse_lipschitz_bound_holds():
    g = trig_poly(1, 4)
    K = _lipschitz_constant(g)
    f = sample(g, D1)
    w = lipschitz_converse_witness(D1, K, 1.0)
    res = lusin_converse_seminorm(f, w, 1.0, 0.5, P(p=2))
    assert res.hypothesis_ok and res.hypothesis_ratio <= 1.0
    assert res.seminorm_p > 0 and res.bound > 0
    with pytest.raises(ParameterError):
        lusin_converse_seminorm(f, w, 1.0, 1.0, P(p=2))


def test_converse_ratio_bounded_across_alpha():
    g = trig_poly(1, 4)
    K = _lipschitz_constant(g)
    f = sample(g, D1)
    gamma = 1.0
    w = lipschitz_converse_witness(D1, K, gamma)
    ratios = []
    for alpha in (gamma / 4, gamma / 2, 3 * gamma / 4):
        res = lusin_converse_seminorm(f, w, gamma, alpha, P(p=2))
        ratios.append(res.seminorm_p / res.bound)
    assert max(ratios) <= 5.0 and max(ratios) / min(ratios) <= 5.0


def test_best_constant_witness():
    f = sample(trig_poly(2, 4), D1)
    pairs = make_pairs(D1, 2000)
    c = best_constant_witness(f, 1.0, pairs)
    assert hajlasz_check(f, constant_witness(D1, c), 1.0, pairs).ratio == pytest.approx(1.0, rel=1e-9)
