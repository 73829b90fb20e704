"""The acceptance suite behind ``logsob verify-all``.

Each criterion is a function of the run settings returning a
:class:`CriterionResult` with a JSON-ready detail record.  Tolerances are
module constants so that they are fixed in one place.  Criteria whose
statement depends on grid resolution declare a minimum ``n``; a coarser
override marks them ``skipped-too-coarse`` instead of running them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import io
from .experiments import (DEFAULT_R_LIST, band_of, band_ratio, counterexample_suite,
                          embedding_constant, gradient_log_bound, indicator_scaling,
                          interpolation_constant, local_diff_decay, rel_change)
from .grid import Domain, affine, gaussian, indicator_ball, sample, step_sum, trig_poly
from .maximal import (frac_functional, lipschitz_converse_witness, lusin_converse_seminorm,
                      lusin_functional, lusin_pair_ratio, make_pairs)
from .quadrature import KernelSpec, build_radial_scheme, kernel_mass, kernel_mass_exact
from .reference import brute_pair_sum_1d, frac_density, log_density
from .seminorms import (SeminormParams, frac_outer_radius, truncated_q_seminorm, w_seminorm,
                        x_seminorm)
from .spectral import equivalence_ratio, kernel_moment

# pinned tolerances
TOL_MASS = 0.005
TOL_BRUTE = 0.03
TOL_FUBINI = 0.01
TOL_SCALING_A = 0.15
TOL_SCALING_B = 0.25
BAND_MOMENT = 10.0
BAND_FOURIER = 25.0
TOL_FOURIER_REFINE = 0.02
BAND_EMBEDDING = 4.0
TOL_EMBEDDING_REFINE = 0.10
BAND_INTERPOLATION = 4.0
TOL_LUSIN_RESEED = 0.20
BAND_CONVERSE = 5.0
MIN_GROWTH_EXPONENT = 0.8
TOL_GRADIENT = 1e-6
DECAY_RATIO = 0.1

PASS, FAIL, SKIP = "pass", "fail", "skipped-too-coarse"


@dataclass(frozen=True)
class Settings:
    n_override: int | None = None
    seed: int = 0
    threads: int = 1

    def n(self, default: int) -> int:
        return default if self.n_override is None else int(self.n_override)

    def to_dict(self) -> dict:
        return {"n_override": self.n_override, "seed": self.seed, "threads": self.threads}


@dataclass
class CriterionResult:
    number: int
    title: str
    status: str
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "status": self.status,
                "detail": self.detail}


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    fn: Callable[[Settings], CriterionResult]
    min_n: int | None = None     # resolution needed for the statement to be meaningful


# ---------------------------------------------------------------------------
# criteria


def c1_kernel_mass(st: Settings) -> CriterionResult:
    rows, ok = [], True
    r_min = 1e-4
    for d in (1, 2):
        scheme = build_radial_scheme(r_min, 1 / 3, 256, None, d)
        for p in (0.5, 1.0, 2.0):
            for gamma in (0.25, 0.5, 1.0):
                spec = KernelSpec("log_kernel", d=d, gamma=gamma, p=p)
                q, e = kernel_mass(spec, scheme), kernel_mass_exact(spec, r_min)
                err = abs(q - e) / e
                ok &= err <= TOL_MASS
                rows.append({"d": d, "p": p, "gamma": gamma, "quadrature": q, "exact": e, "rel_err": err})
    return CriterionResult(1, "kernel mass closed form", _status(ok), {"tol": TOL_MASS, "rows": rows})


def _brute_inputs():
    return [("indicator_ball(0.25)", indicator_ball(0.25)), ("gaussian(0.25)", gaussian(0.25)),
            ("step_sum(4)", step_sum(4))]


def c2_brute_force(st: Settings) -> CriterionResult:
    dom = Domain(1, 1.0, st.n(512))
    rows, ok = [], True
    Rw = frac_outer_radius(dom)
    cases = [
        ("x_seminorm", SeminormParams(gamma=0.5, p=1.0), log_density(0.5, 1.0), 1 / 3, np.abs,
         lambda f, P: x_seminorm(f, P, threads=st.threads) ** P.p),
        ("w_seminorm", SeminormParams(s=0.5, p=1.0), frac_density(0.5, 1.0), Rw, np.abs,
         lambda f, P: w_seminorm(f, P, threads=st.threads) ** P.p),
        ("truncated_q_seminorm", SeminormParams(p=1.0, q=1.0), log_density(1.0, 1.0), 1 / 3,
         lambda t: np.minimum(1.0, np.abs(t)),
         lambda f, P: truncated_q_seminorm(f, P, threads=st.threads)),
    ]
    for label, g in _brute_inputs():
        f = sample(g, dom)
        for name, P, dens, R, phi, fn in cases:
            v = fn(f, P)
            o = brute_pair_sum_1d(g, dom, dens, R, phi, factor=2)
            err = abs(v - o) / o
            ok &= err <= TOL_BRUTE
            rows.append({"function": label, "functional": name, "value": v, "oracle": o, "rel_err": err})
    return CriterionResult(2, "brute-force equivalence", _status(ok),
                           {"tol": TOL_BRUTE, "n": dom.n, "rows": rows})


def c3_fubini(st: Settings) -> CriterionResult:
    dom = Domain(1, 1.0, st.n(512))
    rows, ok = [], True
    for label, g in _brute_inputs():
        f = sample(g, dom)
        for p in (1.0, 2.0):
            P = SeminormParams(gamma=0.5, p=p)
            a, b = lusin_functional(f, P).lp_norm(p), x_seminorm(f, P)
            Q = SeminormParams(s=0.5, p=p)
            c, e = frac_functional(f, Q).lp_norm(p), w_seminorm(f, Q)
            for name, u, v in (("L", a, b), ("D", c, e)):
                err = rel_change(v, u)
                ok &= err <= TOL_FUBINI
                rows.append({"function": label, "p": p, "functional": name, "norm": u, "seminorm": v,
                             "rel_err": err})
    return CriterionResult(3, "Fubini identities", _status(ok), {"tol": TOL_FUBINI, "rows": rows})


def c4_scaling(st: Settings) -> CriterionResult:
    rows, ok = [], True
    for p, gamma in ((1.0, 0.5), (2.0, 0.5), (1.0, 1.0)):
        rep = indicator_scaling(gamma, p, DEFAULT_R_LIST, n=st.n(4096), threads=st.threads)
        fr = rep.fits["free"]
        good = rep.checks["a_within_15pct"] and rep.checks["b_within_25pct"]
        ok &= good
        rows.append({"p": p, "gamma": gamma, "a": fr["a"], "b": fr["b"], "target_a": 1, "target_b": p * gamma,
                     "normalized_band": rep.band, "normalized_band_ratio": band_ratio(rep.band),
                     "pass": good})
    return CriterionResult(4, "indicator sharpness scaling", _status(ok),
                           {"tol_a": TOL_SCALING_A, "tol_b": TOL_SCALING_B, "rows": rows})


def c5_kernel_moment(st: Settings) -> CriterionResult:
    lo = np.array([0.1, 0.5, 1.0, 5.0, 10.0])
    hi = np.array([20.0, 1e2, 1e3, 1e4])
    rows, ok = [], True
    for gamma in (0.25, 0.5, 1.0):
        a = kernel_moment(lo, gamma) / lo ** 2
        b = kernel_moment(hi, gamma) / np.log(hi) ** (2 * gamma)
        ra, rb = band_ratio(band_of(a)), band_ratio(band_of(b))
        ok &= ra < BAND_MOMENT and rb < BAND_MOMENT
        rows.append({"gamma": gamma, "low_band": band_of(a), "low_ratio": ra,
                     "high_band": band_of(b), "high_ratio": rb})
    return CriterionResult(5, "kernel-moment asymptotics", _status(ok), {"band": BAND_MOMENT, "rows": rows})


def c6_fourier(st: Settings) -> CriterionResult:
    n = st.n(1024)
    family = [("gaussian(1)", gaussian(1.0), Domain(1, 8.0, n)),
              ("indicator_ball(1/8)", indicator_ball(0.125), Domain(1, 1.0, n))]
    family += [(f"trig_poly(seed={k})", trig_poly(k, 8), Domain(1, 1.0, n)) for k in range(5)]
    rows, ratios, stable = [], [], True
    for label, g, dom in family:
        a = equivalence_ratio(sample(g, dom), 0.5)
        b = equivalence_ratio(sample(g, dom.refined(2)), 0.5)
        ratios.append(a)
        ch = rel_change(a, b)
        stable &= ch <= TOL_FOURIER_REFINE
        rows.append({"function": label, "ratio": a, "ratio_2n": b, "rel_change": ch})
    band = band_of(ratios)
    ok = band_ratio(band) < BAND_FOURIER and stable
    return CriterionResult(6, "Fourier equivalence", _status(ok),
                           {"band": band, "band_ratio": band_ratio(band), "band_limit": BAND_FOURIER,
                            "refine_tol": TOL_FOURIER_REFINE, "rows": rows})


def c7_embedding(st: Settings) -> CriterionResult:
    dom = Domain(1, 1.0, st.n(4096))
    rows, ok = [], True
    for p in (1.0, 2.0):
        vals = [embedding_constant(indicator_ball(r), 0.5, p, dom=dom).value("integrated")
                for r in DEFAULT_R_LIST]
        band = band_of(vals)
        ok &= band_ratio(band) < BAND_EMBEDDING
        rows.append({"p": p, "gamma": 0.5, "r_list": list(DEFAULT_R_LIST), "integrated": vals,
                     "band": band, "band_ratio": band_ratio(band)})
    rep = embedding_constant(gaussian(0.25), 0.5, 2.0, dom=Domain(1, 1.0, st.n(1024)), refine=True)
    ch = rep.convergence["pointwise_rel_change"]
    ok &= ch <= TOL_EMBEDDING_REFINE
    return CriterionResult(7, "log-Sobolev embedding", _status(ok),
                           {"band_limit": BAND_EMBEDDING, "refine_tol": TOL_EMBEDDING_REFINE,
                            "indicator_rows": rows, "gaussian": rep.convergence})


def c8_interpolation(st: Settings) -> CriterionResult:
    dom = Domain(1, 1.0, st.n(2048))
    vals = {k: interpolation_constant(trig_poly(0, k), 0.5, 0.5, 2.0, dom=dom).value("ratio")
            for k in (4, 16, 64)}
    band = band_of(list(vals.values()))
    return CriterionResult(8, "interpolation inequality", _status(band_ratio(band) < BAND_INTERPOLATION),
                           {"ratios": {str(k): v for k, v in vals.items()}, "band": band,
                            "band_ratio": band_ratio(band), "band_limit": BAND_INTERPOLATION})


def c9_lusin(st: Settings) -> CriterionResult:
    dom = Domain(1, 1.0, st.n(1024))
    P = SeminormParams(gamma=0.5, p=1.0)
    rows, ok = [], True
    for label, g in (("gaussian(0.25)", gaussian(0.25)), ("indicator_ball(1/8)", indicator_ball(0.125))):
        f = sample(g, dom)
        L = lusin_functional(f, P)
        r0 = lusin_pair_ratio(f, P, pairs=make_pairs(dom, seed=st.seed), L=L)
        r1 = lusin_pair_ratio(f, P, pairs=make_pairs(dom, seed=st.seed + 1), L=L)
        ch = rel_change(r0.ratio, r1.ratio)
        good = (math.isfinite(r0.ratio) and math.isfinite(r1.ratio) and r0.violations == 0
                and r1.violations == 0 and ch <= TOL_LUSIN_RESEED)
        ok &= good
        rows.append({"function": label, "ratio": r0.ratio, "ratio_reseeded": r1.ratio, "rel_change": ch,
                     "skipped": r0.skipped, "violations": r0.violations + r1.violations, "pairs": 10_000})
    return CriterionResult(9, "Lusin pair ratio", _status(ok), {"reseed_tol": TOL_LUSIN_RESEED, "rows": rows})


def c10_converse(st: Settings) -> CriterionResult:
    dom = Domain(1, 1.0, st.n(1024))
    g = gaussian(0.25)
    f = sample(g, dom)
    gamma, p = 1.0, 2.0
    K = float(np.max(np.abs(g.gradient(dom.points()))))
    w = lipschitz_converse_witness(dom, K, gamma)
    pairs = make_pairs(dom, seed=st.seed)
    rows, prods, hyp = [], [], True
    for alpha in (gamma / 4, gamma / 2, 3 * gamma / 4):
        res = lusin_converse_seminorm(f, w, gamma, alpha, SeminormParams(p=p), pairs=pairs)
        prods.append(res.seminorm_p * (gamma - alpha))
        hyp &= res.hypothesis_ok
        rows.append({"alpha": alpha, "seminorm_p": res.seminorm_p, "bound": res.bound,
                     "product": prods[-1], "hypothesis_ratio": res.hypothesis_ratio})
    band = band_of(prods)
    ok = band_ratio(band) < BAND_CONVERSE and hyp
    return CriterionResult(10, "Lusin converse blow-up shape", _status(ok),
                           {"gamma": gamma, "p": p, "band": band, "band_ratio": band_ratio(band),
                            "band_limit": BAND_CONVERSE, "hypothesis_ok": hyp, "rows": rows})


def c11_counterexample(st: Settings) -> CriterionResult:
    rep = counterexample_suite((2, 4, 8, 16, 32), 1.0, n=st.n(2048))
    exp_ = rep.fits["phi_star_loglog"]["exponent"]
    ok = rep.checks["sup_norm_one"] and exp_ >= MIN_GROWTH_EXPONENT
    return CriterionResult(11, "alternating-step counterexample", _status(ok),
                           {"min_exponent": MIN_GROWTH_EXPONENT, "exponent": exp_,
                            "sup_norm_one": rep.checks["sup_norm_one"],
                            "phi_star_norms": rep.values("phi_star_norm"),
                            "lower_bound_integrals": rep.values("lower_bound_integral"),
                            "fits": rep.fits})


def c12_first_order(st: Settings) -> CriterionResult:
    dom = Domain(1, 1.0, st.n(1024))
    grad = gradient_log_bound(gaussian(0.25), dom, 1.0, pairs=make_pairs(dom, seed=st.seed))
    ratio = grad.value("ratio")
    decay = local_diff_decay(gaussian(0.25), seed=st.seed)
    fo = decay.value("final_over_initial")
    aff = local_diff_decay(affine(2.0, 1.0), seed=st.seed)
    aff2 = local_diff_decay(affine([2.0, -1.25], 1.0), d=2, seed=st.seed)
    ok = (ratio <= 1 + TOL_GRADIENT and grad.checks["witness_certified"] and fo < DECAY_RATIO
          and aff.checks["all_zero"] and aff2.checks["all_zero"])
    return CriterionResult(12, "gradient statements", _status(ok),
                           {"gradient_ratio": ratio, "gradient_tol": TOL_GRADIENT,
                            "witness_certified": grad.checks["witness_certified"],
                            "decay_final_over_initial": fo, "decay_limit": DECAY_RATIO,
                            "affine_zero_1d": aff.checks["all_zero"], "affine_zero_2d": aff2.checks["all_zero"]})


CRITERIA: list[Criterion] = [
    Criterion(1, "kernel mass closed form", c1_kernel_mass),
    Criterion(2, "brute-force equivalence", c2_brute_force, 512),
    Criterion(3, "Fubini identities", c3_fubini),
    Criterion(4, "indicator sharpness scaling", c4_scaling, 2048),
    Criterion(5, "kernel-moment asymptotics", c5_kernel_moment),
    Criterion(6, "Fourier equivalence", c6_fourier, 256),
    Criterion(7, "log-Sobolev embedding", c7_embedding, 2048),
    Criterion(8, "interpolation inequality", c8_interpolation, 1024),
    Criterion(9, "Lusin pair ratio", c9_lusin, 256),
    Criterion(10, "Lusin converse blow-up shape", c10_converse, 256),
    Criterion(11, "alternating-step counterexample", c11_counterexample, 1024),
    Criterion(12, "gradient statements", c12_first_order),
]
DETERMINISM = (13, "determinism")


def run_criterion(c: Criterion, st: Settings) -> CriterionResult:
    if c.min_n is not None and st.n_override is not None and st.n_override < c.min_n:
        return CriterionResult(c.number, c.title, SKIP, {"n_override": st.n_override, "min_n": c.min_n})
    return c.fn(st)


def _report_texts(results: list[CriterionResult], st: Settings) -> dict[str, str]:
    return {f"criterion_{r.number:02d}.json": io.dumps({**r.to_dict(), "config": st.to_dict()})
            for r in results}


@dataclass
class Summary:
    results: list[CriterionResult]
    settings: Settings

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def table(self) -> str:
        lines = [f"{'#':>3}  {'status':<19} title"]
        for r in self.results:
            lines.append(f"{r.number:>3}  {r.status:<19} {r.title}")
        n_pass = sum(r.status == PASS for r in self.results)
        n_fail = sum(r.status == FAIL for r in self.results)
        n_skip = sum(r.status == SKIP for r in self.results)
        lines.append(f"passed {n_pass}, failed {n_fail}, skipped {n_skip}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "settings": self.settings.to_dict(),
                "results": [{"criterion": r.number, "title": r.title, "status": r.status}
                            for r in self.results]}


def run_once(st: Settings, only: list[int] | None = None, echo: Callable[[str], None] | None = None):
    out = []
    for c in CRITERIA:
        if only is not None and c.number not in only:
            continue
        t0 = time.perf_counter()
        res = run_criterion(c, st)
        if echo is not None:
            echo(f"[{res.status}] criterion {c.number}: {c.title} ({time.perf_counter() - t0:.1f}s)")
        out.append(res)
    return out


def verify_all(settings: Settings | None = None, outdir: str | Path | None = None,
               echo: Callable[[str], None] | None = print) -> Summary:
    """Run criteria 1-12 twice; criterion 13 compares the two sets of report bytes."""
    st = settings or Settings()
    first = run_once(st, echo=echo)
    texts = _report_texts(first, st)
    second = _report_texts(run_once(st, echo=None), st)
    diff = sorted(k for k in texts if texts[k] != second.get(k))
    det = CriterionResult(DETERMINISM[0], DETERMINISM[1], _status(not diff),
                          {"reports_compared": len(texts), "differing": diff})
    if echo is not None:
        echo(f"[{det.status}] criterion 13: determinism")
    results = first + [det]
    if outdir is not None:
        outdir = Path(outdir)
        for name, text in _report_texts(results, st).items():
            io.atomic_write_text(outdir / name, text)
        summary = Summary(results, st)
        io.write_json(outdir / "summary.json", summary.to_dict())
        return summary
    return Summary(results, st)
