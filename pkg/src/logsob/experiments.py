"""Experiment harness: inequality ratios, scaling fits and empirical constants.

Every experiment returns an :class:`ExperimentReport` carrying its inputs
(functions, domain, scheme), the measured values, fitted exponents, the band
``[c, C]`` of the measured ratio and refinement diagnostics.  Constants are
measured, never asserted: the contract is boundedness across families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy import integrate

from .errors import ParameterError
from .grid import AnalyticFunction, Domain, SampledFunction, lp_norm, sample, weak_lp_quasinorm
from .maximal import (CandidateWitness, PairSample, best_constant_witness, constant_witness,
                      frac_functional, hajlasz_check, lipschitz_witness, lusin_functional, make_pairs,
                      phi_star)
from .quadrature import RadialScheme
from .seminorms import (SeminormParams, default_scheme, truncated_q_seminorm, w_norm, x_norm,
                        x_seminorm)

SCHEMA_VERSION = 1
SKIP_TOL = 1e-12


# ---------------------------------------------------------------------------
# report types


@dataclass
class ExperimentReport:
    name: str
    params: dict
    inputs: dict
    measured: list = field(default_factory=list)      # [{"label": str, "value": float}, ...]
    fits: dict = field(default_factory=dict)
    band: list | None = None                          # [c, C]
    convergence: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)        # named boolean outcomes
    seed: int | None = None
    timestamp: str | None = None
    plots: dict = field(default_factory=dict)         # stem -> {"header": [...], "rows": [[...]]}
    config: dict | None = None

    def __post_init__(self):
        if self.band is not None:
            c, C = self.band
            if not c <= C:
                raise ParameterError(f"band lower end {c} exceeds upper end {C}", "c <= C")

    def add(self, label: str, value) -> None:
        if isinstance(value, (np.floating, np.integer)):
            value = value.item()
        self.measured.append({"label": label, "value": value})

    def value(self, label: str):
        for m in self.measured:
            if m["label"] == label:
                return m["value"]
        raise KeyError(label)

    def values(self, prefix: str) -> list:
        return [m["value"] for m in self.measured if m["label"].startswith(prefix)]

    def to_dict(self) -> dict:
        return _clean({
            "schema_version": SCHEMA_VERSION, "name": self.name, "params": self.params,
            "inputs": self.inputs, "measured": self.measured, "fits": self.fits,
            "band": self.band, "convergence": self.convergence, "checks": self.checks,
            "seed": self.seed, "timestamp": self.timestamp, "config": self.config,
        })


@dataclass(frozen=True, eq=False)
class GradientField:
    """Analytic gradient of a test function at the grid nodes, shape ``(n,)*d + (d,)``."""

    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ParameterError("gradient entries must be finite", "finite gradient")

    @classmethod
    def from_analytic(cls, g: AnalyticFunction, dom: Domain) -> "GradientField":
        return cls(dom, g.gradient(dom.points()))

    def magnitude(self) -> np.ndarray:
        return np.sqrt(np.sum(self.values ** 2, axis=-1))


def _num(v):
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return v


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return _num(obj)


def band_of(values: Sequence[float]) -> list[float]:
    v = [float(x) for x in values if math.isfinite(x)]
    return [min(v), max(v)] if v else [0.0, 0.0]


def band_ratio(band) -> float:
    c, C = band
    return C / c if c > 0 else math.inf


def rel_change(a: float, b: float) -> float:
    return abs(b - a) / abs(a) if a != 0 else (0.0 if b == 0 else math.inf)


# ---------------------------------------------------------------------------
# fits


def least_squares(X: np.ndarray, y: np.ndarray) -> dict:
    """Ordinary least squares with RMS residual and ``R^2``."""
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - float(np.sum(res ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return {"coef": [float(c) for c in coef], "rms_residual": float(np.sqrt(np.mean(res ** 2))), "r2": r2}


def loglog_fit(x, y) -> dict:
    """Fit ``log y = k log x + c``; returns ``exponent``, ``intercept``, residual and ``R^2``."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    out = least_squares(np.column_stack([np.log(x), np.ones_like(x)]), np.log(y))
    out["exponent"], out["intercept"] = out["coef"]
    return out


def linear_fit(x, y) -> dict:
    x, y = np.asarray(x, float), np.asarray(y, float)
    out = least_squares(np.column_stack([x, np.ones_like(x)]), y)
    out["slope"], out["intercept"] = out["coef"]
    return out


def _inputs(dom: Domain, scheme: RadialScheme | None, **functions) -> dict:
    out = {"domain": dom.to_dict(), "scheme": None if scheme is None else scheme.to_dict()}
    for k, g in functions.items():
        out[k] = g.to_dict() if hasattr(g, "to_dict") else g
    return out


def _resolve(f, dom: Domain | None) -> tuple[SampledFunction, AnalyticFunction | None]:
    if isinstance(f, SampledFunction):
        return f, None
    if dom is None:
        raise ParameterError("an analytic function needs a domain", "domain given")
    return sample(f, dom), f


# ---------------------------------------------------------------------------
# scaling of indicators


DEFAULT_R_LIST = (1 / 16, 1 / 32, 1 / 64, 1 / 128)


def indicator_scaling(gamma: float = 0.5, p: float = 1.0, r_list: Sequence[float] = DEFAULT_R_LIST,
                      d: int = 1, n: int = 4096, L: float = 1.0, n_r: int = 128,
                      threads: int = 1) -> ExperimentReport:
    """``S(r)^p`` for ``1_{B_r}`` and the fit ``log S^p = a log r + b log log(1/r) + c``.

    The fit is compared with ``(a, b) = (d, p gamma)``.  The same data are
    recomputed with the inner cutoff halved to expose cutoff sensitivity.
    """
    r_list = sorted(float(r) for r in r_list)[::-1]
    if any(not 0 < r < 1 / 6 for r in r_list):
        raise ParameterError("indicator scaling needs 0 < r < 1/6", "r < 1/6")
    if len(r_list) < 3:
        raise ParameterError("need at least three radii for a two-exponent fit", "len(r_list) >= 3")
    dom = Domain(d, L, n)
    params = SeminormParams(gamma=gamma, p=p)
    scheme = default_scheme(dom, n_r=n_r)
    half = default_scheme(dom, r_min=dom.spacing / 2, n_r=n_r)
    rep = ExperimentReport("indicator-scaling", params.to_dict(), _inputs(dom, scheme, r_list=r_list))
    Sp, Sp_half = [], []
    for r in r_list:
        f = sample(AnalyticFunction("indicator_ball", {"r": r, "center": 0.0}), dom)
        Sp.append(x_seminorm(f, params, scheme, threads=threads) ** p)
        Sp_half.append(x_seminorm(f, params, half, threads=threads) ** p)
        rep.add(f"Sp[r={r:.6g}]", Sp[-1])
    r = np.array(r_list)
    y = np.log(Sp)
    lr, llr = np.log(r), np.log(np.log(1.0 / r))
    free = least_squares(np.column_stack([lr, llr, np.ones_like(r)]), y)
    a, b = free["coef"][:2]
    frozen = least_squares(np.column_stack([lr, np.ones_like(r)]), y - p * gamma * llr)
    no_log = least_squares(np.column_stack([lr, np.ones_like(r)]), y)
    rep.fits = {"free": {**free, "a": a, "b": b, "target_a": d, "target_b": p * gamma},
                "b_frozen": frozen, "b_zero": no_log}
    normalized = [s / (ri ** d * math.log(1 / ri) ** (p * gamma)) for s, ri in zip(Sp, r_list)]
    for ri, v in zip(r_list, normalized):
        rep.add(f"normalized[r={ri:.6g}]", v)
    rep.band = band_of(normalized)
    rep.convergence = {"r_min_half": {f"{ri:.6g}": [s, sh] for ri, s, sh in zip(r_list, Sp, Sp_half)},
                       "max_rel_change": max(rel_change(s, sh) for s, sh in zip(Sp, Sp_half))}
    rep.checks = {
        "a_within_15pct": abs(a - d) <= 0.15 * d,
        "b_within_25pct": abs(b - p * gamma) <= 0.25 * p * gamma,
        "frozen_b_beats_no_log": frozen["rms_residual"] < no_log["rms_residual"],
    }
    rep.plots["scaling"] = {
        "header": ["r", "Sp", "model_free", "normalized"],
        "rows": [[ri, s, float(math.exp(free["coef"][0] * math.log(ri)
                                        + free["coef"][1] * math.log(math.log(1 / ri)) + free["coef"][2])), v]
                 for ri, s, v in zip(r_list, Sp, normalized)],
    }
    return rep


def log_perimeter(E: AnalyticFunction | None, gamma: float, dom: Domain,
                  scheme: RadialScheme | None = None) -> float:
    """``[1_E]_{X^{gamma,1}}`` for a ball or a union of disjoint balls (``None`` is the empty set)."""
    if E is None:
        return 0.0
    if E.kind not in ("indicator_ball", "indicator_union"):
        raise ParameterError("log perimeter takes a ball or a union of disjoint balls", "E is a ball union")
    if E.kind == "indicator_union":
        for c, r in E.params["balls"]:
            if not float(np.max(np.abs(np.atleast_1d(c)))) + r < dom.L:
                raise ParameterError("ball does not fit in the box", "balls inside box")
    return x_seminorm(sample(E, dom), SeminormParams(gamma=gamma, p=1.0), scheme)


# ---------------------------------------------------------------------------
# embedding-type ratios


def embedding_constant(f, gamma: float, p: float, scheme: RadialScheme | None = None,
                       dom: Domain | None = None, weak: bool = False, refine: bool = False,
                       name: str | None = None) -> ExperimentReport:
    """Pointwise and integrated log-Sobolev embedding ratios.

    Pointwise: ``|f|^p log(|f|/N + 2)^(p gamma) / (|f|^p + (L f)^p)`` with
    ``N = ||f||_p`` (or the weak quasinorm when ``weak``).  Integrated: the
    integral of the numerator over ``||f||_{X^{gamma,p}}^p``.
    """
    fs, g = _resolve(f, dom)
    rep = ExperimentReport(name or ("weak-embedding" if weak else "embedding"),
                           SeminormParams(gamma=gamma, p=p).to_dict(),
                           _inputs(fs.domain, scheme, function=g if g is not None else "sampled",
                                   weak=weak))
    point, integ, norm = _embedding_ratios(fs, gamma, p, scheme, weak)
    rep.add("norm_in_log", norm)
    rep.add("pointwise_max", point)
    rep.add("integrated", integ)
    rep.band = band_of([integ])
    if refine and g is not None:
        f2 = sample(g, fs.domain.refined(2))
        point2, integ2, _ = _embedding_ratios(f2, gamma, p, None, weak)
        rep.convergence = {"pointwise_max": [point, point2], "integrated": [integ, integ2],
                           "pointwise_rel_change": rel_change(point, point2),
                           "integrated_rel_change": rel_change(integ, integ2)}
    return rep


def _embedding_ratios(fs: SampledFunction, gamma, p, scheme, weak):
    norm = weak_lp_quasinorm(fs, p) if weak else lp_norm(fs, p)
    if norm == 0:
        raise ParameterError("embedding ratio of the zero function is undefined", "f nonzero")
    params = SeminormParams(gamma=gamma, p=p)
    Lf = lusin_functional(fs, params, scheme)
    M = (Lf.domain.n - fs.domain.n) // 2
    a = np.abs(np.pad(fs.values, M))
    num = a ** p * np.log(a / norm + 2.0) ** (p * gamma)
    den = a ** p + Lf.values ** p
    ok = den > SKIP_TOL
    point = float(np.max(num[ok] / den[ok]))
    vol = fs.domain.cell_volume
    integ = float(np.sum(num)) * vol / x_norm(fs, params, scheme) ** p
    return point, integ, norm


def weak_embedding_constant(f, gamma: float, p: float, scheme: RadialScheme | None = None,
                            dom: Domain | None = None, refine: bool = False) -> ExperimentReport:
    """As :func:`embedding_constant` with the weak-``L^p`` quasinorm inside the logarithm."""
    return embedding_constant(f, gamma, p, scheme, dom, weak=True, refine=refine)


def frac_embedding_constant(f, s: float, p: float, scheme: RadialScheme | None = None,
                            dom: Domain | None = None, refine: bool = False) -> ExperimentReport:
    """Fractional Sobolev ratios with ``p* = dp / (d - sp)``.

    Pointwise ``|f|^{p*} / (||f||_{p*}^{p*-p} (D f)^p)`` and integrated
    ``||f||_{p*} / ||f||_{W^{s,p}}``.
    """
    fs, g = _resolve(f, dom)
    d = fs.domain.d
    if not s * p < d:
        raise ParameterError(f"need s p < d for a finite p*, got s p = {s * p}", "s p < d")
    pstar = d * p / (d - s * p)
    rep = ExperimentReport("frac-embedding", SeminormParams(s=s, p=p).to_dict(),
                           _inputs(fs.domain, scheme, function=g if g is not None else "sampled"))
    rep.add("p_star", pstar)

    def ratios(fs, scheme):
        params = SeminormParams(s=s, p=p)
        nps = lp_norm(fs, pstar)
        if nps == 0:
            raise ParameterError("fractional embedding ratio of the zero function is undefined", "f nonzero")
        D = frac_functional(fs, params, scheme)
        M = (D.domain.n - fs.domain.n) // 2
        a = np.abs(np.pad(fs.values, M))
        num = a ** pstar
        den = nps ** (pstar - p) * D.values ** p
        ok = den > SKIP_TOL
        point = float(np.max(num[ok] / den[ok])) if np.any(ok) else 0.0
        return point, nps / w_norm(fs, params, scheme)

    point, integ = ratios(fs, scheme)
    rep.add("pointwise_max", point)
    rep.add("integrated", integ)
    rep.band = band_of([integ])
    if refine and g is not None:
        point2, integ2 = ratios(sample(g, fs.domain.refined(2)), None)
        rep.convergence = {"pointwise_max": [point, point2], "integrated": [integ, integ2],
                           "pointwise_rel_change": rel_change(point, point2),
                           "integrated_rel_change": rel_change(integ, integ2)}
    return rep


def interpolation_constant(f, gamma: float, s: float, p: float, scheme: RadialScheme | None = None,
                           dom: Domain | None = None, refine: bool = False) -> ExperimentReport:
    """``[f]_{X^{gamma,p}} / (||f||_p log(2 + ||f||_{W^{s,p}} / ||f||_p)^gamma)``."""
    fs, g = _resolve(f, dom)
    rep = ExperimentReport("interpolation", SeminormParams(gamma=gamma, s=s, p=p).to_dict(),
                           _inputs(fs.domain, scheme, function=g if g is not None else "sampled"))

    def ratio(fs, scheme):
        nf = lp_norm(fs, p)
        if nf < SKIP_TOL:
            return None, 0.0, 0.0
        X = x_seminorm(fs, SeminormParams(gamma=gamma, p=p), scheme)
        W = w_norm(fs, SeminormParams(s=s, p=p))
        return X / (nf * math.log(2.0 + W / nf) ** gamma), X, W

    r, X, W = ratio(fs, scheme)
    if r is None:
        rep.checks["skipped_zero"] = True
        rep.add("ratio", float("nan"))
        return rep
    rep.add("x_seminorm", X)
    rep.add("w_norm", W)
    rep.add("ratio", r)
    rep.band = band_of([r])
    if refine and g is not None:
        r2, _, _ = ratio(sample(g, fs.domain.refined(2)), None)
        rep.convergence = {"ratio": [r, r2], "rel_change": rel_change(r, r2)}
    return rep


def immersion_monotonicity(f, gamma_list: Sequence[float], s: float, p: float,
                           scheme: RadialScheme | None = None, dom: Domain | None = None) -> ExperimentReport:
    """``[f]_{X^{gamma,p}}`` along ascending ``gamma_list`` and ``C = max ||f||_X / ||f||_{W^{s,p}}``."""
    gamma_list = [float(x) for x in gamma_list]
    if any(b < a for a, b in zip(gamma_list, gamma_list[1:])):
        raise ParameterError("gamma_list must be ascending", "ascending gamma_list")
    fs, g = _resolve(f, dom)
    rep = ExperimentReport("immersion", {"gamma_list": gamma_list, "s": s, "p": p},
                           _inputs(fs.domain, scheme, function=g if g is not None else "sampled"))
    S = [x_seminorm(fs, SeminormParams(gamma=gm, p=p), scheme, allow_gamma_zero=True) for gm in gamma_list]
    for gm, v in zip(gamma_list, S):
        rep.add(f"seminorm[gamma={gm:g}]", v)
    W = w_norm(fs, SeminormParams(s=s, p=p))
    rep.add("w_norm", W)
    ratios = [(lp_norm(fs, p) ** p + v ** p) ** (1 / p) / W if W > 0 else 0.0 for v in S]
    rep.add("C", max(ratios))
    rep.band = band_of(ratios) if W > 0 else None
    rep.checks = {"monotone": all(b >= a for a, b in zip(S, S[1:]))}
    return rep


def truncated_immersion_check(f, witness: CandidateWitness, s: float, p: float, q: float,
                              scheme: RadialScheme | None = None, pairs: PairSample | None = None,
                              dom: Domain | None = None) -> ExperimentReport:
    """``truncated_q_seminorm(f) / (||g||_p^p + ||g||_q^q)`` for a witness certified on pairs."""
    fs, g = _resolve(f, dom)
    rep = ExperimentReport("truncated-immersion", SeminormParams(s=s, p=p, q=q).to_dict(),
                           _inputs(fs.domain, scheme, function=g if g is not None else "sampled"))
    cert = hajlasz_check(fs, witness, s, pairs)
    rep.add("certificate_ratio", cert.ratio)
    rep.checks["witness_certified"] = cert.violations == 0 and cert.ratio <= 1.0
    T = truncated_q_seminorm(fs, SeminormParams(p=p, q=q), scheme)
    den = lp_norm(witness.g, p) ** p + lp_norm(witness.g, q) ** q
    rep.add("truncated", T)
    rep.add("witness_norms", den)
    if den < SKIP_TOL:
        rep.checks["skipped_zero"] = True
        rep.add("ratio", 0.0 if T < SKIP_TOL else float("inf"))
        return rep
    rep.add("ratio", T / den)
    rep.band = band_of([T / den])
    if np.max(np.abs(fs.values)) <= 1.0:
        U = x_seminorm(fs, SeminormParams(gamma=1.0, p=p), scheme) ** p if q == p else None
        if U is not None:
            rep.add("untruncated", U)
            rep.checks["truncated_le_untruncated"] = T <= U * (1 + 1e-12)
    return rep


# ---------------------------------------------------------------------------
# first-order statements


def gradient_log_bound(g: AnalyticFunction, dom: Domain, p: float = 1.0, K: float | None = None,
                       pairs: PairSample | None = None) -> ExperimentReport:
    """``int log(1 + |grad f|)^p / ||w||_p^p`` with the Lipschitz witness ``w = log(1 + K)``.

    ``K`` defaults to ``max |grad f|`` over the nodes, which makes the ratio at
    most 1 by monotonicity of the logarithm.
    """
    fs = sample(g, dom)
    grad = GradientField.from_analytic(g, dom)
    mag = grad.magnitude()
    K = float(np.max(mag)) if K is None else float(K)
    rep = ExperimentReport("gradient-bound", {"p": p, "K": K}, _inputs(dom, None, function=g))
    lhs = float(np.sum(np.log1p(mag) ** p)) * dom.cell_volume
    w = lipschitz_witness(dom, K)
    wp = lp_norm(w.g, p) ** p
    rep.add("lhs", lhs)
    rep.add("witness_norm_p", wp)
    rep.add("ratio", lhs / wp if wp > 0 else 0.0)
    cert = hajlasz_check(fs, w, 1.0, pairs)
    rep.add("certificate_ratio", cert.ratio)
    rep.checks = {"witness_certified": cert.violations == 0 and cert.ratio <= 1.0}
    return rep


DEFAULT_DECAY_R = (1 / 4, 1 / 8, 1 / 16, 1 / 32, 1 / 64)


def taylor_log_average(g: AnalyticFunction, x: np.ndarray, r: float, p: float,
                       n_radial: int = 256, n_theta: int = 64) -> float:
    """Ball average of ``log(1 + |g(x+y) - g(x) - grad g(x).y| / |y|)^p`` over ``|y| < r``.

    Midpoint rule in ``|y|`` (and uniform in angle in 2-D), so ``y = 0`` is never hit.
    """
    d = x.shape[-1]
    t = (np.arange(n_radial) + 0.5) / n_radial * r
    if d == 1:
        ys = np.concatenate([-t[::-1], t])[:, None]
        wts = np.full(len(ys), 1.0 / len(ys))
    else:
        th = 2 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
        dirs = np.stack([np.cos(th), np.sin(th)], axis=-1)
        ys = (t[:, None, None] * dirs[None, :, :]).reshape(-1, 2)
        wts = np.repeat(t, n_theta)
        wts = wts / wts.sum()
    xs = np.broadcast_to(x, ys.shape)
    grad = g.gradient(xs)
    rem = g.increment(xs, ys) - np.sum(grad * ys, axis=-1)
    vals = np.log1p(np.abs(rem) / np.sqrt(np.sum(ys * ys, axis=-1))) ** p
    return float(np.sum(wts * vals))


def local_diff_decay(g: AnalyticFunction, p: float = 1.0, r_list: Sequence[float] = DEFAULT_DECAY_R,
                     d: int = 1, L: float = 1.0, n_points: int = 10, seed: int = 0,
                     points: np.ndarray | None = None) -> ExperimentReport:
    """Mean over seeded points (in ``[-L/2, L/2]^d``) of the Taylor-remainder ball averages."""
    r_list = [float(r) for r in r_list]
    if points is None:
        rng = np.random.default_rng(seed)
        points = rng.uniform(-L / 2, L / 2, size=(n_points, d))
    points = np.atleast_2d(np.asarray(points, dtype=float))
    rep = ExperimentReport("local-diff", {"p": p, "r_list": r_list},
                           {"function": g.to_dict(), "points": points, "box_half_width": L}, seed=seed)
    means = []
    for r in r_list:
        vals = [taylor_log_average(g, x, r, p) for x in points]
        means.append(float(np.mean(vals)))
        rep.add(f"mean[r={r:.6g}]", means[-1])
    first = means[0]
    ratio = means[-1] / first if first > 0 else 0.0
    rep.add("final_over_initial", ratio)
    rep.checks = {"all_zero": all(m == 0.0 for m in means),
                  "decays_below_10pct": ratio < 0.1,
                  "nonincreasing": all(b <= a * (1 + 1e-9) for a, b in zip(means, means[1:]))}
    rep.plots["decay"] = {"header": ["r", "mean"], "rows": [[r, m] for r, m in zip(r_list, means)]}
    return rep


# ---------------------------------------------------------------------------
# counterexample


def step_pair_integral() -> float:
    """``int int_{[0,1]^2} log(1 + 2/|x-y|) dx dy = 2 int_0^1 (1-t) log(1 + 2/t) dt``."""
    val, _ = integrate.quad(lambda t: 2.0 * (1.0 - t) * math.log1p(2.0 / t), 0.0, 1.0, limit=200)
    return val


def counterexample_suite(M_list: Sequence[int] = (2, 4, 8, 16, 32), p: float = 1.0,
                         n: int = 2048, L: float = 2.0) -> ExperimentReport:
    """Alternating steps ``f_M`` on ``[0, 1]``: sup norm, ``||Phi*_1 f_M||_{L^p}`` and the quadratic lower bound.

    Growth in ``M`` is fitted both linearly and log-log for the measured norm
    and for ``(M/2) int int log(1 + 2/|x-y|)``.
    """
    M_list = [int(M) for M in M_list]
    if any(M not in (1, 2, 4, 8, 16, 32) for M in M_list):
        raise ParameterError("M_list must be drawn from {1, 2, 4, 8, 16, 32}", "M in powers of two <= 32")
    dom = Domain(1, L, n)
    rep = ExperimentReport("counterexample", {"p": p, "s": 1.0, "M_list": M_list}, _inputs(dom, None))
    J = step_pair_integral()
    phis, lbs, sups = [], [], []
    for M in M_list:
        f = sample(AnalyticFunction("step_sum", {"M": M}), dom)
        sups.append(float(np.max(np.abs(f.values))))
        phis.append(phi_star(f, 1.0).lp_norm(p))
        lbs.append(0.5 * M * J)
        rep.add(f"sup[M={M}]", sups[-1])
        rep.add(f"phi_star_norm[M={M}]", phis[-1])
        rep.add(f"lower_bound_integral[M={M}]", lbs[-1])
    rep.checks = {"sup_norm_one": all(s == 1.0 for s in sups)}
    if len(M_list) >= 2:
        rep.fits = {"phi_star_loglog": loglog_fit(M_list, phis), "phi_star_linear": linear_fit(M_list, phis),
                    "lower_bound_loglog": loglog_fit(M_list, lbs), "lower_bound_linear": linear_fit(M_list, lbs)}
        rep.checks["growth_exponent_ge_0.8"] = rep.fits["phi_star_loglog"]["exponent"] >= 0.8
    rep.plots["counterexample"] = {"header": ["M", "phi_star_norm", "lower_bound_integral"],
                                   "rows": [[M, a, b] for M, a, b in zip(M_list, phis, lbs)]}
    return rep


# ---------------------------------------------------------------------------
# maximal-function equivalence


def phi_star_witness_band(functions: Sequence[AnalyticFunction], dom: Domain, s: float = 1.0,
                          p: float = 2.0, pairs: PairSample | None = None) -> ExperimentReport:
    """``||Phi*_s f||_p`` against the best constant witness norm on the box, across a family."""
    pairs = make_pairs(dom) if pairs is None else pairs
    rep = ExperimentReport("phi-star-equivalence", {"s": s, "p": p},
                           {"domain": dom.to_dict(), "functions": [g.to_dict() for g in functions],
                            "pairs": pairs.to_dict()})
    ratios = []
    for i, g in enumerate(functions):
        f = sample(g, dom)
        phi = phi_star(f, s).lp_norm(p)
        c = best_constant_witness(f, s, pairs)
        wn = lp_norm(constant_witness(dom, c).g, p)
        rep.add(f"phi_star_norm[{i}]", phi)
        rep.add(f"witness_norm[{i}]", wn)
        ratios.append(phi / wn if wn > 0 else float("nan"))
        rep.add(f"ratio[{i}]", ratios[-1])
    rep.band = band_of(ratios)
    return rep


__all__ = [
    "ExperimentReport", "GradientField", "least_squares", "loglog_fit", "linear_fit", "band_of",
    "band_ratio", "rel_change", "indicator_scaling", "log_perimeter", "embedding_constant",
    "weak_embedding_constant", "frac_embedding_constant", "interpolation_constant",
    "immersion_monotonicity", "truncated_immersion_check", "gradient_log_bound", "taylor_log_average",
    "local_diff_decay", "step_pair_integral", "counterexample_suite", "phi_star_witness_band",
]
