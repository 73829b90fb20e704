"""Pointwise functionals, maximal functions and pairwise certificates.

Ball suprema (Hardy-Littlewood ``M`` and ``Phi*``) run over the dyadic radii
``dx * 2^k <= 2L``.  The discrete ball around node ``i`` is the set of nodes
``j`` (inside the box or not) with ``|x_j - x_i| < r``; nodes outside the box
carry the value 0.  Its cardinality therefore does not depend on ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ParameterError
from .grid import Domain, SampledFunction, evaluate, lp_norm
from .quadrature import RadialScheme
from .seminorms import (SeminormParams, _w_spec, _x_spec, pointwise_sweep, power_transform,
                        x_seminorm)

DEGENERATE_TOL = 1e-12
EXP_CLAMP = 700.0
LUSIN_DELTA_MAX = 1.0 / 36.0


@dataclass(frozen=True, eq=False)
class PointFunctional:
    """Nonnegative per-node values of ``L``, ``D``, ``Phi*`` or ``M``."""

    domain: Domain
    values: np.ndarray
    kind: str
    params: SeminormParams = field(default_factory=SeminormParams)

    def __post_init__(self):
        if self.kind not in ("lusin_L", "frac_D", "phi_star", "hl_maximal"):
            raise ParameterError(f"unknown functional kind {self.kind!r}", "known kind")
        v = np.asarray(self.values, dtype=float)
        if not (np.all(np.isfinite(v)) and np.all(v >= 0)):
            raise ParameterError("functional values must be finite and nonnegative", "values >= 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def as_sampled(self) -> SampledFunction:
        return SampledFunction(self.domain, self.values)

    def lp_norm(self, p: float) -> float:
        return lp_norm(self.as_sampled(), p)

    def at(self, x) -> np.ndarray:
        return evaluate(self.as_sampled(), x)


# ---------------------------------------------------------------------------
# inner-integral functionals


def lusin_functional(f: SampledFunction, params: SeminormParams,
                     scheme: RadialScheme | None = None) -> PointFunctional:
    """``L f(x) = (int_{|h|<1/3} |f(x+h) - f(x)|^p |h|^-d log(1/|h|)^(p gamma - 1) dh)^(1/p)``.

    Values live on the domain extended by the largest shift, so that
    ``||L f||_p`` reproduces :func:`x_seminorm` exactly.
    """
    spec, scheme = _x_spec(f, params, scheme, allow_gamma_zero=False)
    dom, acc, _ = pointwise_sweep(f, spec, scheme, power_transform(params.p))
    return PointFunctional(dom, np.maximum(acc, 0.0) ** (1.0 / params.p), "lusin_L", params)


def frac_functional(f: SampledFunction, params: SeminormParams,
                    scheme: RadialScheme | None = None) -> PointFunctional:
    """``D f(x) = (int_{|h|<R_out} |f(x+h) - f(x)|^p |h|^-(d+ps) dh)^(1/p)``, tail excluded as in ``w_seminorm``."""
    spec, scheme = _w_spec(f, params, scheme)
    dom, acc, _ = pointwise_sweep(f, spec, scheme, power_transform(params.p))
    return PointFunctional(dom, np.maximum(acc, 0.0) ** (1.0 / params.p), "frac_D", params)


# ---------------------------------------------------------------------------
# ball suprema


def dyadic_radii(dom: Domain) -> list[float]:
    """``dx * 2^k`` for ``k = 0, 1, ...`` up to ``2L``."""
    out, k = [], 0
    while dom.spacing * 2 ** k <= 2.0 * dom.L * (1 + 1e-12):
        out.append(dom.spacing * 2 ** k)
        k += 1
    return out


def ball_offsets(rho: float, d: int) -> np.ndarray:
    """Integer offsets ``m`` with ``|m| < rho`` (``rho`` in cells)."""
    K = int(math.ceil(rho)) - 1
    ax = np.arange(-K, K + 1)
    if d == 1:
        return ax[:, None]
    a, b = np.meshgrid(ax, ax, indexing="ij")
    m = np.stack([a.ravel(), b.ravel()], axis=-1)
    return m[np.sum(m * m, axis=1) < rho * rho]


def _prefix_ball_sums(v: np.ndarray, rho: float) -> np.ndarray:
    """Sums of ``v`` over the discrete ball of radius ``rho`` cells (zero outside)."""
    d = v.ndim
    K = int(math.ceil(rho)) - 1
    n = v.shape[0]
    pad = np.pad(v, K + 1)
    if d == 1:
        c = np.concatenate([[0.0], np.cumsum(pad)])
        i = np.arange(n) + K + 1
        return c[i + K + 1] - c[i - K]
    # 2-D: each ball is a union of row segments
    c = np.concatenate([np.zeros((pad.shape[0], 1)), np.cumsum(pad, axis=1)], axis=1)
    out = np.zeros_like(v)
    cols = np.arange(n) + K + 1
    rr = rho * rho
    for a in range(-K, K + 1):
        rem = rr - a * a
        w = int(math.ceil(math.sqrt(rem))) - 1
        while (w + 1) ** 2 < rem:
            w += 1
        while w >= 0 and w * w >= rem:
            w -= 1
        if w < 0:
            continue
        rows = c[K + 1 + a: K + 1 + a + n]
        out += rows[:, cols + w + 1] - rows[:, cols - w]
    return out


def hl_maximal(f: SampledFunction) -> PointFunctional:
    """Dyadic Hardy-Littlewood maximal function of ``|f|`` on the grid nodes."""
    dom = f.domain
    a = np.abs(f.values)
    best = a.copy()   # r = dx: the ball is the node itself
    for r in dyadic_radii(dom)[1:]:
        rho = r / dom.spacing
        count = len(ball_offsets(rho, dom.d))
        best = np.maximum(best, _prefix_ball_sums(a, rho) / count)
    return PointFunctional(dom, best, "hl_maximal")


def phi_star(f: SampledFunction, s: float, q: float = 1.0) -> PointFunctional:
    """``sup_r`` ball average of ``log(1 + |f(x) - f(y)| / r^s)^q`` over the dyadic radii."""
    if not 0 < s <= 1:
        raise ParameterError(f"s must lie in (0, 1], got {s}", "0 < s <= 1")
    if not q >= 1:
        raise ParameterError(f"q must be >= 1, got {q}", "q >= 1")
    dom = f.domain
    n = dom.n
    radii = dyadic_radii(dom)
    K = int(math.ceil(radii[-1] / dom.spacing))
    padded = np.pad(f.values, K)
    core = tuple(slice(K, K + n) for _ in range(dom.d))
    centre = padded[core]
    best = np.zeros(dom.shape)
    for r in radii:
        offs = ball_offsets(r / dom.spacing, dom.d)
        acc = np.zeros(dom.shape)
        inv = r ** (-s)
        for m in offs:
            if not np.any(m):
                continue
            sl = tuple(slice(K + k, K + k + n) for k in m)
            t = np.log1p(np.abs(padded[sl] - centre) * inv)
            acc += t if q == 1 else t ** q
        best = np.maximum(best, acc / len(offs))
    return PointFunctional(dom, best, "phi_star", SeminormParams(s=s, q=q))


# ---------------------------------------------------------------------------
# pair samples and certificates


@dataclass(frozen=True, eq=False)
class PairSample:
    x: np.ndarray
    y: np.ndarray
    delta_min: float
    delta_max: float
    seed: int

    def __post_init__(self):
        dist = self.distances()
        if len(dist) and not (np.all(dist >= self.delta_min * (1 - 1e-12))
                              and np.all(dist <= self.delta_max * (1 + 1e-12))):
            raise ParameterError("pair separations outside [delta_min, delta_max]", "delta bounds")

    def distances(self) -> np.ndarray:
        return np.sqrt(np.sum((self.x - self.y) ** 2, axis=-1))

    def __len__(self) -> int:
        return len(self.x)

    def to_dict(self) -> dict:
        return {"n_pairs": len(self), "delta_min": self.delta_min,
                "delta_max": self.delta_max, "seed": self.seed}


def make_pairs(dom: Domain, n_pairs: int = 10_000, seed: int = 0, delta_min: float | None = None,
               delta_max: float | None = None) -> PairSample:
    """Seeded pairs: ``x`` uniform in the box, ``|x - y|`` log-uniform in ``[delta_min, delta_max]``.

    Defaults are ``4 dx`` (capped at half of ``delta_max`` on coarse grids)
    and just under ``1/36``.  Coordinates of ``y`` that
    leave the box are mirrored through ``x``, which keeps the separation.
    """
    dmax = LUSIN_DELTA_MAX * (1 - 1e-9) if delta_max is None else float(delta_max)
    dmin = min(4.0 * dom.spacing, 0.5 * dmax) if delta_min is None else float(delta_min)
    if not 0 < dmin < dmax:
        raise ParameterError(f"need 0 < delta_min < delta_max, got {dmin}, {dmax}", "delta_min < delta_max")
    if dmax >= dom.L:
        raise ParameterError("delta_max must be smaller than the box half-width", "delta_max < L")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-dom.L, dom.L, size=(n_pairs, dom.d))
    delta = np.exp(rng.uniform(math.log(dmin), math.log(dmax), size=n_pairs))
    if dom.d == 1:
        u = np.where(rng.uniform(size=n_pairs) < 0.5, -1.0, 1.0)[:, None]
    else:
        th = rng.uniform(0.0, 2.0 * math.pi, size=n_pairs)
        u = np.stack([np.cos(th), np.sin(th)], axis=-1)
    step = delta[:, None] * u
    y = x + step
    out = (y < -dom.L) | (y >= dom.L)
    y = np.where(out, x - step, y)
    return PairSample(x, y, dmin, dmax, int(seed))


class PairRatio(NamedTuple):
    ratio: float          # max over usable pairs; inf if any violation
    skipped: int          # 0/0 pairs
    violations: int       # zero denominator with nonzero numerator
    used: int


def _pair_max(num: np.ndarray, den: np.ndarray) -> PairRatio:
    if len(num) == 0:
        raise ParameterError("empty pair sample", "at least one pair")
    degenerate = den < DEGENERATE_TOL
    viol = degenerate & (num > 0)
    skipped = int(np.sum(degenerate & ~viol))
    ok = ~degenerate
    ratio = float(np.max(num[ok] / den[ok])) if np.any(ok) else 0.0
    if np.any(viol):
        ratio = math.inf
    return PairRatio(ratio, skipped, int(np.sum(viol)), int(np.sum(ok)))


def _pair_values(f: SampledFunction, pairs: PairSample):
    return evaluate(f, pairs.x), evaluate(f, pairs.y)


def lusin_pair_ratio(f: SampledFunction, params: SeminormParams, scheme: RadialScheme | None = None,
                     pairs: PairSample | None = None, L: PointFunctional | None = None) -> PairRatio:
    """Max of ``|f(x) - f(y)| log(1/|x-y|)^gamma / (L f(x) + L f(y))`` over the pairs."""
    pairs = make_pairs(f.domain) if pairs is None else pairs
    if pairs.delta_max >= LUSIN_DELTA_MAX:
        raise ParameterError("pairs must satisfy |x - y| < 1/36", "delta_max < 1/36")
    L = lusin_functional(f, params, scheme) if L is None else L
    fx, fy = _pair_values(f, pairs)
    num = np.abs(fx - fy) * np.log(1.0 / pairs.distances()) ** params.gamma
    return _pair_max(num, L.at(pairs.x) + L.at(pairs.y))


def holder_pair_ratio(f: SampledFunction, params: SeminormParams, scheme: RadialScheme | None = None,
                      pairs: PairSample | None = None, D: PointFunctional | None = None) -> PairRatio:
    """Max of ``|f(x) - f(y)| |x-y|^-s / (D f(x) + D f(y))`` over the pairs."""
    pairs = make_pairs(f.domain) if pairs is None else pairs
    D = frac_functional(f, params, scheme) if D is None else D
    fx, fy = _pair_values(f, pairs)
    num = np.abs(fx - fy) * pairs.distances() ** (-params.s)
    return _pair_max(num, D.at(pairs.x) + D.at(pairs.y))


@dataclass(frozen=True, eq=False)
class CandidateWitness:
    g: SampledFunction
    role: str   # "hajlasz" or "lusin_converse"

    def __post_init__(self):
        if self.role not in ("hajlasz", "lusin_converse"):
            raise ParameterError(f"unknown witness role {self.role!r}", "role in {hajlasz, lusin_converse}")
        if np.any(self.g.values < 0):
            raise ParameterError("witness must be nonnegative", "g >= 0")


def constant_witness(dom: Domain, value: float, role: str = "hajlasz") -> CandidateWitness:
    """``g = value`` on the box (zero outside)."""
    return CandidateWitness(SampledFunction(dom, np.full(dom.shape, float(value))), role)


def lipschitz_witness(dom: Domain, K: float) -> CandidateWitness:
    """``g = log(1 + K)`` on the box: ``e^(2g) - 1 >= K`` certifies a ``K``-Lipschitz ``f`` at ``s = 1``."""
    return constant_witness(dom, math.log1p(K), "hajlasz")


def lipschitz_converse_witness(dom: Domain, K: float, gamma: float,
                               delta_min: float | None = None,
                               delta_max: float = LUSIN_DELTA_MAX) -> CandidateWitness:
    """Constant ``g`` satisfying the log-Hölder hypothesis for a ``K``-Lipschitz ``f`` on sampled pairs.

    Nearest-cell lookup moves each point by at most ``dx/2``, so sampled
    differences are bounded by ``K (t + dx)`` at separation ``t >= delta_min``.
    Since ``t log(1/t)^gamma`` increases on ``(0, e^-gamma)``, the worst pair
    sits at ``delta_max``.
    """
    dmin = 4.0 * dom.spacing if delta_min is None else delta_min
    if not delta_max < math.exp(-gamma):
        raise ParameterError("delta_max must be below exp(-gamma)", "delta_max < exp(-gamma)")
    slack = 1.0 + dom.spacing / dmin
    value = 0.5 * K * slack * delta_max * math.log(1.0 / delta_max) ** gamma
    return constant_witness(dom, value, "lusin_converse")


class HajlaszResult(NamedTuple):
    ratio: float
    skipped: int
    violations: int
    used: int
    clamped: int          # pairs where g(x) + g(y) exceeded the exp clamp


def hajlasz_check(f: SampledFunction, witness: CandidateWitness, s: float,
                  pairs: PairSample | None = None) -> HajlaszResult:
    """Max of ``|f(x) - f(y)| / (|x-y|^s (exp(g(x) + g(y)) - 1))``; at most 1 certifies the sample."""
    if witness.role != "hajlasz":
        raise ParameterError("witness role must be 'hajlasz'", "role == hajlasz")
    if not 0 < s <= 1:
        raise ParameterError(f"s must lie in (0, 1], got {s}", "0 < s <= 1")
    pairs = make_pairs(f.domain) if pairs is None else pairs
    fx, fy = _pair_values(f, pairs)
    gsum = evaluate(witness.g, pairs.x) + evaluate(witness.g, pairs.y)
    clamped = int(np.sum(gsum > EXP_CLAMP))
    den = pairs.distances() ** s * np.expm1(np.minimum(gsum, EXP_CLAMP))
    r = _pair_max(np.abs(fx - fy), den)
    return HajlaszResult(r.ratio, r.skipped, r.violations, r.used, clamped)


class ConverseResult(NamedTuple):
    seminorm_p: float      # [f]_{X^{alpha,p}}^p
    bound: float           # ||g||_p^p / (p (gamma - alpha))
    hypothesis_ok: bool
    hypothesis_ratio: float


def lusin_converse_seminorm(f: SampledFunction, witness: CandidateWitness, gamma: float,
                            alpha: float, params: SeminormParams,
                            scheme: RadialScheme | None = None,
                            pairs: PairSample | None = None) -> ConverseResult:
    """Measured ``[f]_{X^{alpha,p}}^p`` next to ``||g||_p^p / (p (gamma - alpha))``.

    The hypothesis ``|f(x) - f(y)| <= log(1/|x-y|)^-gamma (g(x) + g(y))`` is
    checked on the pair sample first; a failure is reported, not raised.
    """
    if not 0 < alpha < gamma:
        raise ParameterError(f"need 0 < alpha < gamma, got alpha={alpha}, gamma={gamma}", "0 < alpha < gamma")
    if witness.role != "lusin_converse":
        raise ParameterError("witness role must be 'lusin_converse'", "role == lusin_converse")
    params.require("p")
    p = params.p
    pairs = make_pairs(f.domain) if pairs is None else pairs
    fx, fy = _pair_values(f, pairs)
    num = np.abs(fx - fy) * np.log(1.0 / pairs.distances()) ** gamma
    den = evaluate(witness.g, pairs.x) + evaluate(witness.g, pairs.y)
    hyp = _pair_max(num, den)
    ok = hyp.violations == 0 and hyp.ratio <= 1.0
    S = x_seminorm(f, SeminormParams(gamma=alpha, p=p), scheme)
    bound = lp_norm(witness.g, p) ** p / (p * (gamma - alpha))
    return ConverseResult(S ** p, bound, bool(ok), hyp.ratio)


def phi_star_lp(f: SampledFunction, s: float, p: float, q: float = 1.0) -> float:
    return phi_star(f, s, q).lp_norm(p)


def best_constant_witness(f: SampledFunction, s: float, pairs: PairSample | None = None) -> float:
    """Smallest constant ``c`` with ``|f(x) - f(y)| <= |x-y|^s (e^(2c) - 1)`` on the pairs."""
    pairs = make_pairs(f.domain) if pairs is None else pairs
    fx, fy = _pair_values(f, pairs)
    q = float(np.max(np.abs(fx - fy) / pairs.distances() ** s, initial=0.0))
    return 0.5 * math.log1p(q)


__all__ = [
    "PointFunctional", "lusin_functional", "frac_functional", "hl_maximal", "phi_star",
    "dyadic_radii", "ball_offsets", "PairSample", "make_pairs", "PairRatio", "lusin_pair_ratio",
    "holder_pair_ratio", "CandidateWitness", "constant_witness", "lipschitz_witness", "lipschitz_converse_witness",
    "HajlaszResult", "hajlasz_check", "ConverseResult", "lusin_converse_seminorm",
    "best_constant_witness", "phi_star_lp",
]
