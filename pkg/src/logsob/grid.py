"""Uniform grids, analytic test functions and Lebesgue-type norms.

Functions live on the box ``[-L, L)^d`` sampled at cell centres and are
extended by zero outside the box.  Evaluation off the grid is nearest-cell
lookup, so indicator functions stay exactly {0, 1}-valued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterator

import numpy as np

from .errors import ParameterError
from .reduction import block_sum

SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi}  # measure of the unit sphere S^{d-1}


@dataclass(frozen=True)
class Domain:
    """The box ``[-L, L)^d`` split into ``n`` cells per axis."""

    d: int
    L: float
    n: int

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ParameterError(f"dimension must be 1 or 2, got {self.d}", "d in {1, 2}")
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 16):
            raise ParameterError(f"points_per_axis must be an integer >= 16, got {self.n}", "n >= 16")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ParameterError(f"half_width must be positive, got {self.L}", "L > 0")

    @property
    def spacing(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    def axis(self) -> np.ndarray:
        """Cell-centre coordinates along one axis."""
        return -self.L + (np.arange(self.n) + 0.5) * self.spacing

    def points(self) -> np.ndarray:
        """Cell centres as an array of shape ``shape + (d,)``."""
        ax = self.axis()
        grids = np.meshgrid(*([ax] * self.d), indexing="ij")
        return np.stack(grids, axis=-1)

    def extended(self, cells: int) -> "Domain":
        """Same spacing, ``cells`` extra cells on every side."""
        return Domain(self.d, self.L + cells * self.spacing, self.n + 2 * cells)

    def refined(self, factor: int = 2) -> "Domain":
        return Domain(self.d, self.L, self.n * factor)

    def to_dict(self) -> dict:
        return {"d": self.d, "L": self.L, "n": self.n}


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Cell-centre samples of a real function on ``domain``."""

    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != self.domain.shape:
            raise ParameterError(
                f"values shape {vals.shape} does not match domain shape {self.domain.shape}",
                "values.shape == (n,)*d")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("sampled values must be finite", "finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        if other.domain != self.domain:
            raise ParameterError("cannot add functions on different domains", "same domain")
        return SampledFunction(self.domain, self.values + other.values)

    def scaled(self, c: float) -> "SampledFunction":
        return SampledFunction(self.domain, c * self.values)

    def translated(self, cells) -> "SampledFunction":
        """Shift by a whole number of cells per axis, filling with zeros."""
        cells = np.broadcast_to(np.asarray(cells, dtype=int), (self.domain.d,))
        out = np.zeros_like(self.values)
        src, dst = [], []
        for c in cells:
            n = self.domain.n
            if abs(c) >= n:
                return SampledFunction(self.domain, out)
            src.append(slice(max(0, -c), n - max(0, c)))
            dst.append(slice(max(0, c), n - max(0, -c)))
        out[tuple(dst)] = self.values[tuple(src)]
        return SampledFunction(self.domain, out)

    def csv_rows(self) -> Iterator[list[float]]:
        """Rows ``(x_1, .., x_d, value)`` for every grid node."""
        pts = self.domain.points().reshape(-1, self.domain.d)
        for p, v in zip(pts, self.values.ravel()):
            yield [*map(float, p), float(v)]


# ---------------------------------------------------------------------------
# analytic test functions


def _bump(rho: np.ndarray, a: float) -> np.ndarray:
    t = np.clip(rho / a, 0.0, 1.0)
    out = np.zeros_like(t)
    inside = t < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


def _bump_slope(rho: np.ndarray, a: float) -> np.ndarray:
    """d/drho of :func:`_bump`."""
    t = np.clip(rho / a, 0.0, 1.0)
    out = np.zeros_like(t)
    inside = t < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti ** 2)) * (-2.0 * ti / a) / (1.0 - ti ** 2) ** 2
    return out


_KINDS = {
    "gaussian", "indicator_ball", "indicator_union", "step_sum", "trig_poly",
    "constant", "affine", "abs_kink", "truncated_power",
}


@dataclass(frozen=True, eq=False)
class AnalyticFunction:
    """A closed-form test function, evaluated at points of shape ``(..., d)``.

    Kinds and parameters::

        gaussian(sigma)                  exp(-|x|^2 / (2 sigma^2))
        indicator_ball(r, center)        1 on the open ball |x - center| < r
        indicator_union(balls)           1 on a union of disjoint balls [(center, r), ...]
        step_sum(M)                      sum_k (-1)^k 1_[k/M, (k+1)/M) in x_1, times 1_[0,1) in x_2
        trig_poly(seed, degree, omega, window, support)
                                         random sum_k a_k cos(k omega u_k.x + phi_k), times a
                                         smooth bump of radius ``support`` unless window="none"
        constant(c)
        affine(slope, intercept)         slope . x + intercept
        abs_kink(slope)                  slope * |x|
        truncated_power(alpha, cap, radius)
                                         min(|x|^-alpha, cap) on |x| < radius
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown function kind {self.kind!r}", "kind in known kinds")
        p = self.params
        if self.kind == "gaussian" and not p.get("sigma", 1.0) > 0:
            raise ParameterError("gaussian sigma must be positive", "sigma > 0")
        if self.kind == "indicator_ball" and not p["r"] > 0:
            raise ParameterError("indicator_ball radius must be positive", "r > 0")
        if self.kind == "step_sum":
            M = p["M"]
            if not (isinstance(M, (int, np.integer)) and M >= 1):
                raise ParameterError(f"step_sum M must be an integer >= 1, got {M}", "M >= 1 integer")
        if self.kind == "trig_poly" and not (int(p["degree"]) >= 1):
            raise ParameterError("trig_poly degree must be >= 1", "degree >= 1")
        if self.kind == "indicator_union":
            balls = [(np.atleast_1d(np.asarray(c, float)), float(r)) for c, r in p["balls"]]
            for i, (ci, ri) in enumerate(balls):
                if ri <= 0:
                    raise ParameterError("ball radii must be positive", "r > 0")
                for cj, rj in balls[i + 1:]:
                    if np.linalg.norm(ci - cj) < ri + rj:
                        raise ParameterError("balls overlap", "disjoint balls")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": _jsonable(self.params)}

    @classmethod
    def from_dict(cls, spec: dict) -> "AnalyticFunction":
        return cls(spec["kind"], dict(spec.get("params", {})))

    # -- coefficient tables -------------------------------------------------

    def _trig_table(self):
        p = self.params
        deg = int(p["degree"])
        rng = np.random.default_rng(int(p["seed"]))
        amps = rng.normal(size=deg) / math.sqrt(deg)
        phases = rng.uniform(0.0, 2.0 * math.pi, size=deg)
        angles = rng.uniform(0.0, math.pi, size=deg)
        return deg, amps, phases, angles

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        d = x.shape[-1]
        p = self.params
        k = self.kind
        rho = np.sqrt(np.sum(x * x, axis=-1))
        if k == "gaussian":
            s = p.get("sigma", 1.0)
            return np.exp(-rho ** 2 / (2.0 * s * s))
        if k == "indicator_ball":
            c = np.asarray(p.get("center", 0.0), dtype=float)
            dist = np.sqrt(np.sum((x - c) ** 2, axis=-1))
            return (dist < p["r"]).astype(float)
        if k == "indicator_union":
            out = np.zeros(x.shape[:-1])
            for c, r in p["balls"]:
                dist = np.sqrt(np.sum((x - np.asarray(c, dtype=float)) ** 2, axis=-1))
                out = np.where(dist < r, 1.0, out)
            return out
        if k == "step_sum":
            M = int(p["M"])
            x1 = x[..., 0]
            idx = np.floor(x1 * M)
            inside = (x1 >= 0.0) & (idx < M)
            if d == 2:
                inside &= (x[..., 1] >= 0.0) & (x[..., 1] < 1.0)
            sign = np.where(np.mod(idx, 2) == 0, 1.0, -1.0)
            return np.where(inside, sign, 0.0)
        if k == "trig_poly":
            return self._trig_value(x)
        if k == "constant":
            return np.full(x.shape[:-1], float(p["c"]))
        if k == "affine":
            slope = np.broadcast_to(np.asarray(p["slope"], dtype=float), (d,))
            return x @ slope + float(p.get("intercept", 0.0))
        if k == "abs_kink":
            return float(p.get("slope", 1.0)) * rho
        if k == "truncated_power":
            with np.errstate(divide="ignore"):
                vals = np.minimum(np.where(rho > 0, rho ** (-p["alpha"]), np.inf), p["cap"])
            return np.where(rho < p["radius"], vals, 0.0)
        raise AssertionError(k)

    def _trig_phase(self, x):
        p = self.params
        deg, amps, phases, angles = self._trig_table()
        omega = float(p.get("omega", math.pi))
        kk = np.arange(1, deg + 1)
        if x.shape[-1] == 1:
            proj = x[..., 0][..., None] * np.ones(deg)
            dirs = np.ones((deg, 1))
        else:
            dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
            proj = x @ dirs.T
        return kk * omega, amps, phases, dirs, proj

    def _trig_value(self, x):
        freqs, amps, phases, _, proj = self._trig_phase(x)
        series = np.sum(amps * np.cos(freqs * proj + phases), axis=-1)
        if self.params.get("window", "bump") == "none":
            return series
        rho = np.sqrt(np.sum(x * x, axis=-1))
        return series * _bump(rho, float(self.params.get("support", 0.75)))

    def gradient(self, x) -> np.ndarray:
        """Analytic gradient, shape ``(..., d)``; jump discontinuities are ignored."""
        x = np.asarray(x, dtype=float)
        d = x.shape[-1]
        p = self.params
        k = self.kind
        rho = np.sqrt(np.sum(x * x, axis=-1))
        if k == "gaussian":
            s = p.get("sigma", 1.0)
            return -x / (s * s) * np.exp(-rho ** 2 / (2.0 * s * s))[..., None]
        if k in ("indicator_ball", "indicator_union", "step_sum", "constant"):
            return np.zeros_like(x)
        if k == "affine":
            slope = np.broadcast_to(np.asarray(p["slope"], dtype=float), (d,))
            return np.broadcast_to(slope, x.shape).copy()
        if k == "abs_kink":
            with np.errstate(invalid="ignore", divide="ignore"):
                unit = np.where(rho[..., None] > 0, x / rho[..., None], 0.0)
            return float(p.get("slope", 1.0)) * unit
        if k == "truncated_power":
            a = p["alpha"]
            with np.errstate(invalid="ignore", divide="ignore"):
                active = (rho < p["radius"]) & (rho > 0) & (rho ** (-a) < p["cap"])
                radial = np.where(active, -a * rho ** (-a - 1.0), 0.0)
                unit = np.where(rho[..., None] > 0, x / rho[..., None], 0.0)
            return radial[..., None] * unit
        if k == "trig_poly":
            freqs, amps, phases, dirs, proj = self._trig_phase(x)
            arg = freqs * proj + phases
            series = np.sum(amps * np.cos(arg), axis=-1)
            dseries = -np.einsum("...k,kd->...d", amps * freqs * np.sin(arg), dirs)
            if p.get("window", "bump") == "none":
                return dseries
            a = float(p.get("support", 0.75))
            w = _bump(rho, a)
            with np.errstate(invalid="ignore", divide="ignore"):
                unit = np.where(rho[..., None] > 0, x / rho[..., None], 0.0)
            return dseries * w[..., None] + (series * _bump_slope(rho, a))[..., None] * unit
        raise AssertionError(k)

    def increment(self, x, y) -> np.ndarray:
        """``f(x + y) - f(x)``; exact (no cancellation) for affine functions."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind == "affine":
            slope = np.broadcast_to(np.asarray(self.params["slope"], dtype=float), (x.shape[-1],))
            return np.sum(np.broadcast_to(y, np.broadcast_shapes(x.shape, y.shape)) * slope, axis=-1)
        if self.kind == "constant":
            return np.zeros(np.broadcast_shapes(x.shape, y.shape)[:-1])
        return self(x + y) - self(x)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def gaussian(sigma: float = 1.0) -> AnalyticFunction:
    return AnalyticFunction("gaussian", {"sigma": sigma})


def indicator_ball(r: float, center=0.0) -> AnalyticFunction:
    return AnalyticFunction("indicator_ball", {"r": r, "center": center})


def indicator_union(balls) -> AnalyticFunction:
    return AnalyticFunction("indicator_union", {"balls": [(c, r) for c, r in balls]})


def step_sum(M: int) -> AnalyticFunction:
    return AnalyticFunction("step_sum", {"M": M})


def trig_poly(seed: int, degree: int, omega: float = math.pi, window: str = "bump",
              support: float = 0.75) -> AnalyticFunction:
    return AnalyticFunction("trig_poly", {"seed": seed, "degree": degree, "omega": omega,
                                          "window": window, "support": support})


def constant(c: float) -> AnalyticFunction:
    return AnalyticFunction("constant", {"c": c})


def affine(slope, intercept: float = 0.0) -> AnalyticFunction:
    return AnalyticFunction("affine", {"slope": slope, "intercept": intercept})


def abs_kink(slope: float = 1.0) -> AnalyticFunction:
    return AnalyticFunction("abs_kink", {"slope": slope})


def truncated_power(alpha: float, cap: float, radius: float = 0.5) -> AnalyticFunction:
    return AnalyticFunction("truncated_power", {"alpha": alpha, "cap": cap, "radius": radius})


# ---------------------------------------------------------------------------
# operations


def _check_fits(g: AnalyticFunction, dom: Domain) -> None:
    p = g.params
    if g.kind == "indicator_ball":
        c = np.abs(np.asarray(p.get("center", 0.0), dtype=float))
        if not p["r"] + float(np.max(c)) < dom.L:
            raise ParameterError(
                f"indicator_ball radius {p['r']} (centre {p.get('center', 0.0)}) must lie inside the box L={dom.L}",
                "r < L")
    if g.kind == "step_sum" and dom.L < 1.0:
        raise ParameterError("step_sum lives on [0, 1] and needs L >= 1", "L >= 1")
    if g.kind == "truncated_power" and not p["radius"] <= dom.L:
        raise ParameterError("truncated_power radius must fit in the box", "radius <= L")


def sample(g: AnalyticFunction, dom: Domain) -> SampledFunction:
    """Evaluate ``g`` at the cell centres of ``dom``."""
    _check_fits(g, dom)
    return SampledFunction(dom, g(dom.points()))


def cell_index(dom: Domain, x) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-cell indices of points ``x`` (shape ``(..., d)``) and an inside mask."""
    x = np.asarray(x, dtype=float)
    idx = np.floor((x + dom.L) / dom.spacing).astype(np.int64)
    inside = np.all((idx >= 0) & (idx < dom.n), axis=-1)
    return np.clip(idx, 0, dom.n - 1), inside


def evaluate(f: SampledFunction, x) -> np.ndarray | float:
    """Nearest-cell lookup at points ``x``; zero outside the box."""
    x = np.asarray(x, dtype=float)
    if f.domain.d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    scalar = x.ndim == 1
    pts = x.reshape(-1, f.domain.d) if not scalar else x[None, :]
    idx, inside = cell_index(f.domain, pts)
    vals = f.values[tuple(idx.T)]
    out = np.where(inside, vals, 0.0)
    if scalar:
        return float(out[0])
    return out.reshape(x.shape[:-1])


def lp_norm(f: SampledFunction, p: float) -> float:
    """``(sum |f|^p dx)^(1/p)`` over the grid."""
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}", "p > 0")
    total = block_sum(np.abs(f.values) ** p) * f.domain.cell_volume
    return total ** (1.0 / p)


def weak_lp_quasinorm(f: SampledFunction, p: float) -> float:
    """``sup_t t * |{|f| >= t}|^(1/p)`` with ``t`` over the distinct sample magnitudes."""
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p}", "p > 0")
    a = np.sort(np.abs(f.values).ravel())[::-1]
    if a.size == 0 or a[0] == 0.0:
        return 0.0
    # counts[i] = #{|f| >= a[i]}: position of the last entry equal to a[i]
    last = np.searchsorted(-a, -a, side="right")
    meas = last * f.domain.cell_volume
    return float(np.max(a * meas ** (1.0 / p)))
