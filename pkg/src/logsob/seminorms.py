"""Gagliardo-type double integrals: grid sum in ``x``, radial scheme in ``h``.

With nearest-cell evaluation, ``f(x_i + h)`` is the sample at cell
``i + floor(h / dx + 1/2)``, so every quadrature node ``h`` acts through an
integer shift ``m``.  The kernel weights are first accumulated per distinct
shift, then each shift contributes ``W_m * sum_x phi(f(x + m) - f(x)) dx^d``
over the zero-extended array.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError
from .grid import SPHERE_AREA, Domain, SampledFunction, lp_norm
from .quadrature import (LOG_KERNEL_RADIUS, KernelSpec, RadialScheme, build_radial_scheme,
                         check_compatible)
from .reduction import block_sum, ordered_map, tree_sum

DEFAULT_N_R = 128


@dataclass(frozen=True)
class SeminormParams:
    """Exponents ``(gamma, p, s, q)``; unset fields stay ``None``."""

    gamma: float | None = None
    p: float | None = None
    s: float | None = None
    q: float | None = None

    def __post_init__(self):
        if self.gamma is not None and not self.gamma >= 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}", "gamma >= 0")
        if self.p is not None and not self.p > 0:
            raise ParameterError(f"p must be > 0, got {self.p}", "p > 0")
        if self.s is not None and not 0 < self.s <= 1:
            raise ParameterError(f"s must lie in (0, 1], got {self.s}", "0 < s <= 1")
        if self.q is not None and not self.q >= 1:
            raise ParameterError(f"q must be >= 1, got {self.q}", "q >= 1")

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ParameterError(f"missing parameter(s): {', '.join(missing)}",
                                 " and ".join(f"{n} set" for n in missing))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SeminormParams":
        return cls(**{k: data.get(k) for k in ("gamma", "p", "s", "q")})


# ---------------------------------------------------------------------------
# shift engine


def default_scheme(dom: Domain, R: float = LOG_KERNEL_RADIUS, r_min: float | None = None,
                   n_r: int = DEFAULT_N_R, n_theta: int | None = None) -> RadialScheme:
    """Scheme with the default inner cutoff of one grid spacing."""
    return build_radial_scheme(dom.spacing if r_min is None else r_min, R, n_r, n_theta, dom.d)


def frac_inner_radius(dom: Domain) -> float:
    """Inner cutoff for the fractional kernel: half a cell.

    Under nearest-cell lookup ``f(x + h) = f(x)`` exactly for ``|h| < dx/2``,
    so this is where the discrete integrand starts.  The log kernels keep the
    one-cell default, where the omitted near field is negligible.
    """
    return 0.5 * dom.spacing


def frac_outer_radius(dom: Domain) -> float:
    """Far cutoff for the fractional kernel: four half-widths, beyond the support diameter."""
    return 4.0 * dom.L


def shift_weights(spec: KernelSpec, scheme: RadialScheme, spacing: float):
    """Distinct integer shifts hit by the scheme's nodes and their summed weights.

    Returns ``(shifts, weights)`` with ``shifts`` of shape ``(N, d)`` in
    lexicographic order; the zero shift is dropped since it contributes nothing.
    """
    check_compatible(spec, scheme)
    d = scheme.d
    radial = scheme.measure_weights() * spec.density(scheme.nodes)
    h = scheme.nodes[:, None, None] * scheme.directions[None, :, :]
    shifts = np.floor(h / spacing + 0.5).astype(np.int64).reshape(-1, d)
    w = (radial[:, None] * scheme.angular_weights[None, :]).reshape(-1)
    uniq, inv = np.unique(shifts, axis=0, return_inverse=True)
    total = np.zeros(len(uniq))
    np.add.at(total, inv.reshape(-1), w)
    keep = np.any(uniq != 0, axis=1)
    return uniq[keep], total[keep]


def _pad(values: np.ndarray, M: int) -> np.ndarray:
    return np.pad(values, M, mode="constant")


def _overlap(P: int, m: np.ndarray):
    base = tuple(slice(max(0, -k), P - max(0, k)) for k in m)
    moved = tuple(slice(max(0, -k) + k, P - max(0, k) + k) for k in m)
    return base, moved


def power_transform(p: float) -> Callable[[np.ndarray], np.ndarray]:
    if p == 1:
        return np.abs
    if p == 2:
        return np.square
    return lambda t: np.abs(t) ** p


def truncated_transform(q: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda t: np.minimum(1.0, np.abs(t) ** q)


def difference_sweep(f: SampledFunction, spec: KernelSpec, scheme: RadialScheme,
                     transform: Callable[[np.ndarray], np.ndarray], threads: int = 1) -> float:
    """``sum_m W_m sum_x phi(f(x + m) - f(x)) dx^d`` over all of Z^d (zero extension)."""
    shifts, weights = shift_weights(spec, scheme, f.domain.spacing)
    if len(shifts) == 0:
        return 0.0
    M = int(np.max(np.abs(shifts)))
    padded = _pad(f.values, M)
    P = padded.shape[0]
    vol = f.domain.cell_volume

    def energy(m):
        base, moved = _overlap(P, m)
        return block_sum(transform(padded[moved] - padded[base])) * vol

    energies = ordered_map(energy, list(shifts), threads)
    return tree_sum([w * e for w, e in zip(weights, energies)])


def pointwise_sweep(f: SampledFunction, spec: KernelSpec, scheme: RadialScheme,
                    transform: Callable[[np.ndarray], np.ndarray]):
    """Per-node inner sums ``sum_m W_m phi(f(x + m) - f(x))``.

    The result lives on ``f.domain`` extended by the largest shift, which is
    exactly the set of nodes where the inner sum can be nonzero.  Returns
    ``(extended_domain, values, pad_cells)``.
    """
    shifts, weights = shift_weights(spec, scheme, f.domain.spacing)
    M = int(np.max(np.abs(shifts))) if len(shifts) else 0
    padded = _pad(f.values, M)
    P = padded.shape[0]
    acc = np.zeros_like(padded)
    for m, w in zip(shifts, weights):
        base, moved = _overlap(P, m)
        acc[base] += w * transform(padded[moved] - padded[base])
    return f.domain.extended(M), acc, M


# ---------------------------------------------------------------------------
# seminorms


def log_kernel_spec(d: int, gamma: float, p: float, R: float = LOG_KERNEL_RADIUS) -> KernelSpec:
    return KernelSpec("log_kernel", d=d, gamma=gamma, p=p, R=R)


def _x_spec(f, params, scheme, allow_gamma_zero):
    params.require("gamma", "p")
    if params.gamma == 0 and not allow_gamma_zero:
        raise ParameterError("gamma = 0 lies outside the definition (gamma > 0); "
                             "pass allow_gamma_zero=True to compute it anyway", "gamma > 0")
    if scheme is None:
        scheme = default_scheme(f.domain)
    spec = log_kernel_spec(f.domain.d, params.gamma, params.p)
    check_compatible(spec, scheme)
    return spec, scheme


def x_seminorm(f: SampledFunction, params: SeminormParams, scheme: RadialScheme | None = None,
               *, allow_gamma_zero: bool = False, threads: int = 1) -> float:
    """Log-order Gagliardo seminorm of order ``gamma`` in ``L^p`` (outer radius 1/3).

    Returns ``S`` with ``S^p = int_{|h|<1/3} int |f(x+h) - f(x)|^p
    |h|^-d log(1/|h|)^(p gamma - 1) dx dh``.
    """
    spec, scheme = _x_spec(f, params, scheme, allow_gamma_zero)
    total = difference_sweep(f, spec, scheme, power_transform(params.p), threads)
    return _root(total, params.p)


def x_norm(f: SampledFunction, params: SeminormParams, scheme: RadialScheme | None = None,
           **kw) -> float:
    p = params.p
    return (lp_norm(f, p) ** p + x_seminorm(f, params, scheme, **kw) ** p) ** (1.0 / p)


def _w_spec(f, params, scheme):
    params.require("s", "p")
    if not 0 < params.s < 1:
        raise ParameterError(f"s must lie in (0, 1), got {params.s}", "0 < s < 1")
    if not params.p >= 1:
        raise ParameterError(f"p must be >= 1, got {params.p}", "p >= 1")
    if scheme is None:
        scheme = default_scheme(f.domain, R=frac_outer_radius(f.domain),
                                r_min=frac_inner_radius(f.domain))
    spec = KernelSpec("frac_kernel", d=f.domain.d, p=params.p, s=params.s, R=scheme.R)
    return spec, scheme


def w_seminorm(f: SampledFunction, params: SeminormParams, scheme: RadialScheme | None = None,
               *, threads: int = 1) -> float:
    """Fractional ``W^{s,p}`` seminorm restricted to ``|h| < R_out`` (tail excluded)."""
    spec, scheme = _w_spec(f, params, scheme)
    total = difference_sweep(f, spec, scheme, power_transform(params.p), threads)
    return _root(total, params.p)


def w_tail_bound(f: SampledFunction, params: SeminormParams, R_out: float) -> float:
    """Analytic bound ``2^p ||f||_p^p |S^{d-1}| / (p s R_out^{p s})`` on the ``|h| > R_out`` part."""
    p, s = params.p, params.s
    return 2.0 ** p * lp_norm(f, p) ** p * SPHERE_AREA[f.domain.d] / (p * s * R_out ** (p * s))


def w_tail_exact(f: SampledFunction, params: SeminormParams, R_out: float) -> float:
    """The ``|h| > R_out`` part itself, valid once ``R_out`` exceeds the box diameter.

    There ``f(x + h)`` and ``f(x)`` are never both nonzero, so the integrand
    splits into ``|f(x+h)|^p + |f(x)|^p``.
    """
    dom = f.domain
    if R_out < 2.0 * dom.L * math.sqrt(dom.d):
        raise ParameterError("exact tail needs R_out beyond the box diameter", "R_out >= diam(box)")
    p, s = params.p, params.s
    return 2.0 * lp_norm(f, p) ** p * SPHERE_AREA[dom.d] / (p * s * R_out ** (p * s))


def w_norm(f: SampledFunction, params: SeminormParams, scheme: RadialScheme | None = None,
           **kw) -> float:
    """``(||f||_p^p + [f]_{W^{s,p}}^p)^(1/p)`` with the far field added in closed form."""
    spec, scheme = _w_spec(f, params, scheme)
    p = params.p
    S = w_seminorm(f, params, scheme, **kw)
    return (lp_norm(f, p) ** p + S ** p + w_tail_exact(f, params, scheme.R)) ** (1.0 / p)


def truncated_q_seminorm(f: SampledFunction, params: SeminormParams,
                         scheme: RadialScheme | None = None, *, threads: int = 1) -> float:
    """``int_{|h|<1/3} int min(1, |f(x+h) - f(x)|^q) |h|^-d log(1/|h|)^(p-1) dx dh``.

    Unlike the other seminorms this returns the double integral itself.
    """
    params.require("p", "q")
    if not params.p >= 1:
        raise ParameterError(f"p must be >= 1, got {params.p}", "p >= 1")
    if scheme is None:
        scheme = default_scheme(f.domain)
    spec = KernelSpec("truncated_log_kernel", d=f.domain.d, p=params.p, R=LOG_KERNEL_RADIUS)
    return difference_sweep(f, spec, scheme, truncated_transform(params.q), threads)


def _root(total: float, p: float) -> float:
    if total < 0:
        total = 0.0 if total > -1e-300 else total
    if total < 0:
        from .errors import InvariantError
        raise InvariantError(f"negative p-th power of a seminorm: {total}")
    return total ** (1.0 / p)
