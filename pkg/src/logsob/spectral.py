"""Fourier-side norm for ``p = 2`` and the log-kernel moments.

Transform convention (unitary, angular frequency)::

    f^(xi) = (2 pi)^(-d/2) int f(x) exp(-i xi.x) dx

approximated by ``dx^d`` times an FFT of the zero-padded samples.  With
padding factor ``pad`` the padded box has half-width ``pad * L`` and the
frequency spacing is ``pi / (pad * L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantError, ParameterError
from .grid import SampledFunction, lp_norm
from .quadrature import FOURIER_KERNEL_RADIUS, LOG_KERNEL_RADIUS, RadialScheme, build_radial_scheme
from .reduction import block_sum
from .seminorms import SeminormParams, x_seminorm

PLANCHEREL_RTOL = 1e-10
MOMENT_R_MIN = 1e-9
_CHUNK = 1 << 20


@dataclass(frozen=True, eq=False)
class Spectrum:
    """``|f^(xi_k)|^2`` on the (centred) FFT frequency grid."""

    d: int
    xi: np.ndarray        # 1-D frequency axis, ascending, shared by all axes
    power: np.ndarray     # shape (N,)*d
    dxi: float

    @property
    def cell(self) -> float:
        return self.dxi ** self.d

    def xi_abs(self) -> np.ndarray:
        grids = np.meshgrid(*([self.xi] * self.d), indexing="ij")
        return np.sqrt(sum(g * g for g in grids))

    def l2_sq(self) -> float:
        return block_sum(self.power) * self.cell


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def compute_spectrum(f: SampledFunction, pad: int = 2) -> Spectrum:
    """Squared transform magnitudes with ``pad``-fold zero padding.

    Raises :class:`InvariantError` if the discrete Plancherel identity
    ``sum |f^|^2 dxi^d = ||f||_2^2`` fails beyond round-off.
    """
    dom = f.domain
    if not _is_pow2(dom.n):
        raise ParameterError(f"points_per_axis must be a power of two, got {dom.n}", "n power of two")
    if pad not in (1, 2, 4):
        raise ParameterError("pad must be 1, 2 or 4", "pad in {1, 2, 4}")
    N = pad * dom.n
    F = np.fft.fftshift(np.fft.fftn(f.values, s=(N,) * dom.d, axes=tuple(range(dom.d))))
    scale = (dom.spacing / math.sqrt(2.0 * math.pi)) ** dom.d
    power = (np.abs(F) * scale) ** 2
    dxi = 2.0 * math.pi / (N * dom.spacing)
    xi = dxi * np.arange(-N // 2, N // 2)
    spec = Spectrum(dom.d, xi, power, dxi)
    l2 = lp_norm(f, 2) ** 2
    got = spec.l2_sq()
    if abs(got - l2) > PLANCHEREL_RTOL * max(l2, 1e-300):
        raise InvariantError(f"discrete Plancherel violated: {got} vs {l2}")
    return spec


def _log_weight(xi_abs: np.ndarray, gamma: float) -> np.ndarray:
    out = np.zeros_like(xi_abs)
    hi = xi_abs > 1.0
    out[hi] = np.log(xi_abs[hi]) ** (2.0 * gamma)
    return out


def spectral_x_norm(f: SampledFunction, gamma: float, pad: int = 2) -> float:
    """``||f||_2^2 + sum_{|xi|>1} log(|xi|)^(2 gamma) |f^(xi)|^2 dxi^d`` (a squared norm)."""
    if not gamma > 0:
        raise ParameterError(f"gamma must be > 0, got {gamma}", "gamma > 0")
    spec = compute_spectrum(f, pad)
    w = _log_weight(spec.xi_abs(), gamma)
    return lp_norm(f, 2) ** 2 + block_sum(w * spec.power) * spec.cell


def spectrum_rows(f: SampledFunction, gamma: float, pad: int = 2):
    """CSV rows ``(xi_1, .., xi_d, |f^|^2, log-weight)``."""
    spec = compute_spectrum(f, pad)
    xa = spec.xi_abs()
    w = _log_weight(xa, gamma)
    grids = np.meshgrid(*([spec.xi] * spec.d), indexing="ij")
    for idx in np.ndindex(spec.power.shape):
        yield [*(float(g[idx]) for g in grids), float(spec.power[idx]), float(w[idx])]


# ---------------------------------------------------------------------------
# kernel moments


def moment_scheme(xi_max: float, d: int = 1, R: float = FOURIER_KERNEL_RADIUS,
                  r_min: float = MOMENT_R_MIN, nodes_per_period: int = 16,
                  n_theta: int | None = None) -> RadialScheme:
    """Radial scheme fine enough to resolve ``cos(r xi)`` up to ``|xi| = xi_max`` at ``r = R``."""
    span = math.log(R / r_min)
    need = nodes_per_period * span * max(xi_max, 1.0) * R / (2.0 * math.pi)
    n_r = max(1024, 1 << int(math.ceil(math.log2(need))))
    return build_radial_scheme(r_min, R, n_r, n_theta, d)


def kernel_moment(xi, gamma: float, scheme: RadialScheme | None = None,
                  radius: float = FOURIER_KERNEL_RADIUS) -> np.ndarray:
    """``I(xi) = int_{B_radius} (1 - cos(h.xi)) |h|^-d log(1/|h|)^(2 gamma - 1) dh``.

    ``xi`` has shape ``(..., d)`` (or is a scalar / 1-D array when ``d = 1``).
    The scheme's outer radius must equal ``radius``; the default is the
    Fourier-side ball of radius 1/2, and 1/3 is used to recompute the seminorm.
    """
    if not gamma > 0:
        raise ParameterError(f"gamma must be > 0, got {gamma}", "gamma > 0")
    xi = np.asarray(xi, dtype=float)
    d = scheme.d if scheme is not None else (1 if xi.ndim <= 1 else xi.shape[-1])
    if d == 1 and (xi.ndim == 0 or xi.shape[-1] != 1):
        xi = xi[..., None]
    if scheme is None:
        scheme = moment_scheme(float(np.max(np.abs(xi), initial=1.0)) * math.sqrt(d), d, radius)
    if abs(scheme.R - radius) > 1e-12 * radius or radius not in (FOURIER_KERNEL_RADIUS, LOG_KERNEL_RADIUS):
        raise ParameterError(f"kernel moment needs a scheme with R = {radius} (1/2 or 1/3), got {scheme.R}",
                             "scheme.R == 1/2")
    if xi.shape[-1] != scheme.d:
        raise ParameterError("frequency dimension does not match scheme", "same dimension")
    r = scheme.nodes
    rad_w = scheme.measure_weights() * r ** (-d) * np.log(1.0 / r) ** (2.0 * gamma - 1.0)
    flat = xi.reshape(-1, d)
    proj = flat @ scheme.directions.T                      # (K, n_theta)
    out = np.empty(len(flat))
    step = max(1, _CHUNK // (len(r) * scheme.n_theta))
    for a in range(0, len(flat), step):
        ph = proj[a:a + step, None, :] * r[None, :, None]  # (k, n_r, n_theta)
        integrand = 2.0 * np.sin(0.5 * ph) ** 2            # 1 - cos without cancellation
        ang = integrand @ scheme.angular_weights
        out[a:a + step] = ang @ rad_w
    return out.reshape(xi.shape[:-1])


def moment_rows(xi_abs, gamma: float, scheme: RadialScheme | None = None):
    """Rows ``(|xi|, I, I/|xi|^2, I/log(|xi|)^(2 gamma))`` along the first axis."""
    xi_abs = np.asarray(xi_abs, dtype=float)
    I = kernel_moment(xi_abs, gamma, scheme)
    rows = []
    for x, v in zip(xi_abs, np.atleast_1d(I)):
        q2 = v / x ** 2 if x > 0 else float("nan")
        ql = v / math.log(x) ** (2 * gamma) if x > 1 else float("nan")
        rows.append([float(x), float(v), float(q2), float(ql)])
    return rows


def plancherel_seminorm_sq(f: SampledFunction, gamma: float, pad: int = 2,
                           radius: float = LOG_KERNEL_RADIUS, rel_cut: float = 1e-16) -> float:
    """``sum_k 2 I(xi_k) |f^(xi_k)|^2 dxi^d``: the squared ``X^{gamma,2}`` seminorm on the Fourier side.

    Frequencies whose power is below ``rel_cut`` times the peak are skipped;
    since ``I`` grows only logarithmically their contribution is below round-off.
    """
    spec = compute_spectrum(f, pad)
    peak = float(np.max(spec.power))
    if peak == 0.0:
        return 0.0
    grids = np.meshgrid(*([spec.xi] * spec.d), indexing="ij")
    pts = np.stack(grids, axis=-1).reshape(-1, spec.d)
    pw = spec.power.reshape(-1)
    keep = pw > rel_cut * peak
    pts, pw = pts[keep], pw[keep]
    xmax = float(np.max(np.linalg.norm(pts, axis=1), initial=1.0))
    scheme = moment_scheme(xmax, spec.d, radius)
    I = kernel_moment(pts, gamma, scheme, radius=radius)
    return block_sum(2.0 * I * pw) * spec.cell


def equivalence_ratio(f: SampledFunction, gamma: float, scheme: RadialScheme | None = None,
                      pad: int = 2) -> float:
    """``(||f||_2^2 + [f]_{X^{gamma,2}}^2) / spectral_x_norm(f, gamma)``."""
    den = spectral_x_norm(f, gamma, pad)
    if not den > 0:
        raise ParameterError("equivalence ratio of the zero function is undefined", "f nonzero")
    S = x_seminorm(f, SeminormParams(gamma=gamma, p=2), scheme)
    return (lp_norm(f, 2) ** 2 + S ** 2) / den
