"""Log-radial quadrature for the singular kernels of the double integrals.

The radial nodes are the midpoints of a uniform partition of ``[log r_min,
log R]``; with ``dr = r dlog r`` the weights are ``r_j * log(R/r_min) / n_r``.
The angular rule is the exact two-point rule in 1-D and the uniform
(trapezoid) rule on the circle in 2-D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .grid import SPHERE_AREA

LOG_KERNEL_RADIUS = 1.0 / 3.0   # outer radius of the seminorm integral
FOURIER_KERNEL_RADIUS = 0.5     # outer radius used on the Fourier side
_KERNEL_KINDS = ("log_kernel", "frac_kernel", "truncated_log_kernel")


@dataclass(frozen=True)
class KernelSpec:
    """A radial kernel density on the punctured ball ``0 < |h| < R``.

    ``log_kernel``           |h|^-d log(1/|h|)^(p gamma - 1)
    ``truncated_log_kernel`` |h|^-d log(1/|h|)^(p - 1)       (the log order fixed at 1)
    ``frac_kernel``          |h|^-(d + p s)
    """

    kind: str
    d: int = 1
    gamma: float | None = None
    p: float = 1.0
    s: float | None = None
    R: float = LOG_KERNEL_RADIUS

    def __post_init__(self):
        if self.kind not in _KERNEL_KINDS:
            raise ParameterError(f"unknown kernel kind {self.kind!r}", "kernel kind")
        if self.kind != "frac_kernel" and not (0 < self.R < 1):
            raise ParameterError("log kernels need 0 < R < 1 so that log(1/|h|) > 0", "0 < R < 1")
        if self.kind == "log_kernel" and (self.gamma is None or self.gamma < 0):
            raise ParameterError("log_kernel needs gamma >= 0", "gamma >= 0")
        if self.kind == "frac_kernel" and (self.s is None or not self.s > 0):
            raise ParameterError("frac_kernel needs s > 0", "s > 0")
        if not self.p > 0:
            raise ParameterError("kernel exponent p must be positive", "p > 0")

    @property
    def log_power(self) -> float:
        """Exponent of ``log(1/r)`` in the density (log kernels only)."""
        if self.kind == "log_kernel":
            return self.p * self.gamma - 1.0
        return self.p - 1.0

    def density(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.kind == "frac_kernel":
            return r ** (-(self.d + self.p * self.s))
        return r ** (-self.d) * np.log(1.0 / r) ** self.log_power


@dataclass(frozen=True, eq=False)
class RadialScheme:
    r_min: float
    R: float
    n_r: int
    n_theta: int
    d: int
    nodes: np.ndarray            # radial nodes, increasing
    weights: np.ndarray          # dr weights
    directions: np.ndarray       # unit vectors, shape (n_theta, d)
    angular_weights: np.ndarray  # sum = |S^{d-1}|

    def to_dict(self) -> dict:
        return {"r_min": self.r_min, "R": self.R, "n_r": self.n_r,
                "n_theta": self.n_theta, "d": self.d}

    def measure_weights(self) -> np.ndarray:
        """Radial weights times the Jacobian ``r^(d-1)``."""
        return self.weights * self.nodes ** (self.d - 1)

    def integrate_radial(self, g) -> float:
        """``int_{r_min < |h| < R} g(|h|) dh`` for a radial profile ``g``."""
        vals = np.asarray(g(self.nodes), dtype=float)
        return float(np.sum(self.measure_weights() * vals)) * float(np.sum(self.angular_weights))


def build_radial_scheme(r_min: float, R: float, n_r: int = 128, n_theta: int | None = None,
                        d: int = 1) -> RadialScheme:
    """Midpoint rule in ``log r`` times a uniform angular rule.

    ``R`` may exceed 1/2 only for the fractional kernel's far cutoff; the log
    kernels reject such schemes in :func:`check_compatible`.
    """
    if d not in (1, 2):
        raise ParameterError("d must be 1 or 2", "d in {1, 2}")
    if not (0 < r_min < R) or not math.isfinite(R):
        raise ParameterError(f"need 0 < r_min < R, got r_min={r_min}, R={R}", "0 < r_min < R")
    if not (isinstance(n_r, (int, np.integer)) and n_r >= 8):
        raise ParameterError(f"n_r must be an integer >= 8, got {n_r}", "n_r >= 8")
    if d == 1:
        if n_theta not in (None, 2):
            raise ParameterError("in 1-D the angular rule has exactly two directions", "n_theta == 2")
        n_theta = 2
        directions = np.array([[1.0], [-1.0]])
        ang_w = np.array([1.0, 1.0])
    else:
        n_theta = 32 if n_theta is None else int(n_theta)
        if n_theta < 4:
            raise ParameterError("n_theta must be >= 4 in 2-D", "n_theta >= 4")
        th = 2.0 * math.pi * np.arange(n_theta) / n_theta
        directions = np.stack([np.cos(th), np.sin(th)], axis=-1)
        ang_w = np.full(n_theta, 2.0 * math.pi / n_theta)
    span = math.log(R / r_min)
    nodes = r_min * np.exp(span * (np.arange(n_r) + 0.5) / n_r)
    weights = nodes * span / n_r
    for a in (nodes, weights, directions, ang_w):
        a.setflags(write=False)
    return RadialScheme(float(r_min), float(R), int(n_r), int(n_theta), d,
                        nodes, weights, directions, ang_w)


def check_compatible(spec: KernelSpec, scheme: RadialScheme, rtol: float = 1e-12) -> None:
    if spec.d != scheme.d:
        raise ParameterError(f"kernel is {spec.d}-D but scheme is {scheme.d}-D", "same dimension")
    if abs(scheme.R - spec.R) > rtol * spec.R:
        raise ParameterError(
            f"scheme outer radius {scheme.R} differs from kernel radius {spec.R}", "scheme.R == kernel.R")


def kernel_mass(spec: KernelSpec, scheme: RadialScheme) -> float:
    """Quadrature of the kernel density over ``r_min < |h| < R``."""
    check_compatible(spec, scheme)
    return scheme.integrate_radial(spec.density)


def kernel_mass_exact(spec: KernelSpec, r_min: float) -> float:
    """Closed-form mass over ``r_min < |h| < R`` via the antiderivative in ``t = log(1/r)``."""
    sigma = SPHERE_AREA[spec.d]
    if spec.kind == "frac_kernel":
        a = spec.p * spec.s
        return sigma / a * (r_min ** (-a) - spec.R ** (-a))
    a = spec.log_power + 1.0
    t_lo, t_hi = math.log(1.0 / spec.R), math.log(1.0 / r_min)
    if a == 0.0:
        return sigma * (math.log(t_hi) - math.log(t_lo))
    return sigma / a * (t_hi ** a - t_lo ** a)
