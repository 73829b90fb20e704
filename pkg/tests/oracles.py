"""Closed forms and extended-precision golden values for the tests."""

from __future__ import annotations

import math

import mpmath
import numpy as np

from logsob.grid import Domain
from logsob.reference import (all_radii_average_max, brute_inner_sum_1d, brute_pair_sum_1d,  # noqa: F401
                              frac_density, log_density)


def gaussian_l2_sq(sigma: float, d: int = 1) -> float:
    """``int exp(-|x|^2 / sigma^2) dx``."""
    return (math.sqrt(math.pi) * sigma) ** d


def gaussian_hat_sq(xi, sigma: float = 1.0):
    """``|f^(xi)|^2`` for ``exp(-x^2/(2 sigma^2))`` with the unitary transform in 1-D."""
    return sigma ** 2 * np.exp(-(sigma ** 2) * np.asarray(xi) ** 2)


def gaussian_samples_mp(dom: Domain, sigma: float = 1.0, dps: int = 40) -> np.ndarray:
    """Gaussian cell-centre samples computed in extended precision."""
    with mpmath.workdps(dps):
        L = mpmath.mpf(dom.L)
        h = 2 * L / dom.n
        vals = [mpmath.exp(-((-L + (i + mpmath.mpf(1) / 2) * h) ** 2) / (2 * mpmath.mpf(sigma) ** 2))
                for i in range(dom.n)]
        return np.array([float(v) for v in vals])


def spectral_gaussian_mp(gamma: float, sigma: float = 1.0) -> float:
    """``||f||_2^2 + int_{|xi|>1} log|xi|^(2 gamma) |f^|^2`` for the 1-D Gaussian."""
    with mpmath.workdps(30):
        tail = mpmath.quad(lambda t: mpmath.log(t) ** (2 * gamma) * sigma ** 2 * mpmath.exp(-(sigma * t) ** 2),
                           [1, 2, 5, mpmath.inf])
        return float(gaussian_l2_sq(sigma) + 2 * tail)


def indicator_xp_exact(r: float, p: float, gamma: float) -> float:
    """Continuum ``S^p`` of the 1-D indicator of ``(-r, r)`` with outer radius 1/3, for r < 1/6."""
    a = p * gamma
    with mpmath.workdps(30):
        near = mpmath.quad(lambda h: mpmath.log(1 / h) ** (a - 1), [0, 2 * r])
        far = (mpmath.log(1 / (2 * r)) ** a - mpmath.log(3) ** a) / a
        return float(4 * near + 8 * r * far)
