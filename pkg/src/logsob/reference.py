"""Brute-force reference computations.

These share no code path with the shift engine: double integrals are literal
all-pairs sums over a grid (optionally refined) with the kernel evaluated at
the exact pair separation, and maximal averages enumerate every ball.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import AnalyticFunction, Domain


def log_density(gamma, p, d=1):
    return lambda r: r ** (-d) * np.log(1.0 / r) ** (p * gamma - 1.0)


def frac_density(s, p, d=1):
    return lambda r: r ** (-(d + p * s))


def _ext_grid_1d(dom: Domain, R: float, factor: int):
    h = dom.spacing / factor
    extra = int(math.ceil(R / h)) + 1
    n = dom.n * factor + 2 * extra
    x = -dom.L - extra * h + (np.arange(n) + 0.5) * h
    return x, h


def brute_pair_sum_1d(g: AnalyticFunction, dom: Domain, density, R: float,
                      phi=lambda t: np.abs(t), factor: int = 2) -> float:
    """``sum_{i != j, |x_i - x_j| < R} phi(g(x_j) - g(x_i)) K(|x_j - x_i|) h^2``.

    ``g`` is evaluated on a grid ``factor`` times finer than ``dom`` that also
    covers an ``R``-neighbourhood of the box, and is zero outside the box.
    """
    x, h = _ext_grid_1d(dom, R, factor)
    v = np.where(np.abs(x) < dom.L, g(x[:, None]), 0.0)
    total = 0.0
    chunk = 512
    for a in range(0, len(x), chunk):
        xi = x[a:a + chunk, None]
        dist = np.abs(x[None, :] - xi)
        mask = (dist > 0) & (dist < R)
        k = np.zeros_like(dist)
        k[mask] = density(dist[mask])
        total += float(np.sum(phi(v[None, :] - v[a:a + chunk, None]) * k))
    return total * h * h


def brute_inner_sum_1d(g: AnalyticFunction, dom: Domain, density, R: float,
                       phi=lambda t: np.abs(t), factor: int = 2):
    """Per-point inner sums at the refined nodes lying inside the box."""
    x, h = _ext_grid_1d(dom, R, factor)
    v = np.where(np.abs(x) < dom.L, g(x[:, None]), 0.0)
    keep = np.abs(x) < dom.L
    xs = x[keep]
    vs = v[keep]
    dist = np.abs(x[None, :] - xs[:, None])
    mask = (dist > 0) & (dist < R)
    k = np.zeros_like(dist)
    k[mask] = density(dist[mask])
    return xs, np.sum(phi(v[None, :] - vs[:, None]) * k, axis=1) * h


def all_radii_average_max(values: np.ndarray, spacing: float, radii, transform=None):
    """Maximal ball averages in 1-D by direct enumeration of every node and radius.

    ``transform(center_value, neighbour_values, r)`` gives the averaged quantity;
    the default is ``|f|``.  Nodes outside the array count as value 0.
    """
    n = len(values)
    out = np.zeros(n)
    for i in range(n):
        best = 0.0
        for r in radii:
            k = int(math.ceil(r / spacing - 1e-12)) - 1   # |j - i| * dx < r
            idx = np.arange(i - k, i + k + 1)
            nb = np.array([values[j] if 0 <= j < n else 0.0 for j in idx])
            q = np.abs(nb) if transform is None else transform(values[i], nb, r)
            best = max(best, float(np.mean(q)))
        out[i] = best
    return out
