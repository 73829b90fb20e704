"""Deterministic summation and ordered thread fan-out.

Every reduction in the package goes through :func:`block_sum` so that the
partition of the summands (and hence the floating-point result) depends only
on the array shape, never on how many worker threads were used.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

BLOCK = 4096

T = TypeVar("T")
R = TypeVar("R")


def tree_sum(values: Sequence[float]) -> float:
    """Pairwise sum in a fixed left-to-right tree order."""
    vals = [float(v) for v in values]
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def block_sum(arr: np.ndarray, block: int = BLOCK) -> float:
    """Sum a flattened array as fixed-size blocks reduced by :func:`tree_sum`."""
    flat = np.ravel(arr)
    if flat.size <= block:
        return float(np.sum(flat))
    partial = [np.sum(flat[i:i + block]) for i in range(0, flat.size, block)]
    return tree_sum(partial)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Map ``fn`` over ``items`` preserving input order.

    With ``threads > 1`` the calls run on a thread pool; numpy releases the
    GIL inside the heavy kernels, so this gives real speedup while the result
    list (and any reduction over it) stays identical.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
