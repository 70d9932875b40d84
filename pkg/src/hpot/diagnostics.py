"""Small numerical diagnostics shared by the test surfaces and demos."""
from __future__ import annotations

import numpy as np


def laplacian_residual(u, x, h: float) -> float:
    """Normalized finite-difference Laplacian residual at x.

    Returns |sum_i (u(x+h e_i) + u(x-h e_i)) - 2n u(x)| / max over the
    stencil of |u|, i.e. h^2 |Laplacian_h u| scaled by the local size of u.
    Harmonic functions give residuals at the level of the h^4 truncation
    term; callers choose h as a small fraction of the distance to the
    nearest singularity.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    u0 = float(u(x))
    acc = -2.0 * n * u0
    biggest = abs(u0)
    for i in range(n):
        for s in (h, -h):
            xi = x.copy()
            xi[i] += s
            v = float(u(xi))
            acc += v
            biggest = max(biggest, abs(v))
    if biggest == 0.0:
        return 0.0
    return abs(acc) / biggest
