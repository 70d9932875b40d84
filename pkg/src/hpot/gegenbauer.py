"""Ultraspherical (Gegenbauer) polynomial evaluation.

C_k^lam(t) is the coefficient of r^k in (1 - 2tr + r^2)^(-lam).  Evaluation
uses the standard three-term recurrence

    C_0 = 1,   C_1 = 2*lam*t,
    k*C_k = 2*(k + lam - 1)*t*C_{k-1} - (k + 2*lam - 2)*C_{k-2},

which is O(k) and stable on [-1, 1]; the generating function itself is kept
around as an independent cross-check (``generating_partial_sum``).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

# Kernel series truncations never need more than a few hundred degrees.
MAX_DEGREE = 500


def _check_order(lam: float):
    if not (lam > 0.0 and np.isfinite(lam)):
        raise DomainError(f"Gegenbauer order must be positive, got {lam}")


def _check_degree(k: int):
    if k != int(k) or k < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {k}")
    if k > MAX_DEGREE:
        raise DomainError(f"degree {k} exceeds the supported cap {MAX_DEGREE}")


def _check_argument(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0) or not np.all(np.isfinite(t)):
        raise DomainError("Gegenbauer argument must lie in [-1, 1]")
    return t


def recurrence_ladder(lam: float, kmax: int, t) -> np.ndarray:
    """All values C_0..C_kmax at ``t`` (array-valued), stacked along axis 0.

    Arguments are assumed validated by the caller.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((kmax + 1,) + t.shape, dtype=float)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * lam * t
    for k in range(2, kmax + 1):
        out[k] = (
            2.0 * (k + lam - 1.0) * t * out[k - 1] - (k + 2.0 * lam - 2.0) * out[k - 2]
        ) / k
    return out


def gegenbauer_eval(lam: float, k: int, t):
    """C_k^lam(t) for |t| <= 1 (scalar or array t)."""
    _check_order(lam)
    _check_degree(k)
    t = _check_argument(t)
    val = recurrence_ladder(lam, k, t)[k]
    if val.ndim == 0:
        return float(val)
    return val


def gegenbauer_at_one(lam: float, k: int) -> float:
    """C_k^lam(1) = Gamma(2*lam + k) / (Gamma(2*lam) * Gamma(k + 1)),
    evaluated through log-gamma so large degrees cannot overflow."""
    _check_order(lam)
    _check_degree(k)
    return math.exp(
        math.lgamma(2.0 * lam + k) - math.lgamma(2.0 * lam) - math.lgamma(k + 1.0)
    )


def generating_partial_sum(lam: float, t, r: float, kmax: int):
    """Partial sum  sum_{k<=kmax} C_k^lam(t) r^k.

    Converges to (1 - 2tr + r^2)^(-lam) as kmax grows; |r| < 1 required.
    """
    _check_order(lam)
    _check_degree(kmax)
    t = _check_argument(t)
    if not (abs(r) < 1.0):
        raise DomainError(f"generating-function radius must satisfy |r| < 1, got {r}")
    ladder = recurrence_ladder(lam, kmax, t)
    powers = r ** np.arange(kmax + 1)
    val = np.tensordot(powers, ladder, axes=(0, 0))
    if np.ndim(val) == 0:
        return float(val)
    return val


def generating_closed_form(lam: float, t, r: float):
    """(1 - 2tr + r^2)^(-lam), the limit of the partial sums."""
    _check_order(lam)
    t = np.asarray(t, dtype=float)
    val = (1.0 - 2.0 * t * r + r * r) ** (-lam)
    if val.ndim == 0:
        return float(val)
    return val
