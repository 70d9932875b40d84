"""Discretized capacities and the dyadic thinness / rarefiedness series.

The continuum capacity is the infimum of the total weight of nonnegative
functions g supported on a window F whose kernel smoothing dominates one on
a set E.  Discretized on quadrature nodes it becomes the linear program

    minimize    c . g        (c = node weights)
    subject to  A g >= 1     (A[j, i] = weight_i * K(x_j, node_i))
                g >= 0

with the boundary kernel K(x, y') = 1/|x-(y',0)|^n for the minimal-thinness
capacity and the half-space kernel K(x, y) = 1/|x-y|^(n-1) for the
rarefiedness capacity.

The LP solver is a dense reference implementation: because c >= 0 the dual
``max 1.y  s.t.  A^T y <= c, y >= 0`` starts feasible at y = 0, so a plain
full-tableau simplex needs no phase one; the primal minimizer is read off
the optimal slack reduced costs.  Sizes here are desk-scale, and tests pit
the solver against exhaustive vertex enumeration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleError, NumericalError
from .kernels import KernelConfig
from .quadrature import halton_sequence

BOUNDARY = "boundary"
HALFSPACE = "halfspace"


@dataclass(frozen=True)
class LPInstance:
    """min c.g  s.t.  A g >= 1, g >= 0, with finite nonnegative data."""

    c: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or c.ndim != 1 or A.shape[1] != c.size:
            raise DomainError(
                f"inconsistent LP shapes: A {A.shape}, c {c.shape}"
            )
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(c))):
            raise DomainError("LP data must be finite")
        if np.any(A < 0.0) or np.any(c < 0.0):
            raise DomainError("LP data must be nonnegative")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)


@dataclass(frozen=True)
class LPSolution:
    g: np.ndarray
    value: float
    dual: np.ndarray


def lp_solve(lp: LPInstance, tol: float = 1e-9) -> LPSolution:
    """Solve the covering LP; raises InfeasibleError when a constraint row
    has no positive entry (no g can satisfy it)."""
    A, c = lp.A, lp.c
    m, k = A.shape
    if m == 0:
        return LPSolution(np.zeros(k), 0.0, np.zeros(0))
    row_max = A.max(axis=1) if k else np.zeros(m)
    if np.any(row_max <= 0.0):
        bad = int(np.argmax(row_max <= 0.0))
        raise InfeasibleError(f"constraint row {bad} has no positive entry")

    # dual tableau: rows = k constraints A^T y + s = c, columns = y | s | rhs
    T = np.zeros((k, m + k + 1))
    T[:, :m] = A.T
    T[:, m : m + k] = np.eye(k)
    T[:, -1] = c
    red = np.zeros(m + k)
    red[:m] = 1.0  # reduced costs of a maximization, start at obj - 0
    value = 0.0
    basis = list(range(m, m + k))

    piv_tol = 1e-11
    stall = 0
    for it in range(200 * (m + k + 10)):
        use_bland = stall > 2 * (m + k)
        enterable = np.where(red > tol * 1e-3)[0]
        if enterable.size == 0:
            break
        if use_bland:
            j = int(enterable[0])
        else:
            j = int(enterable[np.argmax(red[enterable])])
        col = T[:, j]
        pos = col > piv_tol
        if not np.any(pos):
            raise NumericalError("dual unbounded despite feasibility pre-check")
        ratios = np.full(k, np.inf)
        ratios[pos] = T[pos, -1] / col[pos]
        rmin = ratios.min()
        ties = np.where(ratios <= rmin * (1 + 1e-12) + 1e-300)[0]
        r = int(min(ties, key=lambda i: basis[i])) if use_bland else int(ties[0])
        piv = T[r, j]
        T[r] /= piv
        for i in range(k):
            if i != r and T[i, j] != 0.0:
                T[i] -= T[i, j] * T[r]
        gain = red[j] * T[r, -1]
        value += gain
        red = red - red[j] * T[r, :-1]
        basis[r] = j
        stall = 0 if gain > 1e-13 * (1.0 + abs(value)) else stall + 1
    else:
        raise NumericalError("simplex iteration cap exceeded")

    y = np.zeros(m)
    for i, b in enumerate(basis):
        if b < m:
            y[b] = T[i, -1]
    g = np.maximum(-red[m : m + k], 0.0)

    # defensive consistency: primal feasibility and matching objectives
    if m and np.any(A @ g < 1.0 - max(tol, 1e-7) * max(1.0, float(np.abs(A @ g).max()))):
        raise NumericalError("recovered primal point violates constraints")
    if abs(float(c @ g) - value) > max(tol, 1e-7) * max(1.0, abs(value)):
        raise NumericalError("primal/dual objective mismatch")
    return LPSolution(g, float(value), y)


def enumerate_vertices_value(lp: LPInstance) -> float:
    """Exhaustive vertex-enumeration oracle for small instances: the optimum
    of a feasible bounded covering LP is attained at a vertex, i.e. at some
    choice of k active constraints among {rows of A g = 1} U {g_i = 0}."""
    from itertools import combinations

    A, c = lp.A, lp.c
    m, k = A.shape
    rows = [(A[i], 1.0) for i in range(m)] + [
        (np.eye(k)[i], 0.0) for i in range(k)
    ]
    best = math.inf
    for subset in combinations(range(m + k), k):
        M = np.array([rows[i][0] for i in subset])
        b = np.array([rows[i][1] for i in subset])
        try:
            g = np.linalg.solve(M, b)
        except np.linalg.LinAlgError:
            continue
        if np.any(g < -1e-9):
            continue
        if m and np.any(A @ g < 1.0 - 1e-9):
            continue
        best = min(best, float(c @ g))
    if not np.isfinite(best):
        raise InfeasibleError("no feasible vertex")
    return best


# ---------------------------------------------------------------------------
# capacity problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CapacityProblem:
    """Constraint points in the half-space against weighted window nodes.

    kind selects the kernel and where the nodes live: ``boundary`` nodes are
    points of R^{n-1} with the n-th power kernel; ``halfspace`` nodes live in
    H with the (n-1)-st power kernel and volume-style weights."""

    kind: str
    e_points: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    cfg: KernelConfig

    def __post_init__(self):
        if self.kind not in (BOUNDARY, HALFSPACE):
            raise DomainError(f"unknown capacity kind {self.kind!r}")
        n = self.cfg.n
        node_dim = n - 1 if self.kind == BOUNDARY else n
        e = np.asarray(self.e_points, dtype=float).reshape(-1, n)
        nd = np.asarray(self.nodes, dtype=float).reshape(-1, node_dim)
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if w.size != nd.shape[0]:
            raise DomainError("node and weight counts differ")
        if np.any(w <= 0.0):
            raise DomainError("node weights must be positive")
        if e.shape[0] == 0 or nd.shape[0] == 0:
            raise DomainError("capacity needs nonempty points and nodes")
        if np.any(e[:, -1] <= 0.0):
            raise DomainError("constraint points must be interior")
        object.__setattr__(self, "e_points", e)
        object.__setattr__(self, "nodes", nd)
        object.__setattr__(self, "weights", w)

    def kernel_matrix(self) -> np.ndarray:
        n = self.cfg.n
        if self.kind == BOUNDARY:
            diff = self.e_points[:, None, :-1] - self.nodes[None, :, :]
            d2 = np.sum(diff * diff, axis=-1) + self.e_points[:, None, -1] ** 2
            power = n
        else:
            diff = self.e_points[:, None, :] - self.nodes[None, :, :]
            d2 = np.sum(diff * diff, axis=-1)
            power = n - 1
        if np.any(d2 == 0.0):
            raise DomainError("a constraint point coincides with a window node")
        return d2 ** (-0.5 * power)

    def lp_instance(self) -> LPInstance:
        kern = self.kernel_matrix()
        return LPInstance(c=self.weights.copy(), A=kern * self.weights[None, :])


def capacity(problem: CapacityProblem, tol: float = 1e-9) -> float:
    return lp_solve(problem.lp_instance(), tol).value


# ---------------------------------------------------------------------------
# dyadic thinness / rarefiedness series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThinnessTerm:
    i: int
    capacity: float
    weight: float
    product: float


@dataclass(frozen=True)
class ThinnessReport:
    terms: tuple
    partial_sum: float
    i_max: int
    resolution: dict

    def to_json_dict(self):
        return {
            "terms": [
                {
                    "i": t.i,
                    "capacity": t.capacity,
                    "weight": t.weight,
                    "product": t.product,
                }
                for t in self.terms
            ],
            "partial_sum": self.partial_sum,
            "i_max": self.i_max,
            "resolution": dict(self.resolution),
        }


def shell_samples(membership, i: int, cfg: KernelConfig, count: int) -> np.ndarray:
    """Deterministic low-discrepancy samples of the set inside the dyadic
    shell 2^i <= |x| < 2^(i+1) of the half-space."""
    n = cfg.n
    lo, hi = 2.0**i, 2.0 ** (i + 1)
    raw = halton_sequence(count * 8, n)
    box = np.empty_like(raw)
    box[:, :-1] = (2.0 * raw[:, :-1] - 1.0) * hi
    box[:, -1] = raw[:, -1] * hi
    r = np.sqrt(np.sum(box * box, axis=-1))
    keep = (r >= lo) & (r < hi) & (box[:, -1] > 0.0)
    pts = box[keep]
    flags = np.array([bool(membership(p)) for p in pts])
    return pts[flags][:count]


def window_nodes(kind: str, i: int, cfg: KernelConfig, count: int):
    """Quasi-Monte-Carlo discretization of the window 2^i < |x| < 2^(i+3):
    nodes on the boundary plane or in the half-space, with equal weights
    summing to the window volume estimate.

    Node patterns are scale-similar across shells (the same unit pattern
    dilated), so capacity terms inherit the exact dyadic scaling of the
    continuum quantities up to the common discretization error."""
    n = cfg.n
    d = n - 1 if kind == BOUNDARY else n
    lo, hi = 2.0**i, 2.0 ** (i + 3)
    raw = halton_sequence(count * 4, d)
    box = np.empty_like(raw)
    if kind == BOUNDARY:
        box[:] = (2.0 * raw - 1.0) * hi
        box_vol = (2.0 * hi) ** d
    else:
        box[:, :-1] = (2.0 * raw[:, :-1] - 1.0) * hi
        box[:, -1] = raw[:, -1] * hi
        box_vol = (2.0 * hi) ** (d - 1) * hi
    r = np.sqrt(np.sum(box * box, axis=-1))
    keep = (r > lo) & (r < hi)
    if kind == HALFSPACE:
        keep &= box[:, -1] > 0.0
    nodes = box[keep][:count]
    if nodes.shape[0] == 0:
        raise NumericalError(f"window discretization produced no nodes at shell {i}")
    weights = np.full(nodes.shape[0], box_vol / (count * 4))
    return nodes, weights


def thinness_series(
    membership,
    kind: str,
    i_max: int,
    cfg: KernelConfig,
    e_samples: int = 48,
    f_nodes: int = 160,
) -> ThinnessReport:
    """Partial sums of the dyadic capacity series that defines minimal
    thinness (boundary kind, weight 2^(-i n)) and rarefiedness (halfspace
    kind, weight 2^(-i (n-1))) at infinity.

    Empty shells contribute zero.  The series is truncated at i_max; only
    growth trends are reported, never a convergence verdict."""
    if kind not in (BOUNDARY, HALFSPACE):
        raise DomainError(f"unknown capacity kind {kind!r}")
    if not (1 <= i_max <= 20):
        raise DomainError("i_max must lie in 1..20 to keep LPs desk-scale")
    terms = []
    partial = 0.0
    exponent = cfg.n if kind == BOUNDARY else cfg.n - 1
    for i in range(1, i_max + 1):
        pts = shell_samples(membership, i, cfg, e_samples)
        weight = 2.0 ** (-i * exponent)
        if pts.shape[0] == 0:
            terms.append(ThinnessTerm(i, 0.0, weight, 0.0))
            continue
        nodes, w = window_nodes(kind, i, cfg, f_nodes)
        cap = capacity(CapacityProblem(kind, pts, nodes, w, cfg))
        partial += weight * cap
        terms.append(ThinnessTerm(i, cap, weight, weight * cap))
    return ThinnessReport(
        tuple(terms),
        partial,
        i_max,
        {"e_samples": e_samples, "f_nodes": f_nodes},
    )


def membership_from_spec(spec: dict):
    """Membership predicate over the half-space from a JSON set description.

    Shapes: {"shape": "empty"}, {"shape": "all"},
    {"shape": "ball", "center": [...], "radius": r},
    {"shape": "cone", "aperture": a}  (points with x_n >= a |x|)."""
    from .errors import SchemaError

    if not isinstance(spec, dict) or "shape" not in spec:
        raise SchemaError("expected an object with a 'shape' field", "set")
    shape = spec["shape"]
    if shape == "empty":
        return lambda x: False
    if shape == "all":
        return lambda x: True
    if shape == "ball":
        center = np.asarray(spec.get("center"), dtype=float)
        radius = spec.get("radius")
        if center.ndim != 1 or not isinstance(radius, (int, float)) or radius <= 0:
            raise SchemaError("ball needs 'center' list and positive 'radius'", "set")
        return lambda x: float(np.linalg.norm(np.asarray(x) - center)) < radius
    if shape == "cone":
        a = spec.get("aperture")
        if not isinstance(a, (int, float)) or not 0 < a < 1:
            raise SchemaError("cone needs aperture in (0,1)", "set")
        return lambda x: np.asarray(x)[-1] >= a * float(np.linalg.norm(x))
    raise SchemaError(f"unknown shape {shape!r}", "set.shape")
