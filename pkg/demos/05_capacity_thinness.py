"""Discretized capacities and the dyadic thinness / rarefiedness series.

Solves a small covering LP directly, then compares the dyadic capacity
series of three sets: a bounded ball (series terminates), a solid cone
(window-scale terms throughout), and the full half-space (linear growth of
the partial sums, the non-convergence signal).
"""
import numpy as np

from hpot import CapacityProblem, KernelConfig, LPInstance, capacity, lp_solve, thinness_series
from hpot.capacity import BOUNDARY, HALFSPACE, membership_from_spec

cfg = KernelConfig(3)

# a tiny covering LP, solved to optimality with a dual certificate
lp = LPInstance(c=np.array([2.0, 3.0, 1.0]), A=np.array([[1.0, 6.0, 0.5], [2.0, 0.1, 0.3]]))
sol = lp_solve(lp)
print(f"covering LP: value {sol.value:.6f}, dual certificate sum {sol.dual.sum():.6f}")
print()

# capacity of two points against explicit boundary nodes
prob = CapacityProblem(
    BOUNDARY,
    e_points=[[0, 0, 1.0], [1.0, 0, 2.0]],
    nodes=[[0.0, 0.0], [2.0, 0.0], [0.5, 0.5], [-1.0, 1.0]],
    weights=np.ones(4),
    cfg=cfg,
)
print(f"boundary capacity of two points vs four nodes: {capacity(prob):.6f}")
print()

sets = {
    "bounded ball    ": {"shape": "ball", "center": [0, 0, 3.0], "radius": 1.5},
    "cone x_n>=0.5|x|": {"shape": "cone", "aperture": 0.5},
    "full half-space ": {"shape": "all"},
}
for name, spec in sets.items():
    rep = thinness_series(
        membership_from_spec(spec), HALFSPACE, i_max=6, cfg=cfg, e_samples=24, f_nodes=96
    )
    prods = " ".join(f"{t.product:8.3f}" for t in rep.terms)
    print(f"{name} rarefied-series terms: {prods}  partial sum {rep.partial_sum:.3f}")
print()
print("bounded sets stop contributing once the shells clear them; the full")
print("half-space keeps adding near-constant terms, the signature of a")
print("divergent series at this resolution.")
