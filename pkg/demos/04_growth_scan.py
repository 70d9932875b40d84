"""Growth-ratio scans of a subharmonic superposition.

For compactly supported data the scaled ratio |u(x)| / (x_n^(1-a) |x|^(m+a))
decays like 1/|x| along rays; the scan makes that visible and flags any
sample that falls inside an exceptional covering.
"""
import numpy as np

from hpot import (
    AtomicMeasure,
    BoundaryData,
    GrowthParams,
    KernelConfig,
    MaximalQuery,
    dirichlet_field,
    eval_dirichlet,
    eval_green_potential,
    green_field,
    growth_scan,
    vitali_covering,
)

cfg = KernelConfig(n=3, m=1)
vf = dirichlet_field(cfg, BoundaryData.atoms(2, [[0.3, 0.2], [-0.6, 0.1]], [0.8, 0.6]))
hf = green_field(cfg, AtomicMeasure(3, [[0.25, 0.15, 0.4], [-0.5, 0.2, 0.7]], [0.15, 0.1]))
u = lambda x: eval_dirichlet(vf, x) + eval_green_potential(hf, x)

mu = AtomicMeasure(3, [[0.25, 0.15, 0.4], [-0.5, 0.2, 0.7]], [0.15, 0.1])
query = MaximalQuery(2.0, 25.0 * mu.total_mass)
covering = vitali_covering(mu, query, shells=range(1, 6), grid_delta=0.5)

rng = np.random.default_rng(0)
rays = []
while len(rays) < 4:
    d = rng.normal(size=3)
    d[-1] = abs(d[-1])
    if d[-1] / np.linalg.norm(d) < 0.2:
        continue
    rays.append(d / np.linalg.norm(d))

radii = np.geomspace(4.0, 4096.0, 11)
rows = growth_scan(u, rays, radii, GrowthParams(alpha=1.0, m=1), covering, dim=3, subharmonic=True)

print("ray  radius      ratio          ratio*radius   flagged")
for r in rows:
    if r.ray_index == 0:
        print(
            f"  {r.ray_index}  {r.radius:9.1f}  {r.ratio:.6e}  {r.ratio * r.radius:.6e}"
            f"   {'in G' if r.in_exceptional else ''}"
        )
print()
for i in range(len(rays)):
    scaled = [r.ratio * r.radius for r in rows if r.ray_index == i and not r.in_exceptional]
    print(f"ray {i}: ratio*radius falls {scaled[0]:.3e} -> {scaled[-1]:.3e} "
          f"({'monotone' if all(a >= b for a, b in zip(scaled, scaled[1:])) else 'not monotone'})")
