"""Poisson integrals of boundary data.

Shows the integrability gate, exact atomic sums, quadrature for radial
families, the unit-integral identity of the classical kernel, and the
vertical boundary limit.
"""
from hpot import (
    BoundaryData,
    IntegrabilityError,
    KernelConfig,
    boundary_limit_probe,
    check_boundary_condition,
    dirichlet_field,
    eval_dirichlet,
)

cfg = KernelConfig(n=3, m=1)

# the gate: growth up to (1+|y'|^2)^(s/2) with s < m+1 is admissible
for s in (0.0, 1.5, 2.0):
    rep = check_boundary_condition(BoundaryData.power_growth(2, s), cfg)
    status = "finite" if rep.satisfied else "divergent"
    print(f"power_growth(s={s}): gate integral {status}"
          + (f", value {rep.value:.6f}" if rep.satisfied else ""))
try:
    dirichlet_field(cfg, BoundaryData.power_growth(2, 2.0))
except IntegrabilityError as exc:
    print(f"field construction refuses s = 2.0: {exc}")
print()

# atomic data evaluates as an exact kernel sum
atoms = BoundaryData.atoms(2, [[0.0, 0.0], [1.5, -0.5]], [1.0, 0.5])
vf = dirichlet_field(cfg, atoms)
for x in ([0, 0, 0.5], [0, 0, 2.0], [1.0, 1.0, 1.0]):
    print(f"v{tuple(x)} = {eval_dirichlet(vf, x):.8f}")
print()

# constant data + order zero: the kernel integrates to one at every point
unit = dirichlet_field(KernelConfig(3, 0), BoundaryData.power_growth(2, 0.0))
for x in ([0, 0, 1.0], [2.0, 1.0, 0.25]):
    print(f"unit Poisson integral at {tuple(x)}: {eval_dirichlet(unit, x):.10f}")
print()

# boundary limit along the vertical direction above the origin
bump = dirichlet_field(cfg, BoundaryData.gaussian_bump(2, 1.0, 1.0))
print("vertical approach toward a Gaussian bump of height 1:")
for t, v in boundary_limit_probe(bump, [0.0, 0.0], [1.0, 0.1, 0.01, 0.001]):
    print(f"  v((0', {t:7.3f})) = {v:.6f}")
