"""Tour of the half-space kernels.

Evaluates the fundamental solution, the Green function and the Poisson
kernel, then their modified variants, and checks two structural facts
numerically: the Green-function envelopes and discrete harmonicity.
"""
import numpy as np

from hpot import (
    KernelConfig,
    fundamental,
    green,
    green_bound_report,
    laplacian_residual,
    modified_fundamental,
    modified_green,
    modified_poisson,
    poisson,
)

cfg = KernelConfig(n=3, m=1)
x = [0.0, 0.0, 1.0]

print("dimension n = 3, modification order m = 1")
print(f"  surface area of unit sphere  omega_n = {cfg.omega_n:.6f}")
print(f"  fundamental normalization    r_n     = {cfg.r_n:.6f}")
print()
print(f"E(x)        at |x| = 2       : {fundamental(cfg, [0, 0, 2]): .8f}")
print(f"G(x, y)     for y = (0,0,2)  : {green(cfg, x, [0, 0, 2]): .8f}")
print(f"G(x, y)     for boundary y   : {green(cfg, x, [5, 0, 0]): .8f}")
print(f"P(x, y')    at y' = 0        : {poisson(cfg, x, [0, 0]): .8f}")
print()

# modified kernels change nothing for sources inside the unit ball ...
y_in = [0.3, -0.1, 0.4]
print("sources inside the unit ball leave the kernels untouched:")
print(f"  G_1(x, y) - G(x, y) = {modified_green(cfg, x, y_in) - green(cfg, x, y_in):.3e}")

# ... and subtract the leading expansion terms outside it
y_out = [0.0, 0.0, 4.0]
print("outside, the leading expansion terms are removed:")
print(f"  E_1(x - y) = {modified_fundamental(cfg, x, y_out): .8f}")
print(f"  G_1(x, y)  = {modified_green(cfg, x, y_out): .8f}")
print(f"  P_1(x, y') = {modified_poisson(cfg, x, [2.0, 0.0]): .8f}  (may be negative)")
print()

# Green-function envelopes
b1, b2, ratio3 = green_bound_report(KernelConfig(3), x, [0.4, 0.2, 1.7])
g = abs(green(KernelConfig(3), x, [0.4, 0.2, 1.7]))
print("Green estimates at a sample pair:")
print(f"  |G| = {g:.6f} <= r_n/|x-y|^(n-2) = {b1:.6f}")
print(f"  |G| = {g:.6f} <= 2 x_n y_n/(omega_n |x-y|^n) = {b2:.6f}")
print(f"  normalized third ratio = {ratio3:.6f}")
print()

# discrete harmonicity of a modified kernel away from its singularity
probe = np.array([1.1, -0.4, 0.9])
res = laplacian_residual(lambda z: modified_poisson(cfg, z, [2.0, 0.0]), probe, 1e-3)
print(f"normalized FD-Laplacian residual of P_1 at {probe}: {res:.2e}")
