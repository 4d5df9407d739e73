"""
How a membrane reshapes the spectrum of a split cavity.

Sweeps the susceptibility chi of a membrane placed off-center and prints the
lowest levels, then shows on which side of the membrane each mode lives.
"""
import numpy as np

from dcecavity.cavity_spectrum import CavityParams, asymptotic_levels, solve_spectrum
from dcecavity.mode_basis import localization

print("levels k_n versus chi (L = 1, dL = 0.44, v = 0)")
print("chi       " + "  ".join(f"k{n:<6d}" for n in range(6)))
for chi in (0.0, 0.1, 0.5, 2.0, 10.0, 100.0, 1e4):
    k = solve_spectrum(CavityParams(1.0, 0.44, chi, 0.0), 6).roots
    print(f"{chi:<9g} " + "  ".join(f"{x:7.4f}" for x in k))

p = CavityParams(1.0, 0.44, 1e4, 0.0)
lev = asymptotic_levels(p, 1)
print(f"\nopaque membrane: first mirror-like pair {lev.k_minus:.4f}, {lev.k_plus:.4f} "
      f"(the two sub-cavities on their own: {np.pi / p.L1:.4f}, {np.pi / p.L2:.4f})")

p = CavityParams(1.0, 0.44, 0.5, 200.0)
sol = solve_spectrum(p, 8)
print(f"\nconductive membrane, critical frequency k_c = {sol.k_c:.4f}")
for k, regime in zip(sol.roots, sol.regime):
    rep = localization(p, k)
    print(f"  k = {k:8.4f}  {regime:20s} g = {rep.g:+7.3f}  {rep.side}")
