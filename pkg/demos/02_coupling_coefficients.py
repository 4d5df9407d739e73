"""
Coefficients that drive photon creation.

eta = dk/dr says how a level moves when parameter r moves; beta^(r) says how
the mode shapes mix. Both are checked here against the exact identities they
must satisfy.
"""
import numpy as np

from dcecavity.cavity_spectrum import CavityParams
from dcecavity.coupling_coeffs import build_couplings, verify_identities

p = CavityParams(1.0, 0.44, 0.5, 0.0)
cs = build_couplings(p, 8)
np.set_printoptions(precision=4, suppress=True, linewidth=120)

print("level sensitivities eta_n^(r)")
for r in ("L", "dL", "chi"):
    print(f"  {r:4s}", cs.eta[r].real)

print("\nbeta^(dL) (antisymmetric, rows n, columns l)")
print(cs.beta["dL"].real[:5, :5])

print("\nidentity residuals")
for name, val in verify_identities(cs).items():
    print(f"  {name:22s} {val:.1e}")
