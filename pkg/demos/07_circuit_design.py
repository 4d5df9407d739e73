"""
From cavity parameters to hardware settings.

Finds the central flux and tuning capacitance for a target membrane, then the
end-flux schedule that moves the membrane position while keeping the total
length fixed.
"""
import numpy as np

from dcecavity.cavity_spectrum import CavityParams
from dcecavity.circuit_mapper import CircuitParams, Sinusoid, from_cavity, plan_fluxes, to_cavity

hw = CircuitParams(c_w=1.0, l_w=1.0, E_J0=400.0, E_J1=0.02, E_J2=0.02, phi0_bar=1.0,
                   L1_geo=0.72, L2_geo=0.28)
target = CavityParams(1.0, 0.44, 0.5, 200.0)
op = from_cavity(target, hw)
print(f"central flux {op.flux0:.6f}, tuning capacitance {op.C_tune:.6f}")

sched = plan_fluxes(Sinusoid(0.44, 0.0044, 23.5), hw, "dL")
device = sched.apply(hw.replace(flux0=op.flux0, C_tune=op.C_tune))
print("   t      flux1     flux2       L        dL")
for t in np.linspace(0, 0.25, 6):
    f1, f2 = sched.sample(t)
    c = to_cavity(device, t)
    print(f"{t:5.2f}  {float(f1):8.5f}  {float(f2):8.5f}  {c.L:.6f}  {c.dL:.6f}")
