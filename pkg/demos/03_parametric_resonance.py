"""
Parametric photon creation and how to switch it off.

Moving the membrane at twice the frequency of mode 3 makes its occupation grow
like sinh^2. Adding a length modulation with the right amplitude cancels the
growth rate exactly.
"""
import numpy as np

from dcecavity.cavity_spectrum import CavityParams, solve_spectrum
from dcecavity.field_dynamics import Drive, DriveProgram, integrate_modes
from dcecavity import msa_predictor as mp

p = CavityParams(1.0, 0.44, 0.5, 0.0)
k = solve_spectrum(p, 10).roots
omega = 2 * k[3]
drive = {"dL": Drive(1.0, omega)}

res = integrate_modes(DriveProgram(p, drive, 0.01, 2000 / omega), samples_per_period=4, keep_states=False)
sol = mp.parametric_solution(p, drive, 3)
print(f"growth rate Gamma = {sol.rates['Gamma']:.4f} ({sol.regime})")
print("Omega t    numeric N3    slow-flow N3")
for i in np.linspace(0, len(res.times) - 1, 9).astype(int)[1:]:
    t = res.times[i]
    print(f"{omega * t:7.0f}  {res.photons[i, 3]:12.4f}  {sol.predict(t)[0, 0]:12.4f}")

xi = mp.frustration_amplitude(p, drive, 3, "L")
joint = dict(drive, L=Drive(xi, omega))
frus = integrate_modes(DriveProgram(p, joint, 0.01, 2000 / omega), samples_per_period=4, keep_states=False)
print(f"\nadding an L drive with xi_L = {xi:+.5f}: N3 at Omega t = 2000 is {frus.photons[-1, 3]:.2e} "
      f"instead of {res.photons[-1, 3]:.1f}")
