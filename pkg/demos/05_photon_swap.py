"""
Moving photons between modes.

Driving at the difference w1 - w0 with 100 photons in mode 1 transfers them
to mode 0 and back while the pair total stays fixed.
"""
import numpy as np

from dcecavity.cavity_spectrum import CavityParams, solve_spectrum
from dcecavity.field_dynamics import Drive, DriveProgram, integrate_modes
from dcecavity import msa_predictor as mp

p = CavityParams(1.0, 0.44, 0.5, 0.0)
k = solve_spectrum(p, 10).roots
omega = k[1] - k[0]
occ = np.zeros(10)
occ[1] = 100
drive = {"dL": Drive(1.0, omega)}
sol = mp.difference_coupling_solution(p, drive, 1, 0, occ)
res = integrate_modes(DriveProgram(p, drive, 0.01, 3700 / omega), occupations=occ, samples_per_period=20,
                      keep_states=False)
print(f"swap rate {sol.rates['swap_rate']:.4f}")
print("Omega t     N0       N1      N0+N1   slow-flow N0")
for i in np.linspace(0, len(res.times) - 1, 12).astype(int):
    t = res.times[i]
    n0, n1 = res.photons[i, :2]
    print(f"{omega * t:7.0f}  {n0:7.2f}  {n1:7.2f}  {n0 + n1:7.2f}  {sol.predict(t)[0, 0]:7.2f}")
