"""
Driving the membrane susceptibility instead of its position.

A chi modulation at twice the lowest frequency does not grow without bound:
the occupation of mode 0 oscillates. Capturing this needs the complex
spectrum that a moving chi produces, hence complex_k=True.
"""
import math

import numpy as np

from dcecavity.cavity_spectrum import CavityParams, solve_spectrum
from dcecavity.field_dynamics import Drive, DriveProgram, integrate_modes
from dcecavity import msa_predictor as mp

p = CavityParams(1.0, 0.44, 0.5, 0.0)
k = solve_spectrum(p, 10).roots
omega = 2 * k[0]
drive = {"chi": Drive(1.0, omega)}
sol = mp.parametric_solution(p, drive, 0)
r = sol.rates
period = math.pi / (0.01 * r["gamma"])
print(f"Gamma = {r['Gamma']:.4f}, Lambda = {r['Lambda']:.4f}: {sol.regime}, "
      f"period Omega T = {omega * period:.0f}")

res = integrate_modes(DriveProgram(p, drive, 0.01, 1.2 * period), samples_per_period=10,
                      keep_states=False, complex_k=True)
print("Omega t   numeric N0   slow-flow N0")
for i in np.linspace(0, len(res.times) - 1, 13).astype(int)[1:]:
    t = res.times[i]
    print(f"{omega * t:7.0f}  {res.photons[i, 0]:10.4f}  {sol.predict(t)[0, 0]:10.4f}")
