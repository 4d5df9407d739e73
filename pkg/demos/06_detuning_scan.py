"""
Resonance line shape.

Scans the drive frequency around 2 w3 and fits each occupation profile with a
Gaussian. The width narrows as 1/t toward a finite floor. Set
DCECAVITY_WORKERS to spread the 51 runs over several processes.
"""
import numpy as np

from dcecavity.cavity_spectrum import CavityParams, solve_spectrum
from dcecavity.field_dynamics import Drive, DriveProgram
from dcecavity.scan_analysis import fwhm_decay_fit, run_scan

p = CavityParams(1.0, 0.44, 0.5, 0.0)
k = solve_spectrum(p, 10).roots
omega = 2 * k[3]
prog = DriveProgram(p, {"dL": Drive(1.0, omega)}, 0.01, 2400 / omega)
scan = run_scan(prog, omega, mode=3, times=np.linspace(0, prog.t_f, 241)[1:])
fits = scan.fit_profiles()
print("Omega t   center      FWHM       peak")
for t, f in fits[::20]:
    print(f"{omega * t:7.0f}  {f.center:+.5f}  {f.fwhm:.5f}  {f.amplitude:9.2f}")
decay = fwhm_decay_fit([omega * t for t, _ in fits], [f.fwhm for _, f in fits])
print(f"FWHM = {decay.A:.3f} / (Omega t - {decay.B:.1f}) + {decay.gamma_inf:.5f}")
