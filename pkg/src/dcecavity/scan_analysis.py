"""
Detuning scans around a resonance and the profile fits built on them.

A scan runs one evolution per relative detuning delta (Omega = Omega0 (1 + delta))
and records the resonant-mode occupation on a shared time grid. At each
time the occupation-vs-detuning profile is fitted by a Gaussian; the
fitted widths are then fitted by gamma(t) = A / (t - B) + gamma_inf.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math
import os

import numpy as np
from scipy.optimize import least_squares

from .errors import FitDiverged, StepFailure
from .field_dynamics import DriveProgram, integrate_modes

FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))
DEFAULT_GRID = np.linspace(-0.004, 0.006, 51)
WORKERS_ENV = "DCECAVITY_WORKERS"


@dataclass
class DetuningScan:
    base_program: DriveProgram
    omega0: float
    grid: np.ndarray
    times: np.ndarray
    results: np.ndarray      # (len(grid), len(times)) resonant-mode occupation
    mode: int

    def profile(self, i: int) -> np.ndarray:
        return self.results[:, i]

    def fit_profiles(self, min_peak: float = 1.0):
        """Gaussian fits per time, skipping times whose peak is below min_peak photons."""
        fits = []
        for i, t in enumerate(self.times):
            prof = self.profile(i)
            if prof.max() < min_peak:
                continue
            try:
                fits.append((t, gaussian_fit(self.grid, prof)))
            except FitDiverged:
                continue
        return fits


@dataclass(frozen=True)
class ProfileFit:
    center: float
    fwhm: float
    amplitude: float
    residual: float


@dataclass(frozen=True)
class DecayFit:
    A: float
    B: float
    gamma_inf: float
    residual: float


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return max(1, n)


def _scan_point(args):
    program, mode, times, n_modes, tol, complex_k = args
    res = integrate_modes(program, n_modes=n_modes, tol=tol, t_eval=times,
                          keep_states=False, complex_k=complex_k)
    return res.photons[:times.size, mode]


def run_scan(base_program: DriveProgram, omega0: float, grid=None, mode: int = 0, times=None,
             n_modes: int = 10, tol: float = 1e-9, workers: int | None = None,
             complex_k: bool = False) -> DetuningScan:
    """
    One evolution per detuning; every drive of base_program is set to Omega0 (1 + delta).

    times defaults to 400 points spanning (0, t_f].
    """
    grid = np.sort(np.asarray(DEFAULT_GRID if grid is None else grid, dtype=float))
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    t_f = base_program.t_f
    times = np.linspace(0.0, t_f, 401)[1:] if times is None else np.asarray(times, dtype=float)
    jobs = [(base_program.with_frequency(omega0 * (1.0 + d)), mode, times, n_modes, tol, complex_k)
            for d in grid]
    workers = default_workers() if workers is None else workers
    rows = []
    if workers == 1:
        for d, job in zip(grid, jobs):
            try:
                rows.append(_scan_point(job))
            except StepFailure as exc:
                raise StepFailure(f"detuning {d:g}: {exc}") from exc
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_point, job) for job in jobs]
            for d, fut in zip(grid, futures):
                try:
                    rows.append(fut.result())
                except StepFailure as exc:
                    raise StepFailure(f"detuning {d:g}: {exc}") from exc
    return DetuningScan(base_program, omega0, grid, times, np.array(rows), mode)


# ------------------------------------------------------------------ fits

def _gauss(p, x):
    a, c, s = p
    return a * np.exp(-0.5 * ((x - c) / s) ** 2)


def _gauss_jac(p, x):
    a, c, s = p
    u = (x - c) / s
    e = np.exp(-0.5 * u * u)
    return np.column_stack([e, a * e * u / s, a * e * u * u / s])


def _half_width_guess(x, y):
    peak = int(np.argmax(y))
    half = 0.5 * y[peak]
    above = np.flatnonzero(y >= half)
    lo, hi = x[above[0]], x[above[-1]]
    width = hi - lo
    if width <= 0:
        width = 2.0 * float(np.min(np.diff(x)))
    return width / FWHM_PER_SIGMA


def gaussian_fit(detunings, occupancy) -> ProfileFit:
    """Least-squares Gaussian a exp(-(x-c)^2 / (2 s^2)); FWHM = 2 sqrt(2 ln 2) s."""
    x = np.asarray(detunings, dtype=float)
    y = np.asarray(occupancy, dtype=float)
    if x.size < 5:
        raise ValueError("need at least 5 points")
    peak = float(y.max())
    if not peak > 0:
        raise ValueError("profile has no positive peak")
    p0 = [peak, float(x[np.argmax(y)]), _half_width_guess(x, y)]
    sol = least_squares(lambda p: _gauss(p, x) - y, p0, jac=lambda p: _gauss_jac(p, x),
                        method="lm", max_nfev=500, xtol=1e-10, ftol=1e-15, gtol=1e-15)
    a, c, s = sol.x
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    if sol.status <= 0 or not np.isfinite(rms) or rms > 0.5 * peak:
        raise FitDiverged(f"Gaussian fit residual {rms:.3g} vs peak {peak:.3g}")
    return ProfileFit(center=float(c), fwhm=float(abs(s) * FWHM_PER_SIGMA), amplitude=float(a),
                      residual=rms)


def _decay(p, t):
    a, b, g = p
    return a / (t - b) + g


def _decay_jac(p, t):
    a, b, _ = p
    d = t - b
    return np.column_stack([1.0 / d, a / d ** 2, np.ones_like(t)])


def fwhm_decay_fit(times, widths) -> DecayFit:
    """Fit gamma(t) = A / (t - B) + gamma_inf."""
    t = np.asarray(times, dtype=float)
    w = np.asarray(widths, dtype=float)
    if t.size < 4:
        raise ValueError("need at least 4 points")
    if w[-1] >= w[0]:
        raise FitDiverged("widths do not decrease")
    # start from the two-point hyperbola through the ends with B = 0
    g0 = float(w.min()) * 0.9
    a0 = float((w[0] - g0) * t[0])
    b0 = 0.0 if t[0] > 0 else float(t[0]) - 1.0
    sol = least_squares(lambda p: _decay(p, t) - w, [a0, b0, g0], jac=lambda p: _decay_jac(p, t),
                        method="lm", max_nfev=500, xtol=1e-10, ftol=1e-15, gtol=1e-15)
    a, b, g = sol.x
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    if sol.status <= 0 or np.any(t <= b) or not np.isfinite(rms):
        raise FitDiverged("decay-law fit did not converge to t > B")
    return DecayFit(A=float(a), B=float(b), gamma_inf=float(g), residual=rms)
