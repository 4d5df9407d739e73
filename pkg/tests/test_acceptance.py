"""
Acceptance criteria, one test and one PASS/FAIL line each.

Tolerances and runtime limits are those of the criteria themselves. Lines are collected in
RESULTS and printed at the end of the pytest session (see conftest.py);
running this file directly prints them as well.
"""
import math
import time

import numpy as np
import pytest

from dcecavity.cavity_spectrum import CavityParams, solve_spectrum
from dcecavity.circuit_mapper import CircuitParams, Sinusoid, from_cavity, plan_fluxes, to_cavity
from dcecavity.coupling_coeffs import build_couplings, eta, verify_identities
from dcecavity.field_dynamics import Drive, DriveProgram, integrate_modes
from dcecavity.mode_basis import ModeSet, localization, overlap_matrix
from dcecavity import msa_predictor as mp
from dcecavity.scan_analysis import fwhm_decay_fit, gaussian_fit, run_scan

RESULTS = []
BASE = CavityParams(1.0, 0.44, 0.5, 0.0)
EPS = 0.01


def report(number, ok, detail):
    line = f"CRITERION {number:>2}: {'PASS' if ok else 'FAIL'} | {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def test_criterion_01_membrane_free_spectrum():
    t0 = time.perf_counter()
    k = solve_spectrum(CavityParams(1.0, 0.0, 0.0, 0.0), 20).roots
    dt = time.perf_counter() - t0
    err = float(np.max(np.abs(k - np.pi * np.arange(1, 21))))
    assert report(1, err < 1e-10 and dt < 0.1, f"max |k_n - n pi| = {err:.1e} (< 1e-10), {dt:.3f} s (< 0.1 s)")


def test_criterion_02_mirror_limit():
    t0 = time.perf_counter()
    k = solve_spectrum(CavityParams(1.0, 0.0, 1e9, 0.0), 11).roots
    dt = time.perf_counter() - t0
    low, bands = k[0], k[1:]
    want = 2 * np.pi * np.repeat(np.arange(1, 6), 2)
    rel = float(np.max(np.abs(bands - want) / want))
    ok = rel < 1e-4 and dt < 1.0 and low < 1e-3
    assert report(2, ok, f"doublets 2n pi: max rel err {rel:.1e} (< 1e-4); vanishing low mode k0 = {low:.2e}; "
                         f"{dt:.2f} s (< 1 s)")


def test_criterion_03_identity_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(3):
        p = CavityParams(1.0, rng.uniform(-0.45, 0.45), rng.uniform(0.1, 5.0), rng.uniform(0.0, 200.0))
        worst = max(worst, max(verify_identities(build_couplings(p, 7)).values()))
    dt = time.perf_counter() - t0
    assert report(3, worst < 1e-6 and dt < 30, f"3 random configs, n,l <= 6: worst violation {worst:.1e} "
                                                 f"(< 1e-6), {dt:.1f} s (< 30 s)")


def test_criterion_04_detuned_coupling_values():
    t0 = time.perf_counter()
    w = solve_spectrum(CavityParams(1.0, 0.44, 0.5, 200.0), 6).roots
    d14 = (w[1] + w[4]) / (2 * w[3]) - 1
    d05 = (w[0] + w[5]) / (2 * w[3]) - 1
    dt = time.perf_counter() - t0
    ok = abs(d14 - 0.00088) < 1e-4 and abs(d05 + 0.0038) < 1e-4 and dt < 1.0
    assert report(4, ok, f"(w1+w4)/(2w3)-1 = {d14:.5f} (want 0.00088), (w0+w5)/(2w3)-1 = {d05:.5f} "
                         f"(want -0.0038), tol 1e-4, {dt:.2f} s")


def test_criterion_05_frustration():
    t0 = time.perf_counter()
    k = solve_spectrum(BASE, 10).roots
    om = 2 * k[3]
    single = {"dL": Drive(1.0, om)}
    xi = mp.frustration_amplitude(BASE, single, 3, "L")
    t_f = 2000 / om
    n_single = integrate_modes(DriveProgram(BASE, single, EPS, t_f), samples_per_period=4,
                               keep_states=False).photons[-1, 3]
    joint = dict(single, L=Drive(xi, om))
    n_joint = integrate_modes(DriveProgram(BASE, joint, EPS, t_f), samples_per_period=4,
                              keep_states=False).photons[-1, 3]
    dt = time.perf_counter() - t0
    value_ok = abs(xi + 0.43856) < 1e-4
    supp_ok = n_joint < 0.05 * n_single
    assert report(5, value_ok and supp_ok and dt < 600,
                  f"xi_L = {xi:+.5f} (want -0.43856 +- 1e-4: {'ok' if value_ok else 'mismatch'}); "
                  f"joint N3 = {n_joint:.2e} vs single {n_single:.1f} at Omega t = 2000 "
                  f"({'suppressed' if supp_ok else 'not suppressed'}); {dt:.1f} s")


def test_criterion_06_parametric_msa_agreement():
    t0 = time.perf_counter()
    k = solve_spectrum(BASE, 10).roots
    om = 2 * k[3]
    drives = {"dL": Drive(1.0, om)}
    res = integrate_modes(DriveProgram(BASE, drives, EPS, 2000 / om), n_modes=10, samples_per_period=10,
                          keep_states=False)
    sol = mp.parametric_solution(BASE, drives, 3, eps=EPS)
    pred = sol.predict(res.times)[:, 0]
    phase = res.times * om
    rel = np.abs(res.photons[:, 3] - pred) / np.maximum(pred, 1e-300)
    window = phase >= 100.0
    worst = float(np.max(rel[window]))
    full = float(np.max(rel[phase > 0]))
    dt = time.perf_counter() - t0
    assert report(6, worst < 0.10 and dt < 600,
                  f"max rel err of N3 vs sinh^2(eps gamma t) on Omega t in [100, 2000]: {worst:.3f} (< 0.10); "
                  f"including the start-up transient: {full:.2f}; N=10, {dt:.1f} s")


def test_criterion_07_difference_conservation():
    t0 = time.perf_counter()
    k = solve_spectrum(BASE, 10).roots
    om = k[1] - k[0]
    occ = np.zeros(10)
    occ[1] = 100.0
    res = integrate_modes(DriveProgram(BASE, {"dL": Drive(1.0, om)}, EPS, 3700 / om), n_modes=10,
                          occupations=occ, samples_per_period=20, keep_states=False)
    pair = res.photons[:, 0] + res.photons[:, 1]
    dev = float(np.max(np.abs(pair - 100.0)) / 100.0)
    top = float(res.photons[:, 0].max())
    dt = time.perf_counter() - t0
    assert report(7, dev < 0.01 and top > 95 and dt < 600,
                  f"max |N0+N1-100|/100 = {dev:.4f} (< 0.01), max N0 = {top:.2f} (> 95), {dt:.1f} s")


def test_criterion_08_chi_oscillation():
    t0 = time.perf_counter()
    cs = build_couplings(BASE, 10)
    om = 2 * cs.k[0]
    drives = {"chi": Drive(1.0, om)}
    sol = mp.parametric_solution(BASE, drives, 0, eps=EPS, couplings=cs)
    g, lam, gam = sol.rates["Gamma"], sol.rates["Lambda"], sol.rates["gamma"]
    amp_msa = (lam - g) / (g + lam)
    period_msa = math.pi / (EPS * gam)
    res = integrate_modes(DriveProgram(BASE, drives, EPS, 1.3 * period_msa), n_modes=10, samples_per_period=10,
                          keep_states=False, complex_k=True)
    n0 = res.photons[:, 0]
    i_peak = int(np.argmax(n0))
    amp = float(n0[i_peak])
    after = res.times > res.times[i_peak]
    # the return to the vacuum closes one period of sin^2
    period = float(res.times[after][np.argmin(n0[after])])
    dt = time.perf_counter() - t0
    amp_err = abs(amp / amp_msa - 1)
    per_err = abs(period / period_msa - 1)
    assert report(8, amp_err < 0.15 and per_err < 0.10 and dt < 600,
                  f"amplitude {amp:.4f} vs MSA {amp_msa:.4f} (err {amp_err:.3f} < 0.15); "
                  f"period Omega T = {om * period:.0f} vs {om * period_msa:.0f} (err {per_err:.3f} < 0.10); {dt:.1f} s")


def test_criterion_09_detuning_scan():
    t0 = time.perf_counter()
    k = solve_spectrum(BASE, 10).roots
    om = 2 * k[3]
    prog = DriveProgram(BASE, {"dL": Drive(1.0, om)}, EPS, 2400 / om)
    scan = run_scan(prog, om, mode=3, times=np.linspace(0, prog.t_f, 241)[1:], n_modes=10)
    late = gaussian_fit(scan.grid, scan.results[:, -1])
    fits = scan.fit_profiles()
    ts = np.array([t for t, _ in fits]) * om
    widths = np.array([f.fwhm for _, f in fits])
    decay = fwhm_decay_fit(ts, widths)
    dt = time.perf_counter() - t0
    center_ok = abs(late.center - 0.001) <= 0.0005
    gamma_ok = 0.00075 <= decay.gamma_inf <= 0.00225
    assert report(9, center_ok and gamma_ok and dt < 7200,
                  f"late-time center {late.center:+.5f} (want 0.001 +- 0.0005: {'ok' if center_ok else 'mismatch'}); "
                  f"gamma_inf = {decay.gamma_inf:.5f} (in [0.00075, 0.00225]: {'ok' if gamma_ok else 'no'}); "
                  f"51 detunings, {dt:.1f} s")


def test_criterion_10_property_suites():
    t0 = time.perf_counter()
    checks = {}
    modes = ModeSet.solve(CavityParams(1.0, -0.31, 2.2, 75.0), 14)
    checks["gram"] = float(np.max(np.abs(overlap_matrix(modes, modes) - np.eye(14)))) < 1e-8

    occ = np.array([0, 2, 0, 7, 0, 1, 0, 0], dtype=float)
    static = integrate_modes(DriveProgram(BASE, {}, t_f=30.0), n_modes=8, occupations=occ,
                             samples_per_period=10, keep_states=False)
    checks["static"] = float(np.max(np.abs(static.photons - occ))) < 1e-6

    k = solve_spectrum(BASE, 8).roots
    driven = integrate_modes(DriveProgram(BASE, {"dL": Drive(1.0, 2 * k[3])}, EPS, 800 / (2 * k[3])),
                             n_modes=8, samples_per_period=4, keep_states=False)
    rows = (np.abs(driven.bog_alpha) ** 2 - np.abs(driven.bog_beta) ** 2).sum(axis=1)
    checks["bogoliubov"] = float(np.max(np.abs(rows - 1))) < 1e-3

    flipped = BASE.replace(dL=-BASE.dL)
    checks["g_flip"] = all(abs(localization(BASE, kk).g + localization(flipped, kk).g) < 1e-12 for kk in k)

    cs = build_couplings(BASE, 6)
    t = np.linspace(0, 5000, 400)
    chi = {"chi": Drive(1.0, 2 * cs.k[0])}
    vac = mp.parametric_solution(BASE, chi, 0, couplings=cs).predict(t)[:, 0]
    xi = mp.frustration_amplitude(BASE, chi, 0, "L", couplings=cs)
    pure = mp.parametric_solution(BASE, dict(chi, L=Drive(xi, 2 * cs.k[0])), 0, occupations=5.0,
                                  couplings=cs).predict(t)[:, 0]
    checks["floor"] = bool(np.all(vac >= 0) and np.all(pure >= 5.0 - 1e-9))

    hw = CircuitParams(c_w=1.3, l_w=0.9, E_J0=300.0, E_J1=0.04, E_J2=0.04, phi0_bar=0.8,
                       L1_geo=0.6, L2_geo=0.4)
    target = CavityParams(1.0, 0.2, 0.7, 90.0)
    op = from_cavity(target, hw)
    sched = plan_fluxes(Sinusoid(0.2, 0.01, 3.0), hw, "dL")
    mapped = sched.apply(hw.replace(flux0=op.flux0, C_tune=op.C_tune))
    ts = np.linspace(0, 2, 21)
    pts = [to_cavity(mapped, tt) for tt in ts]
    checks["circuit"] = (abs(pts[0].chi - target.chi) < 1e-12 and abs(pts[0].v - target.v) < 1e-12 * target.v
                         and max(abs(p.dL - (0.2 + 0.01 * math.sin(3.0 * tt))) for p, tt in zip(pts, ts)) < 1e-12)
    dt = time.perf_counter() - t0
    failed = [name for name, ok in checks.items() if not ok]
    assert report(10, not failed, "gram 1e-8, static 1e-6, Bogoliubov rows 1e-3, g flip, oscillatory floor "
                                  f"(vacuum and Gamma = 0), circuit round trip 1e-12: "
                                  f"{'all hold' if not failed else 'failed ' + ', '.join(failed)}; {dt:.1f} s")


# The target numbers of criteria 4 and 5 do come out of a neighbouring
# configuration (chi = 5, v = 200) once the root just below the critical
# frequency is dropped from the mode labels. Pinned here so the gap stays explained.

def _relabelled(p, n):
    w = solve_spectrum(p, n + 1).roots
    kc = math.sqrt(p.v / p.chi)
    keep = np.abs(w - kc) > 0.01
    return w[keep], np.flatnonzero(keep)


def test_target_detunings_under_alternative_labels():
    p = CavityParams(1.0, 0.44, 5.0, 200.0)
    w, _ = _relabelled(p, 7)
    assert (w[1] + w[4]) / (2 * w[3]) - 1 == pytest.approx(0.000879, abs=2e-6)
    assert (w[0] + w[5]) / (2 * w[3]) - 1 == pytest.approx(-0.003770, abs=2e-6)


def test_target_frustration_under_alternative_labels():
    p = CavityParams(1.0, 0.44, 5.0, 200.0)
    _, index = _relabelled(p, 7)
    l = int(index[3])
    xi = mp.frustration_amplitude(p, {"dL": Drive(1.0, 1.0)}, l, "L")
    assert xi == pytest.approx(-0.43856, abs=1e-5)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
