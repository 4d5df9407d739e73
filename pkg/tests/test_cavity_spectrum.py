"""Spectrum: roots, regimes, analytic limits and error paths.

Reference roots come from an independent grid scan of the raw characteristic
k sin(kL) - (k^2 chi - v) sin(kL1) sin(kL2) refined by brentq (xtol 1e-15).
"""
import math

import numpy as np
import pytest

from dcecavity.cavity_spectrum import (
    REGIME_CONDUCTIVITY, REGIME_SUSCEPTIBILITY, CavityParams, asymptotic_levels, characteristic,
    critical_frequency, g_function, g_partials, low_energy_mode, solve_complex, solve_spectrum,
    track_roots,
)
from dcecavity.errors import SingularConfig, SingularDenominator

from conftest import ASYM_COND, ASYM_FREE, LEFT_HEAVY

ORACLE_ROOTS = {
    "free": [2.348494245115, 4.937752761335, 8.961946499951, 11.758511502915,
             13.353503966596, 17.606573758993, 21.896059121095, 22.7887360645],
    "cond": [4.33202997489, 8.648095481181, 10.941201339707, 12.962125852612,
             17.029363316616, 19.357532487477, 21.964652360329, 23.586238525991],
    "left": [3.920797111471, 5.446967413527, 7.994186621079, 10.535278343342,
             15.707963267949, 15.802075330081, 20.971216721092, 23.598333470299],
}
CONFIGS = {"free": ASYM_FREE, "cond": ASYM_COND, "left": LEFT_HEAVY}


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_roots_match_independent_scan(name):
    roots = solve_spectrum(CONFIGS[name], 8).roots
    np.testing.assert_allclose(roots, ORACLE_ROOTS[name], rtol=0, atol=1e-9)


def test_roots_are_zeros_of_g():
    roots = solve_spectrum(ASYM_COND, 12).roots
    scale = np.abs(g_partials(ASYM_COND, roots)["k"])
    assert np.all(np.abs(g_function(ASYM_COND, roots)) < 1e-10 * scale)


def test_membrane_free_limit():
    roots = solve_spectrum(CavityParams(1.0, 0.3, 0.0, 0.0), 20).roots
    np.testing.assert_allclose(roots, np.pi * np.arange(1, 21), atol=1e-10)


def test_dL_sign_flip_leaves_spectrum_unchanged():
    a = solve_spectrum(CavityParams(1.0, 0.3, 2.0, 40.0), 10).roots
    b = solve_spectrum(CavityParams(1.0, -0.3, 2.0, 40.0), 10).roots
    np.testing.assert_allclose(a, b, atol=1e-11)


def test_symmetric_cavity_has_unshifted_odd_levels():
    roots = solve_spectrum(CavityParams(1.0, 0.0, 1.5, 30.0), 10).roots
    for n in range(1, 4):
        assert np.min(np.abs(roots - 2 * n * np.pi)) < 1e-11


def test_critical_frequency_and_regimes():
    assert critical_frequency(ASYM_COND) == pytest.approx(20.0)
    assert critical_frequency(ASYM_FREE) is None
    sol = solve_spectrum(ASYM_COND, 8)
    below = [reg for k, reg in zip(sol.roots, sol.regime) if k < 20.0]
    above = [reg for k, reg in zip(sol.roots, sol.regime) if k > 20.0]
    assert set(below) == {REGIME_CONDUCTIVITY}
    assert set(above) == {REGIME_SUSCEPTIBILITY}


def test_characteristic_rejects_the_critical_frequency():
    with pytest.raises(SingularDenominator):
        characteristic(ASYM_COND, 20.0)


@pytest.mark.parametrize("bad", [dict(L=1.0, dL=1.0), dict(L=-1.0), dict(L=1.0, dL=-1.2)])
def test_geometry_validation(bad):
    with pytest.raises(SingularConfig):
        CavityParams(**bad)


@pytest.mark.parametrize("bad", [dict(L=1.0, chi=-1.0), dict(L=1.0, v=-2.0), dict(L=float("nan"))])
def test_parameter_validation(bad):
    with pytest.raises(ValueError):
        CavityParams(**bad)


def test_asymptotic_levels_track_high_modes():
    p = CavityParams(1.0, 0.2, 1e6, 0.0)
    lev = asymptotic_levels(p, 3)
    assert lev.valid
    roots = solve_spectrum(p, 12).roots
    assert np.min(np.abs(roots - lev.k_plus)) / lev.k_plus < 1e-4
    assert np.min(np.abs(roots - lev.k_minus)) / lev.k_minus < 1e-4


def test_low_energy_mode_for_heavy_membrane():
    # the small-k estimate needs k0 L << 1, i.e. chi >> L
    p = CavityParams(1.0, 0.1, 20.0, 1.0)
    est = low_energy_mode(p)
    k0 = solve_spectrum(p, 1).roots[0]
    assert est.valid
    assert est.k0 == pytest.approx(k0, rel=2e-2)


def test_low_energy_mode_pinned_values():
    # formula value and true lowest root, both frozen from the oracle scan
    p = CavityParams(1.0, 0.05, 5.0, 200.0)
    assert low_energy_mode(p).k0 == pytest.approx(5.99926, abs=1e-5)
    assert solve_spectrum(p, 1).roots[0] == pytest.approx(5.63252, abs=1e-5)


def test_complex_roots_from_chi_rate():
    p = CavityParams(1.0, 0.05, 5.0, 200.0, chi_dot=1.0)
    real = solve_spectrum(p, 4).roots
    ratios = []
    for k in real:
        c = solve_complex(p, k)
        assert abs(g_function(p, c.k)) < 1e-8 * abs(g_partials(p, c.k)["k"])
        ratios.append(abs(c.im / c.re))
    assert max(ratios) == pytest.approx(ratios[0])
    assert max(ratios) < 1e-2


def test_complex_root_reduces_to_real_without_rate():
    c = solve_complex(ASYM_FREE, 4.9)
    assert c.im == pytest.approx(0.0, abs=1e-12)
    assert c.re == pytest.approx(ORACLE_ROOTS["free"][1], abs=1e-10)


def test_track_roots_follows_small_moves():
    k = solve_spectrum(ASYM_FREE, 8).roots
    moved = ASYM_FREE.replace(dL=0.441)
    np.testing.assert_allclose(track_roots(moved, k), solve_spectrum(moved, 8).roots, atol=1e-11)


@pytest.mark.parametrize("r", ["L", "dL", "chi", "v"])
def test_partials_match_finite_differences(r):
    p = LEFT_HEAVY
    k = 7.3
    h = 1e-6
    fd = (g_function(p.shifted({r: 1.0}, h), k) - g_function(p.shifted({r: 1.0}, -h), k)) / (2 * h)
    assert g_partials(p, k)[r] == pytest.approx(fd, rel=1e-7, abs=1e-9)


def test_mirror_limit_low_mode_vanishes():
    roots = solve_spectrum(CavityParams(1.0, 0.0, 1e9, 0.0), 5).roots
    assert roots[0] < 1e-3
    assert roots[0] == pytest.approx(2.0 / math.sqrt(1e9), rel=1e-2)
