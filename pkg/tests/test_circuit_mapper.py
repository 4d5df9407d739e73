"""Transmission-line hardware to cavity parameters and back."""
import math
import warnings

import numpy as np
import pytest

from dcecavity.cavity_spectrum import CavityParams
from dcecavity.circuit_mapper import (
    CircuitParams, Constant, FluxFromCosine, Sinusoid, from_cavity, plan_fluxes, to_cavity,
)
from dcecavity.errors import NegativeEffectiveV, Unachievable

HW = dict(c_w=2.0, l_w=0.8, E_J0=400.0, E_J1=0.05, E_J2=0.05, phi0_bar=0.5,
          L1_geo=0.62, L2_geo=0.38)
TIMES = np.linspace(0.0, 3.0, 31)


def hardware(**changes):
    return CircuitParams(**{**HW, **changes})


def test_static_mapping_formulas():
    c = hardware(flux0=0.3, flux1=0.2, flux2=0.9, C_tune=0.4)
    p = to_cavity(c)
    vw2 = 1.0 / (c.l_w * c.c_w)
    scale = 1.0 / (vw2 * c.c_w * c.phi0_bar)
    assert p.chi == pytest.approx(2 * 0.4 / (vw2 * c.c_w))
    assert p.v == pytest.approx(400.0 * scale * math.cos(0.3 / (2 * 0.5)))
    L1 = 0.62 + 0.05 * scale * math.cos(0.2)
    L2 = 0.38 + 0.05 * scale * math.cos(0.9)
    assert p.L == pytest.approx(L1 + L2)
    assert p.dL == pytest.approx(L1 - L2)


def test_cavity_round_trip():
    c = hardware()
    target = CavityParams(1.0, 0.2, 0.7, 123.0)
    op = from_cavity(target, c)
    back = to_cavity(c.replace(flux0=op.flux0, C_tune=op.C_tune))
    assert back.chi == pytest.approx(target.chi, abs=1e-12)
    assert back.v == pytest.approx(target.v, abs=1e-12 * target.v)


def test_in_phase_schedule_realizes_length_signal():
    c = hardware()
    target = Sinusoid(1.0, 0.02, 7.0)
    sched = plan_fluxes(target, c, "L")
    driven = sched.apply(c)
    got = np.array([to_cavity(driven, t).L for t in TIMES])
    np.testing.assert_allclose(got, target.value(TIMES), atol=1e-12)
    dl = np.array([to_cavity(driven, t).dL for t in TIMES])
    np.testing.assert_allclose(dl, 0.24, atol=1e-12)


def test_counterphase_schedule_moves_only_dL():
    c = hardware()
    target = Sinusoid(0.24, 0.03, 5.0, phase=0.4)
    sched = plan_fluxes(target, c, "dL")
    f1, f2 = sched.sample(TIMES)
    np.testing.assert_allclose(f1 - f2, 2 * math.pi * c.phi0_bar, atol=1e-12)
    driven = sched.apply(c)
    pts = [to_cavity(driven, t) for t in TIMES]
    np.testing.assert_allclose([p.dL for p in pts], target.value(TIMES), atol=1e-12)
    np.testing.assert_allclose([p.L for p in pts], 1.0, atol=1e-12)


def test_flux_rate_matches_finite_difference():
    f = FluxFromCosine(Sinusoid(0.0, 0.5, 3.0), 0.0, 1.0, 0.7)
    t, h = 0.37, 1e-6
    fd = (f.value(t + h) - f.value(t - h)) / (2 * h)
    assert f.rate(t) == pytest.approx(fd, rel=1e-6)


def test_chi_rate_from_capacitance_rate():
    c = hardware(C_tune=Sinusoid(0.4, 0.1, 2.0))
    p = to_cavity(c, 0.0)
    vw2 = 1.0 / (c.l_w * c.c_w)
    assert p.chi_dot == pytest.approx(2 * 0.1 * 2.0 / (vw2 * c.c_w))


def test_unreachable_targets():
    c = hardware()
    with pytest.raises(Unachievable):
        plan_fluxes(Sinusoid(1.0, 0.5, 1.0), c, "L")
    with pytest.raises(Unachievable):
        from_cavity(CavityParams(1.0, 0.0, 0.5, 1e6), c)
    with pytest.raises(ValueError):
        plan_fluxes(Constant(1.0), c, "chi")


def test_unequal_end_junctions_warn():
    c = hardware(E_J2=0.06)
    with pytest.warns(UserWarning):
        sched = plan_fluxes(Constant(1.0), c, "L")
    assert sched.notes


def test_equal_end_junctions_do_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        plan_fluxes(Constant(1.0), hardware(), "L")


def test_hardware_validation():
    with pytest.raises(ValueError):
        hardware(l_w=0.1, c_w=0.1)  # wave speed above 1
    with pytest.raises(ValueError):
        hardware(E_J1=-1.0)


def test_central_flux_outside_branch():
    with pytest.raises(NegativeEffectiveV):
        to_cavity(hardware(flux0=math.pi))  # cos(Phi_0 / 2 phi0) = -1
