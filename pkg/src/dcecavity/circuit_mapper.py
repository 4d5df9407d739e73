"""
Superconducting-circuit realization of the double cavity.

Two transmission lines (capacitance c_w and inductance l_w per length) are
joined by a central dc-SQUID shunted by a tunable capacitance C~ and end
in dc-SQUIDs. In natural units with v_w = 1/sqrt(l_w c_w):

    chi      = 2 C~ / (v_w^2 c_w)
    v        = E_J0 cos(Phi_0 / (2 phi0)) / (v_w^2 c_w phi0)
    L_{1,2}  = L_{1,2}^geo + E_J{1,2} cos(Phi_{1,2} / (2 phi0)) / (v_w^2 c_w phi0)

Driving both end fluxes in phase moves L at fixed dL; driving them in
counterphase (Phi_1 = Phi_2 + 2 pi phi0) moves dL at fixed L.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
import math
import warnings

import numpy as np

from .cavity_spectrum import CavityParams
from .errors import NegativeEffectiveV, Unachievable


# ------------------------------------------------------------------ signals

@dataclass(frozen=True)
class Constant:
    level: float

    def value(self, t):
        return self.level + 0.0 * np.asarray(t, dtype=float)

    def rate(self, t):
        return 0.0 * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class Sinusoid:
    """offset + amplitude sin(omega t + phase)."""
    offset: float
    amplitude: float = 0.0
    omega: float = 1.0
    phase: float = 0.0

    def value(self, t):
        return self.offset + self.amplitude * np.sin(self.omega * np.asarray(t, dtype=float) + self.phase)

    def rate(self, t):
        return self.amplitude * self.omega * np.cos(self.omega * np.asarray(t, dtype=float) + self.phase)


@dataclass(frozen=True)
class FluxFromCosine:
    """
    Phi(t) = 2 phi0 arccos(u(t)) + shift, with u(t) = (target(t) - base) / span.

    The schedule that makes span * cos((Phi - shift) / (2 phi0)) follow a target signal exactly.
    """
    target: object
    base: float
    span: float
    phi0: float
    shift: float = 0.0

    def _u(self, t):
        return (self.target.value(t) - self.base) / self.span

    def value(self, t):
        return 2.0 * self.phi0 * np.arccos(np.clip(self._u(t), -1.0, 1.0)) + self.shift

    def rate(self, t):
        u = self._u(t)
        du = self.target.rate(t) / self.span
        return -2.0 * self.phi0 * du / np.sqrt(np.maximum(1.0 - u * u, 1e-300))


def as_signal(x):
    if hasattr(x, "value") and hasattr(x, "rate"):
        return x
    return Constant(float(x))


# ------------------------------------------------------------------ hardware

@dataclass(frozen=True)
class CircuitParams:
    c_w: float
    l_w: float
    E_J0: float
    E_J1: float
    E_J2: float
    phi0_bar: float
    L1_geo: float
    L2_geo: float
    flux0: object = 0.0
    flux1: object = 0.0
    flux2: object = 0.0
    C_tune: object = 0.0
    C_J0: float = 0.0
    C_J1: float = 0.0
    C_J2: float = 0.0

    def __post_init__(self):
        for name in ("c_w", "l_w", "phi0_bar"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        for name in ("E_J0", "E_J1", "E_J2", "C_J0", "C_J1", "C_J2", "L1_geo", "L2_geo"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.v_w > 1.0 + 1e-12:
            raise ValueError(f"wave speed v_w = {self.v_w} exceeds 1")
        for name in ("flux0", "flux1", "flux2", "C_tune"):
            object.__setattr__(self, name, as_signal(getattr(self, name)))

    @property
    def v_w(self) -> float:
        return 1.0 / math.sqrt(self.l_w * self.c_w)

    @property
    def scale(self) -> float:
        """1 / (v_w^2 c_w phi0): Josephson energy to length (or conductivity) units."""
        return 1.0 / (self.v_w ** 2 * self.c_w * self.phi0_bar)

    def length_shift(self, e_j: float, flux) -> np.ndarray:
        return e_j * self.scale * np.cos(np.asarray(flux) / (2.0 * self.phi0_bar))

    def replace(self, **changes) -> "CircuitParams":
        return replace(self, **changes)


def to_cavity(circuit: CircuitParams, t: float = 0.0) -> CavityParams:
    """Effective cavity parameters at time t (chi_dot from the rate of C~)."""
    c = circuit
    cos0 = math.cos(float(c.flux0.value(t)) / (2.0 * c.phi0_bar))
    if cos0 < -1e-15:
        raise NegativeEffectiveV(f"cos(Phi_0 / 2 phi0) = {cos0:.3g} < 0: flux outside the modeled branch")
    chi_scale = 2.0 / (c.v_w ** 2 * c.c_w)
    chi = chi_scale * float(c.C_tune.value(t))
    chi_dot = chi_scale * float(c.C_tune.rate(t))
    v = max(c.E_J0 * c.scale * cos0, 0.0)
    L1 = c.L1_geo + float(c.length_shift(c.E_J1, c.flux1.value(t)))
    L2 = c.L2_geo + float(c.length_shift(c.E_J2, c.flux2.value(t)))
    return CavityParams(L=L1 + L2, dL=L1 - L2, chi=chi, v=v, chi_dot=chi_dot)


@dataclass(frozen=True)
class FluxSchedule:
    kind: str
    flux1: object
    flux2: object
    notes: tuple = field(default_factory=tuple)

    def sample(self, times):
        times = np.asarray(times, dtype=float)
        return self.flux1.value(times), self.flux2.value(times)

    def apply(self, circuit: CircuitParams) -> CircuitParams:
        return circuit.replace(flux1=self.flux1, flux2=self.flux2)


def plan_fluxes(target, hardware: CircuitParams, kind: str) -> FluxSchedule:
    """
    End-flux schedules realizing a target L(t) (kind 'L', in phase) or dL(t)
    (kind 'dL', counterphase). The arccos schedule reproduces the target exactly.
    """
    target = as_signal(target)
    h = hardware
    notes = []
    if h.E_J1 != h.E_J2:
        msg = "E_J1 != E_J2: in-phase / counterphase invariance assumes equal end junctions"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    e_j = min(h.E_J1, h.E_J2)
    span = 2.0 * e_j * h.scale
    if kind == "L":
        base = h.L1_geo + h.L2_geo
    elif kind == "dL":
        base = h.L1_geo - h.L2_geo
    else:
        raise ValueError("kind must be 'L' or 'dL'")
    lo, hi = _signal_range(target)
    if span <= 0 or max(abs(lo - base), abs(hi - base)) > span * (1.0 + 1e-12):
        raise Unachievable(f"target {kind} range [{lo:g}, {hi:g}] exceeds {base:g} +- {span:g}")
    f1 = FluxFromCosine(target, base, span, h.phi0_bar)
    if kind == "L":
        f2 = f1
    else:
        f2 = FluxFromCosine(target, base, span, h.phi0_bar, shift=-2.0 * math.pi * h.phi0_bar)
    return FluxSchedule(kind, f1, f2, tuple(notes))


def _signal_range(sig):
    if isinstance(sig, Constant):
        return sig.level, sig.level
    if isinstance(sig, Sinusoid):
        a = abs(sig.amplitude)
        return sig.offset - a, sig.offset + a
    samples = sig.value(np.linspace(0.0, 100.0, 20001))
    return float(np.min(samples)), float(np.max(samples))


@dataclass(frozen=True)
class OperatingPoint:
    flux0: float
    C_tune: float


def from_cavity(target: CavityParams, hardware: CircuitParams) -> OperatingPoint:
    """Central flux and tuning capacitance that realize target chi and v."""
    h = hardware
    if target.chi < 0:
        raise Unachievable("chi must be >= 0")
    v_max = h.E_J0 * h.scale
    if target.v < 0 or target.v > v_max * (1.0 + 1e-12):
        raise Unachievable(f"v = {target.v:g} outside [0, {v_max:g}]")
    c_tune = target.chi * h.v_w ** 2 * h.c_w / 2.0
    ratio = 0.0 if v_max == 0 else min(target.v / v_max, 1.0)
    flux0 = 2.0 * h.phi0_bar * math.acos(ratio)
    return OperatingPoint(flux0=flux0, C_tune=c_tune)
