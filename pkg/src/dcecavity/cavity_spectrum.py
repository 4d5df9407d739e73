"""
Eigenfrequencies of a 1D double cavity split by a thin dielectric membrane.

Mirrors sit at x = -L1 and x = L2, the membrane at x = 0 with susceptibility
chi, conductivity v and susceptibility rate chi_dot. With L = L1 + L2 and
dL = L1 - L2 the allowed wavenumbers solve

    2 k sin(kL) / D(k) - cos(k dL) + cos(kL) = 0,    D(k) = k^2 chi + i k chi_dot - v.

Using cos(k dL) - cos(kL) = 2 sin(kL1) sin(kL2) this equals 2 G(k) / D(k) with

    G(k) = k sin(kL) - D(k) sin(kL1) sin(kL2),

which is entire. Root finding works on h(k) = G(k) / k^2, written with sinc
factors so that h(0) = L + v L1 L2 > 0 and nothing is singular at k_c = sqrt(v/chi).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
import math

import numpy as np
from scipy.optimize import brentq

from .errors import BracketingFailure, NoConvergence, SingularConfig, SingularDenominator

REGIME_SUSCEPTIBILITY = "high-susceptibility"
REGIME_CONDUCTIVITY = "high-conductivity"
REGIME_FREE = "membrane-free"


@dataclass(frozen=True)
class CavityParams:
    """Instantaneous cavity configuration (natural units, c = 1)."""
    L: float
    dL: float = 0.0
    chi: float = 0.0
    v: float = 0.0
    chi_dot: float = 0.0

    def __post_init__(self):
        for name in ("L", "dL", "chi", "v", "chi_dot"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if self.L <= 0 or abs(self.dL) >= self.L:
            raise SingularConfig(f"need L > |dL| > -L, got L={self.L}, dL={self.dL}")
        if self.chi < 0:
            raise ValueError(f"chi must be >= 0, got {self.chi}")
        if self.v < 0:
            raise ValueError(f"v must be >= 0, got {self.v}")

    @property
    def L1(self) -> float:
        return 0.5 * (self.L + self.dL)

    @property
    def L2(self) -> float:
        return 0.5 * (self.L - self.dL)

    def replace(self, **changes) -> "CavityParams":
        return replace(self, **changes)

    def shifted(self, direction: dict, step: float) -> "CavityParams":
        """Return params + step * direction, direction keyed by field name."""
        if not direction:
            return self
        return replace(self, **{r: getattr(self, r) + step * d for r, d in direction.items()})

    def as_dict(self) -> dict:
        return {"L": self.L, "dL": self.dL, "chi": self.chi, "v": self.v, "chi_dot": self.chi_dot}


@dataclass(frozen=True)
class SpectrumSolution:
    roots: np.ndarray
    k_c: float | None
    regime: tuple
    has_low_mode: bool
    params: CavityParams


@dataclass(frozen=True)
class ComplexRoot:
    re: float
    im: float
    seed: float

    @property
    def k(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class AsymptoticLevels:
    k_plus: float
    k_minus: float
    valid: bool


@dataclass(frozen=True)
class LowEnergyMode:
    k0: float
    valid: bool


# ---------------------------------------------------------------- helpers

def _sinc(x):
    """sin(x)/x, real or complex."""
    x = np.asarray(x)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)


def _sinc_prime(x):
    """d/dx [sin(x)/x]."""
    x = np.asarray(x)
    small = np.abs(x) < 1e-3
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, -x / 3.0 + x * x2 / 30.0,
                    (safe * np.cos(safe) - np.sin(safe)) / (safe * safe))


def membrane_coupling(params: CavityParams, k):
    """D(k) = k^2 chi + i k chi_dot - v."""
    if params.chi_dot:
        return k * k * params.chi + 1j * k * params.chi_dot - params.v
    return k * k * params.chi - params.v


def entire_residual(params: CavityParams, k):
    """h(k) = G(k)/k^2, entire in k, same nonzero roots as the characteristic."""
    L, L1, L2 = params.L, params.L1, params.L2
    D = membrane_coupling(params, k)
    return L * _sinc(k * L) - D * L1 * L2 * _sinc(k * L1) * _sinc(k * L2)


def entire_residual_prime(params: CavityParams, k):
    L, L1, L2 = params.L, params.L1, params.L2
    D = membrane_coupling(params, k)
    dD = 2.0 * k * params.chi + (1j * params.chi_dot if params.chi_dot else 0.0)
    s1, s2 = _sinc(k * L1), _sinc(k * L2)
    return (L * L * _sinc_prime(k * L) - dD * L1 * L2 * s1 * s2
            - D * L1 * L2 * (L1 * _sinc_prime(k * L1) * s2 + L2 * s1 * _sinc_prime(k * L2)))


def _residual_scale(params, k):
    D = membrane_coupling(params, k)
    return params.L + np.abs(D) * params.L1 * params.L2


def g_function(params: CavityParams, k):
    """G(k) = k sin(kL) - D sin(kL1) sin(kL2)."""
    D = membrane_coupling(params, k)
    return k * np.sin(k * params.L) - D * np.sin(k * params.L1) * np.sin(k * params.L2)


def g_partials(params: CavityParams, k) -> dict:
    """Partial derivatives of G with respect to k and each cavity parameter."""
    L, L1, L2, dL = params.L, params.L1, params.L2, params.dL
    chi, chi_dot = params.chi, params.chi_dot
    D = membrane_coupling(params, k)
    s1, c1 = np.sin(k * L1), np.cos(k * L1)
    s2, c2 = np.sin(k * L2), np.cos(k * L2)
    ss = s1 * s2
    dD = 2.0 * k * chi + (1j * chi_dot if chi_dot else 0.0)
    return {
        "k": np.sin(k * L) + k * L * np.cos(k * L) - dD * ss - D * (L1 * c1 * s2 + L2 * s1 * c2),
        "L": k * k * np.cos(k * L) - D * 0.5 * k * np.sin(k * L),
        "dL": D * 0.5 * k * np.sin(k * dL),
        "chi": -k * k * ss,
        "v": ss + 0.0 * k,
        "chi_dot": -1j * k * ss,
    }


# ---------------------------------------------------------------- public API

def characteristic(params: CavityParams, k):
    """
    Left-hand side 2 k sin(kL)/D - cos(k dL) + cos(kL).

    For a membrane-free cavity (chi = v = chi_dot = 0) the quotient is a
    removable 0/0 and the reduced equation sin(kL) = 0 is returned instead.
    """
    if params.chi == 0 and params.v == 0 and params.chi_dot == 0:
        return np.sin(k * params.L)
    D = membrane_coupling(params, k)
    scale = np.abs(k) ** 2 * params.chi + np.abs(k * params.chi_dot) + params.v
    if np.any(np.abs(D) <= 1e-12 * scale):
        raise SingularDenominator(f"k = {k} sits on the critical frequency")
    return 2.0 * np.sin(k * params.L) * k / D - np.cos(k * params.dL) + np.cos(k * params.L)


def critical_frequency(params: CavityParams) -> float | None:
    if params.chi > 0 and params.v > 0:
        return math.sqrt(params.v / params.chi)
    return None


def _classify(params, roots):
    k_c = critical_frequency(params)
    if params.chi == 0 and params.v == 0:
        return tuple(REGIME_FREE for _ in roots)
    if k_c is None:
        label = REGIME_SUSCEPTIBILITY if params.chi > 0 else REGIME_CONDUCTIVITY
        return tuple(label for _ in roots)
    return tuple(REGIME_SUSCEPTIBILITY if k > k_c else REGIME_CONDUCTIVITY for k in roots)


def _scan(f, fprime, noise, k_hi, step):
    """Roots of a real smooth f on (0, k_hi] by sign scan plus critical-point splitting."""
    grid = np.arange(0.0, k_hi + step, step)
    grid[0] = min(1e-9, step * 1e-3)
    fv = f(grid)
    dv = fprime(grid)
    roots = []
    for i in range(len(grid) - 1):
        a, b, fa, fb = grid[i], grid[i + 1], fv[i], fv[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if np.sign(fa) != np.sign(fb):
            if fb != 0.0:
                roots.append(brentq(f, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps))
            continue
        if np.sign(dv[i]) != np.sign(dv[i + 1]) and dv[i] != 0.0 and dv[i + 1] != 0.0:
            c = brentq(fprime, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            fc = f(c)
            if np.sign(fc) != np.sign(fa) and abs(fc) > noise(c):
                roots.append(brentq(f, a, c, xtol=1e-14, rtol=4 * np.finfo(float).eps))
                roots.append(brentq(f, c, b, xtol=1e-14, rtol=4 * np.finfo(float).eps))
            elif abs(fc) <= noise(c):
                roots.extend([c, c])
    return roots


def _polish(f, fprime, k):
    fk = f(k)
    dk = fprime(k)
    if dk != 0.0:
        k_new = k - fk / dk
        if abs(k_new - k) < 1e-8 * max(1.0, abs(k)) and abs(f(k_new)) <= abs(fk):
            return float(k_new)
    return float(k)


def _roots_below(params: CavityParams, k_hi: float) -> list:
    L = params.L
    step = math.pi / (20.0 * L)
    eps = np.finfo(float).eps
    if params.dL == 0.0 and (params.chi > 0 or params.v > 0):
        # parity split: odd modes have a node on the membrane
        odd = [2.0 * n * math.pi / L for n in range(1, int(k_hi * L / (2 * math.pi)) + 1)]
        q = 0.25 * L

        def f(k):
            D = k * k * params.chi - params.v
            return np.cos(0.5 * k * L) - D * q * _sinc(0.5 * k * L)

        def fp(k):
            D = k * k * params.chi - params.v
            return (-0.5 * L * np.sin(0.5 * k * L) - 2.0 * k * params.chi * q * _sinc(0.5 * k * L)
                    - D * q * 0.5 * L * _sinc_prime(0.5 * k * L))

        def noise(k):
            return 64 * eps * (1.0 + abs(k * k * params.chi - params.v) * q)

        even = [_polish(f, fp, r) for r in _scan(f, fp, noise, k_hi, step)]
        return sorted(odd + even)

    def f(k):
        return entire_residual(params, k)

    def fp(k):
        return entire_residual_prime(params, k)

    def noise(k):
        return 64 * eps * _residual_scale(params, k)

    return sorted(_polish(f, fp, r) for r in _scan(f, fp, noise, k_hi, step))


def solve_spectrum(params: CavityParams, n_modes: int, k_max: float | None = None) -> SpectrumSolution:
    """
    The n_modes lowest real eigenfrequencies.

    The complex rate chi_dot is ignored here (the real spectrum of the
    instantaneous configuration); use solve_complex to continue roots off
    the real axis.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    real = params if params.chi_dot == 0 else params.replace(chi_dot=0.0)
    k_c = critical_frequency(real)
    k_hi = k_max if k_max is not None else (n_modes + 2) * math.pi / real.L + (k_c or 0.0)
    for _ in range(12):
        roots = _roots_below(real, k_hi)
        if len(roots) >= n_modes or k_max is not None:
            break
        k_hi *= 2.0
    if len(roots) < n_modes:
        raise BracketingFailure(f"found {len(roots)} roots below k={k_hi}, wanted {n_modes}")
    roots = np.array(roots[:n_modes])
    return SpectrumSolution(roots=roots, k_c=k_c, regime=_classify(real, roots),
                            has_low_mode=bool(np.any(roots < math.pi / real.L)), params=real)


def asymptotic_levels(params: CavityParams, n: int, threshold: float = 10.0) -> AsymptoticLevels:
    """Mirror-like branches k_{n,+/-} = (2 n pi / L) / (1 -/+ |dL/L|)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    L, a = params.L, abs(params.dL / params.L)
    base = 2.0 * n * math.pi / L
    gate = abs(base ** 2 * params.chi * L - params.v * L)
    return AsymptoticLevels(k_plus=base / (1.0 - a), k_minus=base / (1.0 + a), valid=gate > threshold)


def low_energy_mode(params: CavityParams) -> LowEnergyMode:
    """Fourth-order small-k estimate of the lowest mode; invalid when it lands above pi/L."""
    L = params.L
    w = 1.0 - (params.dL / L) ** 2
    k0 = math.sqrt((4.0 + params.v * L * w) / (2.0 / 3.0 + params.chi / L * w)) / L
    return LowEnergyMode(k0=k0, valid=k0 < math.pi / L)


def solve_complex(params: CavityParams, seed: float, max_iter: int = 100, tol: float = 1e-10) -> ComplexRoot:
    """Continue a real root into the complex plane by damped Newton on G."""
    k = complex(seed)
    gk = complex(g_function(params, k))
    for _ in range(max_iter):
        if abs(_residual_value(params, k, gk)) < tol:
            return ComplexRoot(re=k.real, im=k.imag, seed=float(seed))
        d = complex(g_partials(params, k)["k"])
        if d == 0:
            break
        step = gk / d
        for _ in range(30):
            k_new = k - step
            g_new = complex(g_function(params, k_new))
            if abs(g_new) < abs(gk) or abs(step) < 1e-15:
                break
            step *= 0.5
        k, gk = k_new, g_new
    if abs(_residual_value(params, k, gk)) < tol:
        return ComplexRoot(re=k.real, im=k.imag, seed=float(seed))
    raise NoConvergence(f"complex Newton from {seed} did not converge (|res|={abs(gk):.3g})")


def _residual_value(params, k, gk):
    """Characteristic residual 2G/D, or G itself when D vanishes identically."""
    D = membrane_coupling(params, k)
    if D == 0:
        return gk
    return 2.0 * gk / D


def track_roots(params: CavityParams, guess, spacing=None, tol: float = 1e-13) -> np.ndarray:
    """
    Newton-continue real roots from nearby guesses (vectorized).

    Falls back to a full solve when any step exceeds half the local level
    spacing, matching each guess to the nearest fresh root.
    """
    real = params if params.chi_dot == 0 else params.replace(chi_dot=0.0)
    k = np.array(guess, dtype=float)
    if spacing is None:
        gaps = np.diff(k) if k.size > 1 else np.array([math.pi / real.L])
        spacing = np.minimum(np.r_[gaps, np.inf], np.r_[np.inf, gaps]) if k.size > 1 else gaps
    start = k.copy()
    for _ in range(50):
        h = entire_residual(real, k)
        dh = entire_residual_prime(real, k)
        step = h / dh
        k = k - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(k))):
            break
    if np.any(np.abs(k - start) > 0.5 * spacing) or not np.all(np.isfinite(k)):
        fresh = solve_spectrum(real, k.size + 2).roots
        k = fresh[np.argmin(np.abs(fresh[None, :] - start[:, None]), axis=1)]
    return k
