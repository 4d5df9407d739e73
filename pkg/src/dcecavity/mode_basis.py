"""
Instantaneous spatial modes of the double cavity.

    Phi_n(x) = sin(k (x + L1)) / N                 for -L1 <= x <= 0
    Phi_n(x) = c sin(k (x - L2)) / N               for 0 <= x <= L2,   c = -sin(k L1)/sin(k L2)

orthonormal under (f, g) = int f g* dx + chi f(0) g*(0). All inner products
between modes are evaluated in closed form from piecewise sine integrals.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import quad

from .cavity_spectrum import CavityParams, _sinc, solve_spectrum
from .errors import OutOfDomain


@dataclass(frozen=True)
class SpatialMode:
    k: float
    n: int
    norm: float
    right_factor: float
    params: CavityParams

    def __call__(self, x):
        return eval_mode(self, x)

    @property
    def at_membrane(self) -> float:
        return math.sin(self.k * self.params.L1) / self.norm


@dataclass(frozen=True)
class LocalizationReport:
    kappa_sq: float
    g: float
    side: str


def right_factor(params: CavityParams, k: float) -> float:
    """
    Amplitude of the right branch relative to the left one.

    Near a zero of sin(k L2) the ratio -sin(kL1)/sin(kL2) is 0/0 at a root;
    there the derivative-jump form (cos(kL1) - D sin(kL1)/k)/cos(kL2), equal
    at any root, is used, and at exact double-integer points the limit
    (-1)^(n1+n2).
    """
    L1, L2 = params.L1, params.L2
    s1, c1 = math.sin(k * L1), math.cos(k * L1)
    s2, c2 = math.sin(k * L2), math.cos(k * L2)
    if abs(s2) < 1e-9:
        n1, n2 = round(k * L1 / math.pi), round(k * L2 / math.pi)
        if n1 > 0 and n2 > 0 and abs(k - n1 * math.pi / L1) < 1e-6 and abs(k - n2 * math.pi / L2) < 1e-6:
            return float((-1) ** (n1 + n2))
    if abs(s2) >= abs(c2):
        return -s1 / s2
    D = k * k * params.chi - params.v
    return (c1 - D * s1 / k) / c2


def _half_norm(k, length):
    """int_0^length sin^2(k y) dy."""
    return 0.5 * length * (1.0 - _sinc(2.0 * k * length))


def normalization(params: CavityParams, k: float) -> float:
    c = right_factor(params, k)
    n_sq = (_half_norm(k, params.L1) + c * c * _half_norm(k, params.L2)
            + params.chi * math.sin(k * params.L1) ** 2)
    return math.sqrt(float(n_sq))


def build_mode(params: CavityParams, k: float, n: int = -1) -> SpatialMode:
    return SpatialMode(k=float(k), n=n, norm=normalization(params, k),
                       right_factor=right_factor(params, k), params=params)


def eval_mode(mode: SpatialMode, x):
    p = mode.params
    x = np.asarray(x, dtype=float)
    if np.any(x < -p.L1 - 1e-12) or np.any(x > p.L2 + 1e-12):
        raise OutOfDomain(f"x outside [-{p.L1}, {p.L2}]")
    left = np.sin(mode.k * (x + p.L1))
    right = mode.right_factor * np.sin(mode.k * (x - p.L2))
    return np.where(x <= 0.0, left, right) / mode.norm


class ModeSet:
    """The first N modes of one parameter snapshot, stored as arrays."""

    def __init__(self, params: CavityParams, k):
        self.params = params
        self.k = np.asarray(k, dtype=float)
        self.factor = np.array([right_factor(params, kk) for kk in self.k])
        c2 = self.factor ** 2
        n_sq = (_half_norm(self.k, params.L1) + c2 * _half_norm(self.k, params.L2)
                + params.chi * np.sin(self.k * params.L1) ** 2)
        self.norm = np.sqrt(n_sq)

    @classmethod
    def solve(cls, params: CavityParams, n_modes: int) -> "ModeSet":
        return cls(params, solve_spectrum(params, n_modes).roots)

    def __len__(self):
        return self.k.size

    def mode(self, n: int) -> SpatialMode:
        return SpatialMode(k=float(self.k[n]), n=n, norm=float(self.norm[n]),
                           right_factor=float(self.factor[n]), params=self.params)

    def at_membrane(self) -> np.ndarray:
        return np.sin(self.k * self.params.L1) / self.norm

    def __call__(self, x):
        """Mode values, shape (N, len(x))."""
        return np.vstack([eval_mode(self.mode(n), x) for n in range(len(self))])


def _cos_integral(w, phase, x0, x1):
    """int_x0^x1 cos(w x + phase) dx, stable as w -> 0."""
    half = 0.5 * (x1 - x0)
    mid = 0.5 * (x1 + x0)
    return 2.0 * half * np.cos(w * mid + phase) * _sinc(w * half)


def _sin_product(p, a, q, b, x0, x1):
    """int_x0^x1 sin(p x + a) sin(q x + b) dx (broadcasting)."""
    return 0.5 * (_cos_integral(p - q, a - b, x0, x1) - _cos_integral(p + q, a + b, x0, x1))


def overlap_matrix(bra: ModeSet, ket: ModeSet, chi_weight: float | None = None) -> np.ndarray:
    """
    Matrix O[n, l] = (bra_n, ket_l) for real modes.

    Modes are extended by zero outside their own cavity, so snapshots with
    different mirror positions integrate over the common interval. The
    membrane weight defaults to the ket snapshot's chi.
    """
    pa, pb = bra.params, ket.params
    chi = pb.chi if chi_weight is None else chi_weight
    ka, kb = bra.k[:, None], ket.k[None, :]
    left = _sin_product(ka, ka * pa.L1, kb, kb * pb.L1, -min(pa.L1, pb.L1), 0.0)
    right = _sin_product(ka, -ka * pa.L2, kb, -kb * pb.L2, 0.0, min(pa.L2, pb.L2))
    right = right * bra.factor[:, None] * ket.factor[None, :]
    out = (left + right) / (bra.norm[:, None] * ket.norm[None, :])
    return out + chi * np.outer(bra.at_membrane(), ket.at_membrane())


def inner_product(f, g, params: CavityParams | None = None) -> float:
    """
    Weighted inner product int f g* dx + chi f(0) g*(0).

    Two SpatialModes use the closed form; anything else callable is
    integrated by adaptive quadrature on each sub-cavity.
    """
    if isinstance(f, SpatialMode) and isinstance(g, SpatialMode):
        a = ModeSet(f.params, [f.k])
        b = ModeSet(g.params, [g.k])
        chi = None if params is None else params.chi
        return float(overlap_matrix(a, b, chi)[0, 0])
    if params is None:
        raise ValueError("params required for sampled functions")
    L1, L2 = params.L1, params.L2

    def integrand(x):
        return (f(x) * np.conj(g(x))).real

    left = quad(integrand, -L1, 0.0, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
    right = quad(integrand, 0.0, L2, limit=400, epsabs=1e-13, epsrel=1e-12)[0]
    return left + right + params.chi * float((f(0.0) * np.conj(g(0.0))).real)


def localization(params: CavityParams, k: float, threshold: float = 1.0) -> LocalizationReport:
    """kappa^2 = |sin(kL1)/sin(kL2)|^2 and g = 2 ln(kappa), with a side label."""
    s1, s2 = math.sin(k * params.L1), math.sin(k * params.L2)
    if abs(s2) < 1e-9:
        c = right_factor(params, k)
        kappa_sq = c * c if abs(s1) < 1e-9 else math.inf
    else:
        kappa_sq = (s1 / s2) ** 2
    if kappa_sq == 0.0:
        g = -math.inf
    elif math.isinf(kappa_sq):
        g = math.inf
    else:
        g = math.log(kappa_sq)
    if abs(g) < threshold:
        side = "delocalized"
    else:
        side = "right" if g > 0 else "left"
    return LocalizationReport(kappa_sq=kappa_sq, g=g, side=side)
