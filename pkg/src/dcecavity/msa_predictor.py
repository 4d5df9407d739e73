"""
First-order multiple-scale (slow-flow) predictions.

With Q_l = A_l(tau) e^{i w_l t} + B_l(tau) e^{-i w_l t} and tau = eps t, the
secular terms of the driven mode equations give a linear system

    d/dtau [A; B] = M [A; B]

whose entries collect every drive harmonic that maps a source oscillation
(A_n at +w_n, B_n at -w_n) onto a target frequency +-w_l. Exact resonance
uses Kronecker deltas; a nonzero window accepts mismatches up to
window * Omega (the mismatch phase is dropped).

Closed forms follow from 2 x 2 blocks of M:

    parametric  A_l' = (Gamma - Lambda) B_l,  B_l' = (Gamma + Lambda) A_l
    sum         A_l' = p B_n,                 B_n' = q A_l
    difference  B_l' = p B_n,                 B_n' = q B_l
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.linalg import expm

from .cavity_spectrum import CavityParams, SpectrumSolution, solve_spectrum
from .coupling_coeffs import CouplingSet, build_couplings
from .errors import MixedDriveUnsupported, ZeroSensitivity
from .field_dynamics import Drive, DriveProgram, photon_number

KINDS = ("parametric", "sum", "difference")


@dataclass(frozen=True)
class ResonanceCondition:
    kind: str
    modes: tuple
    detuning: float
    driven_param: str
    omega: float


@dataclass
class MsaSolution:
    kind: str
    regime: str
    modes: tuple
    rates: dict
    eps: float
    occupations: np.ndarray
    _curves: object = field(repr=False, default=None)

    def predict(self, t) -> np.ndarray:
        """<N> for self.modes at times t, shape (len(t), len(modes))."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self._curves(self.eps * t)

    def total(self, t) -> np.ndarray:
        return self.predict(t).sum(axis=1)


def _frequencies(spectrum):
    if isinstance(spectrum, SpectrumSolution):
        return np.asarray(spectrum.roots)
    return np.asarray(spectrum, dtype=float)


def _drive_map(drives):
    if isinstance(drives, DriveProgram):
        return drives.drives
    return dict(drives)


def detect_couplings(spectrum, drives, window: float = 0.005) -> list:
    """All parametric / sum / difference conditions within the relative window, by |detuning|."""
    w = _frequencies(spectrum)
    if w.size < 2:
        raise ValueError("need at least two modes")
    if window <= 0:
        raise ValueError("window must be > 0")
    found = []
    for r, d in _drive_map(drives).items():
        if d.xi == 0.0:
            continue
        for n in range(w.size):
            for l in range(n, w.size):
                cands = [("parametric", 2.0 * w[l])] if n == l else [
                    ("sum", w[n] + w[l]), ("difference", abs(w[l] - w[n]))]
                for kind, exact in cands:
                    if exact <= 0:
                        continue
                    det = exact / d.omega - 1.0
                    if abs(det) < window:
                        found.append(ResonanceCondition(kind, (n, l), float(det), r, d.omega))
    found.sort(key=lambda c: (abs(c.detuning), c.driven_param, c.modes))
    return found


# ------------------------------------------------------------------ slow flow

def _harmonics(cs: CouplingSet, r: str, xi: float, omega: float):
    """
    Coefficients of the first-order forcing eps * sum_n (a_nl Q_n + b_nl Q_n')
    (moved to the right-hand side with a minus sign) as sin/cos amplitudes.
    """
    n = cs.n_modes
    w = cs.k
    r0 = getattr(cs.params, r)
    amp = r0 * xi
    beta = cs.beta[r]
    a_sin = -amp * omega ** 2 * beta + np.diag(2.0 * w * amp * cs.eta[r])
    a_cos = np.zeros((n, n), dtype=complex)
    b_sin = np.zeros((n, n), dtype=complex)
    b_cos = 2.0 * amp * omega * beta
    if r == "chi":
        bcd = cs.beta["chi_dot"]
        a_cos = a_cos + np.diag(2.0 * w * amp * omega * cs.eta["chi_dot"]) - amp * omega ** 3 * bcd
        b_sin = b_sin - 2.0 * amp * omega ** 2 * bcd
    return a_sin.astype(complex), a_cos, b_sin, b_cos.astype(complex)


def slow_flow_matrix(cs: CouplingSet, drives, window: float = 0.0) -> np.ndarray:
    """2N x 2N matrix of d/dtau [A; B] for the given drives (base couplings in cs)."""
    n = cs.n_modes
    w = cs.k
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    for r, d in _drive_map(drives).items():
        if d.xi == 0.0 or getattr(cs.params, r) == 0.0:
            continue
        a_sin, a_cos, b_sin, b_cos = _harmonics(cs, r, d.xi, d.omega)
        tol = max(window, 1e-10) * d.omega
        for sgn in (1.0, -1.0):
            a = sgn * a_sin / 2j + a_cos / 2.0
            b = sgn * b_sin / 2j + b_cos / 2.0
            for src in range(n):
                for offset, row_sign in ((0, 1.0), (n, -1.0)):
                    # offset 0: source A_src at +w_src; offset n: B_src at -w_src
                    freq = sgn * d.omega + row_sign * w[src]
                    c = a[src] + row_sign * 1j * w[src] * b[src]
                    hit_a = np.abs(freq - w) <= tol
                    hit_b = np.abs(freq + w) <= tol
                    M[np.flatnonzero(hit_a), offset + src] += -c[hit_a] / (2j * w[hit_a])
                    M[n + np.flatnonzero(hit_b), offset + src] += c[hit_b] / (2j * w[hit_b])
    return M


def _initial(w):
    n = w.size
    x = np.zeros((2 * n, n), dtype=complex)
    x[n + np.arange(n), np.arange(n)] = 1.0 / np.sqrt(2.0 * w)
    return x


def msa_integrate(params: CavityParams, drives, t_grid, eps: float = 0.01, window: float = 0.005,
                  occupations=None, n_modes: int = 10, couplings: CouplingSet | None = None) -> np.ndarray:
    """<N_n>(t) from the slow flow over tau = eps t, shape (len(t_grid), n_modes)."""
    if window < 0:
        raise ValueError("window must be >= 0")
    cs = couplings if couplings is not None else build_couplings(params, n_modes)
    w = cs.k
    occ = np.zeros(w.size) if occupations is None else np.asarray(occupations, dtype=float)
    M = slow_flow_matrix(cs, drives, window)
    x0 = _initial(w)
    out = np.empty((len(t_grid), w.size))
    for i, t in enumerate(np.asarray(t_grid, dtype=float)):
        x = expm(M * (eps * t)) @ x0
        out[i] = photon_number(x[:w.size], x[w.size:], w, occ)
    return out


# ------------------------------------------------------------------ closed forms

def _pair(p, q, tau):
    """x' = p y, y' = q x, x(0) = 0, y(0) = 1: returns x/p and y."""
    kappa = np.sqrt(complex(p * q))
    tau = np.asarray(tau, dtype=float)
    if abs(kappa) == 0.0:
        return tau.astype(complex), np.ones_like(tau, dtype=complex)
    return np.sinh(kappa * tau) / kappa, np.cosh(kappa * tau)


def _parametric_rates(cs: CouplingSet, drives, l: int):
    gamma_ = 0.0
    lam = 0.0
    for r, d in _drive_map(drives).items():
        if r == "chi_dot" or d.xi == 0.0:
            continue
        term = d.xi * getattr(cs.params, r) * float(np.real(cs.eta[r][l]))
        gamma_ += 0.5 * term
        if r == "chi":
            lam = term
    return gamma_, lam


def _regime(gamma_, lam):
    if gamma_ == lam:
        return "constant"
    if gamma_ == -lam:
        return "linear"
    return "exponential" if abs(gamma_) > abs(lam) else "oscillatory"


def parametric_solution(params: CavityParams, drives, l: int, occupations=None, eps: float = 0.01,
                        n_modes: int | None = None, couplings: CouplingSet | None = None) -> MsaSolution:
    """
    Resonant-mode occupation for Omega = 2 w_l.

    Gamma = 1/2 sum_r xi_r r0 eta_l^(r) (chi included), Lambda = xi_chi chi0 eta_l^(chi),
    gamma^2 = |Gamma^2 - Lambda^2|.
    """
    cs = couplings if couplings is not None else build_couplings(params, n_modes or l + 1)
    g, lam = _parametric_rates(cs, drives, l)
    if occupations is None:
        n0 = 0.0
    elif np.ndim(occupations) == 0:
        n0 = float(occupations)
    else:
        n0 = float(np.asarray(occupations)[l])
    regime = _regime(g, lam)
    gamma = math.sqrt(abs(g * g - lam * lam))

    def curves(tau):
        s, c = _pair(g - lam, g + lam, tau)
        val = (1.0 + n0) * np.abs((g - lam) * s) ** 2 + n0 * np.abs(c) ** 2
        return val[:, None]

    rates = {"Gamma": g, "Lambda": lam, "gamma": gamma}
    return MsaSolution("parametric", regime, (l,), rates, eps, np.array([n0]), curves)


def frustration_amplitude(params: CavityParams, drives, l: int, target: str,
                          couplings: CouplingSet | None = None) -> float:
    """Amplitude xi of the target drive that makes Gamma vanish for mode l."""
    cs = couplings if couplings is not None else build_couplings(params, l + 1)
    sens = getattr(cs.params, target) * float(np.real(cs.eta[target][l]))
    if abs(sens) < 1e-14 * max(1.0, float(cs.k[l])):
        raise ZeroSensitivity(f"eta_{l}^({target}) r0 vanishes; {target} cannot cancel Gamma")
    others = sum(d.xi * getattr(cs.params, r) * float(np.real(cs.eta[r][l]))
                 for r, d in _drive_map(drives).items() if r not in (target, "chi_dot") and d.xi != 0.0)
    return -others / sens


def _at_resonance(drives, omega):
    return {r: Drive(d.xi, omega) for r, d in _drive_map(drives).items() if d.xi != 0.0}


def _occ_pair(occupations, n, l):
    if occupations is None:
        return 0.0, 0.0
    occ = np.asarray(occupations, dtype=float)
    if occ.size == 2:
        return float(occ[0]), float(occ[1])
    return float(occ[n]), float(occ[l])


def sum_coupling_solution(params: CavityParams, drives, n: int, l: int, occupations=None,
                          eps: float = 0.01, couplings: CouplingSet | None = None) -> MsaSolution:
    """
    Modes n and l under Omega = w_n + w_l.

    occupations: full per-mode array or the pair (N_n, N_l). Predictions are
    returned for (l, n).
    """
    active = {r: d for r, d in _drive_map(drives).items() if d.xi != 0.0}
    if "chi" in active and len(active) > 1:
        raise MixedDriveUnsupported("closed form covers chi-only or chi-free sum coupling")
    cs = couplings if couplings is not None else build_couplings(params, max(n, l) + 1)
    w = cs.k
    N = cs.n_modes
    M = slow_flow_matrix(cs, _at_resonance(active, w[n] + w[l]), 0.0)
    Nn, Nl = _occ_pair(occupations, n, l)
    # seed n drives (A_l, B_n); seed l drives (A_n, B_l)
    p_l, q_l = M[l, N + n], M[N + n, l]
    p_n, q_n = M[n, N + l], M[N + l, n]
    pre = (w[n] ** 2 - w[l] ** 2) / (4.0 * math.sqrt(w[n] * w[l]))
    if "chi" in active:
        gt = pre * cs.params.chi * active["chi"].xi
        g_nl = gt * math.sqrt(1.0 + 2.0 * w[l] / w[n])
        kind_regime = "sum-beats"
        rates = {
            "gamma_tilde": gt, "gamma_nl": g_nl,
            "kappa_nl": float(np.sqrt(abs(p_l * q_l))), "kappa_ln": float(np.sqrt(abs(p_n * q_n))),
            "theta_nl": float(np.sqrt(w[l] / w[n] * abs(p_l / q_l))),
            "theta_ln": float(np.sqrt(w[n] / w[l] * abs(p_n / q_n))),
        }
    else:
        total = sum(getattr(cs.params, r) * d.xi * float(np.real(cs.beta[r][n, l]))
                    for r, d in active.items() if r not in ("chi", "chi_dot"))
        kind_regime = "sum-exponential"
        rates = {"gamma": abs(pre * total), "gamma_signed": pre * total}

    def curves(tau):
        s_l, c_n = _pair(p_l, q_l, tau)
        s_n, c_l = _pair(p_n, q_n, tau)
        nl = (1.0 + Nn) * w[l] / w[n] * np.abs(p_l * s_l) ** 2 + Nl * np.abs(c_l) ** 2
        nn = (1.0 + Nl) * w[n] / w[l] * np.abs(p_n * s_n) ** 2 + Nn * np.abs(c_n) ** 2
        return np.column_stack([nl, nn])

    return MsaSolution("sum", kind_regime, (l, n), rates, eps, np.array([Nl, Nn]), curves)


def difference_coupling_solution(params: CavityParams, drives, n: int, l: int, occupations=None,
                                 eps: float = 0.01, couplings: CouplingSet | None = None) -> MsaSolution:
    """
    Photon swap between modes n and l under Omega = |w_n - w_l|.

    occupations: full per-mode array or the pair (N_n, N_l). Predictions are
    returned for (l, n); their sum is conserved.
    """
    active = {r: d for r, d in _drive_map(drives).items() if d.xi != 0.0}
    cs = couplings if couplings is not None else build_couplings(params, max(n, l) + 1)
    w = cs.k
    N = cs.n_modes
    M = slow_flow_matrix(cs, _at_resonance(active, abs(w[n] - w[l])), 0.0)
    Nn, Nl = _occ_pair(occupations, n, l)
    p, q = M[N + l, N + n], M[N + n, N + l]
    gamma = (w[n] ** 2 - w[l] ** 2) / (4.0 * math.sqrt(w[n] * w[l]))
    big_gamma = sum(getattr(cs.params, r) * d.xi * float(np.real(cs.beta[r][n, l]))
                    for r, d in active.items() if r not in ("chi", "chi_dot"))
    lam = (cs.params.chi * active["chi"].xi * float(np.real(cs.beta["chi"][n, l])) * w[l] / w[n]
           if "chi" in active else 0.0)
    rates = {"gamma": gamma, "Gamma": big_gamma, "Lambda": lam,
             "swap_rate": float(np.sqrt(abs(p * q)))}

    def curves(tau):
        s, c = _pair(p, q, tau)
        # B_l^(n) = p s / sqrt(2 w_n), B_n^(l) = q s / sqrt(2 w_l), diagonal seeds follow c
        nl = Nn * w[l] / w[n] * np.abs(p * s) ** 2 + Nl * np.abs(c) ** 2
        nn = Nl * w[n] / w[l] * np.abs(q * s) ** 2 + Nn * np.abs(c) ** 2
        return np.column_stack([nl, nn])

    return MsaSolution("difference", "difference-swap", (l, n), rates, eps, np.array([Nl, Nn]), curves)
