"""
Mode coupling coefficients.

    eta_n^(r)    = d k_n / d r                 (implicit function theorem on G)
    beta_nl^(r)  = (d_r Phi_n, Phi_l)
    sigma_nl     = Phi_n(0) Phi_l(0)
    nu_n         = -(d_chi N_n^2) / (2 N_n^2)  at fixed k

Closed forms off the diagonal:

    beta^(v)      = sigma / (k_n^2 - k_l^2)
    beta^(chi)    = k_n^2 sigma / (k_l^2 - k_n^2)
    beta^(chidot) = i k_n sigma / (k_l^2 - k_n^2)

beta^(L) and beta^(dL) come from central differences of re-tracked modes,
projected in closed form and antisymmetrized.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cavity_spectrum import CavityParams, g_partials, solve_spectrum, track_roots
from .errors import DegenerateRoot, NearDegenerate
from .mode_basis import ModeSet, overlap_matrix

PARAMS = ("L", "dL", "chi", "v", "chi_dot")
GEOMETRIC = ("L", "dL")


def _check_param(r):
    if r not in PARAMS:
        raise ValueError(f"unknown parameter {r!r}; expected one of {PARAMS}")


def eta_at(params: CavityParams, k, r: str):
    """dk/dr at roots k (array) of the given configuration."""
    _check_param(r)
    k = np.asarray(k)
    parts = g_partials(params, k)
    gk = parts["k"]
    if np.any(np.abs(gk) / np.abs(k) ** 2 < 1e-10):
        raise DegenerateRoot("dG/dk vanishes at a root (avoided-crossing pinch)")
    out = -parts[r] / gk
    if r == "chi_dot" or np.iscomplexobj(gk):
        return out
    return out.real if np.iscomplexobj(out) else out


def eta(params: CavityParams, r: str, n: int):
    k = solve_spectrum(params, n + 1).roots[n]
    return eta_at(params, k, r)[()]


def sigma(params: CavityParams, n: int, l: int) -> float:
    modes = ModeSet.solve(params, max(n, l) + 1)
    phi0 = modes.at_membrane()
    return float(phi0[n] * phi0[l])


def sigma_table(modes: ModeSet) -> np.ndarray:
    phi0 = modes.at_membrane()
    return np.outer(phi0, phi0)


def nu_table(modes: ModeSet) -> np.ndarray:
    """-(d_chi N^2)/(2 N^2) at fixed k, i.e. -sigma_nn / 2."""
    return -0.5 * modes.at_membrane() ** 2


def _inverse_gaps(k, scale=1.0):
    k2 = k ** 2
    gap = k2[:, None] - k2[None, :]
    off = ~np.eye(k.size, dtype=bool)
    if np.any(np.abs(gap[off]) < 1e-8 * scale):
        raise NearDegenerate("accidental degeneracy k_n ~ k_l")
    inv = np.zeros_like(gap)
    inv[off] = 1.0 / gap[off]
    return inv


def closed_beta(modes: ModeSet, r: str) -> np.ndarray:
    """beta^(v), beta^(chi) or beta^(chi_dot) tables (n = row, l = column)."""
    k = modes.k
    sig = sigma_table(modes)
    inv = _inverse_gaps(k)
    bv = sig * inv
    if r == "v":
        return bv.astype(complex)
    if r == "chi":
        out = -(k ** 2)[:, None] * bv
        out[np.diag_indices_from(out)] = nu_table(modes)
        return out.astype(complex)
    if r == "chi_dot":
        return -1j * k[:, None] * bv
    raise ValueError(f"no closed form for {r}")


def shifted_modes(params: CavityParams, modes: ModeSet, direction: dict, step: float) -> ModeSet:
    p = params.shifted(direction, step)
    return ModeSet(p, track_roots(p, modes.k))


def directional_beta(params: CavityParams, modes: ModeSet, direction: dict, h: float) -> np.ndarray:
    """
    (D_d Phi_n, Phi_l) by central (or one-sided, at a parameter floor) differences.

    direction maps parameter names to components of the tangent vector.
    """
    can_go_down = all(getattr(params, r) - h * d >= 0 or r in ("L", "dL") or d <= 0
                      for r, d in direction.items())
    can_go_up = all(getattr(params, r) + h * d >= 0 or r in ("L", "dL") or d >= 0
                    for r, d in direction.items())
    if can_go_down and can_go_up:
        up = overlap_matrix(shifted_modes(params, modes, direction, h), modes)
        dn = overlap_matrix(shifted_modes(params, modes, direction, -h), modes)
        return (up - dn) / (2.0 * h)
    sgn = 1.0 if can_go_up else -1.0
    f1 = overlap_matrix(shifted_modes(params, modes, direction, sgn * h), modes)
    f2 = overlap_matrix(shifted_modes(params, modes, direction, 2 * sgn * h), modes)
    f0 = overlap_matrix(modes, modes)
    return sgn * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)


def geometric_beta(params: CavityParams, modes: ModeSet, r: str, step: float = 1e-6) -> np.ndarray:
    b = directional_beta(params, modes, {r: 1.0}, step * params.L)
    return (0.5 * (b - b.T)).astype(complex)


def beta_table(params: CavityParams, r: str, n_modes: int = 10, modes: ModeSet | None = None,
               step: float = 1e-6) -> np.ndarray:
    _check_param(r)
    modes = modes if modes is not None else ModeSet.solve(params, n_modes)
    if r in GEOMETRIC:
        return geometric_beta(params, modes, r, step)
    return closed_beta(modes, r)


def beta(params: CavityParams, r: str, n: int, l: int):
    return beta_table(params, r, max(n, l) + 1)[n, l]


@dataclass(frozen=True)
class CouplingSet:
    params: CavityParams
    n_modes: int
    k: np.ndarray
    sigma: np.ndarray
    beta: dict = field(repr=False)
    eta: dict = field(repr=False)
    nu: np.ndarray = field(repr=False)
    modes: ModeSet = field(repr=False, compare=False)


def build_couplings(params: CavityParams, n_modes: int = 10, step: float = 1e-6) -> CouplingSet:
    real = params if params.chi_dot == 0 else params.replace(chi_dot=0.0)
    modes = ModeSet.solve(real, n_modes)
    betas = {r: beta_table(real, r, modes=modes, step=step) for r in PARAMS}
    etas = {r: eta_at(real, modes.k, r) for r in PARAMS}
    return CouplingSet(params=real, n_modes=n_modes, k=modes.k, sigma=sigma_table(modes),
                       beta=betas, eta=etas, nu=nu_table(modes), modes=modes)


def verify_identities(cs: CouplingSet, step: float = 1e-4) -> dict:
    """
    Maximum violations of the coefficient identities, relative to table scale.

    beta^(v) and beta^(chi) are recomputed here by differencing the modes so
    that the closed forms are checked against an independent route.
    """
    p, modes = cs.params, cs.modes
    off = ~np.eye(cs.n_modes, dtype=bool)
    bv_fd = directional_beta(p, modes, {"v": 1.0}, step * max(p.v, 1.0))
    bchi_fd = directional_beta(p, modes, {"chi": 1.0}, step * max(p.chi, 1.0))

    def rel(a, b):
        return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))

    k = cs.k
    out = {}
    for r in ("L", "dL"):
        raw = directional_beta(p, modes, {r: 1.0}, 1e-6 * p.L)
        out[f"antisymmetry_{r}"] = rel(raw[off], -raw.T[off])
    out["antisymmetry_v"] = rel(bv_fd[off], -bv_fd.T[off])
    out["chi_exchange"] = rel(bchi_fd, -bchi_fd.T - cs.sigma)
    out["closed_v"] = rel(bv_fd[off], cs.beta["v"].real[off])
    out["closed_chi"] = rel(bchi_fd, cs.beta["chi"].real)
    # ratios checked in product form so that tiny entries do not dominate
    out["ratio_chi_v"] = rel(bchi_fd[off], (-(k ** 2)[:, None] * bv_fd)[off])
    out["ratio_chi_chidot"] = rel(cs.beta["chi"][off], (-1j * k[:, None] * cs.beta["chi_dot"])[off])
    out["eta_ratio_chi_v"] = rel(cs.eta["chi"], -k ** 2 * cs.eta["v"])
    out["eta_ratio_chi_chidot"] = rel(cs.eta["chi"], -1j * k * cs.eta["chi_dot"])
    return out


def assemble_theta_lambda(program, t: float, n_modes: int = 10, h: float | None = None,
                          step: float = 1e-6):
    """
    theta_nl(t) = (d_t Phi_n, Phi_l) and lambda_nl(t) = (d_t^2 Phi_n, Phi_l) at time t.

    theta sums rate * beta over parameters at the instantaneous snapshot;
    lambda is a central second difference in time of the projected basis.
    """
    from .field_dynamics import trajectory_eval

    point = trajectory_eval(program, t)
    if all(v == 0.0 for v in point.rates.values()):
        z = np.zeros((n_modes, n_modes))
        return z, z
    p = point.params.replace(chi_dot=0.0)
    modes = ModeSet.solve(p, n_modes)
    theta = np.zeros((n_modes, n_modes))
    for r, rate in point.rates.items():
        if rate == 0.0 or r == "chi_dot":
            continue
        theta = theta + rate * beta_table(p, r, modes=modes, step=step).real
    if h is None:
        h = 1e-3 / program.omega_max
    snaps = []
    for dt in (-h, h):
        q = trajectory_eval(program, t + dt).params.replace(chi_dot=0.0)
        snaps.append(overlap_matrix(ModeSet(q, track_roots(q, modes.k)), modes))
    lam = (snaps[0] + snaps[1] - 2.0 * overlap_matrix(modes, modes)) / (h * h)
    return theta, lam
