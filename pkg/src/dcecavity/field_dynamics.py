"""
Truncated mode dynamics under sinusoidal parameter driving.

Each parameter follows

    r(t) = r0 (1 + eps xi_r sin(Omega_r t)) - eps r0 xi_r Omega_r t exp(-alpha t)

so that r(0) = r0 and r'(0) = 0. The field is expanded on the instantaneous
modes, phi = sum_n Q_n(t) Phi_n(x; t), and the coefficients obey

    Q_l'' + k_l(t)^2 Q_l = -sum_n [ Q_n lambda_nl + 2 Q_n' theta_nl ].

Column m of Q is the solution seeded by mode m. After the stop time t_f the
parameters freeze and Q_n = A_n exp(i k_n t) + B_n exp(-i k_n t).

When all drives share one frequency the parameters move on a line
p(t) = p0 + s(t) d with d_r = r0 xi_r. Then theta = s' B(s) and
lambda = s'' B(s) + s'^2 C(s), where B = (d_s Phi, Phi) and C = (d_s^2 Phi, Phi)
are tabulated once on Chebyshev nodes. The equations are then periodic
once the smoothing term has decayed, and the evolution over many periods
is a power of the one-period propagator.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
import math

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.integrate import solve_ivp

from .cavity_spectrum import CavityParams, g_function, g_partials, solve_spectrum, track_roots
from .coupling_coeffs import closed_beta, directional_beta, sigma_table
from .errors import StepFailure
from .mode_basis import ModeSet, overlap_matrix

DRIVEN = ("L", "dL", "chi", "v")


@dataclass(frozen=True)
class Drive:
    xi: float
    omega: float

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"drive frequency must be > 0, got {self.omega}")


@dataclass(frozen=True, eq=False)
class DriveProgram:
    base: CavityParams
    drives: dict
    eps: float = 0.01
    t_f: float = 1.0
    alpha_smooth: float | None = None

    def __post_init__(self):
        for r in self.drives:
            if r not in DRIVEN:
                raise ValueError(f"cannot drive {r!r}; expected one of {DRIVEN}")
        if self.t_f <= 0:
            raise ValueError("t_f must be > 0")

    @property
    def active(self) -> dict:
        return {r: d for r, d in self.drives.items() if d.xi != 0.0 and getattr(self.base, r) != 0.0}

    @property
    def omega_max(self) -> float:
        return max((d.omega for d in self.drives.values()), default=1.0)

    @property
    def alpha(self) -> float:
        return self.alpha_smooth if self.alpha_smooth is not None else 10.0 * self.omega_max

    @property
    def common_frequency(self) -> float | None:
        freqs = {d.omega for d in self.active.values()}
        return freqs.pop() if len(freqs) == 1 else None

    def direction(self) -> dict:
        return {r: getattr(self.base, r) * d.xi for r, d in self.active.items()}

    def with_frequency(self, omega: float) -> "DriveProgram":
        drives = {r: Drive(d.xi, omega) for r, d in self.drives.items()}
        return replace(self, drives=drives)

    def validity(self) -> dict:
        """MSA validity indicators (reported, not enforced)."""
        drive_scale = max((d.xi ** 2 * d.omega for d in self.active.values()), default=0.0)
        return {
            "msa_time_scale": self.t_f * self.eps ** 2 * drive_scale,
            "msa_time_ok": self.t_f * self.eps ** 2 * drive_scale < 1.0,
            "smoothing_decay": self.alpha * self.t_f,
            "smoothing_ok": self.alpha * self.t_f > 10.0,
        }


@dataclass(frozen=True)
class TrajectoryPoint:
    params: CavityParams
    rates: dict
    accels: dict
    jerks: dict


def _profile(eps, omega, alpha, t):
    """s(t) = eps (sin(Omega t) - Omega t e^{-alpha t}) and its first three derivatives."""
    e = math.exp(-alpha * t)
    sn, cs = math.sin(omega * t), math.cos(omega * t)
    s0 = eps * (sn - omega * t * e)
    s1 = eps * (omega * cs - omega * e * (1.0 - alpha * t))
    s2 = eps * (-omega ** 2 * sn + omega * alpha * e * (2.0 - alpha * t))
    s3 = eps * (-omega ** 3 * cs - omega * alpha ** 2 * e * (3.0 - alpha * t))
    return s0, s1, s2, s3


def trajectory_eval(program: DriveProgram, t: float) -> TrajectoryPoint:
    """Smoothed parameters and their time derivatives; frozen for t >= t_f."""
    if t < 0:
        raise ValueError("t must be >= 0")
    frozen = t >= program.t_f
    te = program.t_f if frozen else t
    values, rates, accels, jerks = {}, {}, {}, {}
    for r in DRIVEN:
        r0 = getattr(program.base, r)
        d = program.drives.get(r)
        if d is None or d.xi == 0.0 or r0 == 0.0:
            values[r], rates[r], accels[r], jerks[r] = r0, 0.0, 0.0, 0.0
            continue
        s0, s1, s2, s3 = _profile(program.eps, d.omega, program.alpha, te)
        amp = r0 * d.xi
        values[r] = r0 + amp * s0
        rates[r], accels[r], jerks[r] = (0.0, 0.0, 0.0) if frozen else (amp * s1, amp * s2, amp * s3)
    params = CavityParams(values["L"], values["dL"], values["chi"], values["v"], chi_dot=rates["chi"])
    return TrajectoryPoint(params, rates, accels, jerks)


# ------------------------------------------------------------------ tables

class PathTable:
    """
    k(s), B(s), C(s) and beta^(v)(s) along p(s) = p0 + s d, as Chebyshev series.

    B is antisymmetrized to the exact identity B + B^T = -d_chi sigma.
    """

    def __init__(self, base: CavityParams, direction: dict, s_lo: float, s_hi: float,
                 n_modes: int, n_nodes: int = 17, h: float = 1e-4):
        self.base, self.direction, self.n = base, dict(direction), n_modes
        self.lo, self.hi = s_lo, s_hi
        x = np.cos(np.pi * (np.arange(n_nodes) + 0.5) / n_nodes)
        s_nodes = 0.5 * (s_hi + s_lo) + 0.5 * (s_hi - s_lo) * x
        base_k = solve_spectrum(base, n_modes).roots
        order = np.argsort(np.abs(s_nodes))
        k_at = {}
        rows = np.empty((n_nodes, n_modes + 3 * n_modes * n_modes))
        last_k, last_s = base_k, 0.0
        for i in sorted(order, key=lambda j: abs(s_nodes[j])):
            s = s_nodes[i]
            # continue outward from the nearest already-solved node
            seed = last_k if np.sign(s) == np.sign(last_s) or last_s == 0.0 else base_k
            modes = self._modes(s, seed)
            k_at[i] = modes.k
            last_k, last_s = modes.k, s
            rows[i] = self._node_values(s, modes, h)
        self.coef = cheb.chebfit(x, rows, n_nodes - 1)
        self.dchi = self.direction.get("chi", 0.0)

    def _params(self, s):
        return self.base.shifted(self.direction, s)

    def _modes(self, s, seed):
        p = self._params(s)
        return ModeSet(p, track_roots(p, seed))

    def _node_values(self, s, modes, h):
        n = self.n
        up = self._modes(s + h, modes.k)
        dn = self._modes(s - h, modes.k)
        o_up = overlap_matrix(up, modes)
        o_dn = overlap_matrix(dn, modes)
        o_0 = overlap_matrix(modes, modes)
        b = (o_up - o_dn) / (2.0 * h)
        sig = sigma_table(modes)
        b = 0.5 * (b - b.T) - 0.5 * self.direction.get("chi", 0.0) * sig
        c = (o_up - 2.0 * o_0 + o_dn) / (h * h)
        bv = closed_beta(modes, "v").real
        return np.concatenate([modes.k, b.ravel(), c.ravel(), bv.ravel()])

    def eval(self, s):
        x = (2.0 * s - (self.hi + self.lo)) / (self.hi - self.lo)
        # Clenshaw on the stacked coefficient rows
        c = self.coef
        b1 = np.zeros(c.shape[1])
        b2 = np.zeros(c.shape[1])
        for j in range(c.shape[0] - 1, 0, -1):
            b1, b2 = 2.0 * x * b1 - b2 + c[j], b1
        vals = x * b1 - b2 + c[0]
        n = self.n
        k = vals[:n]
        b = vals[n:n + n * n].reshape(n, n)
        cc = vals[n + n * n:n + 2 * n * n].reshape(n, n)
        bv = vals[n + 2 * n * n:].reshape(n, n)
        return k, b, cc, bv


def complex_roots(params: CavityParams, k_real, iters: int = 6):
    """Complex continuation of real roots to nonzero chi_dot (vectorized Newton on G)."""
    k = np.asarray(k_real, dtype=complex)
    if params.chi_dot == 0.0:
        return k
    for _ in range(iters):
        k = k - g_function(params, k) / g_partials(params, k)["k"]
    return k


# ------------------------------------------------------------------ results

@dataclass
class EvolutionResult:
    times: np.ndarray
    k_t: np.ndarray
    photons: np.ndarray
    A: np.ndarray
    B: np.ndarray
    bog_alpha: np.ndarray
    bog_beta: np.ndarray
    k_out: np.ndarray
    occupations: np.ndarray
    validity: dict
    Q: np.ndarray | None = None
    Qdot: np.ndarray | None = None
    info: dict = field(default_factory=dict)


def initial_state(k) -> np.ndarray:
    """Q_n^(m)(0) = delta_nm / sqrt(2 k_n), Q_n^(m)'(0) = -i sqrt(k_m / 2) delta_nm, stacked."""
    k = np.asarray(k, dtype=float)
    n = k.size
    y = np.zeros((2 * n, n), dtype=complex)
    y[np.arange(n), np.arange(n)] = 1.0 / np.sqrt(2.0 * k)
    y[n + np.arange(n), np.arange(n)] = -1j * np.sqrt(0.5 * k)
    return y


def extract_bogoliubov(Q, Qdot, t: float, k):
    """
    Out-region coefficients from (Q, Q') at time t with frozen spectrum k.

    Returns A, B (so that Q = A e^{ikt} + B e^{-ikt}) and the Bogoliubov
    tables alpha_nm = sqrt(2 k_n) B_n^(m), beta_nm = sqrt(2 k_n) A_n^(m).
    """
    k = np.asarray(k)[:, None]
    ratio = Qdot / (1j * k)
    A = 0.5 * (Q + ratio) * np.exp(-1j * k * t)
    B = 0.5 * (Q - ratio) * np.exp(1j * k * t)
    root = np.sqrt(2.0 * k)
    return A, B, root * B, root * A


def photon_number(A, B, k, occupations=None):
    """<N_n> = 2 k_n sum_m [(1 + N_m) |A_n^(m)|^2 + N_m |B_n^(m)|^2]."""
    k = np.asarray(k, dtype=float)
    occ = np.zeros(A.shape[-1]) if occupations is None else np.asarray(occupations, dtype=float)
    a2 = np.abs(A) ** 2
    b2 = np.abs(B) ** 2
    return 2.0 * k * (np.sum(a2 * (1.0 + occ), axis=-1) + np.sum(b2 * occ, axis=-1))


def _photons_from_states(Y, k, occ):
    """Photon numbers from stacked states Y[..., 2N, N] with instantaneous k[..., N]."""
    n = k.shape[-1]
    Q, Qd = Y[..., :n, :], Y[..., n:, :]
    kk = k[..., :, None]
    a2 = 0.25 * np.abs(Q + Qd / (1j * kk)) ** 2
    b2 = 0.25 * np.abs(Q - Qd / (1j * kk)) ** 2
    return 2.0 * k * (np.sum(a2 * (1.0 + occ), axis=-1) + np.sum(b2 * occ, axis=-1))


# ------------------------------------------------------------------ integrators

class _LineModel:
    """Generator of the first-order system for a single-frequency (line) program."""

    def __init__(self, program: DriveProgram, n_modes: int, complex_k: bool, n_nodes: int = 17):
        self.program, self.n, self.complex_k = program, n_modes, complex_k
        self.omega = program.common_frequency
        self.direction = program.direction()
        self.dchi = self.direction.get("chi", 0.0)
        if self.omega is None:
            self.table = None
            self.k0 = solve_spectrum(program.base, n_modes).roots
            return
        eps, a = program.eps, program.alpha
        reach = self.omega / (a * math.e)
        lo, hi = -abs(eps) * (1.0 + reach), abs(eps) * (1.0 + reach)
        self.table = PathTable(program.base, self.direction, 1.05 * lo, 1.05 * hi, n_modes, n_nodes)
        self.k0 = self.table.eval(0.0)[0]

    def profile(self, t):
        if self.omega is None:
            return 0.0, 0.0, 0.0, 0.0
        if t >= self.program.t_f:
            s = _profile(self.program.eps, self.omega, self.program.alpha, self.program.t_f)[0]
            return s, 0.0, 0.0, 0.0
        return _profile(self.program.eps, self.omega, self.program.alpha, t)

    def k_at(self, t):
        if self.table is None:
            return self.k0
        return self.table.eval(self.profile(t)[0])[0]

    def generator(self, t):
        n = self.n
        s, s1, s2, s3 = self.profile(t)
        if self.table is None:
            k, theta, lam = self.k0, np.zeros((n, n)), np.zeros((n, n))
            bv = None
        else:
            k, b, c, bv = self.table.eval(s)
            theta = s1 * b
            lam = s2 * b + s1 * s1 * c
        k2 = k * k
        dtype = float
        if self.complex_k and self.dchi != 0.0 and s1 != 0.0:
            p = self.program.base.shifted(self.direction, s).replace(chi_dot=s1 * self.dchi)
            kc = complex_roots(p, k)
            k2 = kc * kc
            bcd = -1j * k[:, None] * bv
            theta = theta + s2 * self.dchi * bcd
            lam = lam + s3 * self.dchi * bcd
            dtype = complex
        g = np.zeros((2 * n, 2 * n), dtype=dtype)
        g[:n, n:] = np.eye(n)
        g[n:, :n] = -np.diag(k2) - lam.T
        g[n:, n:] = -2.0 * theta.T
        return g


class _DirectModel:
    """Generator for arbitrary multi-frequency programs (coefficients at every call)."""

    def __init__(self, program: DriveProgram, n_modes: int, complex_k: bool, h: float = 1e-5):
        self.program, self.n, self.complex_k, self.h = program, n_modes, complex_k, h
        self.k0 = solve_spectrum(program.base, n_modes).roots
        self._last = self.k0

    def _modes(self, t):
        pt = trajectory_eval(self.program, t)
        p = pt.params.replace(chi_dot=0.0)
        modes = ModeSet(p, track_roots(p, self._last))
        self._last = modes.k
        return pt, p, modes

    def k_at(self, t):
        return self._modes(t)[2].k

    def generator(self, t):
        n, h = self.n, self.h
        pt, p, modes = self._modes(t)
        rates = {r: v for r, v in pt.rates.items() if v != 0.0}
        accels = {r: v for r, v in pt.accels.items() if v != 0.0}
        theta = np.zeros((n, n))
        lam = np.zeros((n, n))
        if rates:
            # directional differences along the velocity and the acceleration
            scale = max(abs(v) for v in rates.values())
            u = {r: v / scale for r, v in rates.items()}
            up = overlap_matrix(ModeSet(p.shifted(u, h), track_roots(p.shifted(u, h), modes.k)), modes)
            dn = overlap_matrix(ModeSet(p.shifted(u, -h), track_roots(p.shifted(u, -h), modes.k)), modes)
            b = (up - dn) / (2.0 * h)
            dchi = u.get("chi", 0.0)
            b = 0.5 * (b - b.T) - 0.5 * dchi * sigma_table(modes)
            theta = scale * b
            lam = scale ** 2 * (up - 2.0 * overlap_matrix(modes, modes) + dn) / (h * h)
        if accels:
            scale = max(abs(v) for v in accels.values())
            w = {r: v / scale for r, v in accels.items()}
            lam = lam + scale * directional_beta(p, modes, w, h)
        k = modes.k
        k2 = k * k
        dtype = float
        chi_rate = pt.rates.get("chi", 0.0)
        if self.complex_k and chi_rate != 0.0:
            kc = complex_roots(p.replace(chi_dot=chi_rate), k)
            k2 = kc * kc
            bcd = -1j * k[:, None] * closed_beta(modes, "v").real
            theta = theta + pt.accels["chi"] * bcd
            lam = lam + pt.jerks["chi"] * bcd
            dtype = complex
        g = np.zeros((2 * n, 2 * n), dtype=dtype)
        g[:n, n:] = np.eye(n)
        g[n:, :n] = -np.diag(k2) - lam.T
        g[n:, n:] = -2.0 * theta.T
        return g


def _propagate(model, t0, t1, y0, t_eval, tol):
    """
    Integrate Y' = G(t) Y from t0 to t1.

    Returns states at t_eval (shape (len, 2N, M)), or the dense solution when
    t_eval is None.
    """
    shape = y0.shape
    cplx = np.iscomplexobj(y0) or model.complex_k

    def rhs(t, y):
        return (model.generator(t) @ y.reshape(shape)).ravel()

    y_init = y0.astype(complex if cplx else float).ravel()
    sol = solve_ivp(rhs, (t0, t1), y_init, method="DOP853", t_eval=t_eval,
                    dense_output=t_eval is None, rtol=tol, atol=tol * 1e-3)
    if sol.status != 0:
        raise StepFailure(f"integration failed on [{t0}, {t1}]: {sol.message}")
    if t_eval is None:
        return sol.sol
    return sol.y.T.reshape((-1,) + shape)


def _transient_periods(program, omega):
    """Number of whole periods after which the smoothing term is below round-off."""
    a, T = program.alpha, 2.0 * math.pi / omega
    t = 1.0 / a
    while omega * t * math.exp(-a * t) > 1e-17:
        t *= 1.25
    return max(1, math.ceil(t / T))


def integrate_modes(program: DriveProgram, n_modes: int = 10, tol: float = 1e-9,
                    samples_per_period: int = 200, occupations=None, complex_k: bool = False,
                    keep_states: bool = True, method: str = "auto", t_end: float | None = None,
                    t_eval=None, n_nodes: int = 17) -> EvolutionResult:
    """
    Evolve the N x N coefficient matrix from t = 0 to t_f.

    method 'floquet' (default for single-frequency programs) integrates one
    period adaptively and powers the propagator once the smoothing term has
    decayed; 'direct' integrates the whole interval adaptively. Samples are
    taken samples_per_period times per drive period unless t_eval is given
    (t_f is always the last sample); photon numbers at each sample use the
    instantaneous spectrum. t_end > t_f continues with frozen
    parameters (free evolution, evaluated exactly).
    """
    occ = np.zeros(n_modes) if occupations is None else np.asarray(occupations, dtype=float)
    if occ.shape != (n_modes,):
        raise ValueError("occupations must have length n_modes")
    omega = program.common_frequency
    line = omega is not None or not program.active
    model = _LineModel(program, n_modes, complex_k, n_nodes) if line else _DirectModel(program, n_modes, complex_k)
    if method == "auto":
        method = "floquet" if line else "direct"
    if method == "floquet" and not line:
        raise ValueError("floquet propagation needs a single drive frequency")

    k0 = model.k0
    if omega is None:
        omega = k0[0]  # static program: any period works
    T = 2.0 * math.pi / omega
    t_f = program.t_f
    dt = T / samples_per_period
    if t_eval is None:
        n_grid = int(math.floor(t_f / dt - 1e-9)) + 1
        times = np.append(dt * np.arange(n_grid), t_f)
    else:
        times = np.asarray(t_eval, dtype=float)
        if times.ndim != 1 or np.any(np.diff(times) <= 0) or times[0] < 0 or times[-1] > t_f:
            raise ValueError("t_eval must be increasing within [0, t_f]")
        if times[-1] < t_f:
            times = np.append(times, t_f)
    y0 = initial_state(k0)

    if method == "direct":
        states = _propagate(model, 0.0, t_f, y0, times, tol)
    else:
        states = _floquet_states(model, program, T, times, y0, tol)

    k_t = np.array([model.k_at(t) for t in times]) if not line else _k_along(model, times)
    photons = _photons_from_states(states, k_t, occ)
    y_f = states[-1]
    k_out = solve_spectrum(trajectory_eval(program, t_f).params, n_modes).roots
    n = n_modes
    A, B, alpha_tab, beta_tab = extract_bogoliubov(y_f[:n], y_f[n:], t_f, k_out)

    if t_end is not None and t_end > t_f:
        extra = np.arange(t_f + dt, t_end + 1e-12, dt)
        kk = k_out[:, None]
        free = []
        for t in extra:
            Q = A * np.exp(1j * kk * t) + B * np.exp(-1j * kk * t)
            Qd = 1j * kk * (A * np.exp(1j * kk * t) - B * np.exp(-1j * kk * t))
            free.append(np.vstack([Q, Qd]))
        if free:
            states = np.concatenate([states, np.array(free)])
            times = np.concatenate([times, extra])
            k_t = np.vstack([k_t, np.repeat(k_out[None, :], extra.size, axis=0)])
            photons = np.vstack([photons, _photons_from_states(np.array(free), k_t[-extra.size:], occ)])

    return EvolutionResult(
        times=times, k_t=k_t, photons=photons, A=A, B=B, bog_alpha=alpha_tab, bog_beta=beta_tab,
        k_out=k_out, occupations=occ, validity=program.validity(),
        Q=states[:, :n, :] if keep_states else None,
        Qdot=states[:, n:, :] if keep_states else None,
        info={"method": method, "period": T, "complex_k": complex_k},
    )


def _k_along(model, times):
    return np.array([model.k_at(t) for t in times])


def _floquet_states(model, program, T, times, y0, tol):
    """
    States at the sorted times (all within [0, t_f]).

    Periods inside the smoothing transient are integrated one by one; after
    that the dense one-period propagator is reused and whole periods are
    applied as powers of the monodromy matrix.
    """
    n2 = y0.shape[0]
    t_f = program.t_f
    cplx = model.complex_k and model.dchi != 0.0
    eye = np.eye(n2, dtype=complex if cplx else float)
    n_trans = _transient_periods(program, 2.0 * math.pi / T) if program.active else 0
    out = np.empty((times.size,) + y0.shape, dtype=complex)
    y = y0.astype(complex)
    period = np.minimum(np.floor(times / T).astype(int), int(math.floor(t_f / T)))
    n_last = int(period[-1])
    stored = None
    for j in range(n_last + 1):
        t0 = j * T
        sel = np.flatnonzero(period == j)
        local = np.clip(times[sel], t0, None)
        if j == n_last:
            if t_f > t0:
                P = _propagate(model, t0, t_f, eye, local, tol)
                out[sel] = np.einsum("iab,bc->iac", P, y)
            else:
                out[sel] = y
            break
        if j < n_trans:
            P = _propagate(model, t0, t0 + T, eye, np.append(local, t0 + T), tol)
            out[sel] = np.einsum("iab,bc->iac", P[:-1], y)
            y = P[-1] @ y
            continue
        if stored is None:
            sol = _propagate(model, t0, t0 + T, eye, None, tol)
            stored = (t0, sol, sol(t0 + T).reshape(eye.shape))
        ref, sol, monodromy = stored
        if sel.size:
            P = sol(ref + (local - t0)).T.reshape((-1,) + eye.shape)
            out[sel] = np.einsum("iab,bc->iac", P, y)
        y = monodromy @ y
    return out
