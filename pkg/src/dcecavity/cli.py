"""
Command-line entry point: ``python -m dcecavity <command> [--config file.json] [flags]``.

Every command writes its data files plus ``manifest.json`` (package
version, SHA-256 of the resolved configuration, validity flags, file list)
into the output directory. Exit codes: 0 ok, 2 configuration error,
3 numerical failure, 4 fit failure.
"""
from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass
import hashlib
import json
import math
from pathlib import Path
import re
import sys

import numpy as np

from . import __version__
from .cavity_spectrum import CavityParams, solve_spectrum
from .circuit_mapper import CircuitParams, Sinusoid, from_cavity, plan_fluxes, to_cavity
from .coupling_coeffs import PARAMS, build_couplings, verify_identities
from .errors import CavityError, ConfigError
from .field_dynamics import DRIVEN, Drive, DriveProgram, integrate_modes
from .mode_basis import localization
from . import msa_predictor as msa
from .scan_analysis import fwhm_decay_fit, gaussian_fit, run_scan

COMMANDS = ("spectrum", "localize", "couplings", "simulate", "msa", "detune-scan", "circuit-map")
CONFIG_DIR = Path(__file__).with_name("configs")

_BASE = {"command", "params", "n_modes", "output"}
_DYN = _BASE | {"drives", "eps", "alpha", "t_f", "omega_t_f", "tol", "samples_per_period",
                "occupations", "complex_k"}
ALLOWED = {
    "spectrum": _BASE | {"k_max"},
    "localize": _BASE | {"threshold"},
    "couplings": _BASE | {"step"},
    "simulate": _DYN | {"t_end"},
    "msa": _DYN | {"window", "times"},
    "detune-scan": _DYN | {"grid", "mode", "times", "workers", "emit"},
    "circuit-map": {"command", "hardware", "target", "output", "samples", "t_f"},
}
DEFAULTS = {
    "n_modes": 10, "output": ".", "eps": 0.01, "tol": 1e-9, "samples_per_period": 200,
    "complex_k": False, "window": 0.005, "threshold": 1.0, "step": 1e-6, "alpha": None,
    "times": 400, "grid": [-0.004, 0.006, 51], "emit": ["heatmap.csv", "profiles.csv", "fits.json"],
    "samples": 200,
}
PARAM_KEYS = ("L", "dL", "chi", "v", "chi_dot")
DRIVE_KEYS = {"xi", "omega", "detuning"}
_OMEGA_RE = re.compile(r"^\s*(?:2\s*\*\s*w(\d+)|w(\d+)\s*([+-])\s*w(\d+))\s*$")


@dataclass
class RunConfig:
    command: str
    data: dict
    source: str | None = None

    @property
    def output(self) -> Path:
        return Path(self.data["output"])

    def sha256(self) -> str:
        blob = json.dumps(self.data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


# ------------------------------------------------------------------ parsing

def _load(path) -> dict:
    path = Path(path)
    if not path.exists() and (CONFIG_DIR / path.name).exists():
        path = CONFIG_DIR / path.name
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def _number(data, key, lo=None, hi=None, integer=False, allow_none=False):
    val = data.get(key)
    if val is None and allow_none:
        return
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {val!r}")
    if integer and int(val) != val:
        raise ConfigError(f"{key}: expected an integer, got {val!r}")
    if lo is not None and val < lo or hi is not None and val > hi:
        raise ConfigError(f"{key}: {val!r} outside [{lo}, {hi}]")


def _params(data) -> CavityParams:
    raw = data.get("params")
    if not isinstance(raw, dict):
        raise ConfigError("params: expected an object with L, dL, chi, v")
    extra = set(raw) - set(PARAM_KEYS)
    if extra:
        raise ConfigError(f"params: unknown keys {sorted(extra)}")
    missing = {"L", "dL", "chi", "v"} - set(raw)
    if missing:
        raise ConfigError(f"params: missing {sorted(missing)}")
    for k, v in raw.items():
        _number(raw, k)
    try:
        return CavityParams(**{k: float(v) for k, v in raw.items()})
    except ValueError as exc:
        raise ConfigError(f"params: {exc}") from None


def _check_drives(data):
    drives = data.get("drives")
    if not isinstance(drives, dict) or not drives:
        raise ConfigError("drives: expected a nonempty object keyed by parameter")
    for r, spec in drives.items():
        if r not in DRIVEN:
            raise ConfigError(f"drives.{r}: cannot drive {r!r}; expected one of {DRIVEN}")
        if not isinstance(spec, dict):
            raise ConfigError(f"drives.{r}: expected an object")
        extra = set(spec) - DRIVE_KEYS
        if extra:
            raise ConfigError(f"drives.{r}: unknown keys {sorted(extra)}")
        if "xi" not in spec or "omega" not in spec:
            raise ConfigError(f"drives.{r}: needs xi and omega")
        _number(spec, "xi")
        om = spec["omega"]
        if isinstance(om, str):
            if not _OMEGA_RE.match(om):
                raise ConfigError(f"drives.{r}.omega: {om!r} is not a number or one of 2*wN, wN+wM, wN-wM")
        else:
            _number(spec, "omega", lo=1e-300)
        if "detuning" in spec:
            _number(spec, "detuning", lo=-0.5, hi=0.5)


def parse_config(command: str, path=None, overrides: dict | None = None) -> RunConfig:
    """Load, merge flag overrides, validate and fill defaults."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    data = _load(path) if path is not None else {}
    if data.get("command", command) != command:
        raise ConfigError(f"config is for {data['command']!r}, not {command!r}")
    data["command"] = command
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key in PARAM_KEYS:
            data.setdefault("params", {})[key] = val
        else:
            data[key] = val
    extra = set(data) - ALLOWED[command]
    if extra:
        raise ConfigError(f"unknown keys for {command}: {sorted(extra)}")
    for key, val in DEFAULTS.items():
        if key in ALLOWED[command]:
            data.setdefault(key, val)
    if command == "circuit-map":
        for key in ("hardware", "target"):
            if not isinstance(data.get(key), dict):
                raise ConfigError(f"{key}: expected an object")
        _number(data, "samples", lo=2, hi=1e6, integer=True)
        return RunConfig(command, data, None if path is None else str(path))
    params = _params(data)
    _number(data, "n_modes", lo=1, hi=200, integer=True)
    if command == "spectrum":
        _number(data, "k_max", lo=0, allow_none=True)
    if command == "localize":
        _number(data, "threshold", lo=0)
    if command == "couplings":
        _number(data, "step", lo=1e-12, hi=1e-2)
    if command in ("simulate", "msa", "detune-scan"):
        _check_drives(data)
        _number(data, "eps", lo=1e-12, hi=0.5)
        _number(data, "alpha", lo=1e-300, allow_none=True)
        _number(data, "tol", lo=1e-14, hi=1e-3)
        _number(data, "samples_per_period", lo=4, hi=10000, integer=True)
        if ("t_f" in data) == ("omega_t_f" in data):
            raise ConfigError("give exactly one of t_f or omega_t_f")
        _number(data, "t_f" if "t_f" in data else "omega_t_f", lo=1e-300)
        if not isinstance(data["complex_k"], bool):
            raise ConfigError("complex_k: expected true or false")
        occ = data.get("occupations")
        if occ is not None:
            _occupations(occ, data["n_modes"])
    if command == "simulate" and data.get("t_end") is not None:
        _number(data, "t_end", lo=0)
    if command == "msa":
        _number(data, "window", lo=0, hi=0.5)
    if command in ("msa", "detune-scan"):
        _number(data, "times", lo=2, hi=1e6, integer=True)
    if command == "detune-scan":
        g = data["grid"]
        if not (isinstance(g, list) and len(g) == 3 and g[0] < g[1] and int(g[2]) == g[2] and g[2] >= 1):
            raise ConfigError("grid: expected [start, stop, count] with start < stop")
        if "mode" in data:
            _number(data, "mode", lo=0, hi=data["n_modes"] - 1, integer=True)
        if "workers" in data:
            _number(data, "workers", lo=1, hi=1024, integer=True)
        if not set(data["emit"]) <= set(DEFAULTS["emit"]):
            raise ConfigError(f"emit: choose from {DEFAULTS['emit']}")
    del params
    return RunConfig(command, data, None if path is None else str(path))


def _occupations(occ, n):
    if isinstance(occ, dict):
        out = np.zeros(n)
        for key, val in occ.items():
            if not str(key).isdigit() or int(key) >= n:
                raise ConfigError(f"occupations: bad mode index {key!r}")
            if not isinstance(val, (int, float)) or val < 0:
                raise ConfigError(f"occupations.{key}: expected a non-negative number")
            out[int(key)] = val
        return out
    if not isinstance(occ, list) or len(occ) != n:
        raise ConfigError(f"occupations: expected {n} values or an object keyed by mode")
    if any(not isinstance(v, (int, float)) or v < 0 for v in occ):
        raise ConfigError("occupations: values must be non-negative numbers")
    return np.asarray(occ, dtype=float)


# ------------------------------------------------------------------ resolution

def _omega(expr, k):
    if not isinstance(expr, str):
        return float(expr), None
    m = _OMEGA_RE.match(expr)
    idx = [int(g) for g in m.groups() if g is not None and g.isdigit()]
    if any(i >= k.size for i in idx):
        raise ConfigError(f"omega {expr!r} refers to a mode beyond n_modes")
    if m.group(1) is not None:
        l = int(m.group(1))
        return 2.0 * k[l], ("parametric", l, l)
    a, op, b = int(m.group(2)), m.group(3), int(m.group(4))
    if op == "+":
        return k[a] + k[b], ("sum", a, b)
    return abs(k[a] - k[b]), ("difference", a, b)


def build_program(cfg: RunConfig):
    """DriveProgram, base spectrum, occupations and the resonance implied by the drives."""
    d = cfg.data
    params = _params(d)
    n = int(d["n_modes"])
    k = solve_spectrum(params, n).roots
    drives, resonance = {}, None
    for r, spec in d["drives"].items():
        om, res = _omega(spec["omega"], k)
        drives[r] = Drive(float(spec["xi"]), om * (1.0 + float(spec.get("detuning", 0.0))))
        resonance = resonance or res
    omega_max = max(dr.omega for dr in drives.values())
    t_f = float(d["t_f"]) if "t_f" in d else float(d["omega_t_f"]) / omega_max
    program = DriveProgram(params, drives, eps=float(d["eps"]), t_f=t_f, alpha_smooth=d["alpha"])
    occ = np.zeros(n) if d.get("occupations") is None else _occupations(d["occupations"], n)
    return program, k, occ, resonance


# ------------------------------------------------------------------ writers

def _fmt(x):
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _write_json(path: Path, obj):
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def _complex_table(a):
    return {"re": np.real(a), "im": np.imag(a)}


# ------------------------------------------------------------------ commands

def _cmd_spectrum(cfg, out):
    d = cfg.data
    sol = solve_spectrum(_params(d), int(d["n_modes"]), d.get("k_max"))
    _write_csv(out / "spectrum.csv", ["n", "k", "regime"],
               [(str(i), k, sol.regime[i]) for i, k in enumerate(sol.roots)])
    return ["spectrum.csv"], {"k_c": sol.k_c, "has_low_mode": sol.has_low_mode}


def _cmd_localize(cfg, out):
    d = cfg.data
    p = _params(d)
    k = solve_spectrum(p, int(d["n_modes"])).roots
    rows = []
    for i, kk in enumerate(k):
        rep = localization(p, kk, float(d["threshold"]))
        rows.append((str(i), kk, rep.kappa_sq, rep.g, rep.side))
    _write_csv(out / "localization.csv", ["n", "k", "kappa_sq", "g", "side"], rows)
    return ["localization.csv"], {}


def _cmd_couplings(cfg, out):
    d = cfg.data
    cs = build_couplings(_params(d), int(d["n_modes"]), float(d["step"]))
    files = ["eta.csv"]
    _write_csv(out / "eta.csv", ["n", "k"] + [f"eta_{r}" for r in PARAMS if r != "chi_dot"]
               + ["eta_chi_dot_re", "eta_chi_dot_im"],
               [[str(i), cs.k[i]] + [cs.eta[r][i].real for r in PARAMS if r != "chi_dot"]
                + [cs.eta["chi_dot"][i].real, cs.eta["chi_dot"][i].imag] for i in range(cs.n_modes)])
    for r in PARAMS:
        name = f"beta_{r}.csv"
        table = cs.beta[r].imag if r == "chi_dot" else cs.beta[r].real
        _write_csv(out / name, ["n"] + [f"l{l}" for l in range(cs.n_modes)],
                   [[str(i)] + list(table[i]) for i in range(cs.n_modes)])
        files.append(name)
    ident = verify_identities(cs)
    _write_json(out / "identities.json", ident)
    files.append("identities.json")
    return files, {"identities_max_violation": max(ident.values())}


def _cmd_simulate(cfg, out):
    d = cfg.data
    program, k_in, occ, _ = build_program(cfg)
    res = integrate_modes(program, n_modes=int(d["n_modes"]), tol=float(d["tol"]),
                          samples_per_period=int(d["samples_per_period"]), occupations=occ,
                          complex_k=bool(d["complex_k"]), keep_states=False, t_end=d.get("t_end"))
    n = res.photons.shape[1]
    _write_csv(out / "photons.csv", ["t"] + [f"N_{i}" for i in range(n)],
               (np.concatenate([[t], row]) for t, row in zip(res.times, res.photons)))
    total = res.photons.sum(axis=1)
    warn = []
    shift = float(np.max(np.abs(res.k_out - k_in) / k_in))
    if shift > 1e-6:
        warn.append(f"out-region spectrum differs from the base spectrum by {shift:.3g} (relative)")
    rows = np.abs(res.bog_alpha) ** 2 - np.abs(res.bog_beta) ** 2
    summary = {
        "k_in": k_in, "k_out": res.k_out, "t_f": program.t_f,
        "final_photons": res.photons[-1], "initial_total": occ.sum(),
        "final_total": total[-1], "max_total_deviation": float(np.max(np.abs(total - total[0]))),
        "bogoliubov_row_norm_error": float(np.max(np.abs(rows.sum(axis=1) - 1.0))),
        "bog_alpha": _complex_table(res.bog_alpha), "bog_beta": _complex_table(res.bog_beta),
        "validity": res.validity, "warnings": warn,
    }
    _write_json(out / "summary.json", summary)
    for w in warn:
        print(f"warning: {w}", file=sys.stderr)
    return ["photons.csv", "summary.json"], res.validity


def _cmd_msa(cfg, out):
    d = cfg.data
    program, k, occ, resonance = build_program(cfg)
    cs = build_couplings(program.base, int(d["n_modes"]))
    window = float(d["window"])
    times = np.linspace(0.0, program.t_f, int(d["times"]))
    curves = msa.msa_integrate(program.base, program, times, eps=program.eps, window=window,
                               occupations=occ, couplings=cs)
    n = curves.shape[1]
    _write_csv(out / "msa.csv", ["t"] + [f"N_{i}" for i in range(n)],
               (np.concatenate([[t], row]) for t, row in zip(times, curves)))
    conds = msa.detect_couplings(k, program, window) if window > 0 else []
    record = {"conditions": [c.__dict__ for c in conds], "window": window}
    if resonance and resonance[0] == "parametric":
        sol = msa.parametric_solution(program.base, program, resonance[1], occ, program.eps, couplings=cs)
        record.update(regime=sol.regime, rates=sol.rates)
    _write_json(out / "msa.json", record)
    return ["msa.csv", "msa.json"], program.validity()


def _cmd_scan(cfg, out):
    d = cfg.data
    program, k, occ, resonance = build_program(cfg)
    if "mode" in d:
        mode = int(d["mode"])
    elif resonance and resonance[0] == "parametric":
        mode = resonance[1]
    else:
        raise ConfigError("mode: required unless the drive frequency is written as 2*wN")
    omega0 = max(dr.omega for dr in program.drives.values())
    a, b, m = d["grid"]
    grid = np.linspace(a, b, int(m))
    times = np.linspace(0.0, program.t_f, int(d["times"]) + 1)[1:]
    scan = run_scan(program, omega0, grid, mode=mode, times=times, n_modes=int(d["n_modes"]),
                    tol=float(d["tol"]), workers=d.get("workers"), complex_k=bool(d["complex_k"]))
    files = []
    if "heatmap.csv" in d["emit"]:
        _write_csv(out / "heatmap.csv", ["t", "delta", f"N_{mode}"],
                   ((t, dl, scan.results[j, i]) for i, t in enumerate(times) for j, dl in enumerate(grid)))
        files.append("heatmap.csv")
    fits = scan.fit_profiles()
    if "profiles.csv" in d["emit"]:
        _write_csv(out / "profiles.csv", ["t", "center", "fwhm", "amplitude", "residual"],
                   ((t, f.center, f.fwhm, f.amplitude, f.residual) for t, f in fits))
        files.append("profiles.csv")
    if "fits.json" in d["emit"]:
        record = {"omega0": omega0, "mode": mode, "n_profiles": len(fits)}
        if fits:
            record["late_center"] = fits[-1][1].center
            record["late_fwhm"] = fits[-1][1].fwhm
        if len(fits) >= 4:
            dec = fwhm_decay_fit(omega0 * np.array([t for t, _ in fits]), [f.fwhm for _, f in fits])
            record["decay_fit"] = {"A": dec.A, "B": dec.B, "gamma_inf": dec.gamma_inf,
                                   "residual": dec.residual, "time_unit": "omega0 * t"}
        _write_json(out / "fits.json", record)
        files.append("fits.json")
    return files, program.validity()


def _signal(spec, key):
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return float(spec)
    if isinstance(spec, dict):
        extra = set(spec) - {"offset", "amplitude", "omega", "phase"}
        if extra or "offset" not in spec:
            raise ConfigError(f"hardware.{key}: expected a number or {{offset, amplitude, omega, phase}}")
        return Sinusoid(**{k: float(v) for k, v in spec.items()})
    raise ConfigError(f"hardware.{key}: expected a number or a sinusoid object")


def _cmd_circuit(cfg, out):
    d = cfg.data
    hw = dict(d["hardware"])
    for key in ("flux0", "flux1", "flux2", "C_tune"):
        if key in hw:
            hw[key] = _signal(hw[key], key)
    try:
        hardware = CircuitParams(**hw)
    except TypeError as exc:
        raise ConfigError(f"hardware: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"hardware: {exc}") from None
    tgt = d["target"]
    extra = set(tgt) - {"params", "drive"}
    if extra:
        raise ConfigError(f"target: unknown keys {sorted(extra)}")
    base = _params(tgt)
    op = from_cavity(base, hardware)
    hardware = hardware.replace(flux0=op.flux0, C_tune=op.C_tune)
    drive = tgt.get("drive")
    sim = {"params": base.as_dict(), "drives": {}}
    t_f = float(d.get("t_f", 10.0))
    if drive is not None:
        if set(drive) - {"param", "xi", "omega", "eps"} or drive.get("param") not in ("L", "dL"):
            raise ConfigError("target.drive: expected {param: L|dL, xi, omega, eps}")
        r, xi, om, eps = drive["param"], float(drive["xi"]), float(drive["omega"]), float(drive.get("eps", 0.01))
        r0 = getattr(base, r)
        schedule = plan_fluxes(Sinusoid(r0, eps * xi * r0, om), hardware, r)
        hardware = schedule.apply(hardware)
        sim["drives"] = {r: {"xi": xi, "omega": om}}
        sim["eps"] = eps
    times = np.linspace(0.0, t_f, int(d["samples"]))
    cav = [to_cavity(hardware, t) for t in times]
    if drive is not None:
        other = "dL" if drive["param"] == "L" else "L"
        drift = max(abs(getattr(c, other) - getattr(base, other)) for c in cav)
        if drift > 1e-9 * base.L:
            raise CavityError(f"schedule moves {other} by {drift:.3g}; geometric lengths do not match the target")
    record = {
        "operating_point": {"flux0": op.flux0, "C_tune": op.C_tune},
        "samples": {
            "t": times,
            "flux0": hardware.flux0.value(times), "flux1": hardware.flux1.value(times),
            "flux2": hardware.flux2.value(times), "C_tune": hardware.C_tune.value(times),
            "L": [c.L for c in cav], "dL": [c.dL for c in cav],
            "chi": [c.chi for c in cav], "v": [c.v for c in cav],
        },
        "simulate_config": sim,
    }
    _write_json(out / "circuit.json", record)
    return ["circuit.json"], {}


HANDLERS = {
    "spectrum": _cmd_spectrum, "localize": _cmd_localize, "couplings": _cmd_couplings,
    "simulate": _cmd_simulate, "msa": _cmd_msa, "detune-scan": _cmd_scan, "circuit-map": _cmd_circuit,
}


def run(cfg: RunConfig) -> int:
    """Execute a validated configuration; returns the exit status."""
    out = cfg.output
    out.mkdir(parents=True, exist_ok=True)
    files, validity = HANDLERS[cfg.command](cfg, out)
    _write_json(out / "manifest.json", {
        "version": __version__, "command": cfg.command, "config_sha256": cfg.sha256(),
        "config": cfg.data, "validity": validity, "outputs": files,
    })
    return 0


# ------------------------------------------------------------------ argv

def _parser():
    ap = argparse.ArgumentParser(prog="python -m dcecavity", description=__doc__.strip().splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration (shipped names are looked up in the package)")
        p.add_argument("--out", dest="output", help="output directory")
        if name == "circuit-map":
            continue
        for key in ("L", "dL", "chi", "v"):
            p.add_argument(f"--{key}", type=float)
        p.add_argument("--n-modes", dest="n_modes", type=int)
        if name in ("simulate", "msa", "detune-scan"):
            p.add_argument("--tol", type=float)
            p.add_argument("--eps", type=float)
        if name == "msa":
            p.add_argument("--window", type=float)
        if name == "detune-scan":
            p.add_argument("--grid", help="start:stop:count")
            p.add_argument("--mode", type=int)
            p.add_argument("--emit", help="comma-separated subset of heatmap.csv,profiles.csv,fits.json")
            p.add_argument("--workers", type=int)
    return ap


def main(argv=None) -> int:
    args = vars(_parser().parse_args(argv))
    command = args.pop("command")
    path = args.pop("config")
    try:
        if args.get("grid") is not None:
            try:
                a, b, n = args["grid"].split(":")
                args["grid"] = [float(a), float(b), int(n)]
            except ValueError:
                raise ConfigError(f"--grid: expected start:stop:count, got {args['grid']!r}") from None
        if args.get("emit") is not None:
            args["emit"] = [s.strip() for s in args["emit"].split(",") if s.strip()]
        cfg = parse_config(command, path, args)
        return run(cfg)
    except CavityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
