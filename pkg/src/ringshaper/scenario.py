"""Scenario configs, the design pipeline and result persistence.

A run normalizes the target, evaluates every bound, builds the
stationary-phase design, refines it with Gerchberg-Saxton and writes CSV
tables plus a JSON manifest. Manifests contain no timestamps and list the
SHA-256 of every table, so identical configs give identical manifests.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
import hashlib
import json
import math
import os
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import bounds as bnd
from .caustic import ENDPOINT_RTOL, integrate_phase, solve_caustic_map
from .errors import ConfigurationError, ResolutionError
from .gs import run_gs
from .problem import ShapingProblem
from .profiles import E_MINUS_9, Profile
from .pulse import ChirpDesign, chirp_parameters, pulse_problem, spatiotemporal_on_axis
from .spectral import error_functional, forward_field

KINDS = ("remote-bessel", "oscillatory", "pulse", "custom")
TARGETS = ("super_gaussian", "oscillatory")
MANIFEST = "manifest.json"
FLOAT_FMT = "%.17g"
THREADS_ENV = "RINGSHAPER_THREADS"

# TOML section -> {toml key: ScenarioConfig field}
SECTIONS = {
    "design": {
        "k_per_m": "k", "r0_m": "r0", "W0_prime_m": "W0_prime", "zd_m": "zd",
        "WT_prime_m": "WT_prime", "n": "n", "m": "m", "E0_V_per_m": "E0",
        "threshold": "threshold", "target": "target",
    },
    "pulse": {"gamma_fs2_per_m": "gamma", "tau_T_fs": "tau_T"},
    "solver": {
        "n_s": "n_s", "n_omega": "n_omega", "ode_steps": "ode_steps",
        "gs_iterations": "gs_iterations", "pulse_n_z": "pulse_n_z",
        "pulse_n_t": "pulse_n_t", "pulse_t_max_fs": "pulse_t_max_fs",
    },
}
KEY_OF = {f: key for sec in SECTIONS.values() for key, f in sec.items()}
FIELD_OF = {key: f for sec in SECTIONS.values() for key, f in sec.items()}
INT_FIELDS = {"n", "m", "n_s", "n_omega", "ode_steps", "gs_iterations", "pulse_n_z", "pulse_n_t"}
SWEEPABLE = ("k_per_m", "r0_m", "W0_prime_m", "zd_m", "WT_prime_m", "n", "m",
             "gamma_fs2_per_m", "tau_T_fs")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to reproduce one design run (SI units, pulse in fs)."""

    kind: str
    k: float
    r0: float
    W0_prime: float
    zd: float
    WT_prime: float
    n: int = 4
    m: int = 0
    E0: float = 1.0
    target: str = "super_gaussian"
    threshold: float = E_MINUS_9
    gamma: float | None = None
    tau_T: float | None = None
    n_s: int = 4096
    n_omega: int = 4096
    ode_steps: int = 4096
    gs_iterations: int = 100
    pulse_n_z: int = 201
    pulse_n_t: int = 201
    pulse_t_max_fs: float = 200.0
    sweep_param: str | None = None
    sweep_values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        errors = []
        if self.kind not in KINDS:
            errors.append(f"kind must be one of {KINDS}")
        if self.target not in TARGETS:
            errors.append(f"target must be one of {TARGETS}")
        for name in ("k", "r0", "W0_prime", "zd", "WT_prime", "E0"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                errors.append(f"{KEY_OF[name]} must be a positive number")
        if not 0 < self.threshold < 1:
            errors.append("threshold must lie in (0, 1)")
        if self.n < 1:
            errors.append("n must be >= 1")
        if self.target == "oscillatory" and self.m < 1:
            errors.append("oscillatory target needs m >= 1")
        if self.kind == "pulse" and (self.gamma is None or self.tau_T is None):
            errors.append("pulse scenario needs gamma_fs2_per_m and tau_T_fs")
        for name in ("n_s", "n_omega"):
            if getattr(self, name) < 16:
                errors.append(f"{name} must be >= 16")
        if self.ode_steps < 2 or self.gs_iterations < 1:
            errors.append("ode_steps must be >= 2 and gs_iterations >= 1")
        if self.sweep_param is not None:
            if self.sweep_param not in SWEEPABLE:
                errors.append(f"sweep param must be one of {SWEEPABLE}")
            vals = list(self.sweep_values)
            if not vals:
                errors.append("sweep values must be nonempty")
            elif any(not v > 0 for v in vals) or vals != sorted(vals):
                errors.append("sweep values must be positive and sorted")
        if errors:
            raise ConfigurationError("; ".join(errors))

    @property
    def source(self) -> Profile:
        return Profile.ring(self.r0, self.W0_prime, self.threshold)

    @property
    def target_profile(self) -> Profile:
        if self.target == "oscillatory":
            return Profile.oscillating(self.zd, self.WT_prime, self.m, self.threshold)
        return Profile.flat_top(self.zd, self.WT_prime, self.n, self.threshold)

    @property
    def chirp(self) -> ChirpDesign | None:
        if self.kind != "pulse":
            return None
        return chirp_parameters(self.tau_T, self.zd, self.gamma)

    def problem(self) -> ShapingProblem:
        try:
            if self.kind == "pulse":
                return pulse_problem(self.k, self.source, self.target_profile, self.chirp,
                                     self.E0, self.n_s, self.n_omega)
            return ShapingProblem.build(self.k, self.source, self.target_profile,
                                        self.E0, self.n_s, self.n_omega)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from exc

    def with_value(self, key: str, value) -> "ScenarioConfig":
        name = FIELD_OF[key]
        value = int(value) if name in INT_FIELDS else float(value)
        return replace(self, **{name: value}, sweep_param=None, sweep_values=())

    def to_dict(self) -> dict:
        out = {"scenario": {"kind": self.kind}}
        for sec, keys in SECTIONS.items():
            out[sec] = {k: getattr(self, f) for k, f in keys.items() if getattr(self, f) is not None}
        if self.sweep_param is not None:
            out["sweep"] = {"param": self.sweep_param, "values": list(self.sweep_values)}
        return out


PRESETS = {
    "remote-bessel": dict(k=9.5e6, r0=0.3, W0_prime=0.07, zd=1000.0, WT_prime=20.0, n=4,
                          sweep_param="WT_prime_m",
                          sweep_values=(1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)),
    "oscillatory": dict(k=9.7e6, r0=0.05, W0_prime=0.005, zd=1.0, WT_prime=1e-3, n=8, m=10,
                        target="oscillatory", ode_steps=16384,
                        sweep_param="m", sweep_values=(1, 5, 10, 15)),
    "pulse": dict(k=7.9e6, r0=0.5, W0_prime=0.1, zd=1000.0, WT_prime=20.0, n=8,
                  gamma=20.0, tau_T=50.0),
}


def preset(kind: str, **overrides) -> ScenarioConfig:
    if kind not in PRESETS:
        raise ConfigurationError(f"no preset named {kind!r}")
    return ScenarioConfig(kind=kind, **{**PRESETS[kind], **overrides})


def config_from_dict(data: dict) -> ScenarioConfig:
    """Build a config from parsed TOML; presets fill fields the file omits."""
    data = dict(data)
    scen = data.pop("scenario", {})
    kind = scen.get("kind")
    if kind not in KINDS:
        raise ConfigurationError(f"[scenario] kind must be one of {KINDS}")
    unknown = set(scen) - {"kind"}
    values = dict(PRESETS.get(kind, {}))
    for sec, keys in SECTIONS.items():
        for key, val in data.pop(sec, {}).items():
            if key not in keys:
                unknown.add(f"{sec}.{key}")
                continue
            values[keys[key]] = val
    sweep = data.pop("sweep", None)
    if sweep is not None:
        extra = set(sweep) - {"param", "values"}
        unknown |= {f"sweep.{k}" for k in extra}
        values["sweep_param"] = sweep.get("param")
        values["sweep_values"] = tuple(sweep.get("values", ()))
    unknown |= set(data)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    missing = [KEY_OF[f] for f in ("k", "r0", "W0_prime", "zd", "WT_prime") if f not in values]
    if missing:
        raise ConfigurationError(f"missing design keys: {missing}")
    for f in INT_FIELDS & set(values):
        v = values[f]
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigurationError(f"{KEY_OF[f]} must be an integer")
    try:
        return ScenarioConfig(kind=kind, **values)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc


def load_config(path) -> ScenarioConfig:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"{path}: {exc}") from exc
    return config_from_dict(data)


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    problem: ShapingProblem
    report: bnd.BoundsReport
    phi_stationary: np.ndarray
    phi_gs: np.ndarray
    gs_values: np.ndarray
    summary: dict
    onaxis: np.ndarray
    pulse_mesh: np.ndarray | None = None
    sweep_point: dict | None = None


def _regime(beta_value: float) -> str:
    if beta_value < math.pi:
        return "bound-dominated"
    if beta_value < 10 * math.pi:
        return "intermediate"
    return "geometric"


def onaxis_table(problem: ShapingProblem, phases) -> np.ndarray:
    """Columns: z, target intensity, then one intensity per phase; z ascending.

    Samples are the Omega-grid of a window 1.5 times the target support,
    mapped to z, so z-spacing is non-uniform.
    """
    grid = problem.ogrid.widened(1.5)
    omega = grid.omega
    target = (omega * problem.G.on(grid).values) ** 2
    cols = [grid.z(problem.params.k), target]
    for phi in phases:
        F = forward_field(problem.sgrid, problem.g, phi, grid).values
        cols.append((omega * np.abs(F)) ** 2)
    return np.column_stack(cols)[::-1]


def run_scenario(config: ScenarioConfig, sweep_point: dict | None = None) -> ScenarioResult:
    """Normalize, bound, design by stationary phase, refine by GS and tabulate."""
    P = config.problem()
    gp = P.g_profile
    report = bnd.bounds_report(P.G, gp, P.params)
    cmap = solve_caustic_map(config.source.shape, P.target.shape, P.params, config.ode_steps)
    if cmap.endpoint_error > ENDPOINT_RTOL:
        raise ResolutionError(
            f"caustic endpoint misses the target edge by {cmap.endpoint_error:.3g} of WT "
            f"with {config.ode_steps} steps", required=2 * config.ode_steps)
    phi_sp = integrate_phase(cmap).on_grid(P.sgrid)
    trace = run_gs(phi_sp, P.sgrid, P.g, P.G, config.gs_iterations)
    G_norm = P.G.norm()
    I_sp, I_gs = float(trace.values[0]), trace.final_value
    summary = {
        "G_norm": G_norm,
        "I_stationary": I_sp,
        "I_gs": I_gs,
        "I_stationary_normalized": I_sp / G_norm,
        "I_gs_normalized": I_gs / G_norm,
        "endpoint_error": cmap.endpoint_error,
        "gs_stagnation": trace.stagnation,
        "sound": bool(min(I_sp, I_gs) >= report.master_lower),
        "regime": _regime(report.beta),
        "input_power": P.input_power,
    }
    if config.target == "oscillatory":
        summary["delta_m"] = bnd.delta_m(P.G, gp, P.params, config.m, config.WT_prime, 2)
        summary["delta_m_unsquared"] = bnd.delta_m(P.G, gp, P.params, config.m, config.WT_prime, 1)
    else:
        core = bnd.central_core_power(P.params, config.n, config.WT_prime, P.input_power)
        summary["core_power"] = {k: (bool(v) if k == "advisory" else float(v))
                                 for k, v in asdict(core).items()}
    onaxis = onaxis_table(P, [phi_sp, trace.final_phase])
    mesh = None
    chirp = config.chirp
    if chirp is not None:
        half = 0.75 * P.params.WT
        z = np.linspace(config.zd - half, config.zd + half, config.pulse_n_z)
        t = np.linspace(-config.pulse_t_max_fs, config.pulse_t_max_fs, config.pulse_n_t)
        I = spatiotemporal_on_axis(P.sgrid, P.g, trace.final_phase, chirp, P.params.k, z, t)
        zz, tt = np.meshgrid(z, t, indexing="ij")
        mesh = np.column_stack([zz.ravel(), tt.ravel(), I.ravel()])
        summary["chirp"] = {"alpha_fs": chirp.alpha, "tau0_fs": chirp.tau0,
                            "q_at_zd": float(chirp.q(config.zd))}
    return ScenarioResult(config, P, report, phi_sp, trace.final_phase, trace.values,
                          summary, onaxis, mesh, sweep_point)


def _run_point(args):
    config, key, value = args
    return run_scenario(config.with_value(key, value), {"param": key, "value": value})


def worker_count(n_tasks: int) -> int:
    cap = os.environ.get(THREADS_ENV)
    workers = os.cpu_count() or 1
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {cap!r}")
    return max(1, min(workers, n_tasks))


def sweep(config: ScenarioConfig, param: str | None = None, values=None) -> list[ScenarioResult]:
    """Run every sweep point; results come back in sweep order."""
    param = config.sweep_param if param is None else param
    values = list(config.sweep_values if values is None else values)
    if param is None or not values:
        raise ConfigurationError("sweep needs a parameter and at least one value")
    replace(config, sweep_param=param, sweep_values=tuple(values))  # validates
    tasks = [(config, param, v) for v in values]
    workers = worker_count(len(tasks))
    if workers == 1:
        return [_run_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_point, tasks))


SUMMARY_COLUMNS = ("value", "I_stationary", "I_gs", "I_stationary_normalized", "I_gs_normalized",
                   "beta", "beta_half_width", "thm2_lower", "thm3_lower_g", "thm3_lower_G",
                   "best_local_lower", "master_lower", "sound")


def sweep_table(results: list[ScenarioResult]) -> np.ndarray:
    rows = []
    for res in results:
        rep = res.report.to_dict()
        rows.append([res.sweep_point["value"]] + [res.summary[c] for c in SUMMARY_COLUMNS[1:5]]
                    + [rep[c] for c in SUMMARY_COLUMNS[5:12]] + [float(res.summary["sound"])])
    return np.array(rows, dtype=float)


def _write_csv(path: Path, header, data) -> str:
    np.savetxt(path, np.asarray(data, dtype=float), delimiter=",", header=",".join(header),
               comments="", fmt=FLOAT_FMT)
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def manifest_dict(result: ScenarioResult, files: dict) -> dict:
    p = result.problem.params
    return {
        "format": "ringshaper-manifest/1",
        "config": result.config.to_dict(),
        "sweep_point": result.sweep_point,
        "params": {"k_per_m": p.k, "r0_m": p.r0, "W0_m": p.W0, "zd_m": p.zd, "WT_m": p.WT,
                   "E0_V_per_m": p.E0, "ET_V_per_m": p.ET, "k_bar": p.k_bar},
        "bounds": result.report.to_dict(),
        "summary": result.summary,
        "files": files,
    }


def emit(result: ScenarioResult, path) -> Path:
    """Write tables and the manifest into directory ``path``; returns the manifest path."""
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        r = result.problem.sgrid.r
        files = {
            "phase_stationary.csv": _write_csv(out / "phase_stationary.csv", ("r_m", "phi_rad"),
                                               np.column_stack([r, result.phi_stationary])),
            "phase_gs.csv": _write_csv(out / "phase_gs.csv", ("r_m", "phi_rad"),
                                       np.column_stack([r, result.phi_gs])),
            "onaxis.csv": _write_csv(out / "onaxis.csv", ("z_m", "target_intensity",
                                                          "stationary_phase_intensity", "gs_intensity"),
                                     result.onaxis),
            "gs_trace.csv": _write_csv(out / "gs_trace.csv", ("iteration", "I"),
                                       np.column_stack([np.arange(result.gs_values.size), result.gs_values])),
        }
        if result.pulse_mesh is not None:
            files["pulse_mesh.csv"] = _write_csv(out / "pulse_mesh.csv", ("z_m", "t_fs", "intensity"),
                                                 result.pulse_mesh)
        manifest = out / MANIFEST
        manifest.write_text(_dump(manifest_dict(result, files)))
    except OSError as exc:
        raise OSError(f"cannot write results to {out}: {exc}") from exc
    return manifest


def emit_sweep(results: list[ScenarioResult], path) -> Path:
    """Per-point directories, a summary table and a sweep manifest."""
    out = Path(path)
    points = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for i, res in enumerate(results):
            sp = res.sweep_point
            sub = f"point_{i:03d}"
            m = emit(res, out / sub)
            points.append({"dir": sub, "param": sp["param"], "value": sp["value"],
                           "manifest_sha256": hashlib.sha256(m.read_bytes()).hexdigest(),
                           "summary": res.summary})
        digest = _write_csv(out / "sweep_summary.csv", SUMMARY_COLUMNS, sweep_table(results))
        manifest = out / MANIFEST
        manifest.write_text(_dump({"format": "ringshaper-sweep/1",
                                   "config": results[0].config.to_dict(),
                                   "points": points,
                                   "files": {"sweep_summary.csv": digest}}))
    except OSError as exc:
        raise OSError(f"cannot write results to {out}: {exc}") from exc
    return manifest


def manifest_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_manifest(path) -> dict:
    return json.loads(Path(path).read_text())


def read_phase_table(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise ConfigurationError(f"{path}: expected two columns r_m,phi_rad")
    return data[:, 0], data[:, 1]


STORED_KEY = {"phase_stationary": "I_stationary", "phase_gs": "I_gs"}


@dataclass(frozen=True)
class Verification:
    recomputed: float
    stored: float | None
    relative_error: float | None

    @property
    def ok(self) -> bool:
        return self.relative_error is not None and self.relative_error <= 1e-12


def verify(phase_path, config: ScenarioConfig) -> Verification:
    """Recompute I from a stored phase table and compare with its manifest.

    The manifest next to the table supplies the stored value and, for sweep
    points, the swept parameter value applied on top of ``config``.
    """
    phase_path = Path(phase_path)
    manifest_path = phase_path.parent / MANIFEST
    manifest = load_manifest(manifest_path) if manifest_path.exists() else None
    if manifest and manifest.get("sweep_point"):
        sp = manifest["sweep_point"]
        config = config.with_value(sp["param"], sp["value"])
    P = config.problem()
    r, phi = read_phase_table(phase_path)
    if r.size != P.sgrid.n or not np.allclose(r, P.sgrid.r, rtol=1e-14, atol=0):
        raise ConfigurationError(f"{phase_path}: radial samples do not match the config's s-grid")
    recomputed = error_functional(P.G, P.sgrid, P.g, phi)
    stored = None
    key = STORED_KEY.get(phase_path.stem)
    if manifest and key:
        stored = manifest["summary"][key]
    rel = None if stored is None else abs(recomputed - stored) / max(abs(stored), 1e-300)
    return Verification(recomputed, stored, rel)
