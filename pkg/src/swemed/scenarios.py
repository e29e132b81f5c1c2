"""Dam-break scenarios, configuration files and run output.

Configuration files are JSON. Lengths are SI except the particle sizes
``d_s`` and ``D_sg``, which are given in millimetres as in the laboratory
tables. A run writes::

    manifest.json                 resolved parameters, defaults, status
    snapshots/t_<time>.csv        x, h, h+h_b, h_b, u_m, alpha_1..N, c_m, u_b, Fr
    profiles/t_<time>_x_<pos>.csv zeta, u, c
    energy.csv                    per-step energy budget
    froude.csv                    x and one Froude column per snapshot

A manifest can be passed back to ``load_config`` to repeat the run.
"""

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import diagnostics, sediment, spectral
from .sediment import DRY_THRESHOLD, MATERIALS, SedimentParams
from .solver import Mesh, SolverConfig, advance
from .system import MatrixKind, Model, MomentSystem, bottom_velocity

MANIFEST_FORMAT = "swemed-run-manifest"
ASSUMPTIONS = {
    "time_unit": "laboratory end times are read as seconds",
    "beta": "beta = (rho_s - rho_w) / rho(c_m) in the energy terms (inferred definition)",
    "settling_velocity": "settling velocity formula evaluated without a rho_w prefactor",
    "lengths": "d_s and D_sg in files are millimetres",
}
PROFILE_ZETA = np.linspace(0.0, 1.0, 21)
# The front is the last cell deeper than this fraction of the initial
# upstream depth; thinner films ahead of it are shaped by the wet/dry fix.
FRONT_FRACTION = 0.01
FILM_DEPTH = 1e-3


class ConfigError(ValueError):
    """Invalid scenario configuration."""


@dataclass(frozen=True)
class Scenario:
    """A dam-break problem with piecewise-constant initial data split at ``x_dam``."""

    name: str
    x_left: float
    x_right: float
    n_cells: int
    end_time: float
    order: int
    model: str
    material: str
    params: SedimentParams
    h: tuple
    h_b: tuple = (0.0, 0.0)
    u_m: tuple = (0.0, 0.0)
    c_m: tuple = (0.0, 0.0)
    x_dam: float = 0.0
    wet_dry: bool = False
    snapshot_times: tuple | None = None
    profile_stations: tuple = ()
    profile_times: tuple | None = None
    speed_probe: float | None = None
    spectral_check: bool = False
    solver: dict = field(default_factory=dict)

    @property
    def mesh(self):
        return Mesh(self.x_left, self.x_right, self.n_cells)

    def system(self):
        dry = self.solver.get("dry_threshold", DRY_THRESHOLD)
        return MomentSystem.for_model(self.model, self.order, self.params, dry_threshold=dry)

    def initial_field(self):
        system = self.system()
        x = self.mesh.centers
        left = x <= self.x_dam

        def pick(pair):
            return np.where(left, pair[0], pair[1])

        alpha = np.zeros((len(x), system.order))
        return system.conserved(pick(self.h), pick(self.u_m), alpha, pick(self.c_m), pick(self.h_b))


# builtin scenarios

_SOLVER_KEYS = {"dt", "cfl", "matrix", "wave_speed", "path_quadrature", "boundary", "dry_threshold",
                "damping_depth"}
_LAB = dict(x_left=-3.0, x_right=3.0, n_cells=1000, end_time=1.0, wet_dry=True,
            profile_stations=(-1.0, 0.0, 1.0), speed_probe=1.6)
BUILTINS = {
    "academic": dict(x_left=-6.0, x_right=6.0, n_cells=1200, end_time=1.0, order=3,
                     h=(1.0, 0.05), h_b=(0.0, 0.0), profile_stations=(-2.0, -1.0, 0.0, 1.0, 2.0, 3.0)),
    "config1": dict(_LAB, order=1, h=(0.35, 0.0), h_b=(0.0, 0.0)),
    "config2": dict(_LAB, order=1, h=(0.25, 0.0), h_b=(0.10, 0.0)),
    "config3": dict(_LAB, order=3, h=(0.25, 0.10), h_b=(0.10, 0.0)),
}


def scenario_names():
    return [f"{n}-{m}" if n != "academic" else n for n in BUILTINS for m in MATERIALS
            if n != "academic" or m == "pvc"]


def builtin(name, material=None):
    """One of the built-in setups. ``name`` may carry the material, e.g. ``config1-sand``."""
    base, _, suffix = name.partition("-")
    material = material or suffix or "pvc"
    if base not in BUILTINS or material not in MATERIALS:
        raise ConfigError(f"unknown scenario {name!r}; valid names: {', '.join(scenario_names())}")
    setup = BUILTINS[base]
    full = base if base == "academic" and material == "pvc" else f"{base}-{material}"
    return Scenario(name=full, model=Model.HSWEMED.value, material=material,
                    params=MATERIALS[material], **setup)


# configuration files

_TOP = {"name", "domain", "n_cells", "end_time", "order", "model", "material", "sediment",
        "initial", "wet_dry", "output", "solver"}
_SEDIMENT = {"rho_w", "rho_s", "theta_c", "psi", "d_s", "eps", "nu", "nu_w", "c_D", "g", "D_sg",
             "omega_o"}
_INITIAL = {"x_dam", "h", "h_b", "u_m", "c_m"}
_OUTPUT = {"snapshot_times", "profile_stations", "profile_times", "speed_probe", "spectral_check"}


def _reject_unknown(section, data, allowed):
    if not isinstance(data, dict):
        raise ConfigError(f"{section}: expected an object")
    extra = sorted(set(data) - allowed)
    if extra:
        raise ConfigError(f"{section}: unknown key(s) {', '.join(extra)}; allowed: {', '.join(sorted(allowed))}")


def _pair(name, value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (float(value), float(value))
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return (float(value[0]), float(value[1]))
    raise ConfigError(f"initial.{name}: expected a number or a [left, right] pair")


def scenario_from_dict(data):
    """Validate a configuration mapping and build a Scenario."""
    _reject_unknown("config", data, _TOP)
    base = {}
    material = data.get("material", "pvc")
    if material not in MATERIALS:
        raise ConfigError(f"material: must be one of {', '.join(MATERIALS)}")
    if "name" in data and str(data["name"]).partition("-")[0] in BUILTINS:
        base = asdict_scenario(builtin(str(data["name"]).partition("-")[0], material))
    try:
        sed = dict(data.get("sediment", {}))
        _reject_unknown("sediment", sed, _SEDIMENT)
        for key in ("d_s", "D_sg"):
            if sed.get(key) is not None:
                sed[key] = float(sed[key]) * 1e-3
        params = replace(MATERIALS[material], name=material, **sed)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"sediment: {exc}") from exc

    domain = data.get("domain", [base.get("x_left"), base.get("x_right")])
    if not (isinstance(domain, (list, tuple)) and len(domain) == 2
            and all(isinstance(v, (int, float)) for v in domain)):
        raise ConfigError("domain: expected [x_left, x_right]")
    if not domain[1] > domain[0]:
        raise ConfigError("domain: x_right must exceed x_left")

    init = data.get("initial", {})
    _reject_unknown("initial", init, _INITIAL)
    out = data.get("output", {})
    _reject_unknown("output", out, _OUTPUT)
    solver = dict(data.get("solver", {}))
    _reject_unknown("solver", solver, _SOLVER_KEYS)

    def get(key, default=None):
        return data.get(key, base.get(key, default))

    n_cells = get("n_cells")
    if not isinstance(n_cells, int) or isinstance(n_cells, bool) or n_cells < 1:
        raise ConfigError("n_cells: expected a positive integer")
    end_time = get("end_time")
    if not isinstance(end_time, (int, float)) or not end_time > 0:
        raise ConfigError("end_time: expected a positive number")
    order = get("order")
    if not isinstance(order, int) or isinstance(order, bool) or order < 0:
        raise ConfigError("order: expected an integer >= 0")
    model = get("model", Model.HSWEMED.value)
    try:
        model = Model(model).value
    except ValueError:
        raise ConfigError(f"model: must be one of {', '.join(m.value for m in Model)}") from None

    pairs = {}
    for key in ("h", "h_b", "u_m", "c_m"):
        if key in init:
            pairs[key] = _pair(key, init[key])
        elif key in base:
            pairs[key] = tuple(base[key])
        elif key == "h":
            raise ConfigError("initial.h: required")
        else:
            pairs[key] = (0.0, 0.0)
    if min(pairs["h"]) < 0:
        raise ConfigError("initial.h: water depth must be nonnegative")
    if not all(0.0 <= c <= 1.0 for c in pairs["c_m"]):
        raise ConfigError("initial.c_m: concentration must lie in [0, 1]")
    wet_dry = get("wet_dry", False)
    if not isinstance(wet_dry, bool):
        raise ConfigError("wet_dry: expected true or false")
    dry = solver.get("dry_threshold", DRY_THRESHOLD)
    if not wet_dry and min(pairs["h"]) < dry:
        raise ConfigError("initial.h: dry cells present but wet_dry is false")

    def times(key):
        v = out.get(key, base.get(key))
        if v is None:
            return None
        if not isinstance(v, (list, tuple)) or not all(isinstance(t, (int, float)) for t in v):
            raise ConfigError(f"output.{key}: expected a list of numbers")
        return tuple(float(t) for t in v)

    snaps = times("snapshot_times")
    if snaps is not None and any(t < 0 or t > end_time for t in snaps):
        raise ConfigError("output.snapshot_times: times must lie in [0, end_time]")
    ptimes = times("profile_times")
    if ptimes is not None and any(t < 0 or t > end_time for t in ptimes):
        raise ConfigError("output.profile_times: times must lie in [0, end_time]")
    stations = times("profile_stations") or ()
    if any(s < domain[0] or s > domain[1] for s in stations):
        raise ConfigError("output.profile_stations: stations must lie inside the domain")
    probe = out.get("speed_probe", base.get("speed_probe"))
    check = out.get("spectral_check", False)
    if not isinstance(check, bool):
        raise ConfigError("output.spectral_check: expected true or false")

    scenario = Scenario(
        name=str(data.get("name", "custom")), x_left=float(domain[0]), x_right=float(domain[1]),
        n_cells=n_cells, end_time=float(end_time), order=order, model=model, material=material,
        params=params, h=pairs["h"], h_b=pairs["h_b"], u_m=pairs["u_m"], c_m=pairs["c_m"],
        x_dam=float(init.get("x_dam", base.get("x_dam", 0.0))), wet_dry=wet_dry,
        snapshot_times=snaps, profile_stations=stations, profile_times=ptimes,
        speed_probe=None if probe is None else float(probe), spectral_check=check, solver=solver)
    try:
        solver_config(scenario)
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}") from exc
    return scenario


def asdict_scenario(s):
    d = asdict(s)
    d.pop("params")
    return d


def load_config(path):
    """Read a scenario from a JSON config file or from a run manifest."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if isinstance(data, dict) and data.get("format") == MANIFEST_FORMAT:
        data = data["config"]
    return scenario_from_dict(data)


def scenario_to_config(s):
    """Config-file mapping that reproduces ``s`` (particle sizes in mm)."""
    p = s.params
    sed = {k: getattr(p, k) for k in sorted(_SEDIMENT)}
    for key in ("d_s", "D_sg"):
        if sed[key] is not None:
            sed[key] = sed[key] * 1e3
    return {
        "name": s.name,
        "domain": [s.x_left, s.x_right],
        "n_cells": s.n_cells,
        "end_time": s.end_time,
        "order": s.order,
        "model": s.model,
        "material": s.material,
        "sediment": sed,
        "initial": {"x_dam": s.x_dam, "h": list(s.h), "h_b": list(s.h_b), "u_m": list(s.u_m),
                    "c_m": list(s.c_m)},
        "wet_dry": s.wet_dry,
        "output": {"snapshot_times": None if s.snapshot_times is None else list(s.snapshot_times),
                   "profile_stations": list(s.profile_stations),
                   "profile_times": None if s.profile_times is None else list(s.profile_times),
                   "speed_probe": s.speed_probe,
                   "spectral_check": s.spectral_check},
        "solver": dict(s.solver),
    }


# running

def default_dt(scenario, system=None):
    """0.2 dx / a_est with a_est twice the largest wave speed of the initial state."""
    system = system or scenario.system()
    speed = spectral.regularized_wave_speed(system, scenario.initial_field()).max()
    a_est = 2.0 * max(float(speed), 1e-12)
    return 0.2 * scenario.mesh.dx / a_est


def solver_config(scenario, system=None):
    opts = dict(scenario.solver)
    if opts.get("dt") is None and opts.get("cfl") is None:
        opts["dt"] = default_dt(scenario, system)
    opts = {k: v for k, v in opts.items() if v is not None}
    snaps = scenario.snapshot_times
    if snaps is None:
        snaps = tuple(np.linspace(0.0, scenario.end_time, 11))
    extra = scenario.profile_times if scenario.profile_times is not None else (scenario.end_time,)
    return SolverConfig(end_time=scenario.end_time, model=scenario.model,
                        snapshot_times=tuple(sorted(set(snaps) | set(extra))), **opts)


def _fmt(v):
    return format(float(v), ".12g")


def _write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def time_label(t):
    return f"{t:.6f}"


def snapshot_columns(order):
    return ["x", "h", "h+h_b", "h_b", "u_m"] + [f"alpha_{i}" for i in range(1, order + 1)] + [
        "c_m", "u_b", "Fr"]


def snapshot_table(system, x, W):
    P = system.primitives(W)
    fr = diagnostics.froude(P.h, P.u, system.params)
    cols = [x, P.h, P.h + P.b, P.b, P.u] + [P.alpha[:, i] for i in range(system.order)] + [
        P.c, bottom_velocity(P.u, P.alpha), fr]
    return np.column_stack(cols)


def front_position(x, h, threshold):
    """Right-most cell centre with h above ``threshold`` (nan when none)."""
    wet = np.flatnonzero(np.asarray(h) > threshold)
    return float(x[wet[-1]]) if wet.size else float("nan")


@dataclass
class RunResult:
    path: Path
    manifest: dict
    trajectory: object
    system: object

    @property
    def ok(self):
        return self.manifest["status"] == "completed"


def run(scenario, out_dir, seed_sweep=False):
    """Integrate ``scenario`` and write the output tree under ``out_dir``.

    ``seed_sweep`` (or ``scenario.spectral_check``) adds a per-cell spectrum
    check of every snapshot; it is recorded in the manifest either way.
    """
    if seed_sweep and not scenario.spectral_check:
        scenario = replace(scenario, spectral_check=True)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    system = scenario.system()
    mesh = scenario.mesh
    config = solver_config(scenario, system)
    x = mesh.centers
    order = min(system.order, 1)
    periodic = config.boundary.value == "periodic"
    energy_rows = []
    dissipated = [0.0]

    def on_step(t, dt, old, new):
        row = diagnostics.energy_row(system, old, new, t + dt, dt, mesh.dx, order, periodic)
        dissipated[0] += row["dissipation"] * dt
        row["dissipation"] = dissipated[0]
        energy_rows.append(row)

    traj = advance(scenario.initial_field(), mesh, config, system, callback=on_step)

    files = []
    cols = snapshot_columns(system.order)
    for t, W in zip(traj.times, traj.snapshots):
        rel = f"snapshots/t_{time_label(t)}.csv"
        _write_atomic(out / rel, _csv_text(cols, snapshot_table(system, x, W)))
        files.append(rel)

    ptimes = scenario.profile_times if scenario.profile_times is not None else (scenario.end_time,)
    for t, W in zip(traj.times, traj.snapshots):
        if not any(abs(t - pt) <= 1e-12 * max(1.0, pt) for pt in ptimes):
            continue
        for xs in scenario.profile_stations:
            cell = int(np.argmin(np.abs(x - xs)))
            u, c = diagnostics.vertical_profiles(system, W[cell], PROFILE_ZETA)
            rel = f"profiles/t_{time_label(t)}_x_{xs:g}.csv"
            _write_atomic(out / rel, _csv_text(["zeta", "u", "c"], zip(PROFILE_ZETA, u, c)))
            files.append(rel)

    energy_cols = ["t", "total_energy", "boundary_flux", "dissipation", "residual", "density_coupling"]
    _write_atomic(out / "energy.csv",
                  _csv_text(energy_cols, ([r[k] for k in energy_cols] for r in energy_rows)))
    files.append("energy.csv")
    P_all = [system.primitives(W) for W in traj.snapshots]
    fr_cols = ["x"] + [f"t={time_label(t)}" for t in traj.times]
    fr_rows = np.column_stack([x] + [diagnostics.froude(P.h, P.u, system.params) for P in P_all])
    _write_atomic(out / "froude.csv", _csv_text(fr_cols, fr_rows))
    files.append("froude.csv")

    report = {}
    if traj.snapshots:
        final = traj.snapshots[-1]
        P = system.primitives(final)
        report["front_depth"] = FRONT_FRACTION * max(scenario.h)
        report["front_position"] = front_position(x, P.h, report["front_depth"])
        report["film_front_position"] = front_position(x, P.h, FILM_DEPTH)
        report["min_h"] = float(P.h.min())
        report["c_m_range"] = [float(P.c.min()), float(P.c.max())]
        imin = int(np.argmin(P.b))
        report["min_h_b"] = float(P.b[imin])
        report["x_min_h_b"] = float(x[imin])
        if scenario.speed_probe is not None:
            cell = int(np.argmin(np.abs(x - scenario.speed_probe)))
            vals = spectral.spectrum(system.transport_matrix(final[cell], config.matrix))
            report["speed_probe"] = {"x": float(x[cell]),
                                     "eigenvalues": [float(v.real) for v in vals],
                                     "max_imag": float(np.abs(vals.imag).max())}
    if scenario.spectral_check and traj.snapshots:
        rows = []
        for t, W in zip(traj.times, traj.snapshots):
            mats = system.transport_matrix(W, config.matrix)
            vals, ratio, bad = spectral.check_real(mats)
            rows.extend((t, xi, np.abs(v).max(), r, float(b)) for xi, v, r, b in zip(x, vals, ratio, bad))
        _write_atomic(out / "spectral_check.csv",
                      _csv_text(["t", "x", "spectral_radius", "imag_ratio", "complex"], rows))
        files.append("spectral_check.csv")
        report["complex_spectra"] = int(sum(r[4] for r in rows))

    manifest = build_manifest(scenario, config, system, traj, files, report)
    _write_atomic(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return RunResult(out, manifest, traj, system)


def build_manifest(scenario, config, system, traj, files, report):
    p = scenario.params
    defaults = []
    if p.c_D is None:
        defaults.append("sediment.c_D (= eps)")
    if p.D_sg is None:
        defaults.append("sediment.D_sg (= d_s)")
    if p.omega_o is None:
        defaults.append("sediment.omega_o (from the settling-velocity formula)")
    if scenario.solver.get("dt") is None and scenario.solver.get("cfl") is None:
        defaults.append("solver.dt (= 0.2 dx / (2 x initial max wave speed))")
    for key, val in (("matrix", "regularized"), ("wave_speed", "eigensolve"),
                     ("path_quadrature", "midpoint"), ("boundary", "open"),
                     ("dry_threshold", DRY_THRESHOLD), ("damping_depth", 1e-3)):
        if key not in scenario.solver:
            defaults.append(f"solver.{key} (= {val})")
    cfg = scenario_to_config(scenario)
    # pin the resolved step so a rerun from the manifest uses the same one
    cfg["solver"] = {k: v for k, v in cfg["solver"].items() if v is not None}
    if config.dt is not None:
        cfg["solver"]["dt"] = config.dt
    status = "completed" if traj.aborted is None else "aborted"
    manifest = {
        "format": MANIFEST_FORMAT,
        "config": cfg,
        "resolved": {
            "model_order": system.order,
            "exchange": system.exchange,
            "d_s_m": p.d_s,
            "D_sg_m": p.suspended_size,
            "c_D": p.drag,
            "settling_velocity": sediment.settling_velocity(p),
            "settling_velocity_formula": sediment.settling_velocity(replace(p, omega_o=None)),
            "bradford_factor": sediment.bradford_factor(p),
            "characteristic_discharge": float(sediment.characteristic_discharge(p)),
            "dx": scenario.mesh.dx,
            "dt": config.dt,
            "cfl": config.cfl,
            "snapshot_times": list(config.outputs),
            "energy_functional_order": min(system.order, 1),
            "energy_balance_exact": system.order <= 1,
        },
        "defaults": defaults,
        "assumptions": ASSUMPTIONS,
        "status": status,
        "stats": {"steps": traj.steps, "clamp_events": traj.clamp_events,
                  "negative_depth_fixes": traj.dry_fixes, "max_cfl": traj.max_cfl},
        "report": report,
        "files": sorted(files),
    }
    if traj.aborted is not None:
        a = traj.aborted
        manifest["abort"] = {"message": str(a), "time": a.time, "cell": a.cell,
                             "state": None if a.state is None else [float(v) for v in a.state]}
    return manifest


def read_snapshot(path):
    """Snapshot CSV as a dict of column arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ConfigError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def compare(run_dir, reference_csv, field=None, time=None):
    """Errors of a run snapshot against a reference profile.

    The reference has an ``x`` column and one value column named after a
    snapshot field (or ``value`` together with ``field``). Reference values are
    linearly interpolated onto the run cells inside the reference range.
    Returns a dict with L1 (integral), Linf and RMS errors.
    """
    run_dir = Path(run_dir)
    ref = read_snapshot(reference_csv)
    if "x" not in ref:
        raise ConfigError(f"{reference_csv}: needs an 'x' column")
    value_cols = [k for k in ref if k != "x"]
    if field is None:
        if len(value_cols) != 1 or value_cols[0] == "value":
            raise ConfigError("reference has no single named field; pass field=")
        field = value_cols[0]
    ref_col = field if field in ref else ("value" if "value" in ref else None)
    if ref_col is None:
        raise ConfigError(f"reference has no column {field!r}")
    if len(ref["x"]) == 0:
        raise ConfigError(f"{reference_csv}: no data rows")

    snaps = sorted((run_dir / "snapshots").glob("t_*.csv"))
    if not snaps:
        raise ConfigError(f"{run_dir}: no snapshots")
    if time is None:
        path = snaps[-1]
    else:
        path = min(snaps, key=lambda s: abs(float(s.stem[2:]) - time))
    sim = read_snapshot(path)
    if field not in sim:
        raise ConfigError(f"snapshot has no field {field!r}; fields: {', '.join(k for k in sim if k != 'x')}")

    order = np.argsort(ref["x"], kind="stable")
    rx, rv = ref["x"][order], ref[ref_col][order]
    inside = (sim["x"] >= rx[0]) & (sim["x"] <= rx[-1])
    if not inside.any():
        raise ConfigError("reference x-range does not overlap the run grid")
    err = sim[field][inside] - np.interp(sim["x"][inside], rx, rv)
    dx = float(sim["x"][1] - sim["x"][0]) if len(sim["x"]) > 1 else 1.0
    return {"field": field, "snapshot": path.name, "points": int(inside.sum()),
            "L1": float(np.sum(np.abs(err)) * dx), "Linf": float(np.max(np.abs(err))),
            "RMS": float(np.sqrt(np.mean(err * err)))}
