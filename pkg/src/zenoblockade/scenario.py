"""Scenario configuration, runner and report writers.

Config files are plain text with one flat dotted key per line::

    # two-phonon blockade with a weaker mechanical drive
    preset = blockade-two-phonon
    drive.2.amplitude_over_g = 0.02

Frequencies are given as ``*_hz_over_2pi`` fields (f/2pi in Hz), amplitudes as
``*_over_g`` (dimensionless multiples of g), temperature in kelvin.  A preset
fills in every physics field; explicit keys override the preset and each
override is logged.  The full key schema lives in `CONFIG_KEYS` and the README.

`run_scenario` writes, per run directory:

* ``probabilities.csv``   - columns t, P0..PK (t in units of 1/g)
* ``wigner_final.csv``    - x axis row, p axis row, then W rows (one per x)
* ``summary.json``        - final observables, hygiene numbers, resolved
  parameters in config units and internal units

plus a scenario-level ``summary.json`` indexing the runs.  Outputs are
deterministic: identical configs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import presets as presets_mod
from .fock import HilbertSpec, vacuum_density
from .lindblad import IntegratorConfig, build_model, evolve
from .model import DriveTone, FrameSpec, SystemParams, params_from_hz_over_2pi
from .observables import fidelity_fock, fock_probabilities, negativity_volume, wigner
from .zeno import detect_subspaces, rotating_spectrum, torus_coordinates

CONVERGENCE_TOL = 1e-3


class ConfigError(ValueError):
    """Invalid or inconsistent scenario configuration (CLI exit code 2)."""


class ConvergenceError(RuntimeError):
    """Observables moved >= 1e-3 under a cutoff increment (CLI exit code 3)."""


# key -> python type ('str', 'float', 'int', 'bool'); drive.<k>.* keys are
# validated by pattern.
CONFIG_KEYS = {
    "preset": str,
    "params.omega_hz_over_2pi": float,
    "params.Omega_hz_over_2pi": float,
    "params.g_hz_over_2pi": float,
    "params.chi_hz_over_2pi": float,
    "params.kappa_hz_over_2pi": float,
    "params.gamma_hz_over_2pi": float,
    "params.temperature_K": float,
    "params.nbar_optical": float,
    "params.nbar_mechanical": float,
    "sweep.drive": int,
    "sweep.amplitudes_over_g": str,
    "cutoffs.optical": int,
    "cutoffs.mechanical": int,
    "integrator.steps_per_period": int,
    "integrator.t_final_periods": float,
    "integrator.record_stride": int,
    "outputs.probabilities_up_to": int,
    "outputs.wigner_half_width": float,
    "outputs.wigner_points": int,
    "convergence_check": bool,
}

_DRIVE_FIELDS = {"mode": str, "amplitude_over_g": float, "frequency_hz_over_2pi": float}


def _drive_field(key: str):
    parts = key.split(".")
    if len(parts) == 3 and parts[0] == "drive" and parts[1].isdigit():
        field = parts[2]
        if field in _DRIVE_FIELDS:
            return int(parts[1]), field
    return None


def _coerce(key: str, value, target_type):
    if isinstance(value, str):
        text = value.strip()
        try:
            if target_type is bool:
                if text.lower() in ("true", "1", "yes"):
                    return True
                if text.lower() in ("false", "0", "no"):
                    return False
                raise ValueError(text)
            return target_type(text)
        except ValueError as exc:
            raise ConfigError(f"cannot parse {key} = {value!r} as {target_type.__name__}") from exc
    if target_type is bool:
        return bool(value)
    try:
        return target_type(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot coerce {key} = {value!r} to {target_type.__name__}") from exc


def parse_config_text(text: str) -> dict:
    """Parse the flat key = value config format (raw values, unvalidated)."""
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def load_config_file(path) -> dict:
    return parse_config_text(Path(path).read_text())


@dataclass(frozen=True)
class RunSpec:
    label: str
    drives: tuple  # of DriveTone, amplitudes/frequencies in units of g


@dataclass(frozen=True)
class OutputSpec:
    probabilities_up_to: int = 4
    wigner_half_width: float = 4.0
    wigner_points: int = 81


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario: internal-unit physics plus the config echo."""

    preset: str | None
    params: SystemParams
    runs: tuple  # of RunSpec
    space: HilbertSpec
    steps_per_period: int
    t_final_periods: float
    record_stride: int
    outputs: OutputSpec
    convergence_check: bool
    resolved_keys: dict  # flat config-unit key/value map this config came from

    @property
    def t_final(self) -> float:
        return self.t_final_periods * 2.0 * np.pi / self.params.g

    @property
    def dt(self) -> float:
        return (2.0 * np.pi / self.params.g) / self.steps_per_period

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(
            dt=self.dt, t_final=self.t_final, record_stride=self.record_stride
        )


def _validated_mapping(mapping: dict) -> dict:
    out = {}
    for key, value in mapping.items():
        if key in CONFIG_KEYS:
            out[key] = _coerce(key, value, CONFIG_KEYS[key])
        else:
            drive = _drive_field(key)
            if drive is None:
                raise ConfigError(f"unknown config key {key!r}")
            out[key] = _coerce(key, value, _DRIVE_FIELDS[drive[1]])
    return out


def resolve_config(mapping: dict, log=None) -> ScenarioConfig:
    """Merge a raw mapping with its preset (if any) and build a `ScenarioConfig`."""
    log = log or (lambda msg: None)
    mapping = _validated_mapping(mapping)

    preset_name = mapping.pop("preset", None)
    if preset_name is not None:
        try:
            merged = presets_mod.get_preset(preset_name)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
        for key, value in mapping.items():
            if key in merged and merged[key] != value:
                log(f"override: {key} = {value!r} (preset {preset_name}: {merged[key]!r})")
            merged[key] = value
    else:
        merged = dict(mapping)
    merged = _validated_mapping(merged)

    def require(key):
        if key not in merged:
            raise ConfigError(f"missing required config key {key!r} (no preset supplied it)")
        return merged[key]

    g_hz = require("params.g_hz_over_2pi")
    if g_hz <= 0:
        raise ConfigError("params.g_hz_over_2pi must be positive")
    params = params_from_hz_over_2pi(
        omega_hz=require("params.omega_hz_over_2pi"),
        Omega_hz=require("params.Omega_hz_over_2pi"),
        g_hz=g_hz,
        chi_hz=merged.get("params.chi_hz_over_2pi", 0.0),
        kappa_hz=merged.get("params.kappa_hz_over_2pi", 0.0),
        gamma_hz=merged.get("params.gamma_hz_over_2pi", 0.0),
        temperature=merged.get("params.temperature_K", 0.0),
        nbar_optical=merged.get("params.nbar_optical"),
        nbar_mechanical=merged.get("params.nbar_mechanical"),
    )

    # Collect drives by index; indices must be consecutive from 1.
    drive_indices = sorted({d[0] for key in merged if (d := _drive_field(key)) is not None})
    if not drive_indices:
        raise ConfigError("at least one drive.<k>.* block is required")
    if drive_indices != list(range(1, len(drive_indices) + 1)):
        raise ConfigError(f"drive indices must be consecutive from 1, got {drive_indices}")
    base_drives = []
    for k in drive_indices:
        fields = {}
        for field in _DRIVE_FIELDS:
            key = f"drive.{k}.{field}"
            if key not in merged:
                raise ConfigError(f"missing config key {key!r}")
            fields[field] = merged[key]
        try:
            base_drives.append(
                DriveTone(
                    mode=fields["mode"],
                    amplitude=fields["amplitude_over_g"],
                    frequency=fields["frequency_hz_over_2pi"] / g_hz,
                )
            )
        except ValueError as exc:
            raise ConfigError(f"drive.{k}: {exc}") from exc

    # Optional single-drive amplitude sweep -> one run per amplitude.
    runs = []
    if "sweep.drive" in merged or "sweep.amplitudes_over_g" in merged:
        if not ("sweep.drive" in merged and "sweep.amplitudes_over_g" in merged):
            raise ConfigError("sweep.drive and sweep.amplitudes_over_g must be given together")
        swept = merged["sweep.drive"]
        if swept not in drive_indices:
            raise ConfigError(f"sweep.drive = {swept} is not a configured drive index")
        try:
            amplitudes = [float(v) for v in merged["sweep.amplitudes_over_g"].split(",")]
        except ValueError as exc:
            raise ConfigError("sweep.amplitudes_over_g must be comma-separated numbers") from exc
        if not amplitudes:
            raise ConfigError("sweep.amplitudes_over_g must name at least one amplitude")
        for amp in amplitudes:
            drives = list(base_drives)
            tone = drives[swept - 1]
            try:
                drives[swept - 1] = DriveTone(tone.mode, amp, tone.frequency)
            except ValueError as exc:
                raise ConfigError(f"sweep amplitude {amp}: {exc}") from exc
            runs.append(RunSpec(label=f"amp-{amp:g}", drives=tuple(drives)))
    else:
        runs.append(RunSpec(label="run", drives=tuple(base_drives)))

    try:
        space = HilbertSpec(require("cutoffs.optical"), require("cutoffs.mechanical"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if space.cutoff_a < 1 or space.cutoff_b < 1:
        raise ConfigError("scenario cutoffs must be >= 1 for both modes")

    outputs = OutputSpec(
        probabilities_up_to=merged.get("outputs.probabilities_up_to", 4),
        wigner_half_width=merged.get("outputs.wigner_half_width", 4.0),
        wigner_points=merged.get("outputs.wigner_points", 81),
    )
    if outputs.probabilities_up_to > space.cutoff_b:
        raise ConfigError(
            f"outputs.probabilities_up_to = {outputs.probabilities_up_to} exceeds the "
            f"mechanical cutoff {space.cutoff_b}"
        )
    if outputs.wigner_points < 2 or outputs.wigner_half_width <= 0:
        raise ConfigError("Wigner grid needs >= 2 points and a positive half width")

    steps_per_period = merged.get("integrator.steps_per_period", 200)
    t_final_periods = merged.get("integrator.t_final_periods", 4.0)
    record_stride = merged.get("integrator.record_stride", 5)
    if steps_per_period < 10:
        raise ConfigError("integrator.steps_per_period must be at least 10")
    if t_final_periods <= 0:
        raise ConfigError("integrator.t_final_periods must be positive")
    if record_stride < 1:
        raise ConfigError("integrator.record_stride must be >= 1")

    return ScenarioConfig(
        preset=preset_name,
        params=params,
        runs=tuple(runs),
        space=space,
        steps_per_period=steps_per_period,
        t_final_periods=t_final_periods,
        record_stride=record_stride,
        outputs=outputs,
        convergence_check=merged.get("convergence_check", True),
        resolved_keys={**merged, **({"preset": preset_name} if preset_name else {})},
    )


def config_from_preset(name: str, overrides: dict | None = None, log=None) -> ScenarioConfig:
    mapping = {"preset": name}
    if overrides:
        mapping.update(overrides)
    return resolve_config(mapping, log=log)


# ----------------------------------------------------------------------------
# Running


@dataclass(frozen=True)
class RunResult:
    """Observables of a single run, as written to its output files."""

    label: str
    times: np.ndarray
    probabilities: np.ndarray  # shape (n_times, up_to + 1)
    final_probabilities: np.ndarray
    fidelity_fock_1: float
    wigner_grid: object
    negativity: float
    wigner_min: float
    wigner_integral: float
    max_trace_drift: float
    min_eigenvalue: float
    convergence_deltas: dict | None


def _format(value: float) -> str:
    return format(float(value), ".17g")


def _simulate_run(cfg: ScenarioConfig, run: RunSpec, space: HilbertSpec):
    """Evolve one run on the given space and derive its observables."""
    model = build_model(cfg.params, run.drives, space)
    trajectory = evolve(model, vacuum_density(space), cfg.integrator_config(), lean=True)
    up_to = cfg.outputs.probabilities_up_to
    probs = np.array(
        [fock_probabilities(state, up_to) for state in trajectory.mechanical_states]
    )
    final_mech = trajectory.mechanical_states[-1]
    axis = np.linspace(
        -cfg.outputs.wigner_half_width, cfg.outputs.wigner_half_width, cfg.outputs.wigner_points
    )
    grid = wigner(final_mech, axis, axis)
    return trajectory, probs, final_mech, grid


def _observable_dict(probs_final, fidelity, negativity) -> dict:
    out = {f"P{n}": float(p) for n, p in enumerate(probs_final)}
    out["fidelity_fock_1"] = float(fidelity)
    out["negativity_volume"] = float(negativity)
    return out


def execute_run(cfg: ScenarioConfig, run: RunSpec, convergence_check: bool = True) -> RunResult:
    """Run one drive setting, including the cutoff-increment convergence check."""
    trajectory, probs, final_mech, grid = _simulate_run(cfg, run, cfg.space)
    fidelity = fidelity_fock(final_mech, 1)
    negativity = negativity_volume(grid)

    deltas = None
    if convergence_check:
        _, probs_up, final_up, grid_up = _simulate_run(cfg, run, cfg.space.incremented(2))
        base = _observable_dict(probs[-1], fidelity, negativity)
        upsized = _observable_dict(
            probs_up[-1], fidelity_fock(final_up, 1), negativity_volume(grid_up)
        )
        deltas = {key: abs(base[key] - upsized[key]) for key in base}

    return RunResult(
        label=run.label,
        times=trajectory.times,
        probabilities=probs,
        final_probabilities=probs[-1],
        fidelity_fock_1=fidelity,
        wigner_grid=grid,
        negativity=negativity,
        wigner_min=grid.min_value(),
        wigner_integral=grid.integral(),
        max_trace_drift=trajectory.max_trace_drift,
        min_eigenvalue=trajectory.min_eigenvalue,
        convergence_deltas=deltas,
    )


def _write_probabilities_csv(path: Path, cfg: ScenarioConfig, result: RunResult):
    up_to = cfg.outputs.probabilities_up_to
    lines = [
        "# mechanical Fock-state probabilities vs time",
        "# time unit: 1/g (g = cross-Kerr coupling, angular); probabilities dimensionless",
        f"# run: {result.label}",
        "t," + ",".join(f"P{n}" for n in range(up_to + 1)),
    ]
    for t, row in zip(result.times, result.probabilities):
        lines.append(",".join([_format(t)] + [_format(p) for p in row]))
    path.write_text("\n".join(lines) + "\n")


def _write_wigner_csv(path: Path, result: RunResult):
    grid = result.wigner_grid
    lines = [
        "# Wigner function W(x,p) of the final reduced mechanical state",
        "# convention: displaced parity with D(alpha) = exp(alpha* b - alpha b^dag),",
        "#   alpha = x + i p, normalized so the Riemann integral over dx dp is 1",
        "# row 1: x axis; row 2: p axis; then one row per x value with W(x, p_j) columns",
        ",".join(_format(x) for x in grid.x_axis),
        ",".join(_format(p) for p in grid.p_axis),
    ]
    for row in grid.values:
        lines.append(",".join(_format(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _run_summary(cfg: ScenarioConfig, run: RunSpec, result: RunResult) -> dict:
    params = cfg.params
    return {
        "label": result.label,
        "preset": cfg.preset,
        "drives_internal_units_g": [
            {"mode": d.mode, "amplitude": d.amplitude, "frequency": d.frequency}
            for d in run.drives
        ],
        "parameters": {
            "config_units": {k: v for k, v in sorted(cfg.resolved_keys.items())},
            "internal_units_g": {
                "omega": params.omega,
                "Omega": params.Omega,
                "g": params.g,
                "chi": params.chi,
                "kappa": params.kappa,
                "gamma": params.gamma,
                "nbar_optical": params.nbar_optical,
                "nbar_mechanical": params.nbar_mechanical,
                "dt": cfg.dt,
                "t_final": cfg.t_final,
            },
        },
        "cutoffs": {"optical": cfg.space.cutoff_a, "mechanical": cfg.space.cutoff_b},
        "final": {
            **_observable_dict(result.final_probabilities, result.fidelity_fock_1, result.negativity),
            "wigner_min": result.wigner_min,
            "wigner_integral": result.wigner_integral,
        },
        "hygiene": {
            "max_trace_drift": result.max_trace_drift,
            "min_eigenvalue": result.min_eigenvalue,
            "convergence_deltas": result.convergence_deltas,
            "convergence_tolerance": CONVERGENCE_TOL,
        },
    }


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def run_scenario(cfg: ScenarioConfig, out_dir, log=None) -> list:
    """Run every configured drive setting and write the output tree.

    Raises `ConvergenceError` after writing all outputs if any run's
    observables moved by >= 1e-3 under the cutoff increment; `IntegratorError`
    propagates from the integrator.  Fully deterministic.
    """
    log = log or (lambda msg: None)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    results = []
    failures = []
    for run in cfg.runs:
        log(f"run {run.label}: {len(run.drives)} drive tone(s)")
        result = execute_run(cfg, run, convergence_check=cfg.convergence_check)
        run_dir = out_dir / "runs" / result.label
        run_dir.mkdir(parents=True, exist_ok=True)
        _write_probabilities_csv(run_dir / "probabilities.csv", cfg, result)
        _write_wigner_csv(run_dir / "wigner_final.csv", result)
        _write_json(run_dir / "summary.json", _run_summary(cfg, run, result))
        if result.convergence_deltas is not None:
            worst = max(result.convergence_deltas.values())
            if worst >= CONVERGENCE_TOL:
                failures.append((result.label, worst))
        results.append(result)

    scenario_summary = {
        "preset": cfg.preset,
        "runs": [result.label for result in results],
        "parameters": {"config_units": {k: v for k, v in sorted(cfg.resolved_keys.items())}},
        "convergence_ok": not failures,
    }
    _write_json(out_dir / "summary.json", scenario_summary)

    if failures:
        details = ", ".join(f"{label}: {worst:.2e}" for label, worst in failures)
        raise ConvergenceError(
            f"observables shifted >= {CONVERGENCE_TOL} under cutoff increment ({details}); "
            "raise the cutoffs"
        )
    return results


# ----------------------------------------------------------------------------
# Zeno reports


def zeno_report(cfg: ScenarioConfig, out_dir, tol: float | None = None) -> dict:
    """Write spectrum.json, partition.json and torus.csv for the configured drives."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    drives = cfg.runs[0].drives
    frame = FrameSpec.from_first_tones(drives)
    space = cfg.space

    spectrum = rotating_spectrum(cfg.params, frame, space)
    _write_json(
        out_dir / "spectrum.json",
        {
            "frame_internal_units_g": {
                "optical": frame.omega_frame_a,
                "mechanical": frame.omega_frame_b,
            },
            "entries": [{"n": n, "m": m, "value": value} for n, m, value in spectrum.entries],
        },
    )

    partition = detect_subspaces(spectrum, tol)
    _write_json(
        out_dir / "partition.json",
        {
            "classes": [
                {
                    "eigenvalue": cls.eigenvalue,
                    "members": [list(space.quantum_numbers(i)) for i in cls.members],
                }
                for cls in partition.classes
            ],
            "n_classes": len(partition.classes),
        },
    )

    omega_laser = frame.omega_frame_a
    omega_drive = frame.omega_frame_b
    if omega_laser <= 0 or omega_drive <= 0:
        raise ConfigError("torus report needs one optical and one mechanical tone")
    torus = torus_coordinates(cfg.params, omega_laser, omega_drive, space)
    class_of = np.empty(space.dim, dtype=int)
    for k, cls in enumerate(partition.classes):
        for idx in cls.members:
            class_of[idx] = k
    lines = [
        "# torus coalescence coordinates per basis state",
        "# theta1 = 2 pi frac(x / omega_L), theta2 = 2 pi frac(y / Omega_D)",
        "n,m,class_id,theta1,theta2,x,y",
    ]
    for i in range(space.dim):
        n, m = space.quantum_numbers(i)
        lines.append(
            ",".join(
                [str(n), str(m), str(int(class_of[i]))]
                + [_format(v) for v in (torus.theta1[i], torus.theta2[i], torus.x[i], torus.y[i])]
            )
        )
    (out_dir / "torus.csv").write_text("\n".join(lines) + "\n")

    return {"n_classes": len(partition.classes)}
