"""Readers for the simulator's output files.

These parse exactly the documented schemas (comment lines prefixed '#'):

* ``probabilities.csv`` - header row ``t,P0,P1,...`` then one row per time
* ``wigner_final.csv``  - x-axis row, p-axis row, then one row of W values
  per x entry
* ``torus.csv``         - header ``n,m,class_id,theta1,theta2,x,y``

Readers never modify or write anything; all functions raise
`ValidationError` on malformed input.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class ValidationError(ValueError):
    """Input file missing, malformed, or inconsistent with its schema."""


def _data_lines(path: Path):
    if not path.exists():
        raise ValidationError(f"input file not found: {path}")
    lines = [line for line in path.read_text().splitlines() if line.strip()]
    return [line for line in lines if not line.lstrip().startswith("#")]


@dataclass(frozen=True)
class ProbabilitySeries:
    label: str
    times: np.ndarray
    columns: tuple  # field names P0, P1, ...
    values: np.ndarray  # shape (n_times, n_columns)


def read_probabilities(path, label: str | None = None) -> ProbabilitySeries:
    path = Path(path)
    rows = _data_lines(path)
    if not rows:
        raise ValidationError(f"{path}: no header row")
    header = [cell.strip() for cell in rows[0].split(",")]
    if header[:1] != ["t"] or len(header) < 2:
        raise ValidationError(f"{path}: expected header 't,P0,...', got {rows[0]!r}")
    data = []
    for row in rows[1:]:
        cells = row.split(",")
        if len(cells) != len(header):
            raise ValidationError(f"{path}: row width {len(cells)} != header {len(header)}")
        try:
            data.append([float(cell) for cell in cells])
        except ValueError as exc:
            raise ValidationError(f"{path}: non-numeric row {row!r}") from exc
    if not data:
        raise ValidationError(f"{path}: empty time series")
    arr = np.asarray(data)
    return ProbabilitySeries(
        label=label or path.parent.name,
        times=arr[:, 0],
        columns=tuple(header[1:]),
        values=arr[:, 1:],
    )


@dataclass(frozen=True)
class WignerData:
    label: str
    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray  # values[i, j] = W(x_i, p_j)


def read_wigner(path, label: str | None = None) -> WignerData:
    path = Path(path)
    rows = _data_lines(path)
    if len(rows) < 3:
        raise ValidationError(f"{path}: expected two axis rows plus data rows")
    try:
        x_axis = np.array([float(v) for v in rows[0].split(",")])
        p_axis = np.array([float(v) for v in rows[1].split(",")])
        values = np.array([[float(v) for v in row.split(",")] for row in rows[2:]])
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric cell") from exc
    if values.shape != (x_axis.size, p_axis.size):
        raise ValidationError(
            f"{path}: value grid {values.shape} does not match axes "
            f"({x_axis.size}, {p_axis.size})"
        )
    return WignerData(label=label or path.parent.name, x_axis=x_axis, p_axis=p_axis, values=values)


@dataclass(frozen=True)
class TorusData:
    n: np.ndarray
    m: np.ndarray
    class_id: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray


def read_torus(path) -> TorusData:
    path = Path(path)
    rows = _data_lines(path)
    if not rows:
        raise ValidationError(f"{path}: no header row")
    header = [cell.strip() for cell in rows[0].split(",")]
    expected = ["n", "m", "class_id", "theta1", "theta2", "x", "y"]
    if header != expected:
        raise ValidationError(f"{path}: expected header {expected}, got {header}")
    if len(rows) < 2:
        raise ValidationError(f"{path}: no data rows")
    try:
        arr = np.array([[float(v) for v in row.split(",")] for row in rows[1:]])
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric cell") from exc
    if arr.shape[1] != len(expected):
        raise ValidationError(f"{path}: row width mismatch")
    return TorusData(
        n=arr[:, 0].astype(int),
        m=arr[:, 1].astype(int),
        class_id=arr[:, 2].astype(int),
        theta1=arr[:, 3],
        theta2=arr[:, 4],
    )


def discover_runs(scenario_dir) -> list:
    """(label, run_directory) pairs of a scenario output tree, sorted by label."""
    scenario_dir = Path(scenario_dir)
    runs_root = scenario_dir / "runs"
    if not runs_root.is_dir():
        raise ValidationError(f"no runs/ directory under {scenario_dir}")
    runs = sorted((p.name, p) for p in runs_root.iterdir() if p.is_dir())
    if not runs:
        raise ValidationError(f"no run directories under {runs_root}")
    return runs
