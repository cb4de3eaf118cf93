"""Fixed-step RK4 integrator for the thermal Lindblad master equation.

    drho/dt = -i [H(t), rho]
              + kappa (nbar+1) D_a[rho] + kappa nbar D_adag[rho]
              + gamma (mbar+1) D_b[rho] + gamma mbar D_bdag[rho]

with the standard dissipator D_o[rho] = o rho o^dag - (1/2){rho, o^dag o}.
The right-hand side is assembled from direct matrix products at every stage
(no prebuilt superoperator), because the multitone scenarios keep an
explicitly time-dependent Hamiltonian.  Trace is renormalized only at
recorded checkpoints, and only after verifying the drift is below tolerance;
drift or negativity beyond tolerance aborts with a diagnostic instead of
being silently corrected.

A single `evolve` call owns its working state; separate calls share only
immutable inputs and can run in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    MECHANICAL,
    OPTICAL,
    DensityMatrix,
    HilbertSpec,
    Operator,
    annihilation,
    creation,
    partial_trace_mechanical,
)
from .model import FrameSpec, RotatingHamiltonian, SystemParams

TRACE_DRIFT_TOL = 1e-8
NEGATIVITY_TOL = 1e-6


class IntegratorError(RuntimeError):
    """Step-size instability (trace drift or negativity beyond tolerance)."""


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian (callable t -> matrix) plus weighted collapse channels."""

    space: HilbertSpec
    hamiltonian: object  # callable(t) -> ndarray; RotatingHamiltonian qualifies
    channels: tuple  # of (Operator, rate)

    def __post_init__(self):
        for op, rate in self.channels:
            if op.space != self.space:
                raise ValueError("collapse operators must share the model's space")
            if rate < 0:
                raise ValueError("collapse rates must be non-negative")

    @property
    def is_time_independent(self) -> bool:
        return getattr(self.hamiltonian, "is_time_independent", False)


def thermal_channels(params: SystemParams, space: HilbertSpec):
    """The four thermal collapse channels; zero-rate channels are dropped."""
    pairs = [
        (annihilation(space, OPTICAL), params.kappa * (params.nbar_optical + 1.0)),
        (creation(space, OPTICAL), params.kappa * params.nbar_optical),
        (annihilation(space, MECHANICAL), params.gamma * (params.nbar_mechanical + 1.0)),
        (creation(space, MECHANICAL), params.gamma * params.nbar_mechanical),
    ]
    return tuple((op, rate) for op, rate in pairs if rate > 0.0)


def build_model(
    params: SystemParams,
    drives,
    space: HilbertSpec,
    frame: FrameSpec | None = None,
) -> LindbladModel:
    """Rotating-frame model with thermal dissipators.

    The frame defaults to rotating at the first optical and first mechanical
    tone; the dissipators are unchanged by that number-conserving
    transformation (a property covered by the tests, not assumed silently).
    """
    if frame is None:
        frame = FrameSpec.from_first_tones(drives)
    hamiltonian = RotatingHamiltonian(params, drives, frame, space)
    return LindbladModel(space, hamiltonian, thermal_channels(params, space))


def dissipator(op: Operator, rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """D_o[rho] = o rho o^dag - (1/2){rho, o^dag o}; Hermitian and traceless."""
    rho_mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    o = op.matrix
    if o.shape != rho_mat.shape:
        raise ValueError("operator and state dimensions differ")
    odo = o.conj().T @ o
    return o @ rho_mat @ o.conj().T - 0.5 * (odo @ rho_mat + rho_mat @ odo)


def rhs(model: LindbladModel, rho: DensityMatrix | np.ndarray, t: float) -> np.ndarray:
    """Master-equation right-hand side -i[H(t), rho] + sum_k rate_k D_k[rho]."""
    rho_mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    h = model.hamiltonian(t)
    out = -1j * (h @ rho_mat - rho_mat @ h)
    for op, rate in model.channels:
        out += rate * dissipator(op, rho_mat)
    return out


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 configuration (times in the model's inverse-frequency unit)."""

    dt: float
    t_final: float
    record_stride: int = 1
    method: str = "rk4_fixed"

    def __post_init__(self):
        if self.dt <= 0 or self.t_final <= 0:
            raise ValueError("dt and t_final must be positive")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")
        if self.method != "rk4_fixed":
            raise ValueError(f"unsupported method {self.method!r}")

    @property
    def n_steps(self) -> int:
        """Number of steps; dt is stretched minimally so they land on t_final."""
        return max(1, int(round(self.t_final / self.dt)))

    @property
    def dt_actual(self) -> float:
        return self.t_final / self.n_steps


@dataclass(frozen=True)
class Trajectory:
    """Recorded time series of an `evolve` call.

    `states` holds composite states at recorded times, or None in lean mode
    where only the reduced mechanical states (the derived observable record)
    and the final composite state are kept.
    """

    times: np.ndarray
    states: tuple | None
    mechanical_states: tuple
    final_state: DensityMatrix
    max_trace_drift: float
    min_eigenvalue: float


class _Stepper:
    """One RK4 step of the master equation.

    Identical to the reference `rhs` (a test pins the two against each other);
    the thermal jump terms o rho o^dag are applied as weighted shifts of the
    (n, m, n', m') tensor instead of dense products, since every thermal
    channel is a ladder operator of one mode, and the anticommutator uses the
    diagonal of sum_k rate_k o_k^dag o_k directly.
    """

    def __init__(self, model: LindbladModel):
        self.model = model
        self.h_of_t = model.hamiltonian
        self.static_h = model.hamiltonian(0.0) if model.is_time_independent else None
        space = model.space
        self.shape4 = (space.dim_a, space.dim_b, space.dim_a, space.dim_b)
        dim = model.space.dim

        gains = np.zeros((dim, dim), dtype=complex)
        self.shift_jumps = []  # (mode axis 0/1, direction -1 lower/+1 raise, rate)
        self.dense_jumps = []  # fallback: (o, o^dag, rate)
        for op, rate in model.channels:
            o = op.matrix
            od = o.conj().T
            gains += 0.5 * rate * (od @ o)
            kind = self._classify(space, o)
            if kind is not None:
                self.shift_jumps.append((*kind, rate))
            else:
                self.dense_jumps.append((o, od, rate))
        self.gains_diag = None
        if np.count_nonzero(gains - np.diag(np.diag(gains))) == 0:
            self.gains_diag = np.diag(gains).copy()
        self.gains = gains

    @staticmethod
    def _classify(space, matrix):
        """Recognize a lowering/raising operator of one mode, else None."""
        from .fock import annihilation

        for axis, mode in enumerate((OPTICAL, MECHANICAL)):
            low = annihilation(space, mode).matrix
            if matrix.shape == low.shape and np.array_equal(matrix, low):
                return (axis, -1)
            if np.array_equal(matrix, low.conj().T):
                return (axis, +1)
        return None

    def _apply_jumps(self, rho: np.ndarray, out: np.ndarray):
        """Accumulate sum_k rate_k o_k rho o_k^dag into `out`."""
        r4 = rho.reshape(self.shape4)
        o4 = out.reshape(self.shape4)
        for axis, direction, rate in self.shift_jumps:
            dim = self.shape4[axis]
            w = np.sqrt(np.arange(1, dim, dtype=float))
            shape_row = [1, 1, 1, 1]
            shape_col = [1, 1, 1, 1]
            shape_row[axis] = dim - 1
            shape_col[axis + 2] = dim - 1
            weight = rate * w.reshape(shape_row) * w.reshape(shape_col)
            lower = slice(None, -1)
            upper = slice(1, None)
            src = [slice(None)] * 4
            dst = [slice(None)] * 4
            if direction == -1:  # a rho a^dag: pulls from one level up
                src[axis], src[axis + 2] = upper, upper
                dst[axis], dst[axis + 2] = lower, lower
            else:  # a^dag rho a: pushes from one level down
                src[axis], src[axis + 2] = lower, lower
                dst[axis], dst[axis + 2] = upper, upper
            o4[tuple(dst)] += weight * r4[tuple(src)]
        for o, od, rate in self.dense_jumps:
            out += rate * (o @ rho @ od)

    def rhs(self, rho: np.ndarray, t: float) -> np.ndarray:
        h = self.static_h if self.static_h is not None else self.h_of_t(t)
        out = -1j * (h @ rho - rho @ h)
        if self.gains_diag is not None:
            out -= self.gains_diag[:, None] * rho + rho * self.gains_diag[None, :]
        else:
            out -= self.gains @ rho + rho @ self.gains
        self._apply_jumps(rho, out)
        return out

    def step(self, rho: np.ndarray, t: float, dt: float) -> np.ndarray:
        k1 = self.rhs(rho, t)
        k2 = self.rhs(rho + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = self.rhs(rho + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = self.rhs(rho + dt * k3, t + dt)
        return rho + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def evolve(
    model: LindbladModel,
    rho0: DensityMatrix,
    cfg: IntegratorConfig,
    lean: bool = False,
) -> Trajectory:
    """Integrate the master equation from `rho0` with fixed-step RK4.

    Every recorded state is checked (trace drift < 1e-8 before checkpoint
    renormalization, smallest eigenvalue > -1e-6) and then renormalized.
    Violations raise `IntegratorError` with a smaller-dt recommendation.
    """
    if rho0.space != model.space:
        raise ValueError("initial state must live on the model's space")
    stepper = _Stepper(model)
    dt = cfg.dt_actual
    n_steps = cfg.n_steps

    rho = rho0.matrix.copy()
    times = [0.0]
    states = [] if not lean else None
    mech_states = []
    max_drift = 0.0
    min_eig = np.inf

    def record(rho_mat, step_index):
        nonlocal max_drift, min_eig
        drift = abs(rho_mat.trace().real - 1.0)
        max_drift = max(max_drift, drift)
        if drift >= TRACE_DRIFT_TOL:
            raise IntegratorError(
                f"trace drifted by {drift:.3e} at step {step_index} "
                f"(tolerance {TRACE_DRIFT_TOL:.0e}); reduce dt"
            )
        rho_mat /= rho_mat.trace().real
        herm = 0.5 * (rho_mat + rho_mat.conj().T)
        smallest = float(np.linalg.eigvalsh(herm)[0])
        min_eig = min(min_eig, smallest)
        if smallest <= -NEGATIVITY_TOL:
            raise IntegratorError(
                f"state developed eigenvalue {smallest:.3e} at step {step_index} "
                f"(tolerance -{NEGATIVITY_TOL:.0e}); reduce dt"
            )
        state = DensityMatrix(model.space, rho_mat.copy())
        if states is not None:
            states.append(state)
        mech_states.append(partial_trace_mechanical(state))
        return rho_mat

    rho = record(rho, 0)
    for k in range(1, n_steps + 1):
        rho = stepper.step(rho, (k - 1) * dt, dt)
        if k % cfg.record_stride == 0 or k == n_steps:
            rho = record(rho, k)
            times.append(k * dt)

    final = DensityMatrix(model.space, rho.copy())
    return Trajectory(
        times=np.asarray(times),
        states=tuple(states) if states is not None else None,
        mechanical_states=tuple(mech_states),
        final_state=final,
        max_trace_drift=max_drift,
        min_eigenvalue=float(min_eig),
    )
