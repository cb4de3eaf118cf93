"""Invariant-subspace analysis: rotating spectra, degeneracy partitions,
projected (Zeno) Hamiltonians, torus coalescence coordinates and the
leading strong-coupling corrections.

The central objects are the table of rotating-frame eigenvalues over the
number basis and the partition of basis states into degenerate classes.
Because the measurement Hamiltonian is diagonal in the number basis, every
projector here is diagonal and the projected drive can be evaluated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import HilbertSpec, Operator
from .model import FrameSpec, SystemParams, rotating_spectrum_value

# Default degeneracy tolerance: 1e-9 of the spectral range.  Spectra are exact
# arithmetic on a handful of parameters, so anything tighter than round-off
# but far below physical splittings works.
DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class SpectrumTable:
    """Rotating-frame eigenvalue per composite basis state, in basis order."""

    space: HilbertSpec
    entries: tuple  # of (n, m, value)

    def values(self) -> np.ndarray:
        return np.array([v for _, _, v in self.entries], dtype=float)

    def value_at(self, n: int, m: int) -> float:
        return self.entries[self.space.index(n, m)][2]


@dataclass(frozen=True)
class ZenoClass:
    """One degenerate class: its eigenvalue, member indices, and projector."""

    eigenvalue: float
    members: tuple
    projector: Operator


@dataclass(frozen=True)
class ZenoPartition:
    """Disjoint classes covering the full basis, with diagonal projectors."""

    space: HilbertSpec
    classes: tuple

    def class_of(self, index: int) -> int:
        for k, cls in enumerate(self.classes):
            if index in cls.members:
                return k
        raise ValueError(f"basis index {index} not found in any class")

    def members_by_quantum_numbers(self, k: int):
        return [self.space.quantum_numbers(i) for i in self.classes[k].members]


@dataclass(frozen=True)
class TorusCoordinates:
    """Planar energy split and its wrap onto the drive-period torus.

    x = (omega + g m + chi m^2) n and y = Omega m, so x + y is the bare
    energy of |n> x |m>; theta1 = 2 pi frac(x / omega_L) and
    theta2 = 2 pi frac(y / Omega_D).  States whose eigenvalues coalesce on
    the torus are the ones a drive can connect.
    """

    space: HilbertSpec
    x: np.ndarray
    y: np.ndarray
    theta1: np.ndarray
    theta2: np.ndarray


def rotating_spectrum(params: SystemParams, frame: FrameSpec, space: HilbertSpec) -> SpectrumTable:
    """Table of Delta' n + delta' m + g n m + chi n m^2 over all kept states."""
    entries = []
    for i in range(space.dim):
        n, m = space.quantum_numbers(i)
        entries.append((n, m, rotating_spectrum_value(params, frame, n, m)))
    return SpectrumTable(space, tuple(entries))


def detect_subspaces(spectrum: SpectrumTable, tol: float | None = None) -> ZenoPartition:
    """Group basis states whose eigenvalues agree within `tol`.

    Grouping chains through the sorted values (consecutive gaps < tol), which
    coincides with pairwise closeness for the exact-arithmetic spectra this is
    used on.  `tol` defaults to 1e-9 times the spectral range (floor 1e-12 for
    fully degenerate spectra).  Only eigenvalue differences matter: shifting
    the whole spectrum leaves the partition unchanged.
    """
    values = spectrum.values()
    if tol is None:
        spread = float(values.max() - values.min()) if len(values) else 0.0
        tol = max(DEGENERACY_RTOL * spread, 1e-12)
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")

    order = np.argsort(values, kind="stable")
    groups = []
    current = [int(order[0])]
    for idx in order[1:]:
        idx = int(idx)
        if values[idx] - values[current[-1]] < tol:
            current.append(idx)
        else:
            groups.append(current)
            current = [idx]
    groups.append(current)

    space = spectrum.space
    classes = []
    for members in groups:
        diag = np.zeros(space.dim)
        diag[members] = 1.0
        projector = Operator(space, np.diag(diag).astype(complex), hermitian=True)
        eigenvalue = float(np.mean(values[members]))
        classes.append(ZenoClass(eigenvalue, tuple(sorted(members)), projector))
    classes.sort(key=lambda c: c.eigenvalue)
    return ZenoPartition(space, tuple(classes))


def zeno_hamiltonian(
    partition: ZenoPartition,
    h_observed: Operator,
    h_measurement: Operator,
    strength: float = 1.0,
) -> Operator:
    """Effective generator K * H_meas + sum_j P_j H_obs P_j.

    Block diagonal with respect to the partition by construction: it commutes
    with every projector.
    """
    if h_observed.space != partition.space or h_measurement.space != partition.space:
        raise ValueError("operators and partition must share the same space")
    projected = np.zeros_like(h_observed.matrix)
    for cls in partition.classes:
        p = cls.projector.matrix
        projected += p @ h_observed.matrix @ p
    return Operator(partition.space, strength * h_measurement.matrix + projected)


def torus_coordinates(
    params: SystemParams,
    omega_laser: float,
    omega_drive: float,
    space: HilbertSpec,
) -> TorusCoordinates:
    """Wrap the planar energy coordinates onto the torus set by the two drives."""
    if omega_laser <= 0 or omega_drive <= 0:
        raise ValueError("drive frequencies must be positive")
    ns = np.array([space.quantum_numbers(i)[0] for i in range(space.dim)], dtype=float)
    ms = np.array([space.quantum_numbers(i)[1] for i in range(space.dim)], dtype=float)
    x = (params.omega + params.g * ms + params.chi * ms**2) * ns
    y = params.Omega * ms
    theta1 = 2.0 * np.pi * np.mod(x / omega_laser, 1.0)
    theta2 = 2.0 * np.pi * np.mod(y / omega_drive, 1.0)
    return TorusCoordinates(space, x, y, theta1, theta2)


@dataclass(frozen=True)
class NonadiabaticCorrection:
    """Leading corrections of the strong-coupling expansion.

    `first_order` is sum_{k != n} P_k H P_n / (eta_k - eta_n), the operator in
    the commutator of the O(1/K) term (anti-Hermitian for Hermitian H);
    `second_order` is sum_{k != n} P_n H P_k H P_n / (eta_n - eta_k), the
    O(1/K) shift inside the adiabatic generator.
    """

    first_order: Operator
    second_order: Operator


def nonadiabatic_correction(partition: ZenoPartition, h_observed: Operator) -> NonadiabaticCorrection:
    """Both leading correction operators for a non-degenerate partition."""
    if h_observed.space != partition.space:
        raise ValueError("operator and partition must share the same space")
    etas = [cls.eigenvalue for cls in partition.classes]
    for i in range(len(etas)):
        for j in range(i + 1, len(etas)):
            if etas[i] == etas[j]:
                raise ValueError("partition classes must have distinct eigenvalues")

    h = h_observed.matrix
    projs = [cls.projector.matrix for cls in partition.classes]
    first = np.zeros_like(h)
    second = np.zeros_like(h)
    for n, (pn, eta_n) in enumerate(zip(projs, etas)):
        h_pn = h @ pn
        for k, (pk, eta_k) in enumerate(zip(projs, etas)):
            if k == n:
                continue
            block = pk @ h_pn
            first += block / (eta_k - eta_n)
            second += (pn @ h @ block) / (eta_n - eta_k)
    return NonadiabaticCorrection(
        Operator(partition.space, first),
        Operator(partition.space, second),
    )


def closed_evolution(hamiltonian: Operator, psi0: np.ndarray, times) -> np.ndarray:
    """Exact unitary evolution of a pure state under a constant Hamiltonian.

    Diagonalizes once and returns an array of state vectors, one row per time.
    Used by the closed-system Zeno-limit studies, independently of the
    master-equation integrator.
    """
    mat = hamiltonian.matrix
    evals, evecs = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    coeff = evecs.conj().T @ np.asarray(psi0, dtype=complex)
    times = np.asarray(times, dtype=float)
    phases = np.exp(-1j * np.outer(times, evals))
    return (phases * coeff) @ evecs.T
