"""Derived quantities of reduced single-mode states.

Wigner convention: displaced parity,

    W(alpha) = (2/pi) sum_k (-1)^k <k| D(alpha)^dag rho D(alpha) |k>,

with D(alpha) = exp(alpha* a - alpha a^dag) (the same displacement used
everywhere in this package) and alpha = x + i p, so that the Riemann integral
of W over dx dp is 1.  Coherent states built as D(beta)|0> peak at
(x, p) = (Re beta, Im beta) under this pairing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import DensityMatrix, _single_mode_lowering

DEFAULT_GRID_HALF_WIDTH = 4.0
DEFAULT_GRID_POINTS = 81


def _single_mode_matrix(rho: DensityMatrix) -> np.ndarray:
    """Matrix of a reduced state, requiring one mode to be trivial (cutoff 0)."""
    space = rho.space
    if space.cutoff_a != 0 and space.cutoff_b != 0:
        raise ValueError(
            "expected a reduced single-mode state (one cutoff must be 0), "
            f"got cutoffs ({space.cutoff_a}, {space.cutoff_b})"
        )
    return rho.matrix


def fock_probabilities(rho_reduced: DensityMatrix, up_to: int) -> np.ndarray:
    """P_n = <n|rho|n> for n = 0..up_to of a reduced single-mode state."""
    mat = _single_mode_matrix(rho_reduced)
    dim = mat.shape[0]
    if up_to < 0 or up_to >= dim:
        raise ValueError(f"up_to={up_to} outside the kept levels 0..{dim - 1}")
    return np.real(np.diag(mat))[: up_to + 1].copy()


def fidelity_fock(rho_reduced: DensityMatrix, n: int) -> float:
    """Fidelity <n|rho|n> with the pure Fock state |n>."""
    return float(fock_probabilities(rho_reduced, n)[n])


@dataclass(frozen=True)
class WignerGrid:
    """W(x, p) sampled on a rectangular grid; values[i, j] = W(x[i], p[j])."""

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray

    def cell_area(self) -> float:
        dx = self.x_axis[1] - self.x_axis[0] if len(self.x_axis) > 1 else 1.0
        dp = self.p_axis[1] - self.p_axis[0] if len(self.p_axis) > 1 else 1.0
        return float(dx * dp)

    def integral(self) -> float:
        """Riemann sum of W; ~1 for states supported well inside the grid."""
        return float(self.values.sum() * self.cell_area())

    def min_value(self) -> float:
        return float(self.values.min())


def default_axes(half_width: float = DEFAULT_GRID_HALF_WIDTH, points: int = DEFAULT_GRID_POINTS):
    axis = np.linspace(-half_width, half_width, points)
    return axis, axis.copy()


def _pad_dimension(dim: int, alpha_max: float) -> int:
    """Fock levels needed to evaluate D(2 alpha) on the first `dim` levels.

    The displaced Fock state D(2a)|k> has mean occupation (2a)^2 + k and
    sub-Gaussian tails of width ~ 2a sqrt(2k+1); padding past mean + 4 sigma
    keeps the truncated matrix exponential faithful on the state's support.
    """
    two_a = 2.0 * alpha_max
    top = dim - 1
    need = two_a**2 + top + 4.0 * two_a * np.sqrt(2.0 * top + 1.0) + 10.0
    return max(dim, int(np.ceil(need)))


def wigner(rho_reduced: DensityMatrix, x_axis=None, p_axis=None) -> WignerGrid:
    """Displaced-parity Wigner function of a reduced single-mode state.

    Uses the identity D(a) Pi D(a)^dag = D(2a) Pi, so each grid point needs
    only the support block of one displacement operator.  Displacements are
    evaluated in a zero-padded Fock space (see `_pad_dimension`): on the bare
    truncated space the parity sum of D(2a) is pure truncation noise for
    |2a|^2 beyond the cutoff, which is exactly the outer region of the grid.
    """
    mat = _single_mode_matrix(rho_reduced)
    if x_axis is None or p_axis is None:
        x_axis, p_axis = default_axes()
    x_axis = np.asarray(x_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    if x_axis.size == 0 or p_axis.size == 0 or not (
        np.all(np.isfinite(x_axis)) and np.all(np.isfinite(p_axis))
    ):
        raise ValueError("grid axes must be non-empty and finite")

    dim = mat.shape[0]
    alpha_max = float(np.sqrt(np.max(np.abs(x_axis)) ** 2 + np.max(np.abs(p_axis)) ** 2))
    pad = _pad_dimension(dim, alpha_max)

    # D(2 r e^{i theta}) = R(-theta) D(2r) R(-theta)^dag with phase rotations
    # R(-theta) = diag(e^{i k theta}); D(2r) = exp(2r (a - a^dag)) comes from
    # one eigendecomposition of the constant Hermitian generator i(a - a^dag).
    low = _single_mode_lowering(pad)
    evals, evecs = np.linalg.eigh(1j * (low - low.conj().T))
    rows = evecs[:dim, :]  # enough to form the support block of D(2 alpha)

    parity = (-1.0) ** np.arange(dim)
    rho_weighted = mat.T * parity[None, :]  # entry [m, n] = rho[n, m] (-1)^n for the trace

    values = np.empty((x_axis.size, p_axis.size))
    levels = np.arange(dim)
    for i, x in enumerate(x_axis):
        for j, p in enumerate(p_axis):
            r = np.hypot(x, p)
            theta = np.arctan2(p, x)
            block = (rows * np.exp(-2j * r * evals)) @ rows.conj().T
            phases = np.exp(1j * theta * levels)
            disp_block = phases[:, None] * block * phases.conj()[None, :]
            values[i, j] = (2.0 / np.pi) * float(np.real(np.sum(disp_block * rho_weighted)))
    return WignerGrid(x_axis, p_axis, values)


def negativity_volume(grid: WignerGrid) -> float:
    """Riemann sum of max(-W, 0): zero for Gaussian states, positive for Fock |1>."""
    return float(np.sum(np.maximum(-grid.values, 0.0)) * grid.cell_area())
