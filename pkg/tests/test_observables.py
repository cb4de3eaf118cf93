import numpy as np
import pytest

from zenoblockade.fock import (
    MECHANICAL,
    DensityMatrix,
    HilbertSpec,
    basis_state,
    density_from_state,
    displacement,
    fock_density,
    thermal_density,
    vacuum_density,
)
from zenoblockade.observables import (
    WignerGrid,
    default_axes,
    fidelity_fock,
    fock_probabilities,
    negativity_volume,
    wigner,
)

MECH = HilbertSpec(0, 12)


def coherent_state(space, beta):
    return density_from_state(
        space, displacement(space, MECHANICAL, beta).matrix @ basis_state(space, 0, 0)
    )


class TestFockProbabilities:
    def test_ground_state(self):
        probs = fock_probabilities(vacuum_density(MECH).validate(), 3)
        np.testing.assert_allclose(probs, [1.0, 0.0, 0.0, 0.0])

    def test_thermal_distribution(self):
        mbar = 0.267
        rho = thermal_density(MECH, 0.0, mbar)
        probs = fock_probabilities(rho, 2)
        assert probs[0] == pytest.approx(1.0 / (1.0 + mbar), abs=1e-4)
        # geometric ratio
        assert probs[1] / probs[0] == pytest.approx(mbar / (1.0 + mbar), rel=1e-6)

    def test_sums_to_one_over_full_cutoff(self):
        rho = thermal_density(MECH, 0.0, 0.5)
        probs = fock_probabilities(rho, MECH.cutoff_b)
        assert probs.sum() == pytest.approx(1.0, abs=1e-8)

    def test_rejects_beyond_cutoff(self):
        with pytest.raises(ValueError):
            fock_probabilities(vacuum_density(MECH), MECH.cutoff_b + 1)

    def test_rejects_composite_state(self):
        with pytest.raises(ValueError):
            fock_probabilities(vacuum_density(HilbertSpec(2, 2)), 1)

    def test_fidelity_equals_probability(self):
        rho = thermal_density(MECH, 0.0, 0.4)
        probs = fock_probabilities(rho, 3)
        for n in range(4):
            assert fidelity_fock(rho, n) == probs[n]

    def test_fidelity_pure_target(self):
        assert fidelity_fock(fock_density(MECH, 0, 1), 1) == pytest.approx(1.0)


class TestWigner:
    def test_vacuum_peak_and_normalization(self):
        grid = wigner(vacuum_density(MECH))
        center = grid.values[40, 40]
        assert center == pytest.approx(2.0 / np.pi, rel=1e-10)
        assert grid.values.max() == pytest.approx(center)
        assert grid.min_value() > -1e-12
        assert grid.integral() == pytest.approx(1.0, abs=1e-2)

    def test_fock_one_negative_at_origin(self):
        grid = wigner(fock_density(MECH, 0, 1))
        assert grid.values[40, 40] == pytest.approx(-2.0 / np.pi, rel=1e-10)
        assert grid.integral() == pytest.approx(1.0, abs=1e-2)

    def test_coherent_state_matches_gaussian(self):
        beta = 1.0 + 0.5j
        grid = wigner(coherent_state(MECH, beta))
        i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
        # peak within one grid cell of the displacement argument
        assert abs(grid.x_axis[i] - beta.real) <= grid.x_axis[1] - grid.x_axis[0]
        assert abs(grid.p_axis[j] - beta.imag) <= grid.p_axis[1] - grid.p_axis[0]
        xg, pg = np.meshgrid(grid.x_axis, grid.p_axis, indexing="ij")
        exact = (2.0 / np.pi) * np.exp(
            -2.0 * ((xg - beta.real) ** 2 + (pg - beta.imag) ** 2)
        )
        np.testing.assert_allclose(grid.values, exact, atol=1e-4)

    def test_phase_invariance(self):
        rho = coherent_state(MECH, 0.8)
        phased = DensityMatrix(MECH, np.exp(1j * 0.3) * rho.matrix * np.exp(-1j * 0.3))
        np.testing.assert_allclose(
            wigner(rho).values, wigner(phased).values, atol=1e-12
        )

    def test_displacement_equivariance(self):
        # W of the displaced state is the original W shifted by the argument
        # (cutoff 20 keeps the truncation error of D itself below the tolerance)
        space = HilbertSpec(0, 20)
        rho = fock_density(space, 0, 1)
        shift = 1.0  # one grid-aligned unit in x
        d = displacement(space, MECHANICAL, shift).matrix
        moved = DensityMatrix(space, d @ rho.matrix @ d.conj().T)
        axes = np.linspace(-4.0, 4.0, 81)
        w_base = wigner(rho, axes, axes)
        w_moved = wigner(moved, axes, axes)
        step = axes[1] - axes[0]
        cells = int(round(shift / step))
        np.testing.assert_allclose(
            w_moved.values[cells:, :], w_base.values[:-cells, :], atol=1e-8
        )

    def test_integral_of_high_fock_state(self):
        # well inside the default grid, the Riemann sum stays near 1
        grid = wigner(fock_density(MECH, 0, 8))
        assert grid.integral() == pytest.approx(1.0, abs=1e-2)

    def test_rejects_bad_axes(self):
        with pytest.raises(ValueError):
            wigner(vacuum_density(MECH), np.array([]), np.array([0.0]))
        with pytest.raises(ValueError):
            wigner(vacuum_density(MECH), np.array([0.0, np.inf]), np.array([0.0]))


class TestNegativityVolume:
    def test_vacuum_zero(self):
        assert negativity_volume(wigner(vacuum_density(MECH))) < 1e-10

    def test_fock_one_positive(self):
        # exact negative volume of |1>: 2 e^{-1/2} - 1 = 0.21306
        neg = negativity_volume(wigner(fock_density(MECH, 0, 1)))
        assert neg > 0.0
        assert neg == pytest.approx(2.0 * np.exp(-0.5) - 1.0, abs=2e-3)

    def test_coherent_state_zero(self):
        # residual negativity is the truncated-tail artifact, far below grid scale
        neg = negativity_volume(wigner(coherent_state(HilbertSpec(0, 16), 1.2)))
        assert neg < 1e-6


def test_default_axes_shape():
    x, p = default_axes()
    assert len(x) == 81 and len(p) == 81
    assert x[0] == -4.0 and x[-1] == 4.0


def test_wigner_grid_helpers():
    values = np.full((3, 3), 1.0 / 36.0)
    grid = WignerGrid(np.array([0.0, 1.0, 2.0]), np.array([0.0, 2.0, 4.0]), values)
    assert grid.cell_area() == pytest.approx(2.0)
    assert grid.integral() == pytest.approx(0.5)
