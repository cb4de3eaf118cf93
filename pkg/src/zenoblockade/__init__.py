"""Quantum Zeno blockade simulator for a driven two-mode cross-Kerr system.

Subpackages:

* `fock`        - truncated two-mode Fock algebra (operators, states, traces)
* `model`       - physical parameters, drives, rotating-frame Hamiltonians
* `zeno`        - spectra, degeneracy partitions, projected Hamiltonians
* `lindblad`    - thermal Lindblad master equation, fixed-step RK4 integrator
* `observables` - Fock probabilities, Wigner functions, negativity volume
* `presets`, `scenario`, `cli` - paper-scenario runner and reports
"""

from .fock import (
    MECHANICAL,
    OPTICAL,
    DensityMatrix,
    HilbertSpec,
    Operator,
    annihilation,
    creation,
    displacement,
    identity,
    number,
    partial_trace_mechanical,
    partial_trace_optical,
    tensor_number_product,
    thermal_density,
    vacuum_density,
)
from .lindblad import (
    IntegratorConfig,
    IntegratorError,
    LindbladModel,
    Trajectory,
    build_model,
    dissipator,
    evolve,
    rhs,
    thermal_channels,
)
from .model import (
    DriveTone,
    FrameSpec,
    RotatingHamiltonian,
    SystemParams,
    amplitude_from_power,
    blockade_frequency,
    hamiltonian_rotating,
    params_from_hz_over_2pi,
    power_from_amplitude,
    thermal_occupation,
)
from .observables import (
    WignerGrid,
    default_axes,
    fidelity_fock,
    fock_probabilities,
    negativity_volume,
    wigner,
)
from .zeno import (
    NonadiabaticCorrection,
    SpectrumTable,
    TorusCoordinates,
    ZenoPartition,
    closed_evolution,
    detect_subspaces,
    nonadiabatic_correction,
    rotating_spectrum,
    torus_coordinates,
    zeno_hamiltonian,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
