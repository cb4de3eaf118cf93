"""Figure rendering for zenoblockade simulation outputs.

Consumes only the simulator's documented file formats (probabilities.csv,
wigner_final.csv, torus.csv); it never imports the simulator itself.
"""

from .figures import (
    FigureRequest,
    plot_probabilities,
    plot_torus,
    plot_wigner,
    symmetric_limits,
)
from .io import (
    ProbabilitySeries,
    TorusData,
    ValidationError,
    WignerData,
    discover_runs,
    read_probabilities,
    read_torus,
    read_wigner,
)

__all__ = [
    "FigureRequest",
    "ProbabilitySeries",
    "TorusData",
    "ValidationError",
    "WignerData",
    "discover_runs",
    "plot_probabilities",
    "plot_torus",
    "plot_wigner",
    "read_probabilities",
    "read_torus",
    "read_wigner",
    "symmetric_limits",
]
__version__ = "0.1.0"
