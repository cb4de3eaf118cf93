"""Dense operator algebra on a truncated two-mode (optical x mechanical) Fock space.

Basis ordering is row-major in the pair (photon number n, phonon number m):

    index(n, m) = n * (cutoff_b + 1) + m

so the phonon index runs fastest.  All operators and states are dense complex
numpy arrays tagged with the `HilbertSpec` they act on.  Values are treated as
immutable after construction; every function here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

OPTICAL = "optical"
MECHANICAL = "mechanical"
MODES = (OPTICAL, MECHANICAL)

# Tolerances used when verifying declared structure.
HERMITICITY_RTOL = 1e-12
DENSITY_HERM_ATOL = 1e-10
DENSITY_TRACE_ATOL = 1e-8
DENSITY_EIG_ATOL = 1e-8


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


@dataclass(frozen=True)
class HilbertSpec:
    """Truncation cutoffs of the composite Fock basis.

    The optical mode keeps photon numbers 0..cutoff_a, the mechanical mode
    phonon numbers 0..cutoff_b.  A cutoff of 0 freezes that mode in |0>,
    which is how reduced single-mode states are represented.
    """

    cutoff_a: int
    cutoff_b: int

    def __post_init__(self):
        if self.cutoff_a < 0 or self.cutoff_b < 0:
            raise ValueError("cutoffs must be non-negative integers")

    @property
    def dim_a(self) -> int:
        return self.cutoff_a + 1

    @property
    def dim_b(self) -> int:
        return self.cutoff_b + 1

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def cutoff(self, mode) -> int:
        _check_mode(mode)
        return self.cutoff_a if mode == OPTICAL else self.cutoff_b

    def index(self, n: int, m: int) -> int:
        """Composite basis index of |n> x |m|>."""
        if not (0 <= n <= self.cutoff_a and 0 <= m <= self.cutoff_b):
            raise ValueError(f"(n={n}, m={m}) outside cutoffs {self}")
        return n * self.dim_b + m

    def quantum_numbers(self, index: int) -> tuple[int, int]:
        """Inverse of `index`: (n, m) of a composite basis index."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index} outside dimension {self.dim}")
        return divmod(index, self.dim_b)

    def basis_labels(self):
        """All (n, m) pairs in basis order."""
        return [self.quantum_numbers(i) for i in range(self.dim)]

    def incremented(self, by: int = 2) -> "HilbertSpec":
        """Spec with both cutoffs raised, used for truncation-convergence checks."""
        return HilbertSpec(self.cutoff_a + by, self.cutoff_b + by)


@dataclass(frozen=True)
class Operator:
    """Dense operator on the composite space, optionally verified Hermitian."""

    space: HilbertSpec
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (self.space.dim, self.space.dim):
            raise ValueError(
                f"matrix shape {mat.shape} does not match space dimension {self.space.dim}"
            )
        object.__setattr__(self, "matrix", mat)
        if self.hermitian:
            scale = np.max(np.abs(mat))
            defect = np.max(np.abs(mat - mat.conj().T))
            if scale > 0 and defect >= HERMITICITY_RTOL * scale:
                raise ValueError(
                    f"operator declared Hermitian but max|A - A^dag| = {defect:.3e} "
                    f"exceeds {HERMITICITY_RTOL:.0e} * max|A| = {HERMITICITY_RTOL * scale:.3e}"
                )

    def dagger(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T, hermitian=self.hermitian)


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix on the composite space.

    Construction only checks the shape; call `validate()` (or build through the
    factories in this module, which do) to enforce Hermiticity, unit trace and
    positivity within tolerance.
    """

    space: HilbertSpec
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (self.space.dim, self.space.dim):
            raise ValueError(
                f"matrix shape {mat.shape} does not match space dimension {self.space.dim}"
            )
        object.__setattr__(self, "matrix", mat)

    def validate(
        self,
        trace_atol: float = DENSITY_TRACE_ATOL,
        herm_atol: float = DENSITY_HERM_ATOL,
        eig_atol: float = DENSITY_EIG_ATOL,
    ) -> "DensityMatrix":
        """Check Hermiticity, trace and positivity; returns self for chaining."""
        herm_defect = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if herm_defect > herm_atol:
            raise ValueError(f"density matrix not Hermitian: defect {herm_defect:.3e}")
        trace_defect = abs(self.matrix.trace() - 1.0)
        if trace_defect > trace_atol:
            raise ValueError(f"density matrix trace off by {trace_defect:.3e}")
        min_eig = float(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))[0])
        if min_eig < -eig_atol:
            raise ValueError(f"density matrix has negative eigenvalue {min_eig:.3e}")
        return self

    def trace(self) -> complex:
        return self.matrix.trace()


def _single_mode_lowering(dim: int) -> np.ndarray:
    """<k-1| a |k> = sqrt(k) on a dim-dimensional truncated ladder."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def _embed(space: HilbertSpec, mode, single: np.ndarray) -> np.ndarray:
    """Tensor a single-mode matrix with the identity of the other mode."""
    if mode == OPTICAL:
        return np.kron(single, np.eye(space.dim_b, dtype=complex))
    return np.kron(np.eye(space.dim_a, dtype=complex), single)


def identity(space: HilbertSpec) -> Operator:
    return Operator(space, np.eye(space.dim, dtype=complex), hermitian=True)


def annihilation(space: HilbertSpec, mode) -> Operator:
    """Lowering operator of one mode embedded in the composite basis."""
    _check_mode(mode)
    dim = space.dim_a if mode == OPTICAL else space.dim_b
    return Operator(space, _embed(space, mode, _single_mode_lowering(dim)))


def creation(space: HilbertSpec, mode) -> Operator:
    return annihilation(space, mode).dagger()


def number(space: HilbertSpec, mode) -> Operator:
    """Number operator with exact integer diagonal (no sqrt round-off)."""
    _check_mode(mode)
    na = np.arange(space.dim_a, dtype=float)
    mb = np.arange(space.dim_b, dtype=float)
    if mode == OPTICAL:
        diag = np.repeat(na, space.dim_b)
    else:
        diag = np.tile(mb, space.dim_a)
    return Operator(space, np.diag(diag).astype(complex), hermitian=True)


def tensor_number_product(space: HilbertSpec) -> Operator:
    """Cross-Kerr coupling operator: diagonal n*m at index(n, m)."""
    na = np.arange(space.dim_a, dtype=float)
    mb = np.arange(space.dim_b, dtype=float)
    diag = np.outer(na, mb).ravel()
    return Operator(space, np.diag(diag).astype(complex), hermitian=True)


def displacement(space: HilbertSpec, mode, alpha: complex) -> Operator:
    """exp(alpha* a - alpha a^dag) on one mode, identity on the other.

    Unitary up to truncation error; callers must keep |alpha|^2 well below the
    targeted mode's cutoff (the top ladder rows are where the error lives).
    """
    _check_mode(mode)
    dim = space.dim_a if mode == OPTICAL else space.dim_b
    low = _single_mode_lowering(dim)
    gen = np.conj(alpha) * low - alpha * low.conj().T
    return Operator(space, _embed(space, mode, expm(gen)))


def basis_state(space: HilbertSpec, n: int, m: int) -> np.ndarray:
    """State vector |n> x |m> in the composite basis."""
    vec = np.zeros(space.dim, dtype=complex)
    vec[space.index(n, m)] = 1.0
    return vec


def density_from_state(space: HilbertSpec, vec: np.ndarray) -> DensityMatrix:
    vec = np.asarray(vec, dtype=complex)
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("cannot form a density matrix from the zero vector")
    vec = vec / norm
    return DensityMatrix(space, np.outer(vec, vec.conj())).validate()


def fock_density(space: HilbertSpec, n: int, m: int) -> DensityMatrix:
    return density_from_state(space, basis_state(space, n, m))


def vacuum_density(space: HilbertSpec) -> DensityMatrix:
    """Ground state |0><0| x |0><0|."""
    return fock_density(space, 0, 0)


def thermal_density(space: HilbertSpec, nbar_a: float, nbar_b: float) -> DensityMatrix:
    """Product of truncated (renormalized) geometric thermal states."""

    def geometric(dim, nbar):
        if nbar < 0:
            raise ValueError("mean occupation must be non-negative")
        if nbar == 0:
            p = np.zeros(dim)
            p[0] = 1.0
        else:
            q = nbar / (1.0 + nbar)
            p = q ** np.arange(dim) / (1.0 + nbar)
            p = p / p.sum()  # renormalize over the kept levels
        return p

    diag = np.outer(geometric(space.dim_a, nbar_a), geometric(space.dim_b, nbar_b)).ravel()
    return DensityMatrix(space, np.diag(diag).astype(complex)).validate()


def partial_trace_mechanical(rho: DensityMatrix) -> DensityMatrix:
    """Reduced state of the mechanical mode, rho_B = Tr_optical(rho).

    The result lives on HilbertSpec(0, cutoff_b); trace is preserved exactly
    (up to floating-point summation) and Hermiticity exactly.
    """
    space = rho.space
    r4 = rho.matrix.reshape(space.dim_a, space.dim_b, space.dim_a, space.dim_b)
    reduced = np.einsum("nanb->ab", r4)
    return DensityMatrix(HilbertSpec(0, space.cutoff_b), reduced)


def partial_trace_optical(rho: DensityMatrix) -> DensityMatrix:
    """Reduced state of the optical mode, rho_A = Tr_mechanical(rho)."""
    space = rho.space
    r4 = rho.matrix.reshape(space.dim_a, space.dim_b, space.dim_a, space.dim_b)
    reduced = np.einsum("ambm->ab", r4)
    return DensityMatrix(HilbertSpec(space.cutoff_a, 0), reduced)
