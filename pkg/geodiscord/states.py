"""
States module for geodiscord.

This module contains the bipartite and multi-qubit state types, their
validation, partial traces, the named Werner/isotropic families and seeded
random states.

Index convention: |i⟩_A ⊗ |j⟩_B is row i·n + j. For N qubits, qubit 1 is
the most significant bit of the amplitude index.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, SolverSettings, Tolerances
from .errors import BadParameter, DimensionMismatch, IndexOutOfRange, NotHermitian, NotNormalized, NotPSD, NotUnitTrace
from .sampling import Seed, ginibre, haar_vector, make_rng
from .spectrum import hermitian_eig

logger = logging.getLogger(__name__)

Side = Literal["A", "B"]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BipartiteState:
    """A validated m⊗n density matrix. Build it with validate_state."""

    m: int
    n: int
    rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.m * self.n

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.rho, self.rho)))


@dataclass(frozen=True)
class MultiQubitPureState:
    """Unit-norm pure state of N ≥ 2 qubits."""

    N: int
    amplitudes: np.ndarray

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex], tol: Optional[Tolerances] = None) -> "MultiQubitPureState":
        """
        Validate an amplitude vector of length 2^N.

        Raises:
            DimensionMismatch: length is not a power of two ≥ 4
            NotNormalized: Σ|amplitude|² differs from 1 by more than the tolerance
        """
        tol = tol or DEFAULT_TOLERANCES
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        size = amps.size
        N = size.bit_length() - 1
        if size < 4 or size != 2**N:
            raise DimensionMismatch(f"amplitude vector length {size} is not 2^N with N >= 2", invariant="length")
        norm_residual = abs(float(np.sum(np.abs(amps) ** 2)) - 1.0)
        if norm_residual > tol.normalization:
            raise NotNormalized(f"amplitudes are not normalized (|norm² - 1| = {norm_residual:.3e})",
                                invariant="unit norm", residual=norm_residual)
        return cls(N=N, amplitudes=_freeze(amps))


def validate_state(rho: np.ndarray, m: int, n: int,
                   tol: Optional[Tolerances] = None,
                   solver: Optional[SolverSettings] = None) -> BipartiteState:
    """
    Check that rho is an m⊗n density matrix.

    Args:
        rho: (m·n)×(m·n) complex matrix
        m: Dimension of subsystem A
        n: Dimension of subsystem B
        tol: Validation tolerances

    Returns:
        The validated BipartiteState (Hermitian part of rho, read-only)

    Raises:
        DimensionMismatch, NotHermitian, NotUnitTrace, NotPSD
    """
    tol = tol or DEFAULT_TOLERANCES
    if m < 2 or n < 2:
        raise DimensionMismatch(f"subsystem dimensions must be >= 2, got m={m}, n={n}", invariant="dimensions")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (m * n, m * n):
        raise DimensionMismatch(f"expected a {m * n}x{m * n} matrix for m={m}, n={n}, got {rho.shape}",
                                invariant="side m*n")

    herm_residual = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_residual > tol.hermitian:
        raise NotHermitian(f"rho is not Hermitian (max-abs residual {herm_residual:.3e})",
                           invariant="hermitian", residual=herm_residual)

    trace_residual = abs(complex(np.trace(rho)) - 1.0)
    if trace_residual > tol.trace:
        raise NotUnitTrace(f"rho does not have unit trace (|Tr - 1| = {trace_residual:.3e})",
                           invariant="unit trace", residual=trace_residual)

    rho = 0.5 * (rho + rho.conj().T)
    min_eig = float(hermitian_eig(rho, tol, solver).eigenvalues[-1])
    if min_eig < -tol.psd:
        raise NotPSD(f"rho is not positive semidefinite (min eigenvalue {min_eig:.3e})",
                     invariant="positive semidefinite", residual=min_eig)

    return BipartiteState(m=m, n=n, rho=_freeze(rho))


def partial_trace(s: BipartiteState, keep: Side) -> np.ndarray:
    """Reduced density matrix of side A (m×m) or side B (n×n)."""
    rho4 = s.rho.reshape(s.m, s.n, s.m, s.n)
    if keep == "A":
        return np.einsum("ajbj->ab", rho4)
    if keep == "B":
        return np.einsum("iaib->ab", rho4)
    raise BadParameter(f"keep must be 'A' or 'B', got {keep!r}", invariant="side")


def reduce_pure(s: MultiQubitPureState, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of the listed (1-based, increasing) qubits."""
    keep = [int(k) for k in keep]
    for k in keep:
        if not 1 <= k <= s.N:
            raise IndexOutOfRange(f"party index {k} outside 1..{s.N}", invariant="party index")
    traced = [q for q in range(1, s.N + 1) if q not in keep]
    psi = s.amplitudes.reshape((2,) * s.N)
    psi = np.transpose(psi, [k - 1 for k in keep] + [q - 1 for q in traced])
    mat = psi.reshape(2 ** len(keep), -1)
    return mat @ mat.conj().T


def reduce_pure_to_pair(s: MultiQubitPureState, i: int, k: int,
                        tol: Optional[Tolerances] = None) -> BipartiteState:
    """Two-qubit reduced state of parties (i, k), 1 ≤ i < k ≤ N."""
    if not 1 <= i < k <= s.N:
        raise IndexOutOfRange(f"need 1 <= i < k <= {s.N}, got i={i}, k={k}", invariant="party index")
    return validate_state(reduce_pure(s, [i, k]), 2, 2, tol)


def density_from_pure(psi: np.ndarray, m: int, n: int, tol: Optional[Tolerances] = None) -> BipartiteState:
    psi = np.asarray(psi, dtype=complex).ravel()
    return validate_state(np.outer(psi, psi.conj()), m, n, tol)


def pure_state_gd(psi: np.ndarray, m: int, n: int) -> float:
    """
    Exact geometric discord of a bipartite pure state, 1 - Σ s_i⁴ over its Schmidt coefficients.

    For m = 2 this is 2·det(ρ_A).
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != m * n:
        raise DimensionMismatch(f"expected {m * n} amplitudes, got {psi.size}", invariant="length")
    s = np.linalg.svd(psi.reshape(m, n), compute_uv=False)
    weights = s**2 / np.sum(s**2)
    return float(1.0 - np.sum(weights**2))


def swap_operator(m: int) -> np.ndarray:
    """F = Σ_kl |k⟩⟨l| ⊗ |l⟩⟨k| on C^m ⊗ C^m."""
    f = np.zeros((m * m, m * m))
    for k in range(m):
        for l in range(m):
            f[k * m + l, l * m + k] = 1.0
    return f


def maximally_entangled(m: int) -> np.ndarray:
    """|Ψ⟩ = Σ_k |kk⟩ / √m."""
    psi = np.zeros(m * m)
    psi[[k * m + k for k in range(m)]] = 1.0
    return psi / np.sqrt(m)


def maximally_mixed(m: int, n: int) -> BipartiteState:
    return validate_state(np.eye(m * n) / (m * n), m, n)


def make_werner(m: int, z: float, tol: Optional[Tolerances] = None) -> BipartiteState:
    """Werner state ((m−z)·I + (mz−1)·F) / (m³−m), z ∈ [−1, 1]."""
    if m < 2:
        raise BadParameter(f"Werner states need m >= 2, got {m}", invariant="m")
    if not -1.0 <= z <= 1.0:
        raise BadParameter(f"Werner parameter z must lie in [-1, 1], got {z}", invariant="z range")
    denom = m**3 - m
    rho = ((m - z) / denom) * np.eye(m * m) + ((m * z - 1) / denom) * swap_operator(m)
    return validate_state(rho, m, m, tol)


def make_isotropic(m: int, z: float, tol: Optional[Tolerances] = None) -> BipartiteState:
    """Isotropic state ((1−z)·I + (m²z−1)·|Ψ⟩⟨Ψ|) / (m²−1), z ∈ [0, 1]."""
    if m < 2:
        raise BadParameter(f"isotropic states need m >= 2, got {m}", invariant="m")
    if not 0.0 <= z <= 1.0:
        raise BadParameter(f"isotropic parameter z must lie in [0, 1], got {z}", invariant="z range")
    psi = maximally_entangled(m)
    denom = m**2 - 1
    rho = ((1 - z) / denom) * np.eye(m * m) + ((m**2 * z - 1) / denom) * np.outer(psi, psi)
    return validate_state(rho, m, m, tol)


def random_state(m: int, n: int, rank: int, seed: Seed = None,
                 tol: Optional[Tolerances] = None) -> BipartiteState:
    """Seeded random m⊗n state G·G†/Tr(G·G†) with G an (m·n)×rank complex Gaussian matrix."""
    if m < 2 or n < 2:
        raise BadParameter(f"subsystem dimensions must be >= 2, got m={m}, n={n}", invariant="dimensions")
    if not 1 <= rank <= m * n:
        raise BadParameter(f"rank must lie in 1..{m * n}, got {rank}", invariant="rank")
    g = ginibre(m * n, rank, make_rng(seed))
    rho = g @ g.conj().T
    return validate_state(rho / np.trace(rho).real, m, n, tol)


def random_pure(dims: Sequence[int], seed: Seed = None) -> np.ndarray:
    """Haar-random unit vector on the tensor product of the given dimensions."""
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise BadParameter(f"dimensions must be positive, got {dims}", invariant="dimensions")
    return haar_vector(int(np.prod(dims)), seed)
