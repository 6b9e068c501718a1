"""
Hermitian eigensolver for geodiscord.

Every spectral quantity in the package (state positivity, the relaxation
matrix G, the correlation matrix TTᵗ, reduced states) goes through
hermitian_eig, so the ordering and phase conventions are the same
everywhere:

- eigenvalues are sorted non-increasing with a stable sort, so a degenerate
  eigenspace keeps the order the solver produced;
- each eigenvector is rotated so that its first component of largest
  absolute value is real and positive.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT_SOLVER, DEFAULT_TOLERANCES, SolverSettings, Tolerances
from .errors import DimensionMismatch, NotHermitian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (non-increasing) and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def ascending(self) -> np.ndarray:
        return self.eigenvalues[::-1]

    def top(self, k: int) -> np.ndarray:
        return self.eigenvalues[:k]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _jacobi(a: np.ndarray, tol: Tolerances) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Cyclic Jacobi diagonalization of a Hermitian matrix with complex rotations.

    Each pivot (p, q) is first made real by a phase on column q, then zeroed
    by a real plane rotation. Returns (diagonal, accumulated unitary, sweeps).
    """
    a = np.array(a, dtype=complex)
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    target = tol.jacobi_threshold * scale
    skip = target / max(d, 1)

    for sweep in range(tol.jacobi_max_sweeps + 1):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= target:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off-norm {off:.3e}, d={d})")
            return np.real(np.diag(a)).copy(), v, sweep
        if sweep == tol.jacobi_max_sweeps:
            break

        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                phase = np.conj(apq / mag)
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * phase, c * phase]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot

    logger.warning(f"Jacobi did not converge in {tol.jacobi_max_sweeps} sweeps (d={d}, off-norm {off:.3e})")
    return np.real(np.diag(a)).copy(), v, tol.jacobi_max_sweeps


def _fix_phases(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    for j in range(v.shape[1]):
        col = v[:, j]
        i = int(np.argmax(np.abs(col)))
        if abs(col[i]) > 0.0:
            v[:, j] = col * (np.conj(col[i]) / abs(col[i]))
    return v


def hermitian_eig(a: np.ndarray,
                  tol: Optional[Tolerances] = None,
                  solver: Optional[SolverSettings] = None) -> Spectrum:
    """
    Full eigendecomposition of a Hermitian (or real symmetric) matrix.

    Args:
        a: Square Hermitian matrix
        tol: Tolerances; `eig_hermitian` bounds the accepted asymmetry
        solver: Selects the cyclic Jacobi solver or LAPACK (numpy.linalg.eigh)

    Returns:
        Spectrum with non-increasing eigenvalues. Real input gives real
        eigenvectors.

    Raises:
        DimensionMismatch: a is not square
        NotHermitian: max-abs(a - a†) exceeds the tolerance
    """
    tol = tol or DEFAULT_TOLERANCES
    solver = solver or DEFAULT_SOLVER

    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}", invariant="square")
    residual = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if residual > tol.eig_hermitian:
        raise NotHermitian(f"matrix is not Hermitian (max-abs residual {residual:.3e})",
                           invariant="hermitian", residual=residual)
    real_input = np.isrealobj(a)
    herm = 0.5 * (a + a.conj().T)

    if solver.eigensolver == "lapack":
        w, v = np.linalg.eigh(herm)
    else:
        w, v, _ = _jacobi(herm, tol)

    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = _fix_phases(v[:, order])
    if real_input:
        v = np.real(v)
    return Spectrum(eigenvalues=w, eigenvectors=v)
