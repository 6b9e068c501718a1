"""
Bloch decomposition module for geodiscord.

This module contains the generalized Gell-Mann generators of SU(d) and the
decomposition of a bipartite state into local Bloch vectors x, y and the
correlation matrix T:

    ρ = (1/mn)[I⊗I + Σ x_i λ_i⊗I + Σ y_j I⊗λ_j + Σ T_ij λ_i⊗λ_j]

with Tr(λ_i λ_j) = 2δ_ij.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from .errors import BadParameter, DimensionMismatch
from .states import BipartiteState, partial_trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorBasis:
    """The d²−1 generalized Gell-Mann matrices, stacked as a (d²−1, d, d) array."""

    d: int
    lambdas: np.ndarray

    def expand(self, h: np.ndarray) -> np.ndarray:
        """Coefficients c_i = Tr(h λ_i)/2 of a traceless Hermitian h = Σ c_i λ_i."""
        return 0.5 * np.real(np.einsum("ab,iba->i", h, self.lambdas))

    def combine(self, coeffs: np.ndarray) -> np.ndarray:
        return np.einsum("i,iab->ab", coeffs, self.lambdas)


@dataclass(frozen=True)
class BlochForm:
    m: int
    n: int
    x: np.ndarray
    y: np.ndarray
    T: np.ndarray

    def purity(self) -> float:
        """Tr(ρ²) from the Bloch coefficients alone."""
        m, n = self.m, self.n
        return (1.0 / (m * n)) * (1.0 + (2.0 / m) * float(self.x @ self.x) + (2.0 / n) * float(self.y @ self.y)
                                  + (4.0 / (m * n)) * float(np.sum(self.T**2)))


@dataclass(frozen=True)
class CMatrix:
    """Coefficients c_ij = Tr(ρ X_i⊗Y_j) in the orthonormal bases X_1 = I/√m, X_{i+1} = λ_i/√2 (same for Y)."""

    entries: np.ndarray


@lru_cache(maxsize=None)
def _gell_mann_stack(d: int) -> np.ndarray:
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            mats.append(sym)
    for j in range(d):
        for k in range(j + 1, d):
            anti = np.zeros((d, d), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            mats.append(anti)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(np.sqrt(2.0 / (l * (l + 1))) * diag).astype(complex))
    stack = np.array(mats)
    stack.setflags(write=False)
    return stack


def gell_mann_basis(d: int) -> GeneratorBasis:
    """
    Generalized Gell-Mann generators of SU(d), normalized to Tr(λ²) = 2.

    Order: symmetric off-diagonal generators for pairs (j, k), j < k, in
    lexicographic order; then the antisymmetric ones in the same order; then
    the d−1 diagonal generators by increasing rank. For d = 2 this is
    (σ_x, σ_y, σ_z).
    """
    if d < 2:
        raise BadParameter(f"generator basis needs d >= 2, got {d}", invariant="d")
    return GeneratorBasis(d=d, lambdas=_gell_mann_stack(d))


def decompose(s: BipartiteState) -> BlochForm:
    """Bloch form (x, y, T) of a validated state."""
    m, n = s.m, s.n
    lam_a = gell_mann_basis(m).lambdas
    lam_b = gell_mann_basis(n).lambdas
    rho4 = s.rho.reshape(m, n, m, n)

    x = (m / 2.0) * np.real(np.einsum("ab,iba->i", partial_trace(s, "A"), lam_a))
    y = (n / 2.0) * np.real(np.einsum("ab,jba->j", partial_trace(s, "B"), lam_b))
    # Tr(ρ λ_i⊗λ_j) = Σ ρ[a,b,c,d] λ_i[c,a] λ_j[d,b]
    T = (m * n / 4.0) * np.real(np.einsum("abcd,ica,jdb->ij", rho4, lam_a, lam_b, optimize=True))
    return BlochForm(m=m, n=n, x=x, y=y, T=T)


def reconstruct(b: BlochForm) -> np.ndarray:
    """Matrix (1/mn)[I⊗I + x·λ⊗I + I⊗y·λ + Σ T_ij λ_i⊗λ_j]; PSD only if (x, y, T) came from a state."""
    m, n = b.m, b.n
    x, y, T = np.asarray(b.x), np.asarray(b.y), np.asarray(b.T)
    if x.shape != (m * m - 1,) or y.shape != (n * n - 1,) or T.shape != (m * m - 1, n * n - 1):
        raise DimensionMismatch(
            f"inconsistent Bloch form for m={m}, n={n}: x{x.shape}, y{y.shape}, T{T.shape}",
            invariant="bloch lengths")
    basis_a = gell_mann_basis(m)
    basis_b = gell_mann_basis(n)
    rho = np.kron(np.eye(m), np.eye(n)).astype(complex)
    rho += np.kron(basis_a.combine(x), np.eye(n))
    rho += np.kron(np.eye(m), basis_b.combine(y))
    corr = np.einsum("ij,iab,jcd->acbd", T, basis_a.lambdas, basis_b.lambdas, optimize=True)
    rho += corr.reshape(m * n, m * n)
    return rho / (m * n)


def c_matrix(b: BlochForm) -> CMatrix:
    """C = (1/√mn)[[1, √(2/n) yᵗ], [√(2/m) x, (2/√mn) T]]."""
    m, n = b.m, b.n
    c = np.zeros((m * m, n * n))
    c[0, 0] = 1.0
    c[0, 1:] = np.sqrt(2.0 / n) * b.y
    c[1:, 0] = np.sqrt(2.0 / m) * b.x
    c[1:, 1:] = (2.0 / np.sqrt(m * n)) * b.T
    return CMatrix(entries=c / np.sqrt(m * n))


def orthonormal_operators(d: int) -> np.ndarray:
    """The basis X_1 = I/√d, X_{i+1} = λ_i/√2 used by the C matrix, as a (d², d, d) array."""
    lambdas = gell_mann_basis(d).lambdas
    return np.concatenate([np.eye(d, dtype=complex)[None] / np.sqrt(d), lambdas / np.sqrt(2.0)])


def diagnostics(s: BipartiteState, b: BlochForm) -> Tuple[float, float]:
    """(purity identity residual, decompose→reconstruct max-abs residual)."""
    purity_residual = abs(b.purity() - s.purity)
    roundtrip_residual = float(np.max(np.abs(reconstruct(b) - s.rho)))
    logger.debug(f"Bloch diagnostics m={s.m} n={s.n}: purity {purity_residual:.2e}, roundtrip {roundtrip_residual:.2e}")
    return purity_residual, roundtrip_residual
