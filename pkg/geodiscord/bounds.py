"""
Bounds module for geodiscord.

This module contains the eigenvalue relaxation of the geometric-discord
optimization: the lower bound on GD, the upper bound on MIN, the candidate
optimal measurement built from an orthogonal completion (Helmert by
default), saturation certification and the Werner/isotropic closed forms.

With G = (2/m)·x·xᵗ + (4/mn)·T·Tᵗ and λ↓ its eigenvalues,

    GD ≥ (1/mn)[(2/m)‖x‖² + (4/mn)‖T‖² − Σ_{k<m} λ_k↓]
    MIN ≤ (4/m²n²) Σ_{k≤m²−m} λ_k↓(T·Tᵗ)
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import hadamard

from .bloch import BlochForm, c_matrix, decompose, gell_mann_basis, orthonormal_operators
from .config import (DEFAULT_BOUNDS, DEFAULT_SOLVER, DEFAULT_TOLERANCES, BoundsSettings, SolverSettings,
                     Tolerances)
from .errors import BadParameter, InvalidMeasurement
from .reports import BoundsReport, MeasurementRecord, OperatorRecord
from .spectrum import Spectrum, hermitian_eig
from .states import BipartiteState

logger = logging.getLogger(__name__)

_PROJECTION_FLOOR = 1e-8


@dataclass(frozen=True)
class RelaxationData:
    """G, its spectrum, the completion U_{m−1} and the rows a_k of the relaxed optimum."""

    m: int
    n: int
    G: np.ndarray
    spectrum: Spectrum
    a_vectors: np.ndarray
    helmert: np.ndarray


@dataclass(frozen=True)
class MeasurementCandidate:
    """
    m Hermitian unit-trace operators with validity flags.

    valid() holds when every operator is PSD and idempotent, i.e. the set is a
    rank-1 von Neumann measurement.
    """

    operators: np.ndarray
    trace_one: bool
    psd: Tuple[bool, ...]
    idempotent: Tuple[bool, ...]
    complete: bool
    min_eigenvalues: Tuple[float, ...]
    idempotency_residuals: Tuple[float, ...]

    @property
    def m(self) -> int:
        return self.operators.shape[0]

    def valid(self) -> bool:
        return self.trace_one and self.complete and all(self.psd) and all(self.idempotent)

    @classmethod
    def from_operators(cls, operators: np.ndarray,
                       tol: Optional[Tolerances] = None,
                       solver: Optional[SolverSettings] = None) -> "MeasurementCandidate":
        tol = tol or DEFAULT_TOLERANCES
        ops = np.array(operators, dtype=complex)
        ops.setflags(write=False)
        m = ops.shape[1]
        traces = np.real(np.einsum("kaa->k", ops))
        min_eigs = tuple(float(hermitian_eig(op, tol, solver).eigenvalues[-1]) for op in ops)
        idem = tuple(float(np.linalg.norm(op @ op - op)) for op in ops)
        return cls(
            operators=ops,
            trace_one=bool(np.all(np.abs(traces - 1.0) <= tol.completeness)),
            psd=tuple(e >= -tol.measurement_psd for e in min_eigs),
            idempotent=tuple(r <= tol.idempotent for r in idem),
            complete=bool(np.max(np.abs(ops.sum(axis=0) - np.eye(m))) <= tol.completeness),
            min_eigenvalues=min_eigs,
            idempotency_residuals=idem,
        )

    def to_record(self) -> MeasurementRecord:
        return MeasurementRecord(
            operators=[
                OperatorRecord(
                    re=np.real(op).tolist(),
                    im=np.imag(op).tolist(),
                    psd=psd,
                    idempotent=idem,
                    min_eigenvalue=e,
                    idempotency_residual=r,
                )
                for op, psd, idem, e, r in zip(self.operators, self.psd, self.idempotent,
                                               self.min_eigenvalues, self.idempotency_residuals)
            ],
            trace_one=self.trace_one,
            complete=self.complete,
            valid=self.valid(),
        )


def helmert_matrix(k: int) -> np.ndarray:
    """
    k×k orthogonal Helmert matrix with normalized columns.

    Column j < k−1 is (1, …, 1, −(j+1), 0, …, 0) with j+1 leading ones; the
    last column is (1, …, 1)/√k.
    """
    if k < 1:
        raise BadParameter(f"Helmert matrix needs k >= 1, got {k}", invariant="k")
    u = np.zeros((k, k))
    for j in range(k - 1):
        u[: j + 1, j] = 1.0
        u[j + 1, j] = -(j + 1)
    u[:, k - 1] = 1.0
    return u / np.linalg.norm(u, axis=0)


def hadamard_completion(k: int) -> np.ndarray:
    """Normalized Sylvester Hadamard matrix with its all-ones column moved last (k ∈ {1, 2, 4, 8})."""
    if k not in (1, 2, 4, 8):
        raise BadParameter(f"Hadamard completion is available for orders 1, 2, 4, 8; got {k}",
                           invariant="hadamard order")
    h = hadamard(k).astype(float)
    return np.roll(h, -1, axis=1) / np.sqrt(k)


def _completion(k: int, settings: BoundsSettings) -> np.ndarray:
    if settings.orthogonal_completion == "hadamard":
        return hadamard_completion(k)
    return helmert_matrix(k)


def _top_rows(spectrum: Spectrum, k: int, preferred: Sequence[int], tol: Tolerances) -> np.ndarray:
    """
    Orthonormal basis of the top-k eigenspace of G, as rows.

    When the k-th eigenvalue is degenerate the eigensolver's basis of that
    eigenspace is arbitrary. It is replaced by the projections of the
    `preferred` coordinate vectors, in order, orthonormalized; the solver's
    eigenvectors fill in once the projections are exhausted.
    """
    w, v = spectrum.eigenvalues, spectrum.eigenvectors
    width = tol.equal_eigenvalues * max(1.0, abs(float(w[0])))
    cluster = np.flatnonzero(np.abs(w - w[k - 1]) <= width)
    lo, hi = int(cluster[0]), int(cluster[-1]) + 1
    if hi - lo == 1:
        return v[:, :k].T

    block = v[:, lo:hi]
    candidates = [block @ block[p, :].conj() for p in preferred] + list(block.T)
    chosen: List[np.ndarray] = []
    for vec in candidates:
        for u in chosen:
            vec = vec - u * np.vdot(u, vec)
        norm = float(np.linalg.norm(vec))
        if norm > _PROJECTION_FLOOR:
            chosen.append(vec / norm)
        if len(chosen) == k - lo:
            break
    logger.debug(f"G eigenvalue {w[k - 1]:.6g} has multiplicity {hi - lo}; basis fixed by the diagonal generators")
    return np.column_stack([v[:, :lo]] + chosen).T


def relaxation(b: BlochForm,
               settings: Optional[BoundsSettings] = None,
               tol: Optional[Tolerances] = None,
               solver: Optional[SolverSettings] = None) -> RelaxationData:
    """
    Build G, its spectrum and the rows a_k = r_k·Ṽ of the relaxed optimum.

    r_k is row k of U_{m−1} multiplied entrywise by (1, …, 1, 1/√m); Ṽ holds
    the top m−1 eigenvectors of G as rows. Inside a degenerate eigenspace
    those rows are taken along the diagonal generators, by increasing rank.
    """
    settings = settings or DEFAULT_BOUNDS
    tol = tol or DEFAULT_TOLERANCES
    m, n = b.m, b.n
    G = (2.0 / m) * np.outer(b.x, b.x) + (4.0 / (m * n)) * (b.T @ b.T.T)
    spectrum = hermitian_eig(G, tol, solver)

    u = _completion(m - 1, settings)
    scale = np.ones(m - 1)
    scale[-1] = 1.0 / np.sqrt(m)
    r = u * scale
    diagonal = range(m * m - m, m * m - 1)
    v_tilde = _top_rows(spectrum, m - 1, diagonal, tol)
    a_vectors = r @ v_tilde
    return RelaxationData(m=m, n=n, G=G, spectrum=spectrum, a_vectors=a_vectors, helmert=u)


def _gd_lower_raw(b: BlochForm, spectrum: Spectrum) -> float:
    m, n = b.m, b.n
    total = (2.0 / m) * float(b.x @ b.x) + (4.0 / (m * n)) * float(np.sum(b.T**2))
    return (total - float(np.sum(spectrum.top(m - 1)))) / (m * n)


def _clamp(raw: float, tol: Tolerances, what: str) -> float:
    if raw < 0.0:
        if raw < -tol.clamp:
            logger.warning(f"{what} raw value {raw:.3e} is below the clamp tolerance {tol.clamp:.1e}")
        else:
            logger.debug(f"Clamped {what} raw value {raw:.3e} to 0")
        return 0.0
    return raw


def gd_lower_bound(b: BlochForm,
                   tol: Optional[Tolerances] = None,
                   solver: Optional[SolverSettings] = None) -> float:
    """Lower bound on geometric discord, clamped at 0."""
    tol = tol or DEFAULT_TOLERANCES
    G = (2.0 / b.m) * np.outer(b.x, b.x) + (4.0 / (b.m * b.n)) * (b.T @ b.T.T)
    return _clamp(_gd_lower_raw(b, hermitian_eig(G, tol, solver)), tol, "GD lower bound")


def min_upper_bound(b: BlochForm,
                    tol: Optional[Tolerances] = None,
                    solver: Optional[SolverSettings] = None) -> float:
    """Upper bound on MIN: (4/m²n²)·(sum of the m²−m largest eigenvalues of T·Tᵗ)."""
    tol = tol or DEFAULT_TOLERANCES
    m, n = b.m, b.n
    spectrum = hermitian_eig(b.T @ b.T.T, tol, solver)
    raw = (4.0 / (m * m * n * n)) * float(np.sum(spectrum.top(m * m - m)))
    return _clamp(raw, tol, "MIN upper bound")


def isometry_lower_bound(b: BlochForm,
                         tol: Optional[Tolerances] = None,
                         solver: Optional[SolverSettings] = None) -> float:
    """Weaker GD lower bound keeping only AAᵗ = I: Tr(CCᵗ) − (sum of the m largest eigenvalues of CCᵗ)."""
    tol = tol or DEFAULT_TOLERANCES
    c = c_matrix(b).entries
    cc = c @ c.T
    spectrum = hermitian_eig(cc, tol, solver)
    raw = float(np.trace(cc)) - float(np.sum(spectrum.top(b.m)))
    return _clamp(raw, tol, "isometry lower bound")


def candidate_measurement(r: RelaxationData,
                          tol: Optional[Tolerances] = None,
                          solver: Optional[SolverSettings] = None) -> MeasurementCandidate:
    """op_k = I/m + (1/√2)·a_k·λ for k < m, op_m = I − Σ op_k, with validity flags."""
    m = r.m
    lambdas = gell_mann_basis(m).lambdas
    ops = [np.eye(m) / m + np.einsum("i,iab->ab", a_k, lambdas) / np.sqrt(2.0) for a_k in r.a_vectors]
    ops.append(np.eye(m) - np.sum(ops, axis=0))
    return MeasurementCandidate.from_operators(np.array(ops), tol, solver)


def certify_saturation(b: BlochForm, c: MeasurementCandidate,
                       tol: Optional[Tolerances] = None,
                       solver: Optional[SolverSettings] = None) -> Optional[float]:
    """
    Exact GD when the candidate is a genuine rank-1 measurement, otherwise None.

    A valid candidate attains the relaxed optimum, so the lower bound is the
    minimum. For m = 2 the candidate is always valid.
    """
    if not c.valid():
        if b.m == 2:
            logger.warning("2xn candidate failed validation; this indicates a numerical problem")
        else:
            worst = min(c.min_eigenvalues)
            logger.info(f"Candidate measurement for m={b.m} is not a projective measurement "
                        f"(min eigenvalue {worst:.3e}); GD stays bounded only")
        return None
    return gd_lower_bound(b, tol, solver)


def _closed_form(m: int, z: float, coefficient: float, lo: float, family: str) -> float:
    if m < 2:
        raise BadParameter(f"{family} states need m >= 2, got {m}", invariant="m")
    if not lo <= z <= 1.0:
        raise BadParameter(f"{family} parameter z must lie in [{lo:g}, 1], got {z}", invariant="z range")
    return (coefficient * z - 1.0) ** 2 / (m * (m - 1) * (m + 1) ** 2)


def werner_gd(m: int, z: float) -> float:
    """GD = MIN = (mz−1)²/(m(m−1)(m+1)²) for the m⊗m Werner state."""
    return _closed_form(m, z, float(m), -1.0, "Werner")


def isotropic_gd(m: int, z: float) -> float:
    """GD = MIN = (m²z−1)²/(m(m−1)(m+1)²) for the m⊗m isotropic state."""
    return _closed_form(m, z, float(m * m), 0.0, "isotropic")


def measurement_matrix(c: MeasurementCandidate) -> np.ndarray:
    """A with a_ki = Tr(op_k X_i) in the orthonormal basis X_1 = I/√m, X_{i+1} = λ_i/√2."""
    basis = orthonormal_operators(c.m)
    return np.real(np.einsum("kab,iba->ki", c.operators, basis))


def measurement_value(s: BipartiteState, c: MeasurementCandidate,
                      tol: Optional[Tolerances] = None) -> float:
    """
    Disturbance ‖ρ − Σ_k (op_k⊗I)ρ(op_k⊗I)‖² of a von Neumann measurement on A.

    The direct value is checked against Tr(CCᵗ) − Tr(ACCᵗAᵗ).

    Raises:
        InvalidMeasurement: c is not a valid measurement on an m-dimensional A,
            or the two evaluations disagree
    """
    tol = tol or DEFAULT_TOLERANCES
    if c.m != s.m or not c.valid():
        raise InvalidMeasurement(f"measurement on A must be a valid {s.m}-outcome von Neumann measurement",
                                 invariant="valid measurement")
    eye_b = np.eye(s.n)
    lifted = [np.kron(op, eye_b) for op in c.operators]
    measured = sum(p @ s.rho @ p for p in lifted)
    value = float(np.real(np.vdot(s.rho - measured, s.rho - measured)))

    cm = c_matrix(decompose(s)).entries
    a = measurement_matrix(c)
    ac = a @ cm
    identity_value = float(np.sum(cm**2) - np.sum(ac**2))
    residual = abs(value - identity_value)
    if residual > tol.value_identity:
        raise InvalidMeasurement(f"direct disturbance {value:.12g} disagrees with Tr(CCt) - Tr(ACCtAt) "
                                 f"= {identity_value:.12g}", invariant="value identity", residual=residual)
    return value


def bounds_report(s: BipartiteState,
                  settings: Optional[BoundsSettings] = None,
                  tol: Optional[Tolerances] = None,
                  solver: Optional[SolverSettings] = None) -> BoundsReport:
    """Run decomposition, relaxation, candidate construction and certification for one state."""
    tol = tol or DEFAULT_TOLERANCES
    solver = solver or DEFAULT_SOLVER
    b = decompose(s)
    r = relaxation(b, settings, tol, solver)
    raw = _gd_lower_raw(b, r.spectrum)
    gd_lower = _clamp(raw, tol, "GD lower bound")
    min_upper = min_upper_bound(b, tol, solver)
    candidate = candidate_measurement(r, tol, solver)
    gd_exact = certify_saturation(b, candidate, tol, solver)

    eig = r.spectrum.eigenvalues
    d_equals_n = bool(np.linalg.norm(b.x) <= tol.zero_vector
                      and float(eig[0] - eig[-1]) <= tol.equal_eigenvalues)
    min_exact = gd_exact if (d_equals_n and gd_exact is not None) else None

    logger.info(f"Bounds m={s.m} n={s.n}: gd_lower={gd_lower:.6g} min_upper={min_upper:.6g} "
                f"saturated={gd_exact is not None}")
    return BoundsReport(
        m=s.m,
        n=s.n,
        gd_lower=gd_lower,
        gd_lower_raw=raw,
        gd_isometry_lower=isometry_lower_bound(b, tol, solver),
        min_upper=min_upper,
        gd_exact=gd_exact,
        min_exact=min_exact,
        saturated=gd_exact is not None,
        d_equals_n_condition=d_equals_n,
        g_eigenvalues=[float(e) for e in eig],
        candidate=candidate.to_record(),
    )


def bound_pair(s: BipartiteState,
               tol: Optional[Tolerances] = None,
               solver: Optional[SolverSettings] = None) -> Tuple[float, float]:
    """(gd_lower, min_upper) without building the candidate."""
    b = decompose(s)
    return gd_lower_bound(b, tol, solver), min_upper_bound(b, tol, solver)


def a_rows_gram(r: RelaxationData) -> np.ndarray:
    """B_{m−1}·B_{m−1}ᵗ, which equals I − J/m for every completion."""
    return r.a_vectors @ r.a_vectors.T
