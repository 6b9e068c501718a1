"""
Oracle module for geodiscord.

This module contains an independent brute-force check of the bounds: it
searches over genuine von Neumann measurements on subsystem A, written as
columns of a unitary U, and evaluates the disturbance ‖ρ − Π(ρ)‖² directly.

- GD: minimize over all unitaries (random restarts, hill climbing with
  random two-level rotations of decaying angle).
- MIN: maximize over measurements that leave ρ_A invariant. If ρ_A has a
  simple spectrum, that is its eigenbasis; otherwise the search runs over
  unitaries that are block-diagonal on the degenerate eigenspaces.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import MeasurementCandidate, bound_pair
from .config import DEFAULT_ORACLE, DEFAULT_TOLERANCES, OracleConfig, Tolerances
from .errors import NotUnitary
from .reports import GapReport, OracleRecord
from .sampling import haar_unitary, stream
from .spectrum import hermitian_eig
from .states import BipartiteState, partial_trace

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class OracleResult:
    mode: str
    best_value: float
    best_measurement: MeasurementCandidate
    best_unitary: np.ndarray
    per_restart_values: np.ndarray
    per_restart_measurements: Tuple[MeasurementCandidate, ...]
    constraint_residual: Optional[float] = None

    def to_record(self) -> OracleRecord:
        return OracleRecord(
            mode=self.mode,
            best_value=self.best_value,
            per_restart_values=[float(v) for v in self.per_restart_values],
            constraint_residual=self.constraint_residual,
            best_measurement=self.best_measurement.to_record().model_copy(update={"value": self.best_value}),
        )


def measurement_from_unitary(u: np.ndarray, tol: Optional[Tolerances] = None) -> MeasurementCandidate:
    """
    Rank-1 projectors onto the columns of a unitary.

    Raises:
        NotUnitary: ‖U†U − I‖ exceeds the tolerance
    """
    tol = tol or DEFAULT_TOLERANCES
    u = np.asarray(u, dtype=complex)
    m = u.shape[0]
    residual = float(np.linalg.norm(u.conj().T @ u - np.eye(m))) if u.shape == (m, m) else np.inf
    if residual > tol.unitary:
        raise NotUnitary(f"matrix is not unitary (residual {residual:.3e})", invariant="unitary", residual=residual)
    ops = np.einsum("ak,bk->kab", u, u.conj())
    return MeasurementCandidate.from_operators(ops, tol)


def _block_matrices(s: BipartiteState) -> np.ndarray:
    """ρ regrouped as an n×n grid of m×m blocks: out[j, l, a, b] = ρ[(a, j), (b, l)]."""
    return s.rho.reshape(s.m, s.n, s.m, s.n).transpose(1, 3, 0, 2)


def _disturbances(purity: float, blocks: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Disturbance for a stack of unitaries u of shape (R, m, m)."""
    w = blocks[None] @ u[:, None, None]
    diag = np.sum(u.conj()[:, None, None] * w, axis=-2)
    return purity - np.sum(np.abs(diag) ** 2, axis=(1, 2, 3))


def disturbance(s: BipartiteState, u: np.ndarray) -> float:
    """
    ‖ρ − Π_U(ρ)‖² for the measurement onto the columns of U.

    Uses ‖ρ − Π(ρ)‖² = ‖ρ‖² − Σ_k ‖⟨u_k|ρ|u_k⟩_B‖².
    """
    u = np.asarray(u, dtype=complex)
    return float(_disturbances(s.purity, _block_matrices(s), u[None])[0])


def local_residual(rho_a: np.ndarray, u: np.ndarray) -> float:
    """‖Σ_k P_k ρ_A P_k − ρ_A‖ for P_k = |u_k⟩⟨u_k|."""
    diag = np.einsum("ak,ab,bk->k", u.conj(), rho_a, u)
    dephased = (u * diag) @ u.conj().T
    return float(np.linalg.norm(dephased - rho_a))


def degenerate_blocks(eigenvalues: Sequence[float], gap: float) -> List[List[int]]:
    """Group indices of sorted eigenvalues whose consecutive gaps are at most `gap`."""
    blocks: List[List[int]] = [[0]]
    for i in range(1, len(eigenvalues)):
        if abs(eigenvalues[i - 1] - eigenvalues[i]) <= gap:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def _rotations(m: int, pairs: Sequence[Pair], cfg: OracleConfig, rng: np.random.Generator) -> np.ndarray:
    """
    Every trial move of one restart, drawn up front from its stream.

    Move t is exp(iθH) with H = n·σ on the two basis states of a random pair,
    n a random unit vector and θ normal with scale initial_step·step_decay^t.
    Returns an (iterations, m, m) stack.
    """
    count = cfg.iterations
    chosen = np.asarray(pairs)[rng.integers(len(pairs), size=count)]
    direction = rng.standard_normal((count, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    angle = cfg.initial_step * cfg.step_decay ** np.arange(count) * rng.standard_normal(count)

    c, s = np.cos(angle), np.sin(angle)
    nx, ny, nz = direction.T
    t, p, q = np.arange(count), chosen[:, 0], chosen[:, 1]
    rot = np.broadcast_to(np.eye(m, dtype=complex), (count, m, m)).copy()
    rot[t, p, p] = c + 1j * s * nz
    rot[t, p, q] = 1j * s * (nx - 1j * ny)
    rot[t, q, p] = 1j * s * (nx + 1j * ny)
    rot[t, q, q] = c - 1j * s * nz
    return rot


def _search(s: BipartiteState,
            cfg: OracleConfig,
            mode: str,
            start: Callable[[np.random.Generator], np.ndarray],
            pairs: Sequence[Pair],
            maximize: bool) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    Hill climbing from every restart at once.

    Restart r draws its start and all of its moves from stream(seed, r), so
    its result does not depend on how many restarts run beside it.
    """
    rngs = [stream(cfg.seed, restart) for restart in range(cfg.restarts)]
    u = np.stack([start(rng) for rng in rngs])
    purity, blocks = s.purity, _block_matrices(s)
    values = _disturbances(purity, blocks, u)

    if pairs:
        moves = np.stack([_rotations(s.m, pairs, cfg, rng) for rng in rngs], axis=1)
        for move in moves:
            trial = u @ move
            trial_values = _disturbances(purity, blocks, trial)
            better = trial_values > values if maximize else trial_values < values
            u = np.where(better[:, None, None], trial, u)
            values = np.where(better, trial_values, values)

    for restart, value in enumerate(values):
        logger.debug(f"Oracle {mode} restart {restart}: {value:.12g}")
    return values, list(u)


def _result(mode: str, values: np.ndarray, unitaries: List[np.ndarray], maximize: bool,
            tol: Tolerances, residual: Optional[float] = None) -> OracleResult:
    best = int(np.argmax(values) if maximize else np.argmin(values))
    measurements = tuple(measurement_from_unitary(u, tol) for u in unitaries)
    return OracleResult(
        mode=mode,
        best_value=float(values[best]),
        best_measurement=measurements[best],
        best_unitary=unitaries[best],
        per_restart_values=values,
        per_restart_measurements=measurements,
        constraint_residual=residual,
    )


def oracle_gd(s: BipartiteState,
              cfg: Optional[OracleConfig] = None,
              tol: Optional[Tolerances] = None) -> OracleResult:
    """Numerically minimize the measurement disturbance over all von Neumann measurements on A."""
    cfg = cfg or DEFAULT_ORACLE
    tol = tol or DEFAULT_TOLERANCES
    m = s.m
    pairs = [(p, q) for p in range(m) for q in range(p + 1, m)]
    logger.info(f"Oracle GD search m={m} n={s.n}: {cfg.restarts} restarts x {cfg.iterations} iterations")
    values, unitaries = _search(s, cfg, "gd", lambda rng: haar_unitary(m, rng), pairs, maximize=False)
    return _result("gd", values, unitaries, False, tol)


def oracle_min(s: BipartiteState,
               cfg: Optional[OracleConfig] = None,
               tol: Optional[Tolerances] = None) -> OracleResult:
    """Numerically maximize the disturbance over measurements that leave ρ_A invariant."""
    cfg = cfg or DEFAULT_ORACLE
    tol = tol or DEFAULT_TOLERANCES
    m = s.m
    rho_a = partial_trace(s, "A")
    spectrum = hermitian_eig(rho_a, tol)
    eigvecs = spectrum.eigenvectors
    blocks = degenerate_blocks(spectrum.eigenvalues, tol.degeneracy_gap)

    if all(len(block) == 1 for block in blocks):
        value = disturbance(s, eigvecs)
        residual = local_residual(rho_a, eigvecs)
        logger.info(f"Oracle MIN: reduced state is nondegenerate, eigenbasis value {value:.12g}")
        return _result("min", np.array([value]), [eigvecs], True, tol, residual)

    pairs = [(block[i], block[j]) for block in blocks for i in range(len(block)) for j in range(i + 1, len(block))]

    def start(rng: np.random.Generator) -> np.ndarray:
        w = np.eye(m, dtype=complex)
        for block in blocks:
            if len(block) > 1:
                w[np.ix_(block, block)] = haar_unitary(len(block), rng)
        return eigvecs @ w

    logger.info(f"Oracle MIN search over degenerate blocks {[len(b) for b in blocks]}")
    values, unitaries = _search(s, cfg, "min", start, pairs, maximize=True)
    best = int(np.argmax(values))
    residual = local_residual(rho_a, unitaries[best])
    if residual > cfg.constraint_tolerance:
        logger.warning(f"MIN feasibility residual {residual:.3e} exceeds {cfg.constraint_tolerance:.1e}")
    return _result("min", values, unitaries, True, tol, residual)


def gap_report(s: BipartiteState,
               cfg: Optional[OracleConfig] = None,
               tol: Optional[Tolerances] = None,
               gd_result: Optional[OracleResult] = None,
               min_result: Optional[OracleResult] = None) -> GapReport:
    """
    Bounds against oracle values: gd_gap = oracle_gd − gd_lower, min_gap = min_upper − oracle_min.

    Oracle results already computed for the same state and config can be passed in.
    """
    gd_lower, min_upper = bound_pair(s, tol)
    best_gd = (gd_result or oracle_gd(s, cfg, tol)).best_value
    best_min = (min_result or oracle_min(s, cfg, tol)).best_value
    report = GapReport(
        gd_lower=gd_lower,
        oracle_gd=best_gd,
        min_upper=min_upper,
        oracle_min=best_min,
        gd_gap=best_gd - gd_lower,
        min_gap=min_upper - best_min,
    )
    logger.info(f"Gap report m={s.m} n={s.n}: gd_gap={report.gd_gap:.3e} min_gap={report.min_gap:.3e}")
    return report
