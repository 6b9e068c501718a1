"""
Monogamy module for geodiscord.

This module contains the N-qubit pure-state families (generalized GHZ,
generalized W, SLOCC-W, Schmidt-decomposable and a family that violates
monogamy), and checks the monogamy inequality of geometric discord
anchored at qubit 1:

    Σ_{k=2..N} D(ρ_1k) ≤ D(ρ_1|2..N) = 2·det(ρ_1)

Pair discords go through the generic 2⊗2 pipeline, which is exact for
qubits. The closed forms below are independent cross-checks.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from .bloch import decompose
from .bounds import candidate_measurement, certify_saturation, gd_lower_bound, relaxation
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import BadParameter, IndexOutOfRange, NotNormalized
from .reports import MonogamyReport
from .states import MultiQubitPureState, reduce_pure, reduce_pure_to_pair

logger = logging.getLogger(__name__)


def _check_parties(N: int) -> None:
    if N < 3:
        raise BadParameter(f"monogamy families need N >= 3 qubits, got {N}", invariant="N")


def _check_norm(total: float, what: str, tol: Tolerances) -> None:
    residual = abs(total - 1.0)
    if residual > tol.normalization:
        raise NotNormalized(f"{what} are not normalized (|Σ - 1| = {residual:.3e})",
                            invariant="unit norm", residual=residual)


def _basis_index(N: int, ones: Sequence[int]) -> int:
    """Amplitude index of the product state with qubits `ones` (1-based) set to |1⟩."""
    return sum(2 ** (N - k) for k in ones)


def make_gghz(a: complex, b: complex, N: int, tol: Optional[Tolerances] = None) -> MultiQubitPureState:
    """a|0…0⟩ + b|1…1⟩."""
    tol = tol or DEFAULT_TOLERANCES
    _check_parties(N)
    _check_norm(abs(a) ** 2 + abs(b) ** 2, "GHZ coefficients", tol)
    amps = np.zeros(2**N, dtype=complex)
    amps[0] = a
    amps[-1] = b
    return MultiQubitPureState.from_amplitudes(amps, tol)


def make_gw(c: Sequence[float], N: int, tol: Optional[Tolerances] = None) -> MultiQubitPureState:
    """Σ_k c_k |0…1_k…0⟩."""
    return make_slocc_w(0.0, c, N, tol)


def make_slocc_w(c0: float, c: Sequence[float], N: int, tol: Optional[Tolerances] = None) -> MultiQubitPureState:
    """c0|0…0⟩ + Σ_k c_k |0…1_k…0⟩."""
    tol = tol or DEFAULT_TOLERANCES
    _check_parties(N)
    c = np.asarray(c, dtype=float)
    if c.shape != (N,):
        raise BadParameter(f"expected {N} W coefficients, got {c.size}", invariant="coefficient count")
    _check_norm(c0**2 + float(c @ c), "W coefficients", tol)
    amps = np.zeros(2**N, dtype=complex)
    amps[0] = c0
    for k in range(1, N + 1):
        amps[_basis_index(N, [k])] = c[k - 1]
    return MultiQubitPureState.from_amplitudes(amps, tol)


def make_counterexample(p: float, N: int, tol: Optional[Tolerances] = None) -> MultiQubitPureState:
    """√p|0…0⟩ + √(1−p)|+⟩|1…1⟩, which violates monogamy for p in (2/(N+1), (N−1)/(N+1))."""
    _check_parties(N)
    if not 0.0 <= p <= 1.0:
        raise BadParameter(f"p must lie in [0, 1], got {p}", invariant="p range")
    amps = np.zeros(2**N, dtype=complex)
    amps[0] = np.sqrt(p)
    tail = np.sqrt((1.0 - p) / 2.0)
    amps[_basis_index(N, range(2, N + 1))] = tail
    amps[-1] = tail
    return MultiQubitPureState.from_amplitudes(amps, tol)


def make_schmidt(weights: Sequence[float], N: int, tol: Optional[Tolerances] = None) -> MultiQubitPureState:
    """Σ_i √λ_i |i i … i⟩ over i ∈ {0, 1}; weights are the λ_i."""
    tol = tol or DEFAULT_TOLERANCES
    _check_parties(N)
    w = np.asarray(weights, dtype=float)
    if w.shape != (2,) or np.any(w < 0.0):
        raise BadParameter(f"qubit Schmidt weights must be two non-negative numbers, got {list(w)}",
                           invariant="weights")
    _check_norm(float(w.sum()), "Schmidt weights", tol)
    amps = np.zeros(2**N, dtype=complex)
    amps[0] = np.sqrt(w[0])
    amps[-1] = np.sqrt(w[1])
    return MultiQubitPureState.from_amplitudes(amps, tol)


def cut_discord(s: MultiQubitPureState) -> float:
    """GD across the cut 1|2…N of a pure state: 2·det(ρ_1)."""
    rho_1 = reduce_pure(s, [1])
    return float(2.0 * np.real(np.linalg.det(rho_1)))


def pair_discord(s: MultiQubitPureState, k: int, tol: Optional[Tolerances] = None) -> float:
    """Exact GD of ρ_1k (the 2⊗2 bound is saturated)."""
    if not 2 <= k <= s.N:
        raise IndexOutOfRange(f"pair index k must lie in 2..{s.N}, got {k}", invariant="party index")
    b = decompose(reduce_pure_to_pair(s, 1, k, tol))
    exact = certify_saturation(b, candidate_measurement(relaxation(b, tol=tol), tol), tol)
    if exact is None:
        logger.warning(f"Pair (1,{k}) candidate did not certify; returning the lower bound")
        return gd_lower_bound(b, tol)
    return exact


def monogamy_report(s: MultiQubitPureState, tol: Optional[Tolerances] = None) -> MonogamyReport:
    """Pair discords, cut discord and deficit for the inequality anchored at qubit 1."""
    tol = tol or DEFAULT_TOLERANCES
    _check_parties(s.N)
    pairs = [pair_discord(s, k, tol) for k in range(2, s.N + 1)]
    cut = cut_discord(s)
    lhs = float(np.sum(pairs))
    deficit = cut - lhs
    logger.info(f"Monogamy N={s.N}: lhs={lhs:.6g} rhs={cut:.6g} deficit={deficit:.3e}")
    return MonogamyReport(
        N=s.N,
        pair_discords=pairs,
        cut_discord=cut,
        lhs_sum=lhs,
        deficit=deficit,
        satisfied=deficit >= tol.deficit,
    )


def w_pair_discord_closed_form(c1: float, ck: float) -> float:
    """c₁²c_k² + ¼·min{4c₁²c_k², (1−2c₁²)² + (1−2c₁²−2c_k²)²} for a generalized W state."""
    if c1**2 + ck**2 > 1.0 + DEFAULT_TOLERANCES.normalization:
        raise BadParameter(f"c1² + ck² exceeds 1 ({c1**2 + ck**2})", invariant="coefficients")
    p = c1**2 * ck**2
    return p + 0.25 * min(4.0 * p, (1 - 2 * c1**2) ** 2 + (1 - 2 * c1**2 - 2 * ck**2) ** 2)


def _slocc_w_terms(c0: float, c1: float, ck: float) -> Tuple[float, float, float]:
    """(a, b, c) of the SLOCC-W spectrum; c = ‖x‖² + ‖T‖² − 8c₁²c_k²."""
    s0, s1, sk = c0**2, c1**2, ck**2
    a = (1 - 2 * s1) ** 2 - 2 * sk * (1 - s0 - sk - s1) + 4 * s1 * (s0 + sk)
    b = 8 * s1 * sk * (-((-1 + 2 * s0 + 2 * s1) ** 2) - 2 * (-1 + 3 * s0 + 2 * s1) * sk - 2 * sk**2) + a**2
    c = 8 * s0 * s1 + (1 - 2 * s1) ** 2 + 4 * s0 * sk + (1 - 2 * s1 - 2 * sk) ** 2
    return a, b, c


def slocc_w_spectrum(c0: float, c1: float, ck: float,
                     tol: Optional[Tolerances] = None) -> Tuple[float, float, float]:
    """
    Eigenvalues (4c₁²c_k², a + √b, a − √b) of xxᵗ + TTᵗ for ρ_1k of a SLOCC-W state.

    Raises:
        BadParameter: coefficients exceed unit norm, or b < 0 beyond tolerance
    """
    tol = tol or DEFAULT_TOLERANCES
    if c0**2 + c1**2 + ck**2 > 1.0 + tol.normalization:
        raise BadParameter(f"c0² + c1² + ck² exceeds 1 ({c0**2 + c1**2 + ck**2})", invariant="coefficients")
    a, b, _ = _slocc_w_terms(c0, c1, ck)
    if b < tol.spectrum_discriminant:
        raise BadParameter(f"negative discriminant b = {b:.3e}; coefficients are inconsistent",
                           invariant="discriminant", residual=b)
    root = np.sqrt(max(b, 0.0))
    return 4 * c1**2 * ck**2, a + root, a - root


def slocc_w_discriminant_gap(c0: float, c1: float, ck: float) -> float:
    """b − (c − a)², which is non-negative for every consistent coefficient triple."""
    a, b, c = _slocc_w_terms(c0, c1, ck)
    return b - (c - a) ** 2


def slocc_w_pair_discord_closed_form(c0: float, c1: float, ck: float,
                                     tol: Optional[Tolerances] = None) -> float:
    """¼[‖x‖² + ‖T‖² − λ_max] with ‖x‖² + ‖T‖² = 8c₁²c_k² + c."""
    spectrum = slocc_w_spectrum(c0, c1, ck, tol)
    _, _, c = _slocc_w_terms(c0, c1, ck)
    return 0.25 * (8 * c1**2 * ck**2 + c - max(spectrum))


def counterexample_closed_form(p: float, N: int) -> Tuple[float, float]:
    """(Σ_k D(ρ_1k), D(ρ_1|2..N)) = ((N−1)/2·min{p², (1−p)²}, p(1−p))."""
    _check_parties(N)
    return 0.5 * (N - 1) * min(p * p, (1 - p) ** 2), p * (1 - p)


def violation_interval(N: int) -> Tuple[float, float]:
    """Open interval of p on which the counterexample family violates monogamy."""
    _check_parties(N)
    return 2.0 / (N + 1), (N - 1.0) / (N + 1)
