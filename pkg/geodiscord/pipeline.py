"""
Main pipeline module for geodiscord.

This module contains the pipeline class that builds states from named
families, runs decomposition, bounds, candidate construction, the oracle
and monogamy analysis on them, and evaluates parameter sweeps. The CLI is
a thin layer over it.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .bloch import decompose, diagnostics
from .bounds import (bounds_report, candidate_measurement, isotropic_gd, measurement_value, relaxation,
                     werner_gd)
from .config import (DEFAULT_BOUNDS, DEFAULT_ORACLE, DEFAULT_SOLVER, DEFAULT_TOLERANCES, BoundsSettings,
                     OracleConfig, SolverSettings, Tolerances)
from .errors import BadParameter, NotNormalized
from .monogamy import (counterexample_closed_form, make_counterexample, make_gghz, make_gw, make_schmidt,
                       make_slocc_w, monogamy_report)
from .oracle import OracleResult, gap_report, oracle_gd, oracle_min
from .reports import BlochRecord, BoundsReport, GapReport, MeasurementRecord, MonogamyReport, SweepRow
from .sampling import Seed, haar_vector, make_rng
from .states import (BipartiteState, MultiQubitPureState, density_from_pure, make_isotropic, make_werner,
                     maximally_entangled, maximally_mixed, random_state, validate_state)

logger = logging.getLogger(__name__)

BIPARTITE_FAMILIES = ("bell", "werner", "isotropic", "mixed", "product", "cq", "random")
MULTIQUBIT_FAMILIES = ("gghz", "gw", "slocc-w", "counterexample", "schmidt")
SWEEP_FAMILIES = ("werner", "isotropic", "counterexample")
SQUARE_FAMILIES = ("bell", "werner", "isotropic")


def _renormalize(values: Sequence[complex], squared: bool) -> Tuple[np.ndarray, float]:
    """Scale coefficients to unit norm (or weights to unit sum); returns (scaled, factor)."""
    v = np.asarray(values)
    total = float(np.sum(np.abs(v) ** 2)) if squared else float(np.sum(v))
    if total <= 0.0:
        raise NotNormalized(f"coefficients {list(v)} cannot be normalized", invariant="unit norm", residual=1.0)
    factor = 1.0 / np.sqrt(total) if squared else 1.0 / total
    return v * factor, factor


class DiscordPipeline:
    """Pipeline for computing discord bounds, oracle checks and monogamy reports."""

    def __init__(self,
                 tol: Optional[Tolerances] = None,
                 solver: Optional[SolverSettings] = None,
                 bounds_settings: Optional[BoundsSettings] = None,
                 oracle_config: Optional[OracleConfig] = None):
        """
        Initialize the DiscordPipeline.

        Args:
            tol: Numeric tolerances shared by every stage
            solver: Eigensolver choice
            bounds_settings: Orthogonal completion used for the candidate measurement
            oracle_config: Budget and seed of the brute-force search
        """
        self.tol = tol or DEFAULT_TOLERANCES
        self.solver = solver or DEFAULT_SOLVER
        self.bounds_settings = bounds_settings or DEFAULT_BOUNDS
        self.oracle_config = oracle_config or DEFAULT_ORACLE

        logger.info(f"Initialized DiscordPipeline (eigensolver={self.solver.eigensolver}, "
                    f"completion={self.bounds_settings.orthogonal_completion})")

    def bipartite_family(self,
                         name: str,
                         m: int = 2,
                         n: Optional[int] = None,
                         z: Optional[float] = None,
                         rank: Optional[int] = None,
                         seed: Seed = None) -> BipartiteState:
        """
        Build a named bipartite state.

        Args:
            name: One of bell, werner, isotropic, mixed, product, cq, random
            m: Dimension of A
            n: Dimension of B (defaults to m; must equal m for bell, werner and isotropic)
            z: Family parameter for werner and isotropic
            rank: Rank of a random state (defaults to full rank)
            seed: Seed for the random and cq families

        Returns:
            The validated state
        """
        if name in SQUARE_FAMILIES and n is not None and n != m:
            raise BadParameter(f"family {name} is an m x m state, got m={m}, n={n}", invariant="n = m")
        n = n or m
        if name == "bell":
            return density_from_pure(maximally_entangled(m), m, m, self.tol)
        if name in ("werner", "isotropic"):
            if z is None:
                raise BadParameter(f"family {name} needs a parameter z", invariant="z")
            return make_werner(m, z, self.tol) if name == "werner" else make_isotropic(m, z, self.tol)
        if name == "mixed":
            return maximally_mixed(m, n)
        if name == "product":
            rho = np.zeros((m * n, m * n))
            rho[0, 0] = 1.0
            return validate_state(rho, m, n, self.tol)
        if name == "cq":
            rng = make_rng(seed)
            rho = np.zeros((m * n, m * n), dtype=complex)
            for k in range(m):
                phi = haar_vector(n, rng=rng)
                ket = np.zeros(m)
                ket[k] = 1.0
                rho += np.kron(np.outer(ket, ket), np.outer(phi, phi.conj())) / m
            return validate_state(rho, m, n, self.tol)
        if name == "random":
            return random_state(m, n, rank or m * n, seed, self.tol)
        raise BadParameter(f"unknown state family {name!r}; expected one of {', '.join(BIPARTITE_FAMILIES)}",
                           invariant="family")

    def multiqubit_family(self,
                          name: str,
                          coeffs: Optional[Sequence[complex]] = None,
                          N: Optional[int] = None,
                          p: Optional[float] = None,
                          renormalize: bool = True) -> Tuple[MultiQubitPureState, Optional[float]]:
        """
        Build a named N-qubit pure state.

        Args:
            name: One of gghz, gw, slocc-w, counterexample, schmidt
            coeffs: gghz (a, b), possibly complex; gw (c_1..c_N); slocc-w (c_0, c_1..c_N); schmidt (λ_0, λ_1)
            N: Number of qubits (inferred from coeffs for gw and slocc-w)
            p: Parameter of the counterexample family
            renormalize: Scale coefficients to unit norm instead of rejecting them

        Returns:
            The state and the factor the coefficients were multiplied by (None when untouched)
        """
        if name == "counterexample":
            if p is None or N is None:
                raise BadParameter("family counterexample needs --p and --N", invariant="parameters")
            return make_counterexample(p, N, self.tol), None
        if name not in MULTIQUBIT_FAMILIES:
            raise BadParameter(f"unknown multi-qubit family {name!r}; expected one of "
                               f"{', '.join(MULTIQUBIT_FAMILIES)}", invariant="family")
        if not coeffs:
            raise BadParameter(f"family {name} needs coefficients", invariant="coefficients")
        values = np.asarray(coeffs, dtype=complex)
        if name != "gghz":
            if np.any(values.imag != 0.0):
                raise BadParameter(f"family {name} takes real coefficients, got {list(coeffs)}",
                                   invariant="real coefficients")
            values = values.real
        coeffs = values

        factor = None
        if renormalize:
            coeffs, factor = _renormalize(coeffs, squared=name != "schmidt")
            logger.info(f"Renormalized {name} coefficients by {factor:.17g}")

        if name == "gghz":
            if len(coeffs) != 2 or N is None:
                raise BadParameter("family gghz needs two coefficients and --N", invariant="coefficients")
            return make_gghz(coeffs[0], coeffs[1], N, self.tol), factor
        if name == "gw":
            return make_gw(coeffs, N or len(coeffs), self.tol), factor
        if name == "slocc-w":
            return make_slocc_w(coeffs[0], coeffs[1:], N or len(coeffs) - 1, self.tol), factor
        if N is None:
            raise BadParameter("family schmidt needs --N", invariant="N")
        return make_schmidt(coeffs, N, self.tol), factor

    def decompose_state(self, s: BipartiteState) -> BlochRecord:
        b = decompose(s)
        purity_residual, roundtrip_residual = diagnostics(s, b)
        return BlochRecord(
            m=b.m,
            n=b.n,
            x=b.x.tolist(),
            y=b.y.tolist(),
            T=b.T.tolist(),
            purity=b.purity(),
            purity_residual=purity_residual,
            roundtrip_residual=roundtrip_residual,
        )

    def bounds(self, s: BipartiteState, with_oracle: bool = False) -> Tuple[BoundsReport, Optional[GapReport]]:
        """
        Bounds report for a state, plus the oracle gap report when requested.

        Args:
            s: The state
            with_oracle: Also run the brute-force search

        Returns:
            (BoundsReport, GapReport or None)
        """
        logger.info(f"Computing bounds for a {s.m}x{s.n} state")
        report = bounds_report(s, self.bounds_settings, self.tol, self.solver)
        gap = gap_report(s, self.oracle_config, self.tol) if with_oracle else None
        return report, gap

    def measurement(self, s: BipartiteState) -> MeasurementRecord:
        """Candidate measurement with its flags, and its disturbance when it is valid."""
        b = decompose(s)
        r = relaxation(b, self.bounds_settings, self.tol, self.solver)
        candidate = candidate_measurement(r, self.tol, self.solver)
        record = candidate.to_record()
        if record.valid:
            record = record.model_copy(update={"value": measurement_value(s, candidate, self.tol)})
        else:
            logger.info(f"Candidate measurement for m={s.m} is not a valid von Neumann measurement")
        return record

    def oracle(self, s: BipartiteState) -> Tuple[GapReport, OracleResult, OracleResult]:
        """Run both oracle searches once and compare them with the bounds."""
        logger.info(f"Running oracle for a {s.m}x{s.n} state (seed={self.oracle_config.seed})")
        gd = oracle_gd(s, self.oracle_config, self.tol)
        mn = oracle_min(s, self.oracle_config, self.tol)
        gap = gap_report(s, self.oracle_config, self.tol, gd_result=gd, min_result=mn)
        return gap, gd, mn

    def monogamy(self, s: MultiQubitPureState) -> MonogamyReport:
        logger.info(f"Computing monogamy report for N={s.N}")
        return monogamy_report(s, self.tol)

    def sweep(self,
              family: str,
              grid: Sequence[float],
              m: int = 2,
              N: int = 4,
              with_oracle: bool = False) -> List[SweepRow]:
        """
        Evaluate a family over a parameter grid.

        werner and isotropic rows carry the bounds and the closed form; counterexample
        rows carry the computed monogamy deficit and its closed-form value.

        Args:
            family: werner, isotropic or counterexample
            grid: Parameter values (z or p)
            m: Local dimension for werner and isotropic
            N: Number of qubits for counterexample
            with_oracle: Fill the oracle_gd column (werner and isotropic)

        Returns:
            One row per grid point
        """
        if family not in SWEEP_FAMILIES:
            raise BadParameter(f"cannot sweep family {family!r}; expected one of {', '.join(SWEEP_FAMILIES)}",
                               invariant="family")
        logger.info(f"Sweeping {family} over {len(grid)} points")
        rows = []
        for param in grid:
            param = float(param)
            if family == "counterexample":
                report = monogamy_report(make_counterexample(param, N, self.tol), self.tol)
                lhs, rhs = counterexample_closed_form(param, N)
                rows.append(SweepRow(param=param, closed_form=rhs - lhs, deficit=report.deficit))
                continue

            s = self.bipartite_family(family, m=m, z=param)
            report, _ = self.bounds(s)
            closed = werner_gd(m, param) if family == "werner" else isotropic_gd(m, param)
            best = oracle_gd(s, self.oracle_config, self.tol).best_value if with_oracle else None
            rows.append(SweepRow(param=param, gd_lower=report.gd_lower, min_upper=report.min_upper,
                                 closed_form=closed, oracle_gd=best))
        return rows
