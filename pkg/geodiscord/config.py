"""
Configuration module for geodiscord.

All tolerances live in one frozen record so there is a single tuning point.
Solver, bound and oracle settings are separate records; every operation
that needs one takes it as an optional argument and falls back to the
module-level defaults below.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class Tolerances(BaseModel):
    """Numeric tolerances shared by every module."""

    model_config = ConfigDict(frozen=True)

    # state validation
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    normalization: float = 1e-12

    # eigensolver
    eig_hermitian: float = 1e-8
    jacobi_threshold: float = 1e-13
    jacobi_max_sweeps: int = 100

    # measurements
    measurement_psd: float = 1e-9
    idempotent: float = 1e-8
    completeness: float = 1e-10
    unitary: float = 1e-9
    value_identity: float = 1e-9

    # bounds
    clamp: float = 1e-12
    equal_eigenvalues: float = 1e-10
    zero_vector: float = 1e-10

    # oracle / monogamy
    degeneracy_gap: float = 1e-8
    deficit: float = -1e-9
    spectrum_discriminant: float = -1e-12

    def with_validation(self, tol: float) -> "Tolerances":
        """Return a copy with the three state-validation tolerances replaced."""
        return self.model_copy(update={"hermitian": tol, "trace": tol, "psd": tol})


class SolverSettings(BaseModel):
    """Which Hermitian eigensolver backs every spectral computation."""

    model_config = ConfigDict(frozen=True)

    eigensolver: Literal["jacobi", "lapack"] = "jacobi"


class BoundsSettings(BaseModel):
    """Choice of the orthogonal completion used for the candidate measurement."""

    model_config = ConfigDict(frozen=True)

    orthogonal_completion: Literal["helmert", "hadamard"] = "helmert"


class OracleConfig(BaseModel):
    """Budget and schedule of the brute-force measurement search."""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(default=64, ge=1)
    iterations: int = Field(default=400, ge=1)
    initial_step: float = Field(default=0.3, gt=0.0)
    step_decay: float = Field(default=0.97, gt=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    constraint_tolerance: float = Field(default=1e-8, gt=0.0)


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_SOLVER = SolverSettings()
DEFAULT_BOUNDS = BoundsSettings()
DEFAULT_ORACLE = OracleConfig()
