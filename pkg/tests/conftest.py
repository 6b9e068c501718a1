from pathlib import Path

import numpy as np
import pytest

from geodiscord.config import OracleConfig
from geodiscord.sampling import haar_unitary
from geodiscord.states import density_from_pure, maximally_entangled, validate_state

STATES_DIR = Path(__file__).resolve().parent.parent / "data" / "states"


@pytest.fixture
def states_dir():
    return STATES_DIR


@pytest.fixture
def bell():
    return density_from_pure(maximally_entangled(2), 2, 2)


@pytest.fixture
def fast_oracle():
    # bulk property checks only need feasible points, not converged ones
    return OracleConfig(restarts=4, iterations=100, seed=7)


@pytest.fixture
def local_unitary():
    """Returns f(s, seed) = (U_A⊗U_B) ρ (U_A⊗U_B)† for Haar-random local unitaries."""

    def apply(s, seed):
        u = np.kron(haar_unitary(s.m, seed), haar_unitary(s.n, seed + 1))
        return validate_state(u @ s.rho @ u.conj().T, s.m, s.n)

    return apply
