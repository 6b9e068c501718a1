"""
Seeded random sampling for geodiscord.

All randomness flows through numpy's PCG64 bit generator, seeded with an
explicit unsigned 64-bit integer. Independent streams (one per oracle
restart) are derived from (seed, index) with a SeedSequence spawn key, so
a stream does not depend on how many other streams exist.
"""

from typing import Optional, Union

import numpy as np

from .errors import BadParameter

Seed = Union[int, np.random.Generator, None]


def make_rng(seed: Seed = None) -> np.random.Generator:
    """Return a PCG64 generator for an integer seed, or pass a generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is not None and not 0 <= int(seed) < 2**64:
        raise BadParameter(f"seed must be an unsigned 64-bit integer, got {seed}", invariant="seed")
    return np.random.Generator(np.random.PCG64(seed))


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for sub-task `index` of a run seeded with `seed`."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))))


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Matrix of i.i.d. standard complex Gaussians."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def haar_unitary(d: int, seed: Seed = None) -> np.ndarray:
    """Haar-distributed d×d unitary: QR of a Ginibre matrix with the R-diagonal phases absorbed."""
    rng = make_rng(seed)
    q, r = np.linalg.qr(ginibre(d, d, rng))
    diag = np.diag(r)
    phases = np.where(np.abs(diag) > 0.0, diag / np.abs(diag), 1.0)
    return q * phases


def haar_vector(d: int, seed: Seed = None, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Unit vector uniformly distributed on the complex sphere in C^d."""
    rng = rng or make_rng(seed)
    z = ginibre(d, 1, rng)[:, 0]
    return z / np.linalg.norm(z)
