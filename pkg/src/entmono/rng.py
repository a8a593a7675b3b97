"""Seeded randomness: splittable streams and Haar-distributed samples.

Every random quantity in the package is drawn from a generator created by
``stream_rng(seed, stream)``, so parallel and serial evaluation orders
produce bit-identical results.
"""

from __future__ import annotations

from math import prod
from typing import Sequence

import numpy as np

from .errors import BadRank
from .states import StateTensor, _as_dims


def stream_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for (seed, stream); deterministic across runs."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def _rng_of(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return stream_rng(int(seed))


def haar_random_frame(d: int, k: int, seed) -> np.ndarray:
    """d x k matrix with orthonormal columns, Haar-uniform on the Stiefel manifold.

    ``seed`` may be an int or an existing Generator.
    """
    if k < 1 or k > d:
        raise BadRank(f"frame rank {k} must lie in 1..{d}")
    rng = _rng_of(seed)
    z = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r).copy()
    zero = np.abs(ph) == 0
    ph[zero] = 1.0
    return q * (ph / np.abs(ph))


def haar_random_unitary(d: int, seed) -> np.ndarray:
    return haar_random_frame(d, d, seed)


def haar_random_state(dims: Sequence[int], seed) -> StateTensor:
    """Normalized state uniform on the unit sphere of the full space."""
    dims = _as_dims(dims)
    rng = _rng_of(seed)
    z = rng.standard_normal(prod(dims)) + 1j * rng.standard_normal(prod(dims))
    return StateTensor(dims, z / np.linalg.norm(z))
