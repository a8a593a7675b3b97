"""Brute-force estimators used as independent cross-checks in the tests.

Nothing here feeds the main computations; the point is that these paths
share no code with the solver beyond the objective itself.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ShapeMismatch
from .monotones import ProjectorFrame, _check_ranks, objective
from .rng import haar_random_frame, stream_rng
from .states import StateTensor


def sample_E(state: StateTensor, ks: Sequence[int], samples: int, seed: int = 0) -> float:
    """Monte-Carlo lower bound: best objective over Haar-random frames."""
    ks = _check_ranks(state.dims, ks)
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = stream_rng(seed)
    best = 0.0
    for _ in range(samples):
        frame = ProjectorFrame(
            tuple(haar_random_frame(d, k, rng) for d, k in zip(state.dims, ks))
        )
        best = max(best, objective(state, frame))
    return best


def trace_product_max(ops: Sequence[np.ndarray]) -> float:
    """max over unitaries U,V,... of |tr A U B V ...|.

    Equals the sum over j of the products of the operators' decreasingly
    ordered singular values.
    """
    if not ops:
        raise ShapeMismatch("need at least one operator")
    mats = [np.asarray(m, dtype=complex) for m in ops]
    side = mats[0].shape[0] if mats[0].ndim == 2 else -1
    for m in mats:
        if m.ndim != 2 or m.shape != (side, side):
            raise ShapeMismatch(
                f"operators must all be square of equal side, got shapes "
                f"{[tuple(x.shape) for x in mats]}"
            )
    sig = np.ones(side)
    for m in mats:
        sig = sig * np.linalg.svd(m, compute_uv=False)
    return float(np.sum(sig))
