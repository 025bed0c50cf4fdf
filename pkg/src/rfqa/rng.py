"""Counter-based random streams for reproducible parallel trials."""

from __future__ import annotations

import numpy as np


def rng_stream(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Return an independent generator keyed by (seed, stream_id).

    Built on Philox, a counter-based bit generator, so identical
    (seed, stream_id) pairs reproduce identical draw sequences regardless
    of how trials are scheduled across workers.
    """
    key = np.array([seed, stream_id], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def trial_streams(seed: int, n_trials: int):
    """One stream per trial index, suitable for embarrassingly parallel sweeps."""
    return [rng_stream(seed, i) for i in range(n_trials)]
