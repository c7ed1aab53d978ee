from __future__ import annotations

import numpy as np

# stream tags; each consumer draws from its own substream
BOOTSTRAP = 1
SYNTHETIC = 2
SUBSAMPLE = 3


def stream(seed: int, tag: int, *key: int) -> np.random.Generator:
    """PCG64 generator for the substream (tag, *key) of ``seed``.

    The stream depends only on the seed and the key, never on how many other
    streams were drawn before it, so results do not depend on evaluation order.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(tag), *(int(k) for k in key)))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, tag: int, *key: int) -> int:
    """64-bit seed for a child computation that takes a plain integer seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(tag), *(int(k) for k in key)))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)
