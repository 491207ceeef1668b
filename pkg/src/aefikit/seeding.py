"""Deterministic seed derivation.

Every stochastic component takes an explicit integer seed.  Sub-seeds for
ensemble members, folds, and benchmark cells are derived by hashing the
parent seed together with a label path, so parallel and sequential
execution see identical random streams.  SHA-256 keeps the derivation
stable across platforms and Python processes (unlike ``hash()``).
"""

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *parts) -> int:
    """Derive a 64-bit sub-seed from ``seed`` and a label path.

    ``parts`` may mix strings and integers; the same path always yields
    the same sub-seed.
    """
    h = hashlib.sha256()
    h.update(str(int(seed) & _MASK64).encode())
    for part in parts:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:8], "big")


def rng_from(seed: int, *parts) -> np.random.Generator:
    """A fresh generator seeded by ``derive_seed(seed, *parts)``."""
    return np.random.default_rng(derive_seed(seed, *parts) if parts else int(seed) & _MASK64)
