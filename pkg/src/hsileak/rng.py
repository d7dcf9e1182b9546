"""Seed derivation and random streams.

Every random decision in the package draws from a Philox4x64-10 counter-based
generator (``numpy.random.Philox``) whose 128-bit key is built from a 64-bit
seed mixed with integer stream identifiers. Mixing uses the SplitMix64
finalizer::

    z = (z + 0x9E3779B97F4A7C15) mod 2**64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    z = z ^ (z >> 31)

``mix64(a, b, c)`` folds the words left to right: ``h = splitmix(a)``, then
``h = splitmix(h ^ b)`` and so on. Streams for distinct identifiers are
independent, so adding a repetition or a class never perturbs the others.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64(*words: int) -> int:
    """Hash a sequence of integers into one 64-bit value."""
    if not words:
        raise ValueError("mix64 needs at least one word")
    h = splitmix64(int(words[0]) & MASK64)
    for w in words[1:]:
        h = splitmix64(h ^ (int(w) & MASK64))
    return h


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Return an independent Philox generator for ``(seed, *keys)``."""
    k = mix64(seed, *keys)
    key = np.array([k, mix64(k, 0x5EED)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
