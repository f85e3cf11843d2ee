"""Seeded random streams.

A :class:`RandomStream` is an entropy path rather than a generator: asking it
for ``generator()`` always yields a fresh ``numpy.random.Generator`` in the
same state, and ``child(...)`` splits it into independent sub-streams.  The
harness hands each query step its own child generator, so a strategy that is a
pure function of memory and generator can be replayed step by step.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


def derive_seed(*parts: int | str) -> int:
    """Hash arbitrary parts into a 63-bit seed, stable across runs and platforms."""
    digest = hashlib.blake2b(
        "|".join(str(p) for p in parts).encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big") >> 1


@dataclass(frozen=True, slots=True)
class RandomStream:
    seed: int
    path: tuple[int, ...] = ()

    def child(self, *key: int) -> RandomStream:
        return RandomStream(self.seed, self.path + tuple(int(k) for k in key))

    def generator(self) -> np.random.Generator:
        entropy = [self.seed, *self.path] if self.path else self.seed
        return np.random.default_rng(np.random.SeedSequence(entropy))


# Sub-stream labels used by the harness.
SECRET_STREAM = 0
STEP_STREAM = 1
