"""
Reproducible random streams. A stream is a Philox counter-based generator keyed by
(seed, stream_id) through a SeedSequence spawn key, so each replicate owns an
independent substream no matter which worker runs it.
"""
from dataclasses import dataclass, field

import numpy as np

_UINT64_LIMIT: int = 2 ** 64

@dataclass
class RngStream:
    """
    A stateful variate stream; identical (seed, stream_id) reproduce identical sequences.
    """
    seed: int
    stream_id: int = 0
    _generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for name, value in (("seed", self.seed), ("stream_id", self.stream_id)):
            if not 0 <= value < _UINT64_LIMIT:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self._generator = np.random.Generator(np.random.Philox(sequence))

    @property
    def generator(self) -> np.random.Generator:
        """The underlying numpy generator"""
        return self._generator

    def uniform(self, size: int | None = None) -> float | np.ndarray:
        """Uniform variates on [0, 1)"""
        return self._generator.random(size)

    def geometric(self, p: float, size: int | None = None) -> int | np.ndarray:
        """Geometric variates on {1, 2, ...} with success probability p"""
        return self._generator.geometric(p, size)

    def restart(self) -> "RngStream":
        """A fresh stream with the same key, positioned at its start"""
        return RngStream(self.seed, self.stream_id)
