"""
model.permutation. Permutations of [1..n], windows of the bi-infinite model and their
cycle and arc statistics.
"""
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Iterable

import numpy as np

class Reflection(Enum):
    """
    Map composed on the left of a window permutation before counting cycles:
    NONE leaves it alone, R is i -> -i and RHO is i -> 1 - i.
    """
    NONE = auto()
    R = auto()
    RHO = auto()

@dataclass(frozen=True, eq=False)
class Permutation:
    """
    A bijection of {1..n}, stored as its 1-based one-line image array.

    Samplers build these through the unchecked constructor; use `from_images`
    for untrusted input, which verifies the bijection in O(n).
    """
    images: np.ndarray = field(repr=False)

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Permutation":
        """Build and validate a permutation from 1-based images."""
        perm = cls(np.asarray(list(images) if not isinstance(images, np.ndarray) else images,
                              dtype=np.int64))
        if not perm.is_valid():
            raise ValueError(f"not a permutation of 1..{perm.n}: {perm.to_line()}")
        return perm

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        """The identity of S_n"""
        return cls(np.arange(1, n + 1, dtype=np.int64))

    @classmethod
    def from_line(cls, line: str) -> "Permutation":
        """Parse a space-separated one-line image list."""
        return cls.from_images(int(token) for token in line.split())

    @property
    def n(self) -> int:
        """Size of the permuted set"""
        return len(self.images)

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return int(self.images[i - 1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.images, other.images))

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Permutation([{self.to_line()}])"

    def key(self) -> tuple[int, ...]:
        """Hashable one-line form, used as a pmf cell"""
        return tuple(int(v) for v in self.images)

    def to_line(self) -> str:
        """Space-separated one-line image list"""
        return " ".join(str(int(v)) for v in self.images)

    def is_valid(self) -> bool:
        """True when images is a bijection of {1..n}"""
        n = self.n
        if n == 0:
            return True
        if self.images.min() < 1 or self.images.max() > n:
            return False
        seen = np.zeros(n + 1, dtype=bool)
        seen[self.images] = True
        return bool(seen[1:].all())

    def inverse(self) -> "Permutation":
        """The inverse permutation"""
        inv = np.empty_like(self.images)
        inv[self.images - 1] = np.arange(1, self.n + 1, dtype=self.images.dtype)
        return Permutation(inv)

    def compose(self, inner: "Permutation") -> "Permutation":
        """self o inner, i.e. i -> self(inner(i))"""
        if inner.n != self.n:
            raise ValueError(f"cannot compose permutations of sizes {self.n} and {inner.n}")
        return Permutation(self.images[inner.images - 1])

@dataclass(frozen=True, eq=False)
class WindowPermutation:
    """
    A bijection of the integer interval [offset .. offset+len-1].

    Attributes:
        offset: lowest index of the interval.
        images: image of each index, in the same interval.
        margin: number of indices at each end of the window outside which statistics of the
            bi-infinite model may be read.
    """
    offset: int
    images: np.ndarray = field(repr=False)
    margin: int = 0

    @property
    def length(self) -> int:
        """Number of indices in the window"""
        return len(self.images)

    @property
    def indices(self) -> np.ndarray:
        """The index interval"""
        return np.arange(self.offset, self.offset + self.length, dtype=np.int64)

    def image(self, i: int) -> int:
        """Sigma(i)"""
        return int(self.images[i - self.offset])

    def trusted_indices(self) -> np.ndarray:
        """Indices at distance at least `margin` from both ends of the window"""
        return self.indices[self.margin:self.length - self.margin]

    def to_permutation(self) -> Permutation:
        """Relabel the window to a permutation of [1..len]"""
        return Permutation(self.images - self.offset + 1)

    def is_valid(self) -> bool:
        """True when images is a bijection of the index interval"""
        return self.to_permutation().is_valid()

    def closed_under(self, reflection: Reflection) -> bool:
        """True when the index interval maps onto itself under the reflection"""
        low, high = self.offset, self.offset + self.length - 1
        match reflection:
            case Reflection.NONE:
                return True
            case Reflection.R:
                return low == -high
            case Reflection.RHO:
                return low == 1 - high
        return False

    def __str__(self) -> str:
        return (f"window [{self.offset}..{self.offset + self.length - 1}] margin {self.margin}")

@dataclass(frozen=True, eq=False)
class CycleCounts:
    """
    Cycle-length histogram: counts[i] is the number of cycles of length i, counts[0] is 0.
    """
    counts: np.ndarray = field(repr=False)

    @property
    def total_cycles(self) -> int:
        """Number of cycles"""
        return int(self.counts.sum())

    @property
    def size(self) -> int:
        """Number of points covered, the sum of i * counts[i]"""
        return int(np.dot(np.arange(len(self.counts)), self.counts))

    def __getitem__(self, i: int) -> int:
        if i < 0 or i >= len(self.counts):
            return 0
        return int(self.counts[i])

    def vector(self, ell: int) -> np.ndarray:
        """(C_1, ..., C_ell) padded with zeros"""
        out = np.zeros(ell, dtype=np.int64)
        upto = min(ell, len(self.counts) - 1)
        out[:upto] = self.counts[1:upto + 1]
        return out

    def __str__(self) -> str:
        nonzero = {i: int(c) for i, c in enumerate(self.counts) if c}
        return f"cycles {nonzero}"

@dataclass(frozen=True, eq=False)
class ArcPath:
    """
    The arc counts kappa_t = |{i <= t : pi(i) > t}| for t = 0..n.
    """
    kappa: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        """Size of the underlying permutation"""
        return len(self.kappa) - 1

    def is_valid(self) -> bool:
        """Endpoints zero, nonnegative, unit steps"""
        k = self.kappa
        return bool(k[0] == 0 and k[-1] == 0 and (k >= 0).all()
                    and (np.abs(np.diff(k)) <= 1).all())

    def zeros(self) -> np.ndarray:
        """Times t in 1..n with kappa_t = 0"""
        return np.flatnonzero(self.kappa[1:] == 0) + 1
