"""Karp-Rabin fingerprints of strings and of position-sampled projections.

``phi(S) = sum_i r**(i-1) * S[i] mod q`` with a base ``r`` drawn once per run.
A projection hash ``h`` picks ``m`` positions ``a_1..a_m`` (with
replacement, order kept) and ``phi(h(S))`` fingerprints the string of the
characters at those positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .modmath import Q_PRIME, correlate_windows
from .seqcore import SequenceLike, as_array


@dataclass(frozen=True)
class FingerprintScheme:
    """A fixed fingerprint function: modulus ``q`` and base ``r``."""

    r: int
    q: int = Q_PRIME
    seed: int | None = None
    _powers: list = field(default_factory=lambda: [1], init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.r < self.q:
            raise ValueError("base r must lie in [1, q)")

    @classmethod
    def from_seed(cls, seed) -> "FingerprintScheme":
        rng = np.random.default_rng(seed)
        r = int(rng.integers(1, Q_PRIME, dtype=np.uint64))
        return cls(r=r, seed=None if isinstance(seed, np.random.Generator) else seed)

    def power(self, i: int) -> int:
        """``r**i mod q``, memoised."""
        pw = self._powers
        while len(pw) <= i:
            pw.append(pw[-1] * self.r % self.q)
        return pw[i]

    def powers(self, count: int) -> list:
        self.power(max(count - 1, 0))
        return self._powers[:count]


def fingerprint(s: SequenceLike, scheme: FingerprintScheme) -> int:
    codes = as_array(s).tolist()
    acc = 0
    for c in reversed(codes):
        acc = (acc * scheme.r + int(c)) % scheme.q
    return acc


@dataclass(frozen=True, eq=False)
class ProjectionHash:
    """``m`` ordered sample positions inside a length-``length`` window."""

    positions: np.ndarray
    length: int

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.int64)
        if pos.ndim != 1 or pos.size < 1:
            raise ValueError("a projection needs at least one position")
        if pos.min() < 0 or pos.max() >= self.length:
            raise ValueError("positions must lie in [0, length)")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def m(self) -> int:
        return int(self.positions.size)

    def __eq__(self, other):
        if not isinstance(other, ProjectionHash):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.positions, other.positions)

    def __hash__(self):
        return hash((self.length, self.positions.tobytes()))

    def project(self, window: SequenceLike) -> np.ndarray:
        arr = as_array(window)
        if arr.size != self.length:
            raise ValueError(f"window has length {arr.size}, hash expects {self.length}")
        return arr[self.positions]

    def weight_vector(self, scheme: FingerprintScheme) -> list:
        """The vector ``U``: ``r**(t-1)`` added at position ``a_t`` for each t.

        Duplicate positions accumulate several powers in one entry.
        """
        u = [0] * self.length
        for t, a in enumerate(self.positions.tolist()):
            u[a] = (u[a] + scheme.power(t)) % scheme.q
        return u


def sample_projection(length: int, m: int, rng) -> ProjectionHash:
    """Draw ``m`` i.i.d. uniform positions in ``[0, length)``."""
    if length < 1 or m < 1:
        raise ValueError("length and m must be >= 1")
    rng = np.random.default_rng(rng)
    return ProjectionHash(rng.integers(0, length, size=m), length)


def projected_fingerprints_all_windows(text: SequenceLike, h: ProjectionHash,
                                       scheme: FingerprintScheme) -> np.ndarray:
    """``out[i] = phi(h(text[i:i+length]))`` for every window start ``i``."""
    arr = as_array(text)
    if h.length > arr.size:
        raise ValueError(f"window length {h.length} exceeds text length {arr.size}")
    weights = np.array(h.weight_vector(scheme), dtype=np.uint64)
    return correlate_windows(weights, arr, scheme.q)


def window_fingerprints(text: SequenceLike, length: int, scheme: FingerprintScheme) -> np.ndarray:
    """Plain Karp-Rabin fingerprints of every length-``length`` window."""
    arr = as_array(text)
    weights = np.array(scheme.powers(length), dtype=np.uint64)
    return correlate_windows(weights, arr, scheme.q)
