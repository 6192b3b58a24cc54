"""Randomised decision procedure: is there a length-``l`` pair within ~k mismatches?

Answers YES with a witness pair, or NO.  Window pairs are bucketed with
``L`` position-sampling hashes; a bounded prefix of the colliding pairs is
screened with sketches, and one collision drawn uniformly from all of them
is checked exactly.

Hash parameters::

    p1 = 1 - k/l,  p2 = 1 - (1+eps)k/l,  m = ceil(ln n / ln(1/p2))
    L  = floor(n**(1/(1+eps)) / 16)          ("practical" rule)
    L  = ceil(ln 4 * (1+eps)/eps * n**(1/(1+eps)))   ("lemma" rule)

The lemma rule is the smallest ``L`` for which the collision-probability
lower bound ``p1**m >= eps/(1+eps) * n**(-1/(1+eps))`` already guarantees a
colliding hash for a fixed close pair with probability 3/4.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional

import numpy as np

from .fingerprint import (FingerprintScheme, ProjectionHash, projected_fingerprints_all_windows,
                          sample_projection, window_fingerprints)
from .seqcore import SequenceLike, as_array
from .sketch import (DEFAULT_SKETCH_CONSTANT, SketchSpec, batched_collision_distances,
                     collision_distances)


@dataclass(frozen=True)
class DecisionParams:
    n: int
    length: int
    k: int
    epsilon: float
    p1: float
    p2: float
    m: int
    L: int
    cap: int
    trivial: bool
    exact: bool


def hash_count(n: int, epsilon: float, rule="practical", multiplier: float = 1.0) -> int:
    """Number of hash functions ``L`` under the named rule (or an explicit int)."""
    if isinstance(rule, (int, np.integer)) and not isinstance(rule, bool):
        base = float(rule)
    elif rule == "practical":
        base = n ** (1.0 / (1.0 + epsilon)) / 16.0
    elif rule == "lemma":
        base = math.log(4.0) * (1.0 + epsilon) / epsilon * n ** (1.0 / (1.0 + epsilon))
        return max(1, math.ceil(base * multiplier))
    else:
        raise ValueError(f"unknown hash-count rule {rule!r}")
    return max(1, math.floor(base * multiplier))


def lsh_parameters(n: int, length: int, k: int, epsilon: float, *, hash_rule="practical",
                   hash_multiplier: float = 1.0) -> DecisionParams:
    if k < 0 or length < 1 or epsilon <= 0:
        raise ValueError("need k >= 0, length >= 1, epsilon > 0")
    n = max(int(n), 1)
    L = hash_count(n, epsilon, hash_rule, hash_multiplier)
    p1 = 1.0 - k / length
    p2 = 1.0 - (1.0 + epsilon) * k / length
    trivial = (1.0 + epsilon) * k >= length
    exact = k == 0
    if trivial or exact:
        m = 0
    else:
        m = max(1, math.ceil(math.log(n) / -math.log(p2)))
    return DecisionParams(n=n, length=length, k=k, epsilon=epsilon, p1=p1, p2=p2, m=m, L=L,
                          cap=4 * n * L, trivial=trivial, exact=exact)


class Collision(NamedTuple):
    x_start: int
    y_start: int
    hash_index: int


@dataclass(frozen=True, eq=False)
class CollisionGroup:
    """Windows of X and Y sharing projected fingerprint ``value`` under one hash."""

    value: int
    x_starts: np.ndarray
    y_starts: np.ndarray
    hash_index: int

    @property
    def weight(self) -> int:
        return int(self.x_starts.size) * int(self.y_starts.size)

    def collision(self, offset: int) -> Collision:
        """The ``offset``-th collision in row-major ``(x, y)`` order."""
        a, b = divmod(offset, self.y_starts.size)
        return Collision(int(self.x_starts[a]), int(self.y_starts[b]), self.hash_index)

    def __iter__(self) -> Iterator[Collision]:
        for i in self.x_starts.tolist():
            for j in self.y_starts.tolist():
                yield Collision(i, j, self.hash_index)


class _HashBlock:
    """All collision groups of one hash, in ascending fingerprint order."""

    def __init__(self, fx: np.ndarray, fy: np.ndarray, hash_index: int):
        self.hash_index = hash_index
        self.x_order = np.argsort(fx, kind="stable")
        self.y_order = np.argsort(fy, kind="stable")
        ux, x_lo, x_cnt = np.unique(fx[self.x_order], return_index=True, return_counts=True)
        uy, y_lo, y_cnt = np.unique(fy[self.y_order], return_index=True, return_counts=True)
        self.values, ix, iy = np.intersect1d(ux, uy, assume_unique=True, return_indices=True)
        self.x_lo, self.x_cnt = x_lo[ix], x_cnt[ix]
        self.y_lo, self.y_cnt = y_lo[iy], y_cnt[iy]
        self.weights = self.x_cnt.astype(np.int64) * self.y_cnt.astype(np.int64)

    @property
    def total(self) -> int:
        return int(self.weights.sum())

    def group(self, g: int) -> CollisionGroup:
        xs = self.x_order[self.x_lo[g]:self.x_lo[g] + self.x_cnt[g]]
        ys = self.y_order[self.y_lo[g]:self.y_lo[g] + self.y_cnt[g]]
        return CollisionGroup(int(self.values[g]), xs, ys, self.hash_index)

    def groups(self) -> Iterator[CollisionGroup]:
        for g in range(self.values.size):
            yield self.group(g)

    def expand(self, limit: int) -> np.ndarray:
        """First ``limit`` collisions of this block as an ``(t, 2)`` array of starts."""
        if limit <= 0 or self.values.size == 0:
            return np.zeros((0, 2), dtype=np.int64)
        ends = np.cumsum(self.weights)
        n_groups = int(np.searchsorted(ends, limit, side="left")) + 1
        n_groups = min(n_groups, self.values.size)
        w = self.weights[:n_groups].copy()
        total = min(int(w.sum()), limit)
        starts = np.concatenate(([0], np.cumsum(w)[:-1]))
        w[-1] -= int(w.sum()) - total  # trim the last group to the limit
        gid = np.repeat(np.arange(n_groups), w)
        offset = np.arange(total) - starts[gid]
        a, b = np.divmod(offset, self.y_cnt[gid])
        xi = self.x_order[self.x_lo[gid] + a]
        yi = self.y_order[self.y_lo[gid] + b]
        return np.stack([xi, yi], axis=1).astype(np.int64)


def _block_for_hash(x: np.ndarray, y: np.ndarray, h: ProjectionHash, scheme: FingerprintScheme,
                    hash_index: int) -> _HashBlock:
    fx = projected_fingerprints_all_windows(x, h, scheme)
    fy = projected_fingerprints_all_windows(y, h, scheme)
    return _HashBlock(fx, fy, hash_index)


def enumerate_collision_groups(x: SequenceLike, y: SequenceLike, length: int,
                               hashes: Iterable[ProjectionHash],
                               scheme: FingerprintScheme) -> Iterator[CollisionGroup]:
    """Stream every collision group, hash by hash, fingerprints ascending.

    Expanding every group yields the collision multiset exactly once.
    """
    xa, ya = as_array(x), as_array(y)
    if length > min(xa.size, ya.size):
        return
    for hi, h in enumerate(hashes):
        if h.length != length:
            raise ValueError("hash window length does not match")
        yield from _block_for_hash(xa, ya, h, scheme, hi).groups()


def capped_subset(stream: Iterable[CollisionGroup], cap: int) -> list:
    """The first ``cap`` collisions of the stream, in stream order."""
    out = []
    if cap <= 0:
        return out
    for group in stream:
        for c in group:
            out.append(c)
            if len(out) >= cap:
                return out
    return out


class _NoCollision:
    def __repr__(self):
        return "NoCollision"

    def __bool__(self):
        return False


NoCollision = _NoCollision()
"""Returned by :func:`reservoir_draw` for an empty stream."""


class WeightedReservoir:
    """Single-slot weighted reservoir over collision groups.

    After offering groups of total weight ``T``, the held collision is
    uniform over all ``T`` collisions: a new group of weight ``w`` takes the
    slot with probability ``w / T_new``, and the same random draw picks the
    collision inside the group.
    """

    def __init__(self, rng=None):
        self.rng = np.random.default_rng(rng)
        self.total = 0
        self.item = NoCollision

    def offer(self, group: CollisionGroup, weight: Optional[int] = None):
        w = group.weight if weight is None else int(weight)
        if w <= 0:
            return
        self.total += w
        u = int(self.rng.integers(self.total))
        if u < w:
            self.item = group.collision(u)

    def _offer_block(self, block: _HashBlock):
        """Offer every group of ``block`` at once; same law as offering them in turn."""
        w = block.total
        if w <= 0:
            return
        self.total += w
        u = int(self.rng.integers(self.total))
        if u < w:
            ends = np.cumsum(block.weights)
            g = int(np.searchsorted(ends, u, side="right"))
            before = int(ends[g - 1]) if g else 0
            self.item = block.group(g).collision(u - before)


def reservoir_draw(stream: Iterable, rng=None):
    """One collision drawn uniformly from the multiset described by ``stream``.

    ``stream`` yields ``(group, weight)`` pairs (bare groups are accepted
    too).  Returns :data:`NoCollision` when the stream carries no weight.
    """
    res = WeightedReservoir(rng)
    for item in stream:
        if isinstance(item, CollisionGroup):
            res.offer(item)
        else:
            group, weight = item
            res.offer(group, weight)
    return res.item


class Verdict(str, enum.Enum):
    YES = "YES"
    NO = "NO"


@dataclass(frozen=True)
class DecisionOutcome:
    verdict: Verdict
    x_start: Optional[int] = None
    y_start: Optional[int] = None
    length: Optional[int] = None
    branch: str = ""
    sketch_value: Optional[int] = None
    sketch_threshold: Optional[int] = None
    collisions: int = 0

    def __post_init__(self):
        if self.verdict is Verdict.YES and self.x_start is None:
            raise ValueError("a YES outcome needs a witness")

    @property
    def yes(self) -> bool:
        return self.verdict is Verdict.YES

    @property
    def witness(self):
        return None if not self.yes else (self.x_start, self.y_start, self.length)


_NO = DecisionOutcome(Verdict.NO)


def _infer_sigma(*arrays: np.ndarray) -> int:
    top = max((int(a.max()) for a in arrays if a.size), default=2)
    return max(top, 2)


def decide(x: SequenceLike, y: SequenceLike, length: int, k: int, epsilon: float, *,
           params: Optional[DecisionParams] = None, sigma: Optional[int] = None,
           scheme: Optional[FingerprintScheme] = None, rng=None,
           sketch_constant: float = DEFAULT_SKETCH_CONSTANT, batched: bool = False,
           hash_rule="practical", hash_multiplier: float = 1.0) -> DecisionOutcome:
    """Answer whether some length-``length`` windows of ``x`` and ``y`` are within ``k`` mismatches.

    Args:
        x, y: Sequences (or 1-based code arrays).
        length: Window length to test.
        k: Mismatch budget.
        epsilon: Approximation slack; YES witnesses may have up to
            ``(1 + epsilon) * k`` mismatches.
        params: Precomputed :class:`DecisionParams`; derived from the inputs
            when omitted.
        sigma: Alphabet size for the sketches (inferred from the codes).
        scheme: Fingerprint function shared across calls; drawn from
            ``rng`` when omitted.
        rng: Seed or ``np.random.Generator``.
        batched: Evaluate sketch distances row by row in batches of ``n``
            collisions instead of storing all sketches.

    Returns:
        A :class:`DecisionOutcome`.  ``branch`` records which test produced
        the answer: ``trivial``, ``exact``, ``sketch`` or ``random``.
    """
    xa, ya = as_array(x), as_array(y)
    if length < 1:
        raise ValueError("length must be >= 1")
    if length > min(xa.size, ya.size):
        return _NO
    n = max(xa.size, ya.size)
    if params is None:
        params = lsh_parameters(n, length, k, epsilon, hash_rule=hash_rule,
                                hash_multiplier=hash_multiplier)
    rng = np.random.default_rng(rng)
    if params.trivial:
        return DecisionOutcome(Verdict.YES, 0, 0, length, branch="trivial")
    if scheme is None:
        scheme = FingerprintScheme.from_seed(rng)
    if params.exact:
        return _decide_exact(xa, ya, length, scheme)

    budget = (1.0 + epsilon) * k
    reservoir = WeightedReservoir(rng)
    prefix = []
    remaining = params.cap
    total = 0
    for hi in range(params.L):
        h = sample_projection(length, params.m, rng)
        block = _block_for_hash(xa, ya, h, scheme, hi)
        total += block.total
        reservoir._offer_block(block)
        if remaining > 0:
            part = block.expand(remaining)
            remaining -= part.shape[0]
            prefix.append(part)

    pairs = np.concatenate(prefix) if prefix else np.zeros((0, 2), dtype=np.int64)
    if pairs.shape[0]:
        spec = SketchSpec.for_problem(n, length, sigma or _infer_sigma(xa, ya), epsilon,
                                      seed=int(rng.integers(2 ** 63)), constant=sketch_constant)
        threshold = spec.threshold(k, epsilon)
        if batched:
            dist = batched_collision_distances(pairs, xa, ya, spec, batch_size=n)
        else:
            dist = collision_distances(pairs, xa, ya, spec)
        passing = np.flatnonzero(dist <= threshold)
        if passing.size:
            t = int(passing[0])
            return DecisionOutcome(Verdict.YES, int(pairs[t, 0]), int(pairs[t, 1]), length,
                                   branch="sketch", sketch_value=int(dist[t]),
                                   sketch_threshold=threshold, collisions=total)

    pick = reservoir.item
    if pick:
        i, j = pick.x_start, pick.y_start
        if np.count_nonzero(xa[i:i + length] != ya[j:j + length]) <= budget:
            return DecisionOutcome(Verdict.YES, i, j, length, branch="random", collisions=total)
    return DecisionOutcome(Verdict.NO, collisions=total)


def _decide_exact(xa: np.ndarray, ya: np.ndarray, length: int,
                  scheme: FingerprintScheme) -> DecisionOutcome:
    """``k = 0``: bucket whole windows by fingerprint and confirm a pair per bucket."""
    block = _HashBlock(window_fingerprints(xa, length, scheme),
                       window_fingerprints(ya, length, scheme), 0)
    for group in block.groups():
        i, j = int(group.x_starts[0]), int(group.y_starts[0])
        if np.array_equal(xa[i:i + length], ya[j:j + length]):
            return DecisionOutcome(Verdict.YES, i, j, length, branch="exact",
                                   collisions=block.total)
    return DecisionOutcome(Verdict.NO, collisions=block.total)
