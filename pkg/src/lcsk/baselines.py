"""Exact references: the FGKU diagonal scan, a brute-force LCS_k, and exact LCS."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numba import njit

from .seqcore import SequenceLike, as_array


class ExactResult(NamedTuple):
    length: int
    x_start: int
    y_start: int


def _as_int_array(s: SequenceLike) -> np.ndarray:
    return np.ascontiguousarray(as_array(s), dtype=np.int64)


@njit(cache=True)
def _fgku_scan(x, y, k):  # pragma: no cover - compiled
    n = x.size
    m = y.size
    best, r1, r2 = 0, 0, 0
    # ring buffer holding up to k mismatch offsets of the current diagonal
    ring = np.empty(max(k, 1), dtype=np.int64)
    for d in range(-m + 1, n):
        i = max(-d, 0) + d
        j = max(-d, 0)
        head = 0
        size = 0
        s = 0
        p = 0
        stop = min(n - i, m - j)
        while p <= stop - 1:
            if x[i + p] != y[j + p]:
                if k == 0:
                    s = p + 1
                else:
                    if size == k:
                        s = ring[head] + 1
                        head = (head + 1) % k
                        size -= 1
                    ring[(head + size) % k] = p
                    size += 1
            p += 1
            if p - s > best:
                best = p - s
                r1 = i + s
                r2 = j + s
    return best, r1, r2


def fgku(x: SequenceLike, y: SequenceLike, k: int) -> ExactResult:
    """Longest common substring with at most ``k`` mismatches, O(|x||y|) time.

    Scans every diagonal keeping a FIFO of the last ``k`` mismatch offsets;
    the window start jumps past the oldest mismatch when a new one arrives
    on a full queue.  The first strictly longer window wins ties.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    xa, ya = _as_int_array(x), _as_int_array(y)
    if xa.size == 0 or ya.size == 0:
        return ExactResult(0, 0, 0)
    best, r1, r2 = _fgku_scan(xa, ya, int(k))
    return ExactResult(int(best), int(r1), int(r2))


def brute_lcs_k(x: SequenceLike, y: SequenceLike, k: int) -> ExactResult:
    """``max over (i, j)`` of the longest prefix pair with at most ``k`` mismatches.

    Evaluates every start pair; for a fixed ``i`` all ``j`` are handled at
    once through cumulative mismatch counts.  Meant for inputs up to a few
    hundred characters.  Ties go to the lexicographically smallest ``(i, j)``.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    xa, ya = _as_int_array(x), _as_int_array(y)
    n, m = xa.size, ya.size
    if n == 0 or m == 0:
        return ExactResult(0, 0, 0)
    # out-of-range positions cost k+1 so they always end an extension
    pad = np.full(n, -1, dtype=np.int64)
    ypad = np.concatenate([ya, pad])
    best = ExactResult(0, 0, 0)
    for i in range(n):
        span = n - i
        rows = np.lib.stride_tricks.sliding_window_view(ypad, span)[:m]
        cost = (rows != xa[i:][None, :]).astype(np.int64)
        cost[rows < 0] = k + 1
        lcp = (np.cumsum(cost, axis=1) <= k).sum(axis=1)
        j = int(np.argmax(lcp))
        if lcp[j] > best.length:
            best = ExactResult(int(lcp[j]), i, j)
    return best


class _SuffixAutomaton:
    """Suffix automaton of one string, with the first end position of each state."""

    def __init__(self, codes):
        self.link = [-1]
        self.len = [0]
        self.first_end = [-1]
        self.next = [{}]
        last = 0
        for pos, c in enumerate(codes):
            cur = len(self.len)
            self.len.append(self.len[last] + 1)
            self.link.append(0)
            self.first_end.append(pos)
            self.next.append({})
            p = last
            while p != -1 and c not in self.next[p]:
                self.next[p][c] = cur
                p = self.link[p]
            if p != -1:
                q = self.next[p][c]
                if self.len[p] + 1 == self.len[q]:
                    self.link[cur] = q
                else:
                    clone = len(self.len)
                    self.len.append(self.len[p] + 1)
                    self.link.append(self.link[q])
                    self.first_end.append(self.first_end[q])
                    self.next.append(dict(self.next[q]))
                    while p != -1 and self.next[p].get(c) == q:
                        self.next[p][c] = clone
                        p = self.link[p]
                    self.link[q] = clone
                    self.link[cur] = clone
            last = cur


def exact_lcs(x: SequenceLike, y: SequenceLike) -> ExactResult:
    """Longest common substring (no mismatches) via a suffix automaton of ``x``."""
    xa, ya = as_array(x).tolist(), as_array(y).tolist()
    if not xa or not ya:
        return ExactResult(0, 0, 0)
    sam = _SuffixAutomaton(xa)
    state, cur, best = 0, 0, ExactResult(0, 0, 0)
    for pos, c in enumerate(ya):
        while state and c not in sam.next[state]:
            state = sam.link[state]
            cur = sam.len[state]
        if c in sam.next[state]:
            state = sam.next[state][c]
            cur += 1
        else:
            state, cur = 0, 0
        if cur > best.length:
            x_end = sam.first_end[state]
            best = ExactResult(cur, x_end - cur + 1, pos - cur + 1)
    return best
