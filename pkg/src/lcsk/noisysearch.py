"""Lie-tolerant binary search and the top-level approximate LCS_k solver.

The search plays the "Twenty Questions" game: a hidden pair ``A <= B`` in
``[0, N]``, questions "is x <= A?", answers forced to YES for ``x <= A``
(except for a bounded number of lies) and to NO for ``x > B``.  Paul keeps
a stack of trusted intervals and finally reports the largest ``x`` that
ever drew a YES, which always lands in ``[A, B]``.

The solver wraps the randomised decision procedure as the answering side:
``x`` maps to a window length, YES means a verified witness pair of that
length exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple

import numpy as np

from . import lshdecide
from .baselines import ExactResult, exact_lcs
from .fingerprint import FingerprintScheme
from .seqcore import (Alphabet, ExceedsCap, Sequence, SequenceLike, as_array,
                      hamming_distance_capped)
from .sketch import DEFAULT_SKETCH_CONSTANT


@dataclass(frozen=True)
class GameConfig:
    """Range ``[0, N]``, lie fraction ``rho`` and question budget ``Q``.

    ``Q`` defaults to ``ceil(8 log2 N / (1 - 3 rho)**2)`` (with ``N`` floored
    at 2 so a one-step range still gets questions); pass ``questions`` to
    override it.
    """

    N: int
    rho: float = 0.3
    questions: Optional[int] = None

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be >= 0")
        if not 0 <= self.rho < 1 / 3:
            raise ValueError("rho must lie in [0, 1/3)")
        if self.questions is not None and self.questions < 1:
            raise ValueError("question budget must be >= 1")

    @classmethod
    def practical(cls, N: int, rho: float = 0.3) -> "GameConfig":
        """Short budget ``ceil(2 log2(N + 2))`` used by the solver by default."""
        return cls(N=N, rho=rho, questions=math.ceil(2 * math.log2(N + 2)))

    @property
    def Q(self) -> int:
        if self.questions is not None:
            return self.questions
        gap = 1 - 3 * Fraction(self.rho).limit_denominator(10 ** 9)
        return max(1, math.ceil(8 * math.log2(max(self.N, 2)) / float(gap * gap)))

    @property
    def lie_budget(self) -> int:
        return math.ceil(self.rho * self.Q)


def twenty_questions(oracle: Callable[[int], bool], config: GameConfig) -> int:
    """Play ``Q // 2`` rounds of the stack strategy and return the largest YES.

    Trusted intervals are right-open, ``[lo, hi)`` meaning ``lo <= A < hi``,
    starting from ``[0, N + 1)``.  Each round asks the midpoint
    ``ceil((lo + hi) / 2)`` of the top interval and then one endpoint to
    check consistency: consistent answers push the matching half,
    inconsistent ones pop the interval.  A unit interval re-confirmed this
    way is pushed again, which is how trust in the final answer builds up.
    The root is never popped, and ``N + 1`` is answered NO without asking.
    ``0`` is returned when no question drew a YES (``0 <= A`` holds by
    contract).
    """
    top = config.N + 1
    stack = [(0, top)]
    best = 0

    def ask(x: int) -> bool:
        nonlocal best
        if x >= top:
            return False
        answer = bool(oracle(x))
        if answer and x > best:
            best = x
        return answer

    for _ in range(config.Q // 2):
        lo, hi = stack[-1]
        mid = (lo + hi + 1) // 2
        if ask(mid):
            consistent = not ask(hi)
            half = (mid, hi)
        else:
            consistent = ask(lo)
            half = (lo, mid)
        if consistent:
            stack.append(half)
        elif len(stack) > 1:
            stack.pop()
    return best


def interval_bounds(x: SequenceLike, y: SequenceLike, k: int,
                    lcs: Optional[ExactResult] = None) -> Tuple[int, int]:
    """Bracket for LCS_k from the exact LCS: ``[LCS + k, (k+1) LCS + k]``, clamped.

    Both ends are capped at ``min(|x|, |y|)``.
    """
    if lcs is None:
        lcs = exact_lcs(x, y)
    cap = min(as_array(x).size, as_array(y).size)
    return min(lcs.length + k, cap), min((k + 1) * lcs.length + k, cap)


@dataclass(frozen=True)
class SearchResult:
    length: int
    x_start: int
    y_start: int
    distance: int
    lower: int = 0
    upper: int = 0
    decisions: int = 0

    @property
    def witness(self) -> Tuple[int, int]:
        return self.x_start, self.y_start


def _encode_pair(x, y):
    """Code arrays and alphabet size for a pair of inputs."""
    if isinstance(x, Sequence) and isinstance(y, Sequence):
        if x.alphabet != y.alphabet:
            raise ValueError("sequences use different alphabets")
        return x.codes, y.codes, x.sigma
    if isinstance(x, str) and isinstance(y, str):
        alpha = Alphabet.from_texts(x, y)
        return alpha.encode(x).codes, alpha.encode(y).codes, alpha.size
    xa, ya = as_array(x), as_array(y)
    for a in (xa, ya):
        if a.size and a.min() < 1:
            raise ValueError("code arrays must be 1-based")
    top = max([2] + [int(a.max()) for a in (xa, ya) if a.size])
    return xa, ya, top


def lcs_approx_k(x: SequenceLike, y: SequenceLike, k: int, epsilon: float, *, seed=None,
                 repetitions: int = 3, question_rule: str = "practical", rho: float = 0.3,
                 hash_rule="practical", hash_multiplier: float = 1.0,
                 sketch_constant: float = DEFAULT_SKETCH_CONSTANT,
                 batched: bool = False) -> SearchResult:
    """Approximate longest common substring with ``k`` mismatches.

    Searches the window length over the LCS-derived bracket with
    :func:`twenty_questions`; every question runs the decision procedure up
    to ``repetitions`` times and every YES witness is re-checked character
    by character, so the returned pair always has at most
    ``(1 + epsilon) * k`` mismatches.  Its length reaches LCS_k with high
    probability.

    Args:
        x, y: Input strings (``Sequence``, ``str`` or 1-based code arrays).
        k: Mismatch budget, ``>= 0``.
        epsilon: Slack, ``> 0``.
        seed: Master seed; fixes every random choice of the run.
        repetitions: Decision attempts per question.
        question_rule: ``"practical"`` for ``ceil(2 log2(B - A + 2))``
            questions, ``"theory"`` for the full lie-tolerant budget.
        hash_rule, hash_multiplier: Number of hash functions per decision
            (see :func:`lshdecide.hash_count`).
        batched: Linear-memory sketch evaluation.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    xa, ya, sigma = _encode_pair(x, y)
    if xa.size == 0 and ya.size == 0:
        raise ValueError("both strings are empty")
    if xa.size == 0 or ya.size == 0:
        return SearchResult(0, 0, 0, 0)

    lcs = exact_lcs(xa, ya)
    lower, upper = interval_bounds(xa, ya, k, lcs)
    budget = math.floor((1 + Fraction(epsilon)) * k)
    root = np.random.SeedSequence(seed)
    scheme = FingerprintScheme.from_seed(np.random.default_rng(root.spawn(1)[0]))
    best = SearchResult(lcs.length, lcs.x_start, lcs.y_start, 0, lower, upper)
    calls = 0

    def verified_yes(length: int) -> bool:
        nonlocal best, calls
        for _ in range(repetitions):
            calls += 1
            out = lshdecide.decide(xa, ya, length, k, epsilon, sigma=sigma, scheme=scheme,
                                   rng=np.random.default_rng(root.spawn(1)[0]),
                                   sketch_constant=sketch_constant, batched=batched,
                                   hash_rule=hash_rule, hash_multiplier=hash_multiplier)
            if not out.yes:
                continue
            i, j = out.x_start, out.y_start
            dist = hamming_distance_capped(xa[i:i + length], ya[j:j + length], budget)
            if dist is ExceedsCap:
                continue  # sketch false positive: demote to NO
            if length > best.length:
                best = SearchResult(length, i, j, dist, lower, upper)
            return True
        return False

    if upper == lower:
        verified_yes(lower)
    else:
        span = upper - lower
        if question_rule == "practical":
            config = GameConfig.practical(span, rho)
        elif question_rule == "theory":
            config = GameConfig(span, rho)
        else:
            raise ValueError(f"unknown question rule {question_rule!r}")
        twenty_questions(lambda step: verified_yes(lower + step), config)

    final = SearchResult(best.length, best.x_start, best.y_start, best.distance, lower, upper,
                         calls)
    return final
