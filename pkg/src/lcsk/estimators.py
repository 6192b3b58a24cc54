"""scikit-learn style wrappers around the exact and approximate solvers.

A "fit" here solves one string pair: ``fit(X, Y)`` stores the answer in
the usual trailing-underscore attributes.  There is nothing to transform
or predict afterwards, so only ``fit`` and the parameter API are offered.
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import noisysearch
from .baselines import fgku
from .seqcore import Alphabet, Sequence, SequenceError, hamming_distance


def check_pair(X, Y):
    """Validate two sequence-like inputs and return them as 1-based code arrays.

    Strings are encoded over the smallest alphabet covering both.
    """
    if isinstance(X, str) and isinstance(Y, str):
        alpha = Alphabet.from_texts(X, Y)
        return alpha.encode(X).codes, alpha.encode(Y).codes
    if isinstance(X, Sequence) and isinstance(Y, Sequence):
        if X.alphabet != Y.alphabet:
            raise SequenceError("sequences use different alphabets")
        return X.codes, Y.codes
    out = []
    for name, s in (("X", X), ("Y", Y)):
        if isinstance(s, (str, Sequence)):
            raise TypeError("X and Y must be of the same kind (both str, Sequence or arrays)")
        arr = np.asarray(s)
        if arr.ndim != 1:
            raise ValueError(f"{name} must be one-dimensional")
        if arr.size and (arr.dtype.kind not in "iu" or arr.min() < 1):
            raise ValueError(f"{name} must hold positive integer codes")
        out.append(arr)
    return out[0], out[1]


def check_k(k) -> int:
    if not isinstance(k, numbers.Integral) or isinstance(k, bool) or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    return int(k)


def check_epsilon(epsilon) -> float:
    if not isinstance(epsilon, numbers.Real) or not epsilon > 0:
        raise ValueError(f"epsilon must be a positive number, got {epsilon!r}")
    return float(epsilon)


class _PairMixin:
    def _store(self, length, x_start, y_start, xa, ya):
        self.length_ = int(length)
        self.x_start_ = int(x_start)
        self.y_start_ = int(y_start)
        self.witness_distance_ = hamming_distance(xa[x_start:x_start + length],
                                                  ya[y_start:y_start + length])

    @property
    def witness_(self):
        check_is_fitted(self, "length_")
        return self.x_start_, self.y_start_, self.length_


class ExactLCSk(_PairMixin, BaseEstimator):
    """Exact LCS_k via the quadratic diagonal scan."""

    def __init__(self, k: int = 0):
        self.k = k

    def fit(self, X, Y):
        k = check_k(self.k)
        xa, ya = check_pair(X, Y)
        res = fgku(xa, ya, k)
        self._store(res.length, res.x_start, res.y_start, xa, ya)
        return self


class ApproxLCSk(_PairMixin, BaseEstimator):
    """Approximate LCS_k: length at least LCS_k w.h.p., witness within ``(1+epsilon)k``.

    Parameters mirror :func:`lcsk.noisysearch.lcs_approx_k`; ``random_state``
    is its master seed.
    """

    def __init__(self, k: int = 10, epsilon: float = 1.0, random_state=None,
                 repetitions: int = 3, question_rule: str = "practical",
                 hash_rule="practical", batched: bool = False):
        self.k = k
        self.epsilon = epsilon
        self.random_state = random_state
        self.repetitions = repetitions
        self.question_rule = question_rule
        self.hash_rule = hash_rule
        self.batched = batched

    def fit(self, X, Y):
        k, eps = check_k(self.k), check_epsilon(self.epsilon)
        xa, ya = check_pair(X, Y)
        if xa.size == 0 and ya.size == 0:
            raise ValueError("both strings are empty")
        res = noisysearch.lcs_approx_k(xa, ya, k, eps, seed=self.random_state,
                                       repetitions=self.repetitions,
                                       question_rule=self.question_rule,
                                       hash_rule=self.hash_rule, batched=self.batched)
        self._store(res.length, res.x_start, res.y_start, xa, ya)
        self.bounds_ = (res.lower, res.upper)
        self.n_decisions_ = res.decisions
        return self
