"""Longest common substring with approximately k mismatches.

LSH over bit-sampling projections, Karp-Rabin fingerprints, ±1 sketches
and a lie-tolerant binary search, plus exact baselines to check them.
"""

from .baselines import ExactResult, brute_lcs_k, exact_lcs, fgku
from .estimators import ApproxLCSk, ExactLCSk
from .fingerprint import FingerprintScheme, ProjectionHash, fingerprint
from .lshdecide import DecisionOutcome, Verdict, decide
from .noisysearch import GameConfig, SearchResult, interval_bounds, lcs_approx_k, twenty_questions
from .seqcore import (DNA, Alphabet, ExceedsCap, Sequence, SequenceError, hamming_distance,
                      hamming_distance_capped, mu_expand)
from .sketch import SketchSpec

__version__ = "0.1.0"

__all__ = [
    "ExactResult", "brute_lcs_k", "exact_lcs", "fgku", "ApproxLCSk", "ExactLCSk",
    "FingerprintScheme", "ProjectionHash", "fingerprint", "DecisionOutcome", "Verdict",
    "decide", "GameConfig", "SearchResult", "interval_bounds", "lcs_approx_k",
    "twenty_questions", "DNA", "Alphabet", "ExceedsCap", "Sequence", "SequenceError",
    "hamming_distance", "hamming_distance_capped", "mu_expand", "SketchSpec",
]
