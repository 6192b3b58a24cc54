"""Quick oracle-equivalence and statistical checks, runnable from the CLI."""

from __future__ import annotations

import math
from typing import Callable, List, NamedTuple

import numpy as np

from . import noisysearch
from .baselines import brute_lcs_k, exact_lcs, fgku
from .modmath import Q_PRIME, convolve_mod
from .seqcore import hamming_distance
from .sketch import SketchSpec, sketch_window


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def _fgku_vs_brute(rng) -> str:
    for _ in range(60):
        sigma = int(rng.choice([4, 26]))
        x = rng.integers(1, sigma + 1, size=int(rng.integers(1, 80)))
        y = rng.integers(1, sigma + 1, size=int(rng.integers(1, 80)))
        k = int(rng.choice([0, 1, 2, 5]))
        a, b = fgku(x, y, k).length, brute_lcs_k(x, y, k).length
        assert a == b, f"fgku {a} != brute {b} (k={k})"
        if k == 0:
            assert exact_lcs(x, y).length == a, "exact LCS disagrees"
    return "60 instances"


def _convolution(rng) -> str:
    for _ in range(20):
        a = [int(v) for v in rng.integers(0, Q_PRIME, size=int(rng.integers(1, 90)), dtype=np.int64)]
        b = [int(v) for v in rng.integers(0, Q_PRIME, size=int(rng.integers(1, 90)), dtype=np.int64)]
        want = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                want[i + j] = (want[i + j] + u * v) % Q_PRIME
        got = [int(v) for v in convolve_mod(np.array(a, dtype=np.uint64), np.array(b, dtype=np.uint64))]
        assert got == want, "modular convolution mismatch"
    return "20 convolutions"


def _binary_search(rng) -> str:
    for N in range(0, 33):
        cfg = noisysearch.GameConfig(N)
        for A in range(N + 1):
            got = noisysearch.twenty_questions(lambda x, A=A: x <= A, cfg)
            assert got == A, f"N={N} A={A} returned {got}"
    return "truthful oracle, N <= 32"


def _sketch_mean(rng) -> str:
    n = 60
    x = rng.integers(1, 5, size=n).astype(np.uint8)
    y = x.copy()
    flip = rng.choice(n, size=10, replace=False)
    y[flip] = (y[flip] % 4) + 1
    d = hamming_distance(x, y)
    vals = []
    for t in range(400):
        spec = SketchSpec(rows=8, length=n, sigma=4, seed=int(rng.integers(2**63)))
        diff = sketch_window(x, spec).coords - sketch_window(y, spec).coords
        vals.append(spec.scale_sq * float(np.dot(diff, diff)))
    mean = float(np.mean(vals))
    sem = float(np.std(vals) / math.sqrt(len(vals)))
    assert abs(mean - d) < 5 * sem, f"mean {mean:.2f} vs d_H {d}"
    return f"mean {mean:.2f} vs d_H {d}"


def _witness_guarantee(rng) -> str:
    for t in range(4):
        x = rng.integers(1, 5, size=400)
        y = rng.integers(1, 5, size=400)
        res = noisysearch.lcs_approx_k(x, y, 4, 1.0, seed=t)
        d = hamming_distance(x[res.x_start:res.x_start + res.length],
                             y[res.y_start:res.y_start + res.length])
        assert d == res.distance and d <= 8, f"witness distance {d}"
    return "4 runs"


CHECKS: List[tuple] = [
    ("fgku == brute force", _fgku_vs_brute),
    ("NTT convolution == schoolbook", _convolution),
    ("stack search, truthful oracle", _binary_search),
    ("sketch distance unbiased", _sketch_mean),
    ("witness distance <= (1+eps)k", _witness_guarantee),
]


def run_selftest(seed: int = 0, report: Callable[[CheckResult], None] = None) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in CHECKS:
        try:
            res = CheckResult(name, True, fn(rng))
        except AssertionError as exc:
            res = CheckResult(name, False, str(exc))
        out.append(res)
        if report:
            report(res)
    return out
