"""Exact arithmetic modulo the fingerprint prime, and exact sliding correlations.

Fingerprints live modulo ``Q_PRIME = 29 * 2**57 + 1``, a prime just below
``2**62`` whose multiplicative group has a ``2**57`` power-of-two subgroup,
so number-theoretic transforms of any practical length exist.  Other moduli
below ``2**62`` are accepted but always take the direct (non-NTT) path.

Vector products modulo ``q`` use the extended-precision quotient trick:
``a*b - floor(a*b/q)*q`` is evaluated in wrapping ``uint64`` arithmetic while
the quotient comes from ``np.longdouble`` (64-bit mantissa), which is off by
at most one and corrected afterwards.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

Q_PRIME = 4179340454199820289
GENERATOR = 3
_TWO_ADICITY = 57

_Q64 = np.uint64(Q_PRIME)

if np.finfo(np.longdouble).nmant < 63:  # pragma: no cover - platform guard
    raise ImportError("modmath needs an extended-precision np.longdouble (>= 64-bit mantissa)")

# keeps float FFT rounding error far below 0.5
_FLOAT_EXACT = 2 ** 40


class Modulus(int):
    """A modulus in ``[2, 2**62)``; ``Q_PRIME`` by default."""

    def __new__(cls, value: int = Q_PRIME):
        if not 2 <= value < 1 << 62:
            raise ValueError("modulus must lie in [2, 2**62)")
        return super().__new__(cls, value)


def _as_residues(a, q: int = Q_PRIME) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        return np.array([int(x) % q for x in arr.ravel()], dtype=np.uint64)
    if arr.dtype.kind == "i":
        arr = arr.astype(np.int64, copy=False)
        if arr.size and (arr.min() < 0 or arr.max() >= q):
            arr = np.mod(arr, np.int64(q))
        return arr.astype(np.uint64)
    arr = arr.astype(np.uint64)
    if arr.size and int(arr.max()) >= q:
        arr = arr % np.uint64(q)
    return arr


def addmod(a: np.ndarray, b: np.ndarray, q: int = Q_PRIME) -> np.ndarray:
    """Elementwise ``(a + b) mod q`` for residues already in ``[0, q)``."""
    q64 = np.uint64(q)
    s = a + b  # < 2**63, no wrap
    s -= q64 * (s >= q64)
    return s


def mulmod(a, b, q: int = Q_PRIME) -> np.ndarray:
    """Elementwise ``(a * b) mod q`` for residues in ``[0, q)``; exact."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    q64, qi = np.uint64(q), np.int64(q)
    quot = np.floor(a.astype(np.longdouble) * b.astype(np.longdouble) / np.longdouble(q))
    with np.errstate(over="ignore"):  # wrapping is intended
        r = (a * b - quot.astype(np.uint64) * q64).view(np.int64)  # true remainder +- q
    r = np.where(r < 0, r + qi, r)
    r = np.where(r >= qi, r - qi, r)
    return r.astype(np.uint64)


@lru_cache(maxsize=64)
def _twiddles(log_n: int, inverse: bool) -> tuple:
    """Per-stage twiddle tables for a length ``2**log_n`` transform."""
    if log_n > _TWO_ADICITY:
        raise ValueError("transform length exceeds 2**57")
    root = pow(GENERATOR, (Q_PRIME - 1) >> log_n, Q_PRIME)
    if inverse:
        root = pow(root, Q_PRIME - 2, Q_PRIME)
    tables = []
    half = 1
    while half < (1 << log_n):
        w = pow(root, (1 << log_n) // (2 * half), Q_PRIME)
        tw = np.empty(half, dtype=np.uint64)
        cur = 1
        for i in range(half):
            tw[i] = cur
            cur = cur * w % Q_PRIME
        tables.append(tw)
        half *= 2
    return tuple(tables)


@lru_cache(maxsize=64)
def _bitrev(log_n: int) -> np.ndarray:
    n = 1 << log_n
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(log_n):
        rev |= ((idx >> b) & 1) << (log_n - 1 - b)
    return rev


def ntt(a: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Iterative radix-2 NTT of a power-of-two length residue vector."""
    n = a.size
    log_n = n.bit_length() - 1
    if n != 1 << log_n:
        raise ValueError("NTT length must be a power of two")
    out = np.ascontiguousarray(a, dtype=np.uint64)[_bitrev(log_n)]
    for tw in _twiddles(log_n, inverse):
        half = tw.size
        blocks = out.reshape(-1, 2 * half)
        lo = blocks[:, :half].copy()
        hi = mulmod(blocks[:, half:], tw[None, :])
        blocks[:, :half] = addmod(lo, hi)
        blocks[:, half:] = addmod(lo, np.where(hi == 0, hi, _Q64 - hi))
        out = blocks.reshape(-1)
    if inverse:
        out = mulmod(out, np.uint64(pow(n, Q_PRIME - 2, Q_PRIME)))
    return out


def convolve_mod(a, b, q: int = Q_PRIME) -> np.ndarray:
    """Exact linear convolution ``sum_i a[i] * b[t-i] mod q``, length ``|a|+|b|-1``.

    NTT-based for ``Q_PRIME``; schoolbook for short inputs and other moduli.
    """
    q = Modulus(q)
    a, b = _as_residues(a, q), _as_residues(b, q)
    if a.size == 0 or b.size == 0:
        raise ValueError("convolve_mod needs non-empty inputs")
    out_len = a.size + b.size - 1
    if min(a.size, b.size) <= 32 or q != Q_PRIME:
        return _convolve_direct(a, b, out_len, q)
    size = 1 << (out_len - 1).bit_length()
    fa = ntt(np.pad(a, (0, size - a.size)))
    fb = ntt(np.pad(b, (0, size - b.size)))
    return ntt(mulmod(fa, fb), inverse=True)[:out_len]


def _convolve_direct(a: np.ndarray, b: np.ndarray, out_len: int, q: int) -> np.ndarray:
    if a.size > b.size:
        a, b = b, a
    out = np.zeros(out_len, dtype=np.uint64)
    for i, coef in enumerate(a.tolist()):
        if coef:
            seg = out[i:i + b.size]
            out[i:i + b.size] = addmod(seg, mulmod(b, np.uint64(coef), q), q)
    return out


def _scaled_gather(coef: int, text: np.ndarray, table_size: int, q: int) -> np.ndarray:
    """``coef * text mod q`` via a lookup table over the small text values."""
    table = np.array([coef * v % q for v in range(table_size)], dtype=np.uint64)
    return table[text]


def correlate_windows(weights, text, q: int = Q_PRIME) -> np.ndarray:
    """Sliding dot products ``out[i] = sum_p weights[p] * text[i+p] mod q``.

    Sparse weight vectors are evaluated directly, one shifted slice per
    nonzero weight; dense ones go through :func:`convolve_mod` on the
    reversed weights (``Q_PRIME`` only).
    """
    q = Modulus(q)
    w = _as_residues(weights, q)
    t = _as_residues(text, q)
    ell, n = w.size, t.size
    if ell == 0:
        raise ValueError("empty weight vector")
    if ell > n:
        raise ValueError(f"window length {ell} exceeds text length {n}")
    n_windows = n - ell + 1
    nz = np.flatnonzero(w)
    size = 1 << (n + ell - 2).bit_length()
    direct_cost = nz.size * n_windows
    ntt_cost = 40 * size * max(1, size.bit_length())
    if direct_cost <= ntt_cost or q != Q_PRIME:
        out = np.zeros(n_windows, dtype=np.uint64)
        small = int(t.max()) + 1 if n else 1
        use_table = small <= min(4096, max(64, n_windows // 4))
        t_idx = t.astype(np.int64) if use_table else t
        for p in nz.tolist():
            seg = t_idx[p:p + n_windows]
            coef = int(w[p])
            if use_table:
                term = _scaled_gather(coef, seg, small, q)
            else:
                term = mulmod(seg, np.uint64(coef), q)
            out = addmod(out, term, q)
        return out
    full = convolve_mod(w[::-1], t, q)
    return full[ell - 1:ell - 1 + n_windows]


def integer_correlate_windows(weights, indicator) -> np.ndarray:
    """Exact integer sliding dot products ``sum_p weights[p] * indicator[i+p]``.

    Uses a floating FFT and rounds; the magnitude bound
    ``sum |weights| * max |indicator|`` must stay below ``2**40`` so every
    output is an exactly representable integer, otherwise ``ValueError``.
    """
    w = np.asarray(weights, dtype=np.int64)
    x = np.asarray(indicator, dtype=np.int64)
    if w.size == 0:
        raise ValueError("empty weight vector")
    if w.size > x.size:
        raise ValueError(f"window length {w.size} exceeds text length {x.size}")
    bound = int(np.abs(w).sum()) * (int(np.abs(x).max()) if x.size else 0)
    if bound >= _FLOAT_EXACT:
        raise ValueError("integer correlation could exceed exact float range")
    n_windows = x.size - w.size + 1
    if w.size * n_windows <= 1 << 14:
        view = np.lib.stride_tricks.sliding_window_view(x, w.size)
        return view @ w
    size = 1 << (x.size + w.size - 2).bit_length()
    spec = np.fft.rfft(x.astype(np.float64), size) * np.fft.rfft(w[::-1].astype(np.float64), size)
    raw = np.fft.irfft(spec, size)[w.size - 1:w.size - 1 + n_windows]
    out = np.rint(raw)
    if bound and np.max(np.abs(raw - out), initial=0.0) > 0.25:  # pragma: no cover
        raise ArithmeticError("floating correlation lost exactness")
    return out.astype(np.int64)
