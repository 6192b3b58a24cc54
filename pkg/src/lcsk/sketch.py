"""Random +-1 sketches of one-hot expanded windows, for cheap Hamming tests.

A window ``U`` of length ``l`` over ``sigma`` symbols is sketched as
``M @ mu(U)`` with ``M`` a ``d x (sigma*l)`` matrix of independent signs.
Coordinates are kept as exact integers; the real-valued sketch is that
vector times ``c`` with ``c**2 = 1/(2d)``, which makes
``c**2 * ||sk(U) - sk(V)||**2`` an unbiased estimate of ``d_H(U, V)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .modmath import integer_correlate_windows
from .seqcore import SequenceLike, as_array

DEFAULT_SKETCH_CONSTANT = 8.0

# Scratch budget (elements) for gathered sketch blocks.
_GATHER_BLOCK = 1 << 22


@dataclass(frozen=True, eq=False)
class SketchSpec:
    """Shape and randomness of one sketch matrix.

    Row ``i`` of the matrix is regenerated on demand from ``row_seeds[i]``,
    so the full matrix never has to be stored in batched mode.
    """

    rows: int
    length: int
    sigma: int
    seed: int
    alpha: float = 1.0
    row_seeds: np.ndarray = field(init=False, repr=False)
    _matrix: list = field(default_factory=list, init=False, repr=False)

    def __post_init__(self):
        if self.rows < 1 or self.length < 1 or self.sigma < 2:
            raise ValueError("need rows >= 1, length >= 1, sigma >= 2")
        seeds = np.random.SeedSequence(self.seed).generate_state(self.rows, dtype=np.uint64)
        seeds.setflags(write=False)
        object.__setattr__(self, "row_seeds", seeds)

    @classmethod
    def for_problem(cls, n: int, length: int, sigma: int, alpha: float, seed: int,
                    constant: float = DEFAULT_SKETCH_CONSTANT) -> "SketchSpec":
        """``d = ceil(constant * alpha**-2 * ln n)`` rows."""
        d = max(1, math.ceil(constant * math.log(max(n, 2)) / alpha ** 2))
        return cls(rows=d, length=length, sigma=sigma, seed=seed, alpha=alpha)

    @property
    def width(self) -> int:
        return self.sigma * self.length

    @property
    def scale_sq(self) -> Fraction:
        return Fraction(1, 2 * self.rows)

    def row(self, i: int) -> np.ndarray:
        rng = np.random.default_rng(int(self.row_seeds[i]))
        return rng.integers(0, 2, size=self.width, dtype=np.int8) * 2 - 1

    def matrix(self) -> np.ndarray:
        if not self._matrix:
            m = np.stack([self.row(i) for i in range(self.rows)])
            m.setflags(write=False)
            self._matrix.append(m)
        return self._matrix[0]

    def threshold(self, k: float, epsilon: float) -> int:
        """Largest integer ``S`` with ``S / (2d) <= (1 + epsilon) * k``."""
        bound = 2 * self.rows * (1 + Fraction(epsilon)) * Fraction(k)
        return math.floor(bound)

    def same_as(self, other: "SketchSpec") -> bool:
        return (self.rows, self.length, self.sigma, self.seed) == (
            other.rows, other.length, other.sigma, other.seed)


@dataclass(frozen=True, eq=False)
class WindowSketch:
    coords: np.ndarray
    spec: SketchSpec


def _codes(text: SequenceLike, spec: SketchSpec) -> np.ndarray:
    codes = as_array(text).astype(np.int64)
    if spec.length > codes.size:
        raise ValueError(f"window length {spec.length} exceeds text length {codes.size}")
    if codes.size and (codes.min() < 1 or codes.max() > spec.sigma):
        raise ValueError(f"codes must lie in 1..{spec.sigma}")
    return codes


def sketch_row_all_windows(text: SequenceLike, spec: SketchSpec, i: int) -> np.ndarray:
    """Row ``i`` coordinate of every window's sketch, one correlation per symbol."""
    codes = _codes(text, spec)
    weights = spec.row(i).reshape(spec.length, spec.sigma)
    out = np.zeros(codes.size - spec.length + 1, dtype=np.int64)
    for c in range(spec.sigma):
        indicator = (codes == c + 1).astype(np.int64)
        if indicator.any():
            out += integer_correlate_windows(weights[:, c], indicator)
    return out


def sketch_all_windows(text: SequenceLike, spec: SketchSpec) -> np.ndarray:
    """All rows for all windows at once, shape ``(n_windows, d)``.

    Frequency-domain products are summed over symbols before the inverse
    transform, so only ``d`` inverse FFTs are needed.
    """
    codes = _codes(text, spec)
    ell, sigma = spec.length, spec.sigma
    n_windows = codes.size - ell + 1
    size = 1 << (codes.size + ell - 2).bit_length()
    ind = np.stack([(codes == c + 1).astype(np.float64) for c in range(sigma)])
    f_ind = np.fft.rfft(ind, size, axis=1)
    out = np.empty((n_windows, spec.rows), dtype=np.int64)
    m = spec.matrix()
    step = max(1, _GATHER_BLOCK // (size * sigma))
    for lo in range(0, spec.rows, step):
        block = m[lo:lo + step].reshape(-1, ell, sigma)[:, ::-1, :].astype(np.float64)
        f_w = np.fft.rfft(block, size, axis=1)
        prod = np.einsum("rfc,cf->rf", f_w, f_ind)
        raw = np.fft.irfft(prod, size, axis=1)[:, ell - 1:ell - 1 + n_windows]
        vals = np.rint(raw)
        if np.max(np.abs(raw - vals), initial=0.0) > 0.25:  # pragma: no cover
            raise ArithmeticError("floating correlation lost exactness")
        out[:, lo:lo + step] = vals.T.astype(np.int64)
    return out


def sketch_windows(text: SequenceLike, starts, spec: SketchSpec) -> np.ndarray:
    """Sketch coordinates for the windows starting at ``starts``, shape ``(len(starts), d)``.

    Few windows are gathered directly from the matrix; many windows reuse
    the all-window FFT evaluation.
    """
    codes = _codes(text, spec)
    starts = np.asarray(starts, dtype=np.int64)
    ell, d = spec.length, spec.rows
    if starts.size == 0:
        return np.zeros((0, d), dtype=np.int64)
    size = 1 << (codes.size + ell - 2).bit_length()
    direct_cost = starts.size * ell * d
    fft_cost = 6 * d * spec.sigma * size * max(1, size.bit_length())
    if direct_cost > fft_cost:
        return sketch_all_windows(codes, spec)[starts]
    # (ell, sigma, d): column block for each (position, symbol)
    table = np.ascontiguousarray(spec.matrix().reshape(d, ell, spec.sigma).transpose(1, 2, 0))
    out = np.zeros((starts.size, d), dtype=np.int64)
    offsets = np.arange(ell)
    chunk = max(1, _GATHER_BLOCK // (ell * d))
    for lo in range(0, starts.size, chunk):
        st = starts[lo:lo + chunk]
        sym = codes[st[:, None] + offsets[None, :]] - 1
        out[lo:lo + chunk] = table[offsets[None, :], sym].sum(axis=1, dtype=np.int64)
    return out


def sketch_window(window: SequenceLike, spec: SketchSpec) -> WindowSketch:
    codes = _codes(window, spec)
    if codes.size != spec.length:
        raise ValueError("window length does not match the sketch spec")
    return WindowSketch(sketch_windows(codes, [0], spec)[0], spec)


def sketch_distance_test(u: WindowSketch, v: WindowSketch, k: float, epsilon: float,
                         spec: SketchSpec) -> bool:
    """``c**2 * ||u - v||**2 <= (1 + epsilon) * k``, decided in integers."""
    if not (u.spec.same_as(spec) and v.spec.same_as(spec)):
        raise ValueError("sketches were built under a different spec")
    delta = u.coords - v.coords
    return int(delta @ delta) <= spec.threshold(k, epsilon)


def collision_distances(pairs, x: SequenceLike, y: SequenceLike, spec: SketchSpec) -> np.ndarray:
    """Squared sketch distances for collision pairs ``(i, j)``, sketches precomputed.

    Only windows that occur in ``pairs`` are sketched.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    ux, inv_x = np.unique(pairs[:, 0], return_inverse=True)
    uy, inv_y = np.unique(pairs[:, 1], return_inverse=True)
    sx = sketch_windows(x, ux, spec)
    sy = sketch_windows(y, uy, spec)
    out = np.empty(pairs.shape[0], dtype=np.int64)
    step = max(1, _GATHER_BLOCK // spec.rows)
    for lo in range(0, pairs.shape[0], step):
        delta = sx[inv_x[lo:lo + step]] - sy[inv_y[lo:lo + step]]
        out[lo:lo + step] = np.einsum("ij,ij->i", delta, delta)
    return out


def batched_collision_distances(pairs, x: SequenceLike, y: SequenceLike, spec: SketchSpec,
                                batch_size: int) -> np.ndarray:
    """Same values as :func:`collision_distances`, in linear working memory.

    Collisions are processed ``batch_size`` at a time; within a batch each
    row of the matrix is generated, evaluated over both texts and folded
    into per-collision counters before moving on to the next row.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    out = np.zeros(pairs.shape[0], dtype=np.int64)
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    for lo in range(0, pairs.shape[0], batch_size):
        batch = pairs[lo:lo + batch_size]
        acc = np.zeros(batch.shape[0], dtype=np.int64)
        for i in range(spec.rows):
            row_x = sketch_row_all_windows(x, spec, i)
            row_y = sketch_row_all_windows(y, spec, i)
            diff = row_x[batch[:, 0]] - row_y[batch[:, 1]]
            acc += diff * diff
        out[lo:lo + batch_size] = acc
    return out
