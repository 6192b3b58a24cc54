"""Alphabet-encoded sequences and Hamming-distance primitives.

Symbols are stored as 1-based codes (``1..sigma``) in ``uint8`` arrays
(``uint16`` for a full 256-symbol alphabet).
Characters are mapped to codes once, at ingestion; every algorithm in the
package works on the code arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np


class SequenceError(ValueError):
    """Raised for malformed sequences or unknown symbols."""


class Source(enum.Enum):
    X = "X"
    Y = "Y"


@dataclass(frozen=True)
class Alphabet:
    """Ordered symbol table; the i-th symbol (0-based) gets code ``i + 1``."""

    symbols: str
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.symbols) < 2:
            raise SequenceError("alphabet needs at least 2 symbols")
        if len(self.symbols) > 256:
            raise SequenceError("alphabets larger than 256 symbols are not supported")
        if len(set(self.symbols)) != len(self.symbols):
            raise SequenceError(f"duplicate symbols in alphabet {self.symbols!r}")
        object.__setattr__(self, "_index", {c: i + 1 for i, c in enumerate(self.symbols)})

    @property
    def size(self) -> int:
        return len(self.symbols)

    def code_of(self, symbol: str) -> int:
        return self._index[symbol]

    def encode(self, text: str, unknown: Optional[str] = None) -> "Sequence":
        """Encode ``text`` into a :class:`Sequence`.

        Unknown characters raise :class:`SequenceError` unless ``unknown``
        names a symbol of this alphabet to map them to.
        """
        fallback = None if unknown is None else self._index.get(unknown)
        if unknown is not None and fallback is None:
            raise SequenceError(f"replacement symbol {unknown!r} is not in the alphabet")
        lut = np.zeros(256, dtype=_code_dtype(self.size))
        for c, code in self._index.items():
            if ord(c) < 256:
                lut[ord(c)] = code
        try:
            raw = np.frombuffer(text.encode("latin-1"), dtype=np.uint8)
        except UnicodeEncodeError as exc:
            raise SequenceError("only single-byte characters are supported") from exc
        codes = lut[raw]
        bad = np.flatnonzero(codes == 0)
        if bad.size:
            if fallback is None:
                pos = int(bad[0])
                raise SequenceError(f"unknown symbol {text[pos]!r} at position {pos}")
            codes[bad] = fallback
        return Sequence(codes, self)

    def decode(self, codes) -> str:
        return "".join(self.symbols[c - 1] for c in np.asarray(codes).tolist())

    @classmethod
    def from_texts(cls, *texts: str) -> "Alphabet":
        """Smallest alphabet covering every character of ``texts`` (sorted)."""
        symbols = sorted(set().union(*texts))
        while len(symbols) < 2:
            # pad degenerate inputs so sigma >= 2 holds
            symbols.append(next(c for c in "ACGTXYZ" if c not in symbols))
        return cls("".join(symbols))


DNA = Alphabet("ACGT")


def _code_dtype(sigma: int):
    return np.uint8 if sigma < 256 else np.uint16


class Sequence:
    """An immutable string over an :class:`Alphabet`, held as 1-based codes."""

    __slots__ = ("codes", "alphabet")

    def __init__(self, codes, alphabet: Alphabet):
        arr = np.array(codes, dtype=_code_dtype(alphabet.size), copy=True).ravel()
        if arr.size and (arr.min() < 1 or arr.max() > alphabet.size):
            raise SequenceError(f"codes must lie in 1..{alphabet.size}")
        arr.setflags(write=False)
        object.__setattr__(self, "codes", arr)
        object.__setattr__(self, "alphabet", alphabet)

    def __setattr__(self, name, value):
        raise AttributeError("Sequence is immutable")

    def __len__(self) -> int:
        return int(self.codes.size)

    def __getitem__(self, item) -> "Sequence":
        if isinstance(item, slice):
            return Sequence(self.codes[item], self.alphabet)
        return self.alphabet.symbols[int(self.codes[item]) - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sequence):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.codes, other.codes)

    def __hash__(self):
        return hash((self.alphabet.symbols, self.codes.tobytes()))

    def __str__(self) -> str:
        return self.alphabet.decode(self.codes)

    def __repr__(self) -> str:
        text = str(self)
        if len(text) > 40:
            text = text[:37] + "..."
        return f"Sequence({text!r}, sigma={self.alphabet.size})"

    @property
    def sigma(self) -> int:
        return self.alphabet.size


@dataclass(frozen=True)
class Window:
    """A length-``length`` substring of X or Y starting at ``start``."""

    source: Source
    start: int
    length: int


SequenceLike = Union[Sequence, str, bytes, np.ndarray, list, tuple]


def as_array(s: SequenceLike) -> np.ndarray:
    """View any sequence-like input as a 1-D integer array for comparisons."""
    if isinstance(s, Sequence):
        return s.codes
    if isinstance(s, str):
        return np.frombuffer(s.encode("latin-1"), dtype=np.uint8)
    if isinstance(s, bytes):
        return np.frombuffer(s, dtype=np.uint8)
    return np.asarray(s).ravel()


class _ExceedsCap:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ExceedsCap"

    def __bool__(self):
        return False


ExceedsCap = _ExceedsCap()
"""Sentinel returned by :func:`hamming_distance_capped` when the cap is exceeded."""


def _pair(u: SequenceLike, v: SequenceLike):
    a, b = as_array(u), as_array(v)
    if a.size != b.size:
        raise SequenceError(f"length mismatch: {a.size} != {b.size}")
    return a, b


def hamming_distance(u: SequenceLike, v: SequenceLike) -> int:
    a, b = _pair(u, v)
    return int(np.count_nonzero(a != b))


def hamming_distance_capped(u: SequenceLike, v: SequenceLike, cap: int):
    """Hamming distance, or :data:`ExceedsCap` once more than ``cap`` mismatches are seen.

    Scans in blocks so that far-apart pairs exit early.
    """
    a, b = _pair(u, v)
    seen = 0
    block = 256
    for lo in range(0, a.size, block):
        seen += int(np.count_nonzero(a[lo:lo + block] != b[lo:lo + block]))
        if seen > cap:
            return ExceedsCap
    return seen


def mu_expand(s: SequenceLike, sigma: Optional[int] = None) -> np.ndarray:
    """One-hot expansion: symbol ``a`` becomes ``0^(a-1) 1 0^(sigma-a)``.

    Returns a ``uint8`` bit vector of length ``sigma * len(s)``.
    """
    if sigma is None:
        if not isinstance(s, Sequence):
            raise SequenceError("sigma is required for raw code arrays")
        sigma = s.sigma
    codes = as_array(s).astype(np.int64)
    if codes.size and (codes.min() < 1 or codes.max() > sigma):
        raise SequenceError(f"codes must lie in 1..{sigma}")
    out = np.zeros(sigma * codes.size, dtype=np.uint8)
    out[sigma * np.arange(codes.size) + codes - 1] = 1
    return out
