"""Benchmark inputs: random strings and extracts from sequence files."""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

from ..seqcore import DNA, Alphabet, Sequence, SequenceError


class DatasetError(ValueError):
    """Unreadable, too short or malformed input file."""


def parse_sequence_text(text: str) -> str:
    """Concatenate the sequence lines of FASTA or raw text.

    Lines starting with ``>`` (headers) or ``;`` (comments) are skipped and
    all whitespace is removed.  Letters are upper-cased, so soft-masked
    genome regions read like the rest.
    """
    parts = []
    for line in text.splitlines():
        if line.startswith((">", ";")):
            continue
        parts.append("".join(line.split()))
    return "".join(parts).upper()


def read_sequence_file(path: os.PathLike | str) -> str:
    try:
        with open(path, "r", encoding="latin-1") as fh:
            return parse_sequence_text(fh.read())
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_sequence(path, alphabet: Optional[Alphabet] = None) -> Sequence:
    """Read a FASTA or raw file into a :class:`Sequence`.

    With no alphabet, the smallest one covering the file is used.
    """
    text = read_sequence_file(path)
    if alphabet is None:
        alphabet = Alphabet.from_texts(text)
    try:
        return alphabet.encode(text)
    except SequenceError as exc:
        raise DatasetError(f"{path}: {exc}") from exc


def generate_random(length: int, alphabet: Alphabet = DNA, seed=None) -> Sequence:
    """I.i.d. uniform symbols; the same seed gives the same string."""
    if length < 0:
        raise ValueError("length must be >= 0")
    rng = np.random.default_rng(seed)
    return Sequence(rng.integers(1, alphabet.size + 1, size=length), alphabet)


def extract_from_file(path, length: int, offset: Optional[int] = None, seed=None,
                      alphabet: Alphabet = DNA, text: Optional[str] = None) -> Sequence:
    """Contiguous extract of ``length`` symbols from a FASTA or raw file.

    ``offset=None`` draws the start uniformly from every valid position.
    Pass ``text`` (already parsed) to skip re-reading the file.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    if text is None:
        text = read_sequence_file(path)
    room = len(text) - length
    if room < 0:
        raise DatasetError(f"{path}: {len(text)} symbols available, {length} requested")
    if offset is None:
        offset = int(np.random.default_rng(seed).integers(0, room + 1))
    elif not 0 <= offset <= room:
        raise DatasetError(f"{path}: offset {offset} outside [0, {room}]")
    try:
        return alphabet.encode(text[offset:offset + length])
    except SequenceError as exc:
        raise DatasetError(f"{path}: {exc}") from exc
