"""Lazy one-sided symbol sequences with positioned block reads."""

from __future__ import annotations

import numpy as np


class SymbolStream:
    """Deterministic sequence over {0..alphabet_size-1}, materialized on demand.

    build(n) must return a prefix of length >= n and agree with earlier calls
    on the overlap; growth extends a cached read-only prefix.  block() reads
    do not move the iteration cursor.
    """

    def __init__(self, build, name: str = "stream", alphabet_size: int | None = None, letters=None):
        self._build = build
        self.name = name
        self.alphabet_size = alphabet_size
        self.letters = tuple(letters) if letters is not None else None
        self._prefix = np.zeros(0, dtype=np.int32)
        self._prefix.flags.writeable = False
        self.position = 0

    def _ensure(self, n: int) -> None:
        if len(self._prefix) >= n:
            return
        try:
            grown = np.asarray(self._build(max(n, 2 * len(self._prefix), 64)), dtype=np.int32)
        except ValueError:
            # finite sources may refuse the padded ask but still cover n
            grown = np.asarray(self._build(n), dtype=np.int32)
        if len(grown) < n:
            raise ValueError("stream %r produced %d symbols, needed %d" % (self.name, len(grown), n))
        if len(self._prefix) and not np.array_equal(grown[: len(self._prefix)], self._prefix):
            raise ValueError("stream %r is not consistent between builds" % self.name)
        grown.flags.writeable = False
        self._prefix = grown

    def prefix(self, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError("length must be nonnegative, got %d" % n)
        self._ensure(n)
        return self._prefix[:n]

    def block(self, start: int, count: int) -> np.ndarray:
        if start < 0 or count < 0:
            raise ValueError("block read out of range: start=%d count=%d" % (start, count))
        self._ensure(start + count)
        return self._prefix[start : start + count]

    def __iter__(self):
        return self

    def __next__(self) -> int:
        self._ensure(self.position + 1)
        value = int(self._prefix[self.position])
        self.position += 1
        return value

    def take(self, n: int) -> list:
        return [int(v) for v in self.prefix(n)]

    def __repr__(self):
        return "SymbolStream(%r)" % self.name


def word_stream(values, name: str = "word", alphabet_size: int | None = None, letters=None) -> SymbolStream:
    """Wrap a finite word; reads past the end raise ValueError."""
    arr = np.asarray(values, dtype=np.int32)

    def build(n):
        if n > len(arr):
            raise ValueError("word %r has %d symbols, needed %d" % (name, len(arr), n))
        return arr

    return SymbolStream(build, name=name, alphabet_size=alphabet_size, letters=letters)


def periodic_stream(word, name: str = "periodic", alphabet_size: int | None = None) -> SymbolStream:
    """Infinite repetition of a finite word."""
    base = np.asarray(word, dtype=np.int32)
    if len(base) == 0:
        raise ValueError("period must be nonempty")

    def build(n):
        reps = -(-n // len(base))
        return np.tile(base, reps)

    return SymbolStream(build, name=name, alphabet_size=alphabet_size)
