"""Multiplicative weights and binary digit patterns.

Weight tables hold mu or lambda on 1..limit:

    mu(1) = 1, mu(n) = (-1)^k if n is a product of k distinct primes, else 0
    lambda(n) = (-1)^Omega(n), Omega counting prime factors with multiplicity

Digit patterns act on the binary expansion of n written most significant bit
first (n = 0 has the empty expansion).  A pattern is a word whose first
character is the literal 1, whose last character is a literal 0 or 1, and
whose interior characters are 1 or the wildcard *.  pattern_parity(n) is the
number of overlapping occurrences of the pattern in the expansion, mod 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WEIGHT_KINDS = ("moebius", "liouville")
LIMIT_CAP = 1 << 26


def primes_up_to(limit: int) -> np.ndarray:
    """Ascending primes <= limit."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    composite = np.zeros(limit + 1, dtype=bool)
    composite[:2] = True
    for p in range(2, int(limit**0.5) + 1):
        if not composite[p]:
            composite[p * p :: p] = True
    return np.flatnonzero(~composite).astype(np.int64)


@dataclass(frozen=True)
class WeightTable:
    """Tabulated completely multiplicative-ish weight; values[0] is unused."""

    kind: str
    limit: int
    values: np.ndarray  # int8, length limit + 1, read-only

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise ValueError("n=%d outside table range 1..%d" % (n, self.limit))
        return int(self.values[n])


def weight_table(kind: str, limit: int) -> WeightTable:
    """Tabulate mu or lambda for 1..limit in one pass over the primes.

    Each prime slice flips the sign once, giving (-1)^(number of distinct
    prime divisors).  For mu, multiples of p^2 are then zeroed; for lambda,
    every higher prime-power slice flips again so the exponent counts
    multiplicity.
    """
    if kind not in WEIGHT_KINDS:
        raise ValueError("unknown weight kind %r (expected one of %s)" % (kind, ", ".join(WEIGHT_KINDS)))
    if not 1 <= limit <= LIMIT_CAP:
        raise ValueError("limit must be in 1..%d, got %d" % (LIMIT_CAP, limit))
    values = np.ones(limit + 1, dtype=np.int8)
    values[0] = 0
    for p in primes_up_to(limit):
        p = int(p)
        values[p::p] *= -1
        if kind == "moebius":
            sq = p * p
            if sq <= limit:
                values[sq::sq] = 0
        else:
            q = p * p
            while q <= limit:
                values[q::q] *= -1
                q *= p
    values.flags.writeable = False
    return WeightTable(kind, limit, values)


@dataclass(frozen=True)
class DigitPattern:
    """Binary pattern over {1, *} with a literal terminal bit."""

    pattern: str

    def __post_init__(self):
        p = self.pattern
        if len(p) < 2:
            raise ValueError("pattern needs at least two characters, got %r" % p)
        if p[0] != "1":
            raise ValueError("pattern must start with the literal 1, got %r" % p)
        if p[-1] not in "01":
            raise ValueError("pattern must end with a literal bit, got %r" % p)
        bad = set(p[1:-1]) - set("1*")
        if bad:
            raise ValueError("interior characters must be 1 or *, got %r in %r" % ("".join(sorted(bad)), p))

    @property
    def terminal_bit(self) -> int:
        return int(self.pattern[-1])

    def __len__(self) -> int:
        return len(self.pattern)


def _as_pattern(pattern) -> DigitPattern:
    return pattern if isinstance(pattern, DigitPattern) else DigitPattern(str(pattern))


def pattern_parity(n: int, pattern) -> int:
    """Parity of overlapping pattern occurrences in the binary expansion of n."""
    if n < 0:
        raise ValueError("n must be nonnegative, got %d" % n)
    pat = _as_pattern(pattern).pattern
    bits = bin(n)[2:] if n else ""
    m = len(pat)
    count = 0
    for i in range(len(bits) - m + 1):
        window = bits[i : i + m]
        if all(c == "*" or c == w for c, w in zip(pat, window)):
            count += 1
    return count & 1


def pattern_parities(count: int, pattern) -> np.ndarray:
    """pattern_parity(n) for n = 0..count-1, vectorized.

    The pattern starts with a literal 1, so a matching window is
    automatically inside the expansion; windows are scanned by their offset
    from the low end.
    """
    pat = _as_pattern(pattern).pattern
    if count < 0:
        raise ValueError("count must be nonnegative, got %d" % count)
    m = len(pat)
    n = np.arange(count, dtype=np.uint64)
    acc = np.zeros(count, dtype=np.uint8)
    maxbits = int(count - 1).bit_length() if count > 1 else 1
    for j in range(maxbits):
        ok = np.ones(count, dtype=bool)
        for i, c in enumerate(pat):
            if c == "*":
                continue
            # character i sits at bit j + m - 1 - i (expansion is MSB first)
            bit = (n >> np.uint64(j + m - 1 - i)) & np.uint64(1)
            ok &= bit.astype(bool) if c == "1" else ~bit.astype(bool)
        acc ^= ok
    return acc
