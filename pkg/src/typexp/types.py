"""Empirical types of finite sequences: counting, enumeration, sizes, probabilities.

Symbols are plain integers in ``[0, alphabet_size)``; any labeling lives in
configuration, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import AlphabetMismatchError, EnumerationOverflowError, ValidationError
from .simplex import Distribution

#: enumerate_types refuses instances with more type classes than this.
ENUMERATION_GUARD = 10**9

#: Largest n for which type_class_size also reports the exact integer count.
EXACT_SIZE_MAX_N = 170


@dataclass(frozen=True)
class TypeVector:
    """Occurrence counts of each symbol in a length-n sequence."""

    counts: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValidationError(f"n must be positive, got {self.n}")
        if any(c < 0 for c in self.counts):
            raise ValidationError(f"negative count in {self.counts}")
        if sum(self.counts) != self.n:
            raise ValidationError(f"counts {self.counts} sum to {sum(self.counts)}, not n={self.n}")

    @property
    def alphabet_size(self) -> int:
        return len(self.counts)

    def as_distribution(self) -> Distribution:
        return Distribution(np.asarray(self.counts, dtype=np.float64) / self.n)


@dataclass(frozen=True, eq=False)
class SymbolSequence:
    """A sequence of integer symbols over a fixed alphabet."""

    symbols: np.ndarray
    alphabet_size: int

    def __post_init__(self):
        symbols = np.asarray(self.symbols, dtype=np.int64)
        if symbols.ndim != 1:
            raise ValidationError(f"symbols must be 1-d, got shape {symbols.shape}")
        if self.alphabet_size < 2:
            raise ValidationError("alphabet_size must be >= 2")
        if symbols.size and (symbols.min() < 0 or symbols.max() >= self.alphabet_size):
            raise ValidationError("symbol out of range for alphabet")
        symbols.flags.writeable = False
        object.__setattr__(self, "symbols", symbols)

    def __len__(self) -> int:
        return self.symbols.size


def type_of(x: SymbolSequence) -> TypeVector:
    """The empirical type of a non-empty sequence."""
    if len(x) == 0:
        raise ValidationError("cannot take the type of an empty sequence")
    counts = np.bincount(x.symbols, minlength=x.alphabet_size)
    return TypeVector(tuple(int(c) for c in counts), len(x))


def count_types(n: int, alphabet_size: int) -> int:
    """Number of distinct types of length-n sequences (stars and bars)."""
    return math.comb(n + alphabet_size - 1, alphabet_size - 1)


def enumerate_types(n: int, alphabet_size: int) -> Iterator[TypeVector]:
    """Yield every type of length-n sequences, in ascending lexicographic order.

    Guarded: instances whose type count exceeds ``ENUMERATION_GUARD`` raise
    instead of silently running forever.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    if alphabet_size < 2:
        raise ValidationError("alphabet_size must be >= 2")
    total = count_types(n, alphabet_size)
    if total > ENUMERATION_GUARD:
        raise EnumerationOverflowError(
            f"{total} type classes for n={n}, alphabet_size={alphabet_size} "
            f"exceeds guard {ENUMERATION_GUARD}"
        )

    def rec(remaining: int, slots: int) -> Iterator[tuple[int, ...]]:
        if slots == 1:
            yield (remaining,)
            return
        for first in range(remaining + 1):
            for rest in rec(remaining - first, slots - 1):
                yield (first,) + rest

    for counts in rec(n, alphabet_size):
        yield TypeVector(counts, n)


def type_class_size(t: TypeVector) -> tuple[Optional[int], float]:
    """Number of sequences sharing type t: exact count and its log2.

    The exact multinomial is reported for n up to ``EXACT_SIZE_MAX_N``;
    beyond that only the log-gamma value is returned (exact=None).
    """
    log2_size = (
        math.lgamma(t.n + 1) - sum(math.lgamma(c + 1) for c in t.counts)
    ) / math.log(2.0)
    if t.n > EXACT_SIZE_MAX_N:
        return None, log2_size
    exact = math.factorial(t.n)
    for c in t.counts:
        exact //= math.factorial(c)
    return exact, math.log2(exact) if exact > 0 else 0.0


def sequence_log_prob(t: TypeVector, p: Distribution) -> float:
    """log2 probability of any single sequence of type t under i.i.d. draws from p.

    Equals sum_a counts[a] * log2 p(a); ``-inf`` when t puts count on a
    symbol outside p's support.
    """
    if t.alphabet_size != p.alphabet_size:
        raise AlphabetMismatchError(
            f"alphabet sizes differ: {t.alphabet_size} vs {p.alphabet_size}"
        )
    counts = np.asarray(t.counts, dtype=np.float64)
    m = counts > 0
    if np.any(p.probs[m] == 0):
        return -math.inf
    return float((counts[m] * np.log2(p.probs[m])).sum())


def sample_sequence(p: Distribution, n: int, rng: np.random.Generator) -> SymbolSequence:
    """Draw n i.i.d. symbols from p by inverse CDF over the cumulative sums.

    Consumes exactly n uniforms from ``rng``, so callers can budget
    deterministic stream offsets around it.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    cdf = np.cumsum(p.probs)
    cdf[-1] = 1.0
    u = rng.random(n)
    symbols = np.searchsorted(cdf, u, side="right")
    return SymbolSequence(symbols, p.alphabet_size)
