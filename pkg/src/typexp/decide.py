"""Decision rules for multiple hypothesis testing over finite alphabets.

Four rules share one convention: hypothesis indices reported in
``Decision.index`` are 1-based (matching the usual H_1..H_M numbering),
and every tie breaks toward the lowest index.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import AlphabetMismatchError, ValidationError
from .robustify import RobustModel
from .simplex import Distribution, kl_divergence
from .types import SymbolSequence, TypeVector, type_of


@dataclass(frozen=True)
class HypothesisSet:
    """M candidate distributions with strictly positive prior weights."""

    distributions: tuple[Distribution, ...]
    priors: np.ndarray

    def __init__(self, distributions: Sequence[Distribution], priors=None):
        distributions = tuple(distributions)
        if len(distributions) < 2:
            raise ValidationError("need at least two hypotheses")
        k = distributions[0].alphabet_size
        if any(d.alphabet_size != k for d in distributions):
            raise AlphabetMismatchError("hypothesis distributions must share an alphabet")
        if priors is None:
            priors = np.full(len(distributions), 1.0 / len(distributions))
        priors = np.asarray(priors, dtype=np.float64)
        if priors.shape != (len(distributions),):
            raise ValidationError("need one prior per hypothesis")
        if np.any(priors <= 0):
            raise ValidationError("priors must be strictly positive")
        if abs(priors.sum() - 1.0) > 1e-9:
            raise ValidationError(f"priors sum to {priors.sum()!r}, not 1 within 1e-9")
        priors = priors / priors.sum()
        priors.flags.writeable = False
        object.__setattr__(self, "distributions", distributions)
        object.__setattr__(self, "priors", priors)

    @property
    def m(self) -> int:
        return len(self.distributions)

    @property
    def alphabet_size(self) -> int:
        return self.distributions[0].alphabet_size


@dataclass(frozen=True)
class Decision:
    """Outcome of a decision rule: 1-based hypothesis index plus the scores.

    ``index`` is the argmin (divergence-style rules) or argmax (posterior
    and tournament rules) of ``scores``, lowest index on ties.
    """

    index: int
    scores: tuple[float, ...]


class OpCounter:
    """Accumulates elementary symbol-touch operations for complexity checks."""

    __slots__ = ("total",)

    def __init__(self):
        self.total = 0

    def add(self, units: int) -> None:
        self.total += units


_active_counter: Optional[OpCounter] = None


@contextmanager
def count_ops() -> Iterator[OpCounter]:
    """Install an operation counter for the duration of the block."""
    global _active_counter
    counter = OpCounter()
    previous = _active_counter
    _active_counter = counter
    try:
        yield counter
    finally:
        _active_counter = previous


def _charge(units: int) -> None:
    if _active_counter is not None:
        _active_counter.add(units)


def _argbest_lowest(values: np.ndarray, take_max: bool) -> int:
    # np.argmax/argmin already return the first (lowest) index among ties.
    return int(np.argmax(values) if take_max else np.argmin(values))


def nn_decide(h: HypothesisSet, t: TypeVector) -> Decision:
    """Pick the hypothesis whose distribution is KL-closest to the observed type.

    Scores are the divergences from the type to each hypothesis; infinite
    scores are allowed (an all-infinite row still returns index 1).
    """
    if t.alphabet_size != h.alphabet_size:
        raise AlphabetMismatchError("type and hypotheses use different alphabets")
    t_hat = t.as_distribution()
    scores = tuple(kl_divergence(t_hat, d) for d in h.distributions)
    _charge(h.m * h.alphabet_size)
    return Decision(_argbest_lowest(np.array(scores), take_max=False) + 1, scores)


def map_decide(h: HypothesisSet, x: SymbolSequence) -> Decision:
    """Exact finite-n maximum a posteriori rule, computed in the log domain."""
    if x.alphabet_size != h.alphabet_size:
        raise AlphabetMismatchError("sequence and hypotheses use different alphabets")
    t = type_of(x)
    _charge(len(x))
    counts = np.asarray(t.counts, dtype=np.float64)
    scores = []
    for prior, d in zip(h.priors, h.distributions):
        mask = counts > 0
        if np.any(d.probs[mask] == 0):
            scores.append(-math.inf)
        else:
            scores.append(float(math.log2(prior) + (counts[mask] * np.log2(d.probs[mask])).sum()))
    _charge(h.m * h.alphabet_size)
    return Decision(_argbest_lowest(np.array(scores), take_max=True) + 1, tuple(scores))


def robust_decide(rm: RobustModel, t: TypeVector) -> Decision:
    """Nearest-neighbor rule against the robustified representatives."""
    if t.alphabet_size != rm.alphabet_size:
        raise AlphabetMismatchError("type and robust model use different alphabets")
    t_hat = t.as_distribution()
    scores = tuple(kl_divergence(t_hat, rep) for rep in rm.representatives)
    _charge(rm.m * rm.alphabet_size)
    return Decision(_argbest_lowest(np.array(scores), take_max=False) + 1, scores)


def dgl_decide(nominals: Sequence[Distribution], x: SymbolSequence) -> Decision:
    """Pairwise tournament over the symbols where one nominal outweighs the other.

    For each unordered pair (i, j) with i < j, the contested set holds the
    symbols where nominal i has strictly larger mass; whichever nominal's
    mass on that set is closer to the empirical mass wins the duel (ties to
    the lower index). The decision is the nominal with the most duel wins,
    again lowest index on ties; scores are the win counts.
    """
    nominals = tuple(nominals)
    if len(nominals) < 2:
        raise ValidationError("need at least two nominal distributions")
    k = nominals[0].alphabet_size
    if any(d.alphabet_size != k for d in nominals) or x.alphabet_size != k:
        raise AlphabetMismatchError("nominals and sequence must share an alphabet")
    t = type_of(x)
    _charge(len(x))
    emp = np.asarray(t.counts, dtype=np.float64) / t.n
    m = len(nominals)
    wins = np.zeros(m, dtype=np.int64)
    for i in range(m):
        for j in range(i + 1, m):
            contested = nominals[i].probs > nominals[j].probs
            mu = float(emp[contested].sum())
            qi = float(nominals[i].probs[contested].sum())
            qj = float(nominals[j].probs[contested].sum())
            if abs(mu - qi) <= abs(mu - qj):
                wins[i] += 1
            else:
                wins[j] += 1
            _charge(2 * k)
    _charge(m * m)
    return Decision(_argbest_lowest(wins, take_max=True) + 1, tuple(int(w) for w in wins))
