"""Robustified representatives of nominal distributions and their error bounds.

When each true distribution is only known to lie within variational
distance ``epsilon_j`` of a nominal ``Q_j``, shrinking every nominal toward
the uniform distribution by ``(Q_j + eps_j) / (1 + |X| eps_j)`` yields a
representative whose induced test admits an explicit error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import AlphabetMismatchError, ValidationError
from .exponents import BoundResult
from .simplex import Distribution, entropy, kl_divergence, min_pairwise_chernoff, variational_distance
from .types import SymbolSequence, TypeVector, type_of


@dataclass(frozen=True)
class RobustModel:
    """Nominal distributions, their uncertainty radii, and the derived representatives."""

    nominals: tuple[Distribution, ...]
    epsilons: tuple[float, ...]
    representatives: tuple[Distribution, ...]
    epsilon_max: float

    @property
    def m(self) -> int:
        return len(self.nominals)

    @property
    def alphabet_size(self) -> int:
        return self.nominals[0].alphabet_size


class PositivityResult(NamedTuple):
    ok: bool
    margin: float


def build_robust_model(
    nominals: Sequence[Distribution], epsilons: Sequence[float]
) -> RobustModel:
    """Shrink each nominal toward uniform according to its uncertainty radius.

    With radius 0 a representative equals its nominal; as the radius grows
    the representative approaches the uniform distribution.
    """
    nominals = tuple(nominals)
    epsilons = tuple(float(e) for e in epsilons)
    if len(nominals) < 2:
        raise ValidationError("need at least two nominals")
    if len(epsilons) != len(nominals):
        raise ValidationError("need one radius per nominal")
    if any(e < 0 for e in epsilons):
        raise ValidationError("radii must be non-negative")
    k = nominals[0].alphabet_size
    if any(d.alphabet_size != k for d in nominals):
        raise AlphabetMismatchError("nominals must share an alphabet")
    reps = []
    for q, e in zip(nominals, epsilons):
        if e == 0.0:
            reps.append(q)
            continue
        vec = (q.probs + e) / (1.0 + k * e)
        assert abs(vec.sum() - 1.0) < 1e-12, "representative failed to normalize"
        reps.append(Distribution(vec))
    return RobustModel(nominals, epsilons, tuple(reps), max(epsilons))


def prop3_log_bound(t: TypeVector, rm: RobustModel, j: int) -> float:
    """Upper bound on log2 P(x) for any sequence x of type t, uniform over the radius ball.

    Valid for every distribution P with V(P, Q_j) <= eps_j: the bound
    -n (H + D(t || rep_j) - log2(1 + |X| eps_j)) dominates the exact
    per-sequence log-probability under P. With eps_j = 0 it collapses to
    the exact value under Q_j itself. ``j`` is a 0-based position into
    ``rm.nominals``.
    """
    if t.alphabet_size != rm.alphabet_size:
        raise AlphabetMismatchError("type and model use different alphabets")
    t_hat = t.as_distribution()
    penalty = math.log2(1.0 + rm.alphabet_size * rm.epsilons[j])
    return -t.n * (entropy(t_hat) + kl_divergence(t_hat, rm.representatives[j]) - penalty)


def theorem1_bound(rm: RobustModel, n: int, m: Optional[int] = None) -> BoundResult:
    """Error-probability bound for the representative-based nearest-neighbor test.

    The exponent is the minimum pairwise Chernoff information between
    representatives, less the uniform-shrinkage penalty at the largest
    radius and the usual finite-n type-counting and union terms.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    m = rm.m if m is None else m
    k = rm.alphabet_size
    min_c, _ = min_pairwise_chernoff(rm.representatives)
    exponent = (
        min_c
        - math.log2(1.0 + k * rm.epsilon_max)
        - (k - 1) * math.log2(n + 1.0) / n
        - math.log2(m) / n
    )
    return BoundResult(exponent, -n * exponent)


def positivity_check(rm: RobustModel) -> PositivityResult:
    """Whether the robust test's asymptotic exponent is guaranteed positive.

    The margin is the minimum pairwise Chernoff information between
    representatives minus the shrinkage penalty; a positive margin means
    the bound decays for large n.
    """
    min_c, _ = min_pairwise_chernoff(rm.representatives)
    margin = min_c - math.log2(1.0 + rm.alphabet_size * rm.epsilon_max)
    return PositivityResult(margin > 0.0, margin)


def dgl_exponent(nominals: Sequence[Distribution]) -> float:
    """Exponent of the pairwise-tournament baseline: min over pairs of V^2/2, in bits.

    Always dominated by the minimum pairwise Chernoff information of the
    same nominals.
    """
    nominals = tuple(nominals)
    if len(nominals) < 2:
        raise ValidationError("need at least two nominals")
    best = math.inf
    for i in range(len(nominals)):
        for j in range(i + 1, len(nominals)):
            v = variational_distance(nominals[i], nominals[j])
            best = min(best, 0.5 * v * v / math.log(2.0))
    return best


def training_bound(m: int, beta: float, alphabet_size: int) -> float:
    """Probability that a length-m training type is farther than beta (in KL) from its source.

    Clamped to [0, 1]; vacuous until m is large enough for the type-counting
    term to fall below beta.
    """
    if m < 1:
        raise ValidationError("m must be >= 1")
    if beta <= 0:
        raise ValidationError("beta must be positive")
    exponent = beta - alphabet_size * math.log2(m + 1.0) / m
    return min(1.0, 2.0 ** (-m * exponent))


def nominal_from_training(t_seq: SymbolSequence) -> Distribution:
    """Empirical distribution of a labeled training sequence, usable as a nominal."""
    return type_of(t_seq).as_distribution()
