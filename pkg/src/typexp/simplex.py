"""Discrete probability distributions and the statistical distances between them.

All information quantities are measured in bits (logarithms base 2). Support
mismatches surface as ``math.inf``, which compares above every finite float
and formats as ``inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AlphabetMismatchError, DegenerateTiltError, ValidationError

#: Absolute tolerance on sum(probs) == 1 at construction time.
SUM_TOLERANCE = 1e-9

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
#: Golden-section search stops once the bracketing interval is this small.
CHERNOFF_INTERVAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Distribution:
    """A probability vector over a finite alphabet of size >= 2.

    Entries must be non-negative and sum to 1 within ``SUM_TOLERANCE``;
    the vector is renormalized exactly once at construction so that tabled
    decimal inputs round-trip cleanly. Instances are immutable.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 2:
            raise ValidationError(f"need a 1-d vector of length >= 2, got shape {probs.shape}")
        if np.any(probs < 0):
            raise ValidationError(f"negative probability entry in {probs!r}")
        total = float(probs.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError(f"probabilities sum to {total!r}, not 1 within {SUM_TOLERANCE}")
        probs = probs / total
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    @property
    def alphabet_size(self) -> int:
        return self.probs.size

    def support(self) -> np.ndarray:
        """Boolean mask of symbols with strictly positive probability."""
        return self.probs > 0

    def __repr__(self) -> str:
        return f"Distribution({np.array2string(self.probs, separator=', ')})"


class ChernoffResult(NamedTuple):
    value: float
    lambda_star: float


def uniform(alphabet_size: int) -> Distribution:
    """The uniform distribution on ``alphabet_size`` symbols."""
    if alphabet_size < 2:
        raise ValidationError("alphabet_size must be >= 2")
    return Distribution(np.full(alphabet_size, 1.0 / alphabet_size))


def _require_same_alphabet(p: Distribution, q: Distribution) -> None:
    if p.alphabet_size != q.alphabet_size:
        raise AlphabetMismatchError(
            f"alphabet sizes differ: {p.alphabet_size} vs {q.alphabet_size}"
        )


def entropy(p: Distribution) -> float:
    """Shannon entropy in bits, with the 0*log(0) = 0 convention."""
    x = p.probs[p.probs > 0]
    return float(-(x * np.log2(x)).sum())


def variational_distance(p: Distribution, q: Distribution) -> float:
    """Total variation distance: half the L1 distance, in [0, 1]."""
    _require_same_alphabet(p, q)
    return float(0.5 * np.abs(q.probs - p.probs).sum())


def kl_divergence(p: Distribution, q: Distribution) -> float:
    """Relative entropy from p to q in bits.

    Returns ``math.inf`` when p puts mass on a symbol outside q's support;
    terms with p(x) = 0 contribute zero.
    """
    _require_same_alphabet(p, q)
    m = p.probs > 0
    if np.any(q.probs[m] == 0):
        return math.inf
    return float((p.probs[m] * np.log2(p.probs[m] / q.probs[m])).sum())


def tilted(p: Distribution, q: Distribution, lam: float) -> Distribution:
    """Normalized geometric mixture p^lam * q^(1-lam).

    The endpoints follow the 0^0 = 1 convention, so lam=1 returns p and
    lam=0 returns q regardless of support. For interior lam the supports
    of p and q must intersect.
    """
    _require_same_alphabet(p, q)
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"lam must lie in [0, 1], got {lam}")
    if lam == 1.0:
        return p
    if lam == 0.0:
        return q
    m = (p.probs > 0) & (q.probs > 0)
    if not m.any():
        raise DegenerateTiltError("supports are disjoint; mixture undefined for interior lam")
    w = np.zeros(p.alphabet_size)
    w[m] = np.exp(lam * np.log(p.probs[m]) + (1.0 - lam) * np.log(q.probs[m]))
    return Distribution(w / w.sum())


def _log2_mixture_mass(log_p: np.ndarray, log_q: np.ndarray, lam: float) -> float:
    # log2 of sum_x p^lam q^(1-lam) restricted to the common support;
    # callers handle the endpoint and disjoint-support cases.
    return math.log2(np.exp(lam * log_p + (1.0 - lam) * log_q).sum())


def chernoff_information(p: Distribution, q: Distribution) -> ChernoffResult:
    """Chernoff information between p and q, in bits, with its optimal weight.

    Minimizes lam -> log2 sum_x p(x)^lam q(x)^(1-lam) over [0, 1] by
    golden-section search (the objective is convex on the common support)
    and compares against both interval endpoints. Returns the negated
    minimum and the minimizing weight. Symmetric under swapping p and q
    with lambda_star mapping to 1 - lambda_star. Distributions with
    disjoint supports are perfectly separable and yield ``inf``.
    """
    _require_same_alphabet(p, q)
    m = (p.probs > 0) & (q.probs > 0)
    if not m.any():
        return ChernoffResult(math.inf, 0.5)
    log_p = np.log(p.probs[m])
    log_q = np.log(q.probs[m])

    a, b = 0.0, 1.0
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc = _log2_mixture_mass(log_p, log_q, c)
    fd = _log2_mixture_mass(log_p, log_q, d)
    while b - a > CHERNOFF_INTERVAL_TOL:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = _log2_mixture_mass(log_p, log_q, c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = _log2_mixture_mass(log_p, log_q, d)
    lam_mid = 0.5 * (a + b)
    candidates = [
        (lam_mid, _log2_mixture_mass(log_p, log_q, lam_mid)),
        (0.0, _log2_mixture_mass(log_p, log_q, 0.0)),
        (1.0, _log2_mixture_mass(log_p, log_q, 1.0)),
    ]
    lam, fmin = min(candidates, key=lambda pair: pair[1])
    # fmin <= 0 because the common-support mass is at most 1 at the endpoints.
    return ChernoffResult(max(-fmin, 0.0), lam)


def min_pairwise_chernoff(dists) -> tuple[float, tuple[int, int]]:
    """Minimum Chernoff information over distinct pairs, with the 0-based argmin pair."""
    dists = tuple(dists)
    if len(dists) < 2:
        raise ValidationError("need at least two distributions")
    best = math.inf
    best_pair = (0, 1)
    for i in range(len(dists)):
        for j in range(i + 1, len(dists)):
            value = chernoff_information(dists[i], dists[j]).value
            if value < best:
                best, best_pair = value, (i, j)
    return best, best_pair


def sason_lower_bound(p: Distribution, q: Distribution) -> float:
    """A variational-distance lower bound on the Chernoff information.

    Computed as -0.5 * ln(1 - V^2) converted from nats to bits; equals
    ``inf`` when the supports are disjoint (V = 1).
    """
    v = variational_distance(p, q)
    if v >= 1.0:
        return math.inf
    return -0.5 * math.log(1.0 - v * v) / math.log(2.0)
