"""Fixed-point quantization of probability vectors at a given bit width.

The first ``|X| - 1`` entries snap to the nearest multiple of ``2**-q``
(plus an optional bias); the final entry closes the vector to total mass 1
so the result stays a proper distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidQuantizationError, ValidationError
from .simplex import Distribution, variational_distance


@dataclass(frozen=True)
class QuantizerSpec:
    """Bit width and bias of the fixed-point grid."""

    bits: int
    bias: float = 0.0

    def __post_init__(self):
        if self.bits < 1:
            raise ValidationError("bits must be >= 1")

    @property
    def step(self) -> float:
        return 2.0 ** -self.bits


def quantize_distribution(p: Distribution, spec: QuantizerSpec) -> Distribution:
    """Snap all but the last entry to the fixed-point grid; close with the remainder.

    Grid values are ``z * 2**-q + bias`` with z the nearest integer
    (halves round up). Raises when the closing entry falls outside [0, 1].
    """
    head = np.floor((p.probs[:-1] - spec.bias) / spec.step + 0.5) * spec.step + spec.bias
    last = 1.0 - head.sum()
    if last < 0.0 or last > 1.0:
        raise InvalidQuantizationError(
            f"closing entry {last!r} outside [0, 1] at bits={spec.bits}"
        )
    if np.any(head < 0.0) or np.any(head > 1.0):
        raise InvalidQuantizationError(f"grid entry outside [0, 1] at bits={spec.bits}")
    return Distribution(np.append(head, last))


def quantization_radius(
    originals: Sequence[Distribution], quantized: Sequence[Distribution]
) -> tuple[list[float], float]:
    """Realized variational distance of each quantized vector, and the largest one."""
    originals = tuple(originals)
    quantized = tuple(quantized)
    if len(originals) != len(quantized):
        raise ValidationError("lists must have equal length")
    per_hypothesis = [variational_distance(p, q) for p, q in zip(originals, quantized)]
    return per_hypothesis, max(per_hypothesis)
