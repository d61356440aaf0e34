"""Flat YAML experiment configuration and its translation into plan objects."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import yaml

from .decide import HypothesisSet
from .errors import ValidationError
from .harness import ExperimentPlan
from .quantize import QuantizerSpec, quantize_distribution, quantization_radius
from .robustify import RobustModel, build_robust_model
from .simplex import Distribution

_KNOWN_KEYS = {
    "alphabet_size", "hypotheses", "priors", "nominals", "epsilons",
    "quantizer_bits", "rules", "n_values", "trials", "seed", "output",
}


@dataclass
class ExperimentConfig:
    """File-backed experiment description; see the shipped configs for examples."""

    alphabet_size: int
    hypotheses: list[list[float]]
    priors: Optional[list[float]] = None
    nominals: Optional[list[list[float]]] = None
    epsilons: Optional[Union[list[float], str]] = None
    quantizer_bits: Optional[int] = None
    rules: list[str] = field(default_factory=lambda: ["nn"])
    n_values: list[int] = field(default_factory=lambda: list(range(50, 501, 50)))
    trials: int = 100_000
    seed: int = 0
    output: Optional[str] = None

    def __post_init__(self):
        if not self.hypotheses:
            raise ValidationError("config needs at least one hypothesis vector")
        for vec in self.hypotheses:
            if len(vec) != self.alphabet_size:
                raise ValidationError(
                    f"hypothesis vector {vec} does not match alphabet_size={self.alphabet_size}"
                )
        if self.priors is not None and len(self.priors) != len(self.hypotheses):
            raise ValidationError("priors must match the number of hypotheses")
        if self.nominals is not None and self.quantizer_bits is not None:
            raise ValidationError(
                "nominals and quantizer_bits are mutually exclusive; "
                "the quantizer derives the nominals"
            )
        if self.nominals is not None:
            if len(self.nominals) != len(self.hypotheses):
                raise ValidationError("nominals must match the number of hypotheses")
            for vec in self.nominals:
                if len(vec) != self.alphabet_size:
                    raise ValidationError(
                        f"nominal vector {vec} does not match alphabet_size={self.alphabet_size}"
                    )
        if isinstance(self.epsilons, str) and self.epsilons != "auto":
            raise ValidationError(f"epsilons must be a list or 'auto', got {self.epsilons!r}")
        if isinstance(self.epsilons, str) and self.nominals is None and self.quantizer_bits is None:
            raise ValidationError("epsilons='auto' requires nominals (or quantizer_bits)")
        if isinstance(self.epsilons, list):
            if self.quantizer_bits is not None:
                raise ValidationError(
                    "explicit epsilons cannot be combined with quantizer_bits; "
                    "quantizer-derived radii are computed from the data"
                )
            if self.nominals is None:
                raise ValidationError("explicit epsilons require nominals")
            if len(self.epsilons) != len(self.hypotheses):
                raise ValidationError("epsilons must match the number of hypotheses")


def load_config(path: str) -> ExperimentConfig:
    """Parse and validate a YAML config file."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ValidationError(f"config root must be a mapping, got {type(raw).__name__}")
    unknown = sorted(set(raw) - _KNOWN_KEYS)
    if unknown:
        raise ValidationError(f"unknown config keys: {unknown}")
    try:
        return ExperimentConfig(**raw)
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc


def hypothesis_set_from(config: ExperimentConfig) -> HypothesisSet:
    dists = [Distribution(np.asarray(vec, dtype=np.float64)) for vec in config.hypotheses]
    return HypothesisSet(dists, config.priors)


def robust_model_from(config: ExperimentConfig) -> Optional[RobustModel]:
    """Build the nominal-side model, quantizing or measuring radii as configured.

    Returns None when the config names neither nominals nor a quantizer.
    """
    hypotheses = [Distribution(np.asarray(v, dtype=np.float64)) for v in config.hypotheses]
    if config.quantizer_bits is not None:
        spec = QuantizerSpec(config.quantizer_bits)
        nominals = [quantize_distribution(p, spec) for p in hypotheses]
        per_hypothesis, _ = quantization_radius(hypotheses, nominals)
        return build_robust_model(nominals, per_hypothesis)
    if config.nominals is None:
        return None
    nominals = [Distribution(np.asarray(v, dtype=np.float64)) for v in config.nominals]
    if config.epsilons is None or config.epsilons == "auto":
        per_hypothesis, _ = quantization_radius(hypotheses, nominals)
        return build_robust_model(nominals, per_hypothesis)
    return build_robust_model(nominals, config.epsilons)


def plan_from(
    config: ExperimentConfig,
    seed: Optional[int] = None,
    trials: Optional[int] = None,
) -> ExperimentPlan:
    """Translate a config (plus CLI overrides) into an executable plan."""
    return ExperimentPlan(
        hypothesis_set=hypothesis_set_from(config),
        robust_model=robust_model_from(config),
        rules=tuple(config.rules),
        n_values=tuple(config.n_values),
        trials=config.trials if trials is None else trials,
        base_seed=config.seed if seed is None else seed,
    )
