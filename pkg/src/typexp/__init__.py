"""Bayesian multiple hypothesis testing over finite alphabets.

Core pieces: exact distribution arithmetic and statistical distances,
method-of-types machinery, four decision rules (nearest neighbor, MAP, a
robustified nearest neighbor against nominal models, and a pairwise
tournament baseline), error-exponent bound calculators, a fixed-point
distribution quantizer, and a reproducible Monte Carlo harness.
"""

from .decide import Decision, HypothesisSet, count_ops, dgl_decide, map_decide, nn_decide, robust_decide
from .errors import (
    AlphabetMismatchError,
    DegenerateRatioError,
    DegenerateTiltError,
    EnumerationOverflowError,
    InvalidQuantizationError,
    TypexpError,
    UndefinedExponentError,
    ValidationError,
)
from .exponents import (
    BoundResult,
    ExponentReport,
    classical_bound,
    exponent_report,
    min_over_types,
    per_type_exponent,
    ratio_curve,
)
from .harness import (
    ExperimentPlan,
    RunSummary,
    empirical_exponent,
    run_experiment,
    run_trial,
    write_csv,
)
from .quantize import QuantizerSpec, quantization_radius, quantize_distribution
from .robustify import (
    RobustModel,
    build_robust_model,
    dgl_exponent,
    nominal_from_training,
    positivity_check,
    prop3_log_bound,
    theorem1_bound,
    training_bound,
)
from .simplex import (
    ChernoffResult,
    Distribution,
    chernoff_information,
    entropy,
    kl_divergence,
    min_pairwise_chernoff,
    sason_lower_bound,
    tilted,
    uniform,
    variational_distance,
)
from .types import (
    SymbolSequence,
    TypeVector,
    count_types,
    enumerate_types,
    sample_sequence,
    sequence_log_prob,
    type_class_size,
    type_of,
)

__version__ = "0.1.0"
