"""Seeded Monte Carlo estimation of error probabilities, with bound overlays.

Every trial owns a private, counter-derived slice of a Philox stream keyed
by (base_seed, rule, n, trial index), so results are byte-identical for any
worker count or chunking. Heavy work is vectorized across trials in fixed
chunks; ``TYPEXP_THREADS`` sets how many chunks run concurrently and can
only affect speed, never output.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .decide import HypothesisSet
from .errors import UndefinedExponentError, ValidationError
from .exponents import classical_bound
from .robustify import RobustModel, theorem1_bound

RULES = ("nn", "map", "robust", "dgl")
_RULE_IDS = {name: k for k, name in enumerate(RULES)}
_RULES_NEEDING_MODEL = frozenset({"robust", "dgl"})

#: Trials are processed in fixed-size slices regardless of worker count.
CHUNK_TRIALS = 4096

CSV_HEADER = "rule,n,trials,errors,pe_hat,ci95,bound_exponent,bound_value"


@dataclass(frozen=True)
class ExperimentPlan:
    """What to simulate: true model, optional nominal model, rules, and sweep."""

    hypothesis_set: HypothesisSet
    robust_model: Optional[RobustModel]
    rules: tuple[str, ...]
    n_values: tuple[int, ...]
    trials: int
    base_seed: int

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        unknown = [r for r in self.rules if r not in RULES]
        if unknown:
            raise ValidationError(f"unknown rules {unknown}; valid: {RULES}")
        needs_model = [r for r in self.rules if r in _RULES_NEEDING_MODEL]
        if needs_model and self.robust_model is None:
            raise ValidationError(f"rules {needs_model} require a robust model")
        if self.robust_model is not None and (
            self.robust_model.alphabet_size != self.hypothesis_set.alphabet_size
            or self.robust_model.m != self.hypothesis_set.m
        ):
            raise ValidationError("robust model does not match the hypothesis set")
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if any(n < 1 for n in self.n_values):
            raise ValidationError("all n values must be >= 1")


@dataclass(frozen=True)
class RunSummary:
    """Aggregated outcome of one (rule, n) cell, with its bound if one applies."""

    rule: str
    n: int
    trials: int
    errors: int
    pe_hat: float
    ci95_halfwidth: float
    bound_exponent: Optional[float]
    bound_value: Optional[float]


def _blocks_per_trial(n: int) -> int:
    # Each Philox counter block yields 4 uniforms; a trial consumes 1 + n of
    # them (hypothesis draw plus sequence), rounded up to whole blocks.
    return (n + 4) // 4


def _cell_rng(base_seed: int, rule: str, n: int, start_trial: int) -> Generator:
    bit_gen = Philox(seed=SeedSequence((base_seed & (2**64 - 1), _RULE_IDS[rule], n)))
    if start_trial:
        bit_gen.advance(start_trial * _blocks_per_trial(n))
    return Generator(bit_gen)


class _RuleTables:
    """Per-(plan, rule) lookup tables reused by every chunk of a cell."""

    def __init__(self, plan: ExperimentPlan, rule: str):
        hs = plan.hypothesis_set
        self.rule = rule
        self.k = hs.alphabet_size
        self.prior_cdf = np.cumsum(hs.priors)
        self.prior_cdf[-1] = 1.0
        self.source_cdfs = []
        for d in hs.distributions:
            cdf = np.cumsum(d.probs)
            cdf[-1] = 1.0
            self.source_cdfs.append(cdf)

        if rule in ("nn", "map"):
            targets = hs.distributions
        elif rule == "robust":
            targets = plan.robust_model.representatives
        else:
            targets = plan.robust_model.nominals
        probs = np.column_stack([d.probs for d in targets])
        self.log_cols = np.where(probs > 0, np.log2(np.where(probs > 0, probs, 1.0)), 0.0)
        self.zero_cols = (probs == 0).astype(np.float64)
        self.log_priors = np.log2(hs.priors) if rule == "map" else None
        self.m = len(targets)

        self.duels = None
        if rule == "dgl":
            self.duels = []
            for i in range(self.m):
                for j in range(i + 1, self.m):
                    contested = (targets[i].probs > targets[j].probs).astype(np.float64)
                    qi = float(targets[i].probs @ contested)
                    qj = float(targets[j].probs @ contested)
                    self.duels.append((i, j, contested, qi, qj))


def _decide_rows(tables: _RuleTables, counts: np.ndarray, n: int) -> np.ndarray:
    """Vectorized 0-based decisions for a (chunk, alphabet) count matrix."""
    if tables.rule == "dgl":
        emp = counts / n
        wins = np.zeros((counts.shape[0], tables.m), dtype=np.int64)
        for i, j, contested, qi, qj in tables.duels:
            mu = emp @ contested
            i_wins = np.abs(mu - qi) <= np.abs(mu - qj)
            wins[:, i] += i_wins
            wins[:, j] += ~i_wins
        return np.argmax(wins, axis=1)
    # Divergence and posterior rules reduce to argmax of the count/log-prob
    # inner product (per-row entropy terms are rank-neutral); hypotheses
    # missing support for an observed symbol drop to -inf.
    scores = counts @ tables.log_cols
    if tables.log_priors is not None:
        scores = scores + tables.log_priors
    scores[(counts @ tables.zero_cols) > 0] = -math.inf
    return np.argmax(scores, axis=1)


def _simulate_chunk(
    plan: ExperimentPlan, rule: str, n: int, start: int, count: int,
    tables: Optional[_RuleTables] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Run trials [start, start+count) of one cell; returns 0-based (true, decided)."""
    tables = tables or _RuleTables(plan, rule)
    budget = 4 * _blocks_per_trial(n)
    rng = _cell_rng(plan.base_seed, rule, n, start)
    u = rng.random((count, budget))[:, : n + 1]
    true0 = np.searchsorted(tables.prior_cdf, u[:, 0], side="right")
    symbols = np.empty((count, n), dtype=np.int64)
    for i in np.unique(true0):
        rows = true0 == i
        found = np.searchsorted(tables.source_cdfs[i], u[rows, 1:].ravel(), side="right")
        symbols[rows] = found.reshape(-1, n)
    offsets = (np.arange(count, dtype=np.int64) * tables.k)[:, None]
    counts = np.bincount(
        (symbols + offsets).ravel(), minlength=count * tables.k
    ).reshape(count, tables.k)
    decided0 = _decide_rows(tables, counts.astype(np.float64), n)
    return true0, decided0


def _chunk_errors(plan: ExperimentPlan, rule: str, n: int, start: int, count: int) -> int:
    true0, decided0 = _simulate_chunk(plan, rule, n, start, count)
    return int((true0 != decided0).sum())


def run_trial(plan: ExperimentPlan, rule: str, n: int, trial_index: int) -> tuple[int, int]:
    """One trial: draw a hypothesis, sample a length-n sequence, apply the rule.

    Returns 1-based (true_index, decided_index), fully determined by
    (base_seed, rule, n, trial_index).
    """
    if rule not in plan.rules:
        raise ValidationError(f"rule {rule!r} is not part of this plan")
    true0, decided0 = _simulate_chunk(plan, rule, n, trial_index, 1)
    return int(true0[0]) + 1, int(decided0[0]) + 1


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count: explicit argument, else TYPEXP_THREADS, else 1."""
    if workers is None:
        workers = int(os.environ.get("TYPEXP_THREADS", "1"))
    return max(1, workers)


def _bound_for(plan: ExperimentPlan, rule: str, n: int):
    if rule == "nn":
        return classical_bound(plan.hypothesis_set, n)
    if rule == "robust":
        return theorem1_bound(plan.robust_model, n, plan.hypothesis_set.m)
    return None


def _summarize(plan: ExperimentPlan, rule: str, n: int, errors: int) -> RunSummary:
    pe_hat = errors / plan.trials
    if errors > 0:
        ci95 = 1.96 * math.sqrt(pe_hat * (1.0 - pe_hat) / plan.trials)
    else:
        # Rule of three: one-sided 95% bound for a cell with zero observations.
        ci95 = 3.0 / plan.trials
    bound = _bound_for(plan, rule, n)
    return RunSummary(
        rule=rule,
        n=n,
        trials=plan.trials,
        errors=errors,
        pe_hat=pe_hat,
        ci95_halfwidth=ci95,
        bound_exponent=bound.exponent if bound else None,
        bound_value=2.0 ** bound.log2_bound if bound else None,
    )


def run_experiment(
    plan: ExperimentPlan,
    output_path: Optional[str] = None,
    workers: Optional[int] = None,
) -> list[RunSummary]:
    """Estimate the error probability of every (rule, n) cell in the plan.

    Cells are aggregated from fixed-size trial chunks; chunks may run in
    parallel processes. Writes the CSV to ``output_path`` when given.
    """
    workers = resolve_workers(workers)
    cells = [(rule, n) for rule in plan.rules for n in plan.n_values]
    tasks = []
    for rule, n in cells:
        for start in range(0, plan.trials, CHUNK_TRIALS):
            count = min(CHUNK_TRIALS, plan.trials - start)
            tasks.append((rule, n, start, count))

    errors: dict[tuple[str, int], int] = {cell: 0 for cell in cells}
    if workers == 1 or len(tasks) == 1:
        for rule, n, start, count in tasks:
            errors[(rule, n)] += _chunk_errors(plan, rule, n, start, count)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(
                _chunk_errors,
                *zip(*[(plan, rule, n, start, count) for rule, n, start, count in tasks]),
                chunksize=1,
            )
            for (rule, n, _start, _count), err in zip(tasks, results):
                errors[(rule, n)] += err

    summaries = [_summarize(plan, rule, n, errors[(rule, n)]) for rule, n in cells]
    if output_path is not None:
        with open(output_path, "w", encoding="utf-8") as fh:
            write_csv(summaries, fh)
    return summaries


def _csv_float(x: Optional[float]) -> str:
    if x is None:
        return "nan"
    return format(x, ".10g")


def write_csv(summaries: Sequence[RunSummary], fh: TextIO) -> None:
    """Emit one row per (rule, n) cell under the stable simulation schema."""
    fh.write(CSV_HEADER + "\n")
    for s in summaries:
        fh.write(
            f"{s.rule},{s.n},{s.trials},{s.errors},"
            f"{_csv_float(s.pe_hat)},{_csv_float(s.ci95_halfwidth)},"
            f"{_csv_float(s.bound_exponent)},{_csv_float(s.bound_value)}\n"
        )


def empirical_exponent(summaries: Sequence[RunSummary]) -> float:
    """Least-squares decay rate of -log2(pe_hat) against n for one rule's cells.

    Zero-error cells carry no slope information and are dropped; at least
    three informative cells are required.
    """
    points = [(s.n, s.pe_hat) for s in summaries if s.errors > 0]
    if len(points) < 3:
        raise UndefinedExponentError(
            f"need >= 3 cells with observed errors, have {len(points)}"
        )
    ns = np.array([n for n, _ in points], dtype=np.float64)
    neg_log = -np.log2(np.array([pe for _, pe in points]))
    slope = np.polyfit(ns, neg_log, 1)[0]
    return float(slope)
