"""Command-line surface: batch divergence tables, curves, quantization, simulation.

Exit codes are stable: 0 success, 2 validation failure, 3 enumeration
overflow, 4 quantization failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import config as config_mod
from .decide import HypothesisSet
from .errors import (
    EnumerationOverflowError,
    InvalidQuantizationError,
    TypexpError,
    ValidationError,
)
from .exponents import classical_bound, ratio_curve
from .harness import run_experiment, write_csv
from .quantize import QuantizerSpec, quantization_radius, quantize_distribution
from .robustify import build_robust_model, positivity_check, theorem1_bound
from .simplex import (
    Distribution,
    chernoff_information,
    kl_divergence,
    min_pairwise_chernoff,
    sason_lower_bound,
    variational_distance,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ENUMERATION = 3
EXIT_QUANTIZATION = 4
EXIT_IO = 5


def _parse_vector(text: str) -> Distribution:
    try:
        values = np.array([float(part) for part in text.split(",")])
    except ValueError as exc:
        raise ValidationError(f"cannot parse vector {text!r}: {exc}") from exc
    return Distribution(values)


def _load_config(args) -> config_mod.ExperimentConfig:
    if not args.config:
        raise ValidationError("this command requires --config PATH")
    cfg = config_mod.load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "trials", None) is not None:
        cfg.trials = args.trials
    return cfg


def _out_stream(path: Optional[str]):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def cmd_divergences(args) -> int:
    if args.vectors:
        dists = [_parse_vector(v) for v in args.vectors]
    else:
        cfg = _load_config(args)
        dists = [Distribution(np.asarray(v, dtype=np.float64)) for v in cfg.hypotheses]
    if len(dists) < 2:
        raise ValidationError("need at least two distributions")

    rows = []
    for i in range(len(dists)):
        for j in range(i + 1, len(dists)):
            p, q = dists[i], dists[j]
            c = chernoff_information(p, q)
            rows.append((
                i + 1, j + 1,
                variational_distance(p, q),
                kl_divergence(p, q), kl_divergence(q, p),
                c.value, c.lambda_star,
                sason_lower_bound(p, q),
            ))
    min_c, pair = min_pairwise_chernoff(dists)

    fh, close = _out_stream(args.out)
    try:
        if args.csv:
            fh.write("i,j,variational,kl_pq,kl_qp,chernoff,lambda_star,sason_lower\n")
            for row in rows:
                fh.write(",".join(format(v, ".10g") for v in row) + "\n")
        else:
            fh.write(f"{'i':>3} {'j':>3} {'V':>10} {'D(Pi||Pj)':>12} "
                     f"{'D(Pj||Pi)':>12} {'C':>10} {'lambda*':>9} {'sason':>10}\n")
            for i, j, v, dpq, dqp, c, lam, sas in rows:
                fh.write(f"{i:>3} {j:>3} {v:>10.6f} {dpq:>12.6f} "
                         f"{dqp:>12.6f} {c:>10.6f} {lam:>9.4f} {sas:>10.6f}\n")
            fh.write(f"min chernoff = {min_c:.6f} at pair ({pair[0] + 1},{pair[1] + 1})\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_ratio_curve(args) -> int:
    cfg = _load_config(args)
    hs = config_mod.hypothesis_set_from(cfg)
    n = args.n if args.n is not None else 40
    curve = ratio_curve(hs, n)
    out = args.out or cfg.output or "ratio_curve.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("rank,counts,ratio\n")
        for rank, (t, ratio) in enumerate(curve):
            counts = "|".join(str(c) for c in t.counts)
            fh.write(f"{rank},{counts},{format(ratio, '.10g')}\n")
    print(f"wrote {len(curve)} types to {out}")
    return EXIT_OK


def cmd_quantize(args) -> int:
    cfg = _load_config(args)
    bits = args.bits if args.bits is not None else cfg.quantizer_bits
    if bits is None:
        raise ValidationError("need --bits or quantizer_bits in the config")
    hypotheses = [Distribution(np.asarray(v, dtype=np.float64)) for v in cfg.hypotheses]
    spec = QuantizerSpec(bits)
    nominals = [quantize_distribution(p, spec) for p in hypotheses]
    per_hypothesis, eps = quantization_radius(hypotheses, nominals)
    model = build_robust_model(nominals, per_hypothesis)
    min_c, _ = min_pairwise_chernoff(model.representatives)
    penalty = math.log2(1.0 + len(hypotheses[0].probs) * eps)
    verdict = positivity_check(model)

    print(f"quantizer bits: {bits}")
    for k, (q, e) in enumerate(zip(nominals, per_hypothesis), start=1):
        vec = ", ".join(f"{x:.4f}" for x in q.probs)
        print(f"  Q_{k} = [{vec}]   radius = {e:.6g}")
    print(f"epsilon (max radius)        : {eps:.6g}")
    print(f"min chernoff(representative): {min_c:.4f}")
    print(f"log2(1 + |X| epsilon)       : {penalty:.4f}")
    print(f"positive exponent guaranteed: {'yes' if verdict.ok else 'no'} "
          f"(margin {verdict.margin:.4f})")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    plan = config_mod.plan_from(cfg)
    out = args.out or cfg.output
    summaries = run_experiment(plan, output_path=out)
    print(f"{'rule':>7} {'n':>5} {'errors':>8} {'pe_hat':>12} {'ci95':>12} {'bound':>12}")
    for s in summaries:
        bound = f"{s.bound_value:.6g}" if s.bound_value is not None else "-"
        print(f"{s.rule:>7} {s.n:>5} {s.errors:>8} {s.pe_hat:>12.6g} "
              f"{s.ci95_halfwidth:>12.6g} {bound:>12}")
    if out:
        print(f"wrote {out}")
    else:
        write_csv(summaries, sys.stdout)
    return EXIT_OK


def cmd_bounds(args) -> int:
    cfg = _load_config(args)
    hs = config_mod.hypothesis_set_from(cfg)
    model = config_mod.robust_model_from(cfg)
    rows = []
    for n in cfg.n_values:
        classical = classical_bound(hs, n)
        robust = theorem1_bound(model, n, hs.m) if model is not None else None
        rows.append((n, classical, robust))

    fh, close = _out_stream(args.out)
    try:
        if args.csv:
            fh.write("n,classical_exponent,classical_log2_bound,robust_exponent,robust_log2_bound\n")
            for n, cb, rb in rows:
                tail = (format(rb.exponent, ".10g") + "," + format(rb.log2_bound, ".10g")
                        if rb else "nan,nan")
                fh.write(f"{n},{format(cb.exponent, '.10g')},{format(cb.log2_bound, '.10g')},{tail}\n")
        else:
            fh.write(f"{'n':>6} {'classical_exp':>14} {'classical_2^':>14} "
                     f"{'robust_exp':>12} {'robust_2^':>12}\n")
            for n, cb, rb in rows:
                r_exp = f"{rb.exponent:>12.6g}" if rb else f"{'-':>12}"
                r_val = f"{2.0 ** rb.log2_bound:>12.6g}" if rb else f"{'-':>12}"
                fh.write(f"{n:>6} {cb.exponent:>14.6g} {2.0 ** cb.log2_bound:>14.6g} "
                         f"{r_exp} {r_val}\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typexp",
        description="Multiple hypothesis testing experiments over finite alphabets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, trials=False):
        p.add_argument("--config", help="path to a YAML experiment config")
        p.add_argument("--out", help="output file path")
        if seed:
            p.add_argument("--seed", type=int, help="override the config seed")
        if trials:
            p.add_argument("--trials", type=int, help="override the config trial count")

    p = sub.add_parser("divergences", help="pairwise distance table for a set of distributions")
    p.add_argument("vectors", nargs="*", help="inline comma-separated probability vectors")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
    common(p)
    p.set_defaults(func=cmd_divergences)

    p = sub.add_parser("ratio-curve", help="sorted per-type exponent ratios as CSV")
    p.add_argument("--n", type=int, help="sequence length (default 40)")
    common(p)
    p.set_defaults(func=cmd_ratio_curve)

    p = sub.add_parser("quantize", help="quantize the hypotheses and summarize the robust model")
    p.add_argument("--bits", type=int, help="quantizer bit width")
    common(p)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("simulate", help="Monte Carlo error estimation per the config")
    common(p, trials=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bounds", help="error bounds across the configured n values")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
    common(p)
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EnumerationOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENUMERATION
    except InvalidQuantizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUANTIZATION
    except (ValidationError, TypexpError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
