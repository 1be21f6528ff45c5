"""Reproducible experiment runner: variation functionals on a stored
function, criterion series tables, sharpness curves of the comb witness,
and three demo suites, each emitting a versioned CSV plus a JSON summary.

Exit codes: 0 success, 2 invalid configuration or input (the offending
field is named on stderr), 3 a demo's expected phenomenon failed to
materialize (data files are still written)."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .constructions import (
    WitnessSpec,
    extremal_function,
    perlman_witness,
    wang_gap_family,
    witness_report_json,
)
from .periodic import function_from_json, function_to_json, monotone_arcs
from .sequences import (
    criterion_partial_sums,
    hardy_two_sides,
    sequence_from_json,
    wang_partial_sums,
)
from .variation import (
    ModulusQuery,
    lambda_variation,
    lp_modulus,
    modulus_p_continuity,
    p_variation,
)

__all__ = ["ExperimentConfig", "ValidationError", "main", "run"]

SCHEMA_VERSION = 1
COMMANDS = ("variation", "criterion", "sharpness", "wang-demo", "perlman-demo", "hardy-demo")
MAX_LEVELS = 12
LP_H_SAMPLES = 64
PERLMAN_TERMS = 1_000_000
PERLMAN_DECADES = (10**3, 10**4, 10**5, 10**6)
HARDY_TRIALS = 500
HARDY_BETAS = (0.25, 0.5, 1.0)
HARDY_RS = (1.5, 2.0, 3.0)
HARDY_DRAW = 64
HARDY_NU = tuple(float(2**k) for k in range(11))


class ValidationError(Exception):
    """Configuration or input rejection; carries the offending field name."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    function_path: str | None
    sequence_path: str | None
    p: float
    alpha: float
    delta_depth: int
    refine: int
    levels: int
    blocks: int
    out: str
    seed: int
    s: float
    d_power: float | None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambdabv",
        description="Run a variation/criterion/witness experiment and write CSV + JSON artifacts.",
    )
    parser.add_argument("--command", required=True, choices=COMMANDS)
    parser.add_argument("--function", dest="function_path", help="function JSON file")
    parser.add_argument("--sequence", dest="sequence_path", help="weight sequence JSON file")
    parser.add_argument("--p", type=float, default=2.0)
    parser.add_argument("--alpha", type=float, default=0.75)
    parser.add_argument("--delta-depth", dest="delta_depth", type=int, default=6,
                        help="deepest dyadic scale 2^-depth for modulus grids")
    parser.add_argument("--refine", type=int, default=0,
                        help="uniform grid points added per segment in modulus searches")
    parser.add_argument("--levels", type=int, default=8, help="witness truncation level")
    parser.add_argument("--blocks", type=int, default=30, help="dyadic blocks in series tables")
    parser.add_argument("--out", required=True, help="output directory for CSV/JSON artifacts")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized demo suites")
    parser.add_argument("--s", type=float, default=2.0,
                        help="block family exponent used by wang-demo")
    parser.add_argument("--d-power", dest="d_power", type=float, default=None,
                        help="exponent w in d_n = n^-w for perlman-demo (default 1/p)")
    return parser


def _parse_args(argv) -> ExperimentConfig:
    ns = build_parser().parse_args(argv)
    config = ExperimentConfig(
        command=ns.command,
        function_path=ns.function_path,
        sequence_path=ns.sequence_path,
        p=ns.p,
        alpha=ns.alpha,
        delta_depth=ns.delta_depth,
        refine=ns.refine,
        levels=ns.levels,
        blocks=ns.blocks,
        out=ns.out,
        seed=ns.seed,
        s=ns.s,
        d_power=ns.d_power,
    )
    if config.delta_depth < 0:
        raise ValidationError("delta-depth", "must be nonnegative")
    if config.refine < 0:
        raise ValidationError("refine", "must be nonnegative")
    if config.blocks < 0:
        raise ValidationError("blocks", "must be nonnegative")
    if config.levels < 0:
        raise ValidationError("levels", "must be nonnegative")
    if config.d_power is not None and config.d_power < 0.0:
        raise ValidationError("d-power", "must be nonnegative")
    return config


def _load_function(config: ExperimentConfig):
    if not config.function_path:
        raise ValidationError("function", "a function JSON file is required for this command")
    try:
        with open(config.function_path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError("function", str(exc)) from exc
    try:
        return function_from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise ValidationError("function", f"invalid function file: {exc}") from exc


def _load_sequence(config: ExperimentConfig):
    if not config.sequence_path:
        raise ValidationError("sequence", "a sequence JSON file is required for this command")
    try:
        with open(config.sequence_path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError("sequence", str(exc)) from exc
    try:
        return sequence_from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise ValidationError("sequence", f"invalid sequence file: {exc}") from exc


def _check_embedding_params(config: ExperimentConfig) -> None:
    if not config.p > 1.0:
        raise ValidationError("p", "must satisfy p > 1")
    if not (1.0 / config.p < config.alpha < 1.0):
        raise ValidationError("alpha", "must lie in (1/p, 1)")


def _run_variation(config: ExperimentConfig):
    if config.p < 1.0:
        raise ValidationError("p", "must be at least 1")
    f = _load_function(config)
    header = ["schema_version", "functional", "p", "alpha", "delta", "value", "refinement"]
    rows = []
    values = {}
    if config.sequence_path:
        lam = _load_sequence(config)
        arcs = monotone_arcs(f)
        try:
            lam.require(len(arcs.arcs))
        except ValueError as exc:
            raise ValidationError("sequence", str(exc)) from exc
        try:
            vlam = lambda_variation(f, lam)
        except ValueError as exc:
            raise ValidationError("function", str(exc)) from exc
        rows.append([SCHEMA_VERSION, "lambda_variation", "", "", "", vlam, ""])
        values["lambda_variation"] = vlam
    for j in range(config.delta_depth + 1):
        delta = 2.0**-j
        value = lp_modulus(f, config.p, delta, LP_H_SAMPLES)
        rows.append([SCHEMA_VERSION, "lp_modulus", config.p, "", delta, value, LP_H_SAMPLES])
    if config.p > 1.0:
        for j in range(config.delta_depth + 1):
            delta = 2.0**-j
            value = modulus_p_continuity(f, config.p, ModulusQuery(delta, config.refine))
            rows.append(
                [SCHEMA_VERSION, "modulus_p_continuity", config.p, "", delta, value, config.refine]
            )
    vp = p_variation(f, config.p)
    rows.append([SCHEMA_VERSION, "p_variation", config.p, "", "", vp, ""])
    values["p_variation"] = vp
    summary = {
        "command": "variation",
        "schema_version": SCHEMA_VERSION,
        "p": config.p,
        "delta_depth": config.delta_depth,
        "refinement": config.refine,
        "h_samples": LP_H_SAMPLES,
        "values": values,
    }
    return header, rows, summary, {}, None


def _run_criterion(config: ExperimentConfig):
    _check_embedding_params(config)
    lam = _load_sequence(config)
    try:
        report = criterion_partial_sums(lam, config.p, config.alpha, config.blocks)
    except ValueError as exc:
        raise ValidationError("sequence", str(exc)) from exc
    header = ["schema_version", "n", "inner_sum", "block_term", "partial_sum"]
    rows = [
        [SCHEMA_VERSION, n, inner, term, report.partial_sums[n]]
        for n, inner, term in report.block_terms
    ]
    summary = {
        "command": "criterion",
        "schema_version": SCHEMA_VERSION,
        "p": config.p,
        "alpha": config.alpha,
        "r": report.r,
        "r_prime": report.r_prime,
        "n_blocks": config.blocks,
        "include_upper": report.include_upper,
        "verdict": report.symbolic_verdict,
        "sequence": lam.describe(),
    }
    return header, rows, summary, {}, None


def _run_sharpness(config: ExperimentConfig):
    _check_embedding_params(config)
    if config.levels > MAX_LEVELS:
        raise ValidationError("levels", f"must be at most {MAX_LEVELS}")
    if config.delta_depth < 1:
        raise ValidationError("delta-depth", "must be at least 1 for ratio norms")
    lam = _load_sequence(config)
    r_prime = 1.0 / (1.0 + 1.0 / config.p - config.alpha)
    header = [
        "schema_version",
        "level",
        "criterion_partial_pow",
        "lambda_variation",
        "omega_ratio",
        "vlam_quotient",
        "omega_quotient",
    ]
    rows = []
    last = None
    for level in range(1, config.levels + 1):
        try:
            spec = WitnessSpec(lam, config.p, config.alpha, level)
            g, report = extremal_function(
                spec, ratio_depth=config.delta_depth, ratio_refinement=config.refine
            )
        except ValueError as exc:
            raise ValidationError("sequence", str(exc)) from exc
        crit_pow = report.criterion_partials[-1] ** (1.0 / r_prime)
        vlam = report.measured_lambda_variation
        omega = report.ratio_report.value
        rows.append(
            [SCHEMA_VERSION, level, crit_pow, vlam, omega, vlam / crit_pow, vlam / omega]
        )
        last = (g, report)
    summary = {
        "command": "sharpness",
        "schema_version": SCHEMA_VERSION,
        "levels": config.levels,
        "delta_depth": config.delta_depth,
        "refinement": config.refine,
        "sequence": lam.describe(),
    }
    extras = {}
    if last is not None:
        g, report = last
        summary["witness"] = witness_report_json(report)
        summary["function_file"] = "sharpness_function.json"
        extras["sharpness_function.json"] = function_to_json(g) + "\n"
    return header, rows, summary, extras, None


def _run_wang_demo(config: ExperimentConfig):
    _check_embedding_params(config)
    try:
        lam = wang_gap_family(config.p, config.alpha, config.s)
    except ValueError as exc:
        raise ValidationError("s", str(exc)) from exc
    wang = wang_partial_sums(lam, config.alpha, config.blocks)
    crit = criterion_partial_sums(lam, config.p, config.alpha, config.blocks)
    header = ["schema_version", "block", "wang_partial", "criterion_partial"]
    rows = [
        [SCHEMA_VERSION, m, wang.partial_sums[m], crit.partial_sums[m]]
        for m in range(config.blocks)
    ]
    summary = {
        "command": "wang-demo",
        "schema_version": SCHEMA_VERSION,
        "p": config.p,
        "alpha": config.alpha,
        "s": config.s,
        "gap_window_upper": (1.0 + 1.0 / config.p - config.alpha) / (1.0 - config.alpha),
        "n_blocks": config.blocks,
        "wang_verdict": wang.symbolic_verdict,
        "criterion_verdict": crit.symbolic_verdict,
        "sequence": lam.describe(),
    }
    failure = None
    if not (wang.symbolic_verdict == "converges" and crit.symbolic_verdict == "diverges"):
        failure = (
            "expected the necessary-condition series to converge and the criterion "
            f"to diverge, got {wang.symbolic_verdict}/{crit.symbolic_verdict}"
        )
    return header, rows, summary, {}, failure


def _run_perlman_demo(config: ExperimentConfig):
    if not config.p > 1.0:
        raise ValidationError("p", "must satisfy p > 1")
    w = config.d_power if config.d_power is not None else 1.0 / config.p
    idx = np.arange(1, PERLMAN_TERMS + 1, dtype=float)
    d = idx**-w
    lam = perlman_witness(d, config.p)
    terms = lam.explicit_terms
    p_prime = config.p / (config.p - 1.0)
    divergent = np.cumsum(d / terms)
    convergent = np.cumsum(terms**-p_prime)
    header = ["schema_version", "N", "sum_d_over_lambda", "sum_lambda_minus_pprime"]
    rows = [
        [SCHEMA_VERSION, n_top, divergent[n_top - 1], convergent[n_top - 1]]
        for n_top in PERLMAN_DECADES
    ]
    inc_div = float(divergent[-1] - divergent[10**5 - 1])
    inc_conv = float(convergent[-1] - convergent[10**5 - 1])
    summary = {
        "command": "perlman-demo",
        "schema_version": SCHEMA_VERSION,
        "p": config.p,
        "d_power": w,
        "terms": PERLMAN_TERMS,
        "last_decade_increment_divergent": inc_div,
        "last_decade_increment_convergent": inc_conv,
    }
    failure = None
    if inc_div < 0.05:
        failure = (
            "expected the divergent companion sum to grow by at least 0.05 over the "
            f"last decade, got {inc_div:.6g}"
        )
    return header, rows, summary, {}, failure


def _run_hardy_demo(config: ExperimentConfig):
    rng = np.random.default_rng(config.seed)
    header = ["schema_version", "beta", "r", "trials", "max_ratio", "mean_ratio"]
    rows = []
    failure = None
    worst = 0.0
    for beta in HARDY_BETAS:
        for r in HARDY_RS:
            ratios = np.empty(HARDY_TRIALS)
            for t in range(HARDY_TRIALS):
                a = rng.exponential(1.0, HARDY_DRAW)
                lhs, rhs = hardy_two_sides(beta, r, a, HARDY_NU)
                if rhs <= 0.0 or lhs < rhs - 1e-12:
                    failure = (
                        f"partial-sum comparison failed at beta={beta}, r={r}, "
                        f"trial {t}: lhs={lhs!r}, rhs={rhs!r}"
                    )
                    ratios[t] = np.nan
                    continue
                ratios[t] = lhs / rhs
            rows.append(
                [
                    SCHEMA_VERSION,
                    beta,
                    r,
                    HARDY_TRIALS,
                    float(np.nanmax(ratios)),
                    float(np.nanmean(ratios)),
                ]
            )
            worst = max(worst, float(np.nanmax(ratios)))
    summary = {
        "command": "hardy-demo",
        "schema_version": SCHEMA_VERSION,
        "seed": config.seed,
        "trials": HARDY_TRIALS,
        "draw_length": HARDY_DRAW,
        "nu": list(HARDY_NU),
        "max_ratio_overall": worst,
    }
    return header, rows, summary, {}, failure


_RUNNERS = {
    "variation": _run_variation,
    "criterion": _run_criterion,
    "sharpness": _run_sharpness,
    "wang-demo": _run_wang_demo,
    "perlman-demo": _run_perlman_demo,
    "hardy-demo": _run_hardy_demo,
}


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2))
        fh.write("\n")


def run(config: ExperimentConfig) -> int:
    """Execute one experiment and write its artifacts into config.out."""
    try:
        os.makedirs(config.out, exist_ok=True)
    except OSError as exc:
        raise ValidationError("out", str(exc)) from exc
    header, rows, summary, extras, failure = _RUNNERS[config.command](config)
    _write_csv(os.path.join(config.out, f"{config.command}.csv"), header, rows)
    _write_json(os.path.join(config.out, f"{config.command}.json"), summary)
    for name, text in sorted(extras.items()):
        with open(os.path.join(config.out, name), "w", encoding="utf-8") as fh:
            fh.write(text)
    if failure is not None:
        print(f"phenomenon check failed: {failure}", file=sys.stderr)
        return 3
    return 0


def main(argv=None) -> int:
    try:
        config = _parse_args(argv)
        return run(config)
    except ValidationError as exc:
        print(f"error: {exc.field}: {exc.message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
