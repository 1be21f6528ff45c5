"""Explicit extremal constructions: triangle combs, the multi-level comb
witness whose weighted variation tracks the criterion partial sums while its
modulus ratio stays bounded, the duality choice of level weights, a numeric
check of the embedding inequality, the divergent/convergent companion-series
witness, and the family separating the power necessary condition from the
embedding criterion."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .periodic import Interval, PiecewiseLinearPeriodic, make_plpf, superpose
from .sequences import (
    LambdaSequence,
    dual_extremizer,
    regularize_sequence,
    self_terms,
    weighted_block_sum,
)
from .variation import RatioNormReport, lambda_variation, p_cont_ratio_norm

__all__ = [
    "TriangleCombSpec",
    "WitnessSpec",
    "WitnessReport",
    "triangle_comb",
    "duality_weights",
    "extremal_function",
    "witness_report_json",
    "embedding_bound_check",
    "perlman_witness",
    "wang_gap_family",
]

MAX_WITNESS_LEVELS = 12


@dataclass(frozen=True)
class TriangleCombSpec:
    """N isosceles triangles of given heights on equal bases tiling an
    interval, zero elsewhere: tooth j rises from 0 to heights[j] over the
    first half of its base and falls back to 0 over the second half."""

    interval: Interval
    n_teeth: int
    heights: tuple

    def __post_init__(self) -> None:
        if self.n_teeth < 1:
            raise ValueError("n_teeth must be at least 1")
        heights = tuple(float(h) for h in self.heights)
        if len(heights) != self.n_teeth:
            raise ValueError("heights must have one entry per tooth")
        if any(not math.isfinite(h) or h < 0.0 for h in heights):
            raise ValueError("heights must be nonnegative and finite")
        object.__setattr__(self, "heights", heights)

    @property
    def tooth_width(self) -> float:
        return self.interval.length / self.n_teeth


def triangle_comb(spec: TriangleCombSpec) -> PiecewiseLinearPeriodic:
    """Build the comb as a periodic piecewise-linear function.

    Nodes sit at the 2N+1 half-base marks with value exactly 0.0 at tooth
    feet and exactly heights[j] at apexes; when the interval is the whole
    circle the final node coincides with the first and is dropped.
    """
    a = spec.interval.a
    length = spec.interval.length
    n = spec.n_teeth
    marks = np.arange(2 * n + 1, dtype=float) / (2 * n)
    positions = a + length * marks
    positions = np.where(positions >= 1.0, positions - 1.0, positions)
    values = np.zeros(2 * n + 1)
    values[1::2] = spec.heights
    if length == 1.0:
        positions = positions[:-1]
        values = values[:-1]
    return make_plpf(list(zip(positions.tolist(), values.tolist())))


def duality_weights(l_terms, p: float, alpha: float) -> np.ndarray:
    """Level weights delta_n proportional to L_n^(r'(r-1)) and summing to 1,
    the choice for which sum delta_n^(alpha-1/p) L_n equals the l^r' norm of
    L up to normalization rounding; in particular the sum is at least half of
    ||L||_r'."""
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must satisfy p > 1")
    if not (1.0 / p < alpha < 1.0):
        raise ValueError("alpha must lie in (1/p, 1)")
    arr = np.asarray(l_terms, dtype=float)
    r = 1.0 / (alpha - 1.0 / p)
    r_prime = 1.0 / (1.0 + 1.0 / p - alpha)
    u = dual_extremizer(arr, r_prime)
    delta = u**r
    return delta / delta.sum()


@dataclass(frozen=True)
class WitnessSpec:
    """Parameters of the multi-level comb witness: level n carries 2^n teeth
    on a tile whose length is proportional to the regularized level weight
    beta_n, with tooth heights shaped by the weight sequence so that each
    level's height power sum collapses to a closed form."""

    lam: LambdaSequence
    p: float
    alpha: float
    levels: int
    delta_seq: object = "auto"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p) and self.p > 1.0):
            raise ValueError("p must satisfy p > 1")
        if not (1.0 / self.p < self.alpha < 1.0):
            raise ValueError("alpha must lie in (1/p, 1)")
        if not (1 <= self.levels <= MAX_WITNESS_LEVELS):
            raise ValueError(f"levels must lie in 1..{MAX_WITNESS_LEVELS}")
        self.lam.require(2 ** (self.levels + 1))
        if isinstance(self.delta_seq, str):
            if self.delta_seq != "auto":
                raise ValueError('delta_seq must be "auto" or an explicit sequence')
            return
        seq = tuple(float(d) for d in self.delta_seq)
        if len(seq) != self.levels:
            raise ValueError("delta_seq must have one weight per level")
        if any(not math.isfinite(d) or d <= 0.0 for d in seq):
            raise ValueError("delta_seq entries must be positive and finite")
        if sum(seq) > 1.0 + 1e-12:
            raise ValueError("delta_seq must sum to at most 1")
        object.__setattr__(self, "delta_seq", seq)


@dataclass(frozen=True)
class WitnessReport:
    """Everything measured and derived while building a witness.

    S is the per-level weight norm over k in [2^n, 2^(n+1)-1]; L_inclusive
    extends the range to 2^(n+1) (the criterion's inner sums); beta is the
    raw regularized weight entering the heights and tile_lengths its
    normalization; criterion_partials[m-1] sums the criterion block terms
    over n = 1..m.  arc_pair_sum counts every tooth height twice against its
    own 1/lambda_k; it is NOT in general a lower bound for the measured
    variation, which assigns sorted arcs to the weight prefix, but half of it
    is (one arc per tooth, weight indices dominated by ranks).
    """

    p: float
    alpha: float
    levels: int
    delta: tuple
    beta: tuple
    tile_lengths: tuple
    S: tuple
    L_inclusive: tuple
    heights: tuple
    arc_pair_sum: float
    analytic_lower_bound: float
    measured_lambda_variation: float
    criterion_partials: tuple
    ratio_report: RatioNormReport


def extremal_function(
    spec: WitnessSpec,
    *,
    ratio_depth: int = 8,
    ratio_refinement: int = 0,
) -> tuple[PiecewiseLinearPeriodic, WitnessReport]:
    """Build the truncated witness g and measure it.

    Level n = 1..levels contributes a comb with 2^n teeth of heights
    H_k = (2^-n beta_n)^(alpha-1/p) lambda_k^(-1/(p-1)) S_n^(-p'/p) for
    k in [2^n, 2^(n+1)-1]; tiles partition the circle proportionally to the
    regularized weights beta (theta = 3/2, gamma = 1).  Valleys are exactly
    0.0, so the sorted-arc fast path for the weighted variation applies no
    matter how many levels are requested.
    """
    lam, p, alpha, levels = spec.lam, spec.p, spec.alpha, spec.levels
    p_prime = p / (p - 1.0)
    r_prime = 1.0 / (1.0 + 1.0 / p - alpha)
    a_exp = alpha - 1.0 / p

    inner = np.array(
        [
            weighted_block_sum(lam, p_prime * a_exp, p_prime, 2**n, 2 ** (n + 1))
            for n in range(1, levels + 1)
        ]
    )
    l_inclusive = inner ** (1.0 / p_prime)
    if isinstance(spec.delta_seq, str):
        delta = duality_weights(l_inclusive, p, alpha)
    else:
        delta = np.asarray(spec.delta_seq, dtype=float)
    beta = regularize_sequence(delta, 1.5, 1.0)
    cuts = np.cumsum(beta)
    boundaries = np.concatenate([[0.0], cuts / cuts[-1]])
    tile_lengths = np.diff(boundaries)

    s_norms = np.array(
        [
            weighted_block_sum(lam, 0.0, p_prime, 2**n, 2 ** (n + 1) - 1)
            ** (1.0 / p_prime)
            for n in range(1, levels + 1)
        ]
    )
    combs = []
    heights_per_level = []
    pair_sum = 0.0
    for idx in range(levels):
        n = idx + 1
        lam_k = self_terms(lam, 2**n, 2 ** (n + 1) - 1)
        heights = (
            (2.0**-n * beta[idx]) ** a_exp
            * lam_k ** (-1.0 / (p - 1.0))
            * s_norms[idx] ** (-p_prime / p)
        )
        heights_per_level.append(tuple(heights.tolist()))
        pair_sum += 2.0 * float(np.sum(heights / lam_k))
        tile = Interval(float(boundaries[idx]), float(tile_lengths[idx]))
        combs.append(triangle_comb(TriangleCombSpec(tile, 2**n, tuple(heights.tolist()))))
    g = superpose(combs)

    analytic = 2.0**a_exp * float(np.sum(delta**a_exp * l_inclusive))
    measured = lambda_variation(g, lam)
    criterion_partials = tuple(np.cumsum(inner ** (r_prime / p_prime)).tolist())
    ratio_report = p_cont_ratio_norm(g, p, alpha, ratio_depth, ratio_refinement)
    report = WitnessReport(
        p=p,
        alpha=alpha,
        levels=levels,
        delta=tuple(delta.tolist()),
        beta=tuple(beta.tolist()),
        tile_lengths=tuple(tile_lengths.tolist()),
        S=tuple(s_norms.tolist()),
        L_inclusive=tuple(l_inclusive.tolist()),
        heights=tuple(heights_per_level),
        arc_pair_sum=pair_sum,
        analytic_lower_bound=analytic,
        measured_lambda_variation=measured,
        criterion_partials=criterion_partials,
        ratio_report=ratio_report,
    )
    return g, report


def witness_report_json(report: WitnessReport) -> dict:
    """Report as a JSON-ready dict."""
    return {
        "levels": report.levels,
        "p": report.p,
        "alpha": report.alpha,
        "delta": list(report.delta),
        "beta": list(report.beta),
        "tile_lengths": list(report.tile_lengths),
        "S": list(report.S),
        "L_inclusive": list(report.L_inclusive),
        "arc_pair_sum": report.arc_pair_sum,
        "analytic_lower_bound": report.analytic_lower_bound,
        "measured_lambda_variation": report.measured_lambda_variation,
        "criterion_partials": list(report.criterion_partials),
        "omega_ratio_norm": report.ratio_report.value,
    }


def embedding_bound_check(
    f: PiecewiseLinearPeriodic,
    lam: LambdaSequence,
    p: float,
    alpha: float,
    n_blocks: int,
    *,
    dyadic_depth: int = 6,
    grid_refinement: int = 1,
) -> tuple[float, float, float]:
    """Both sides of the embedding inequality on a concrete function.

    Returns (lhs, rhs_core, ratio) with lhs the measured weighted variation
    and rhs_core the measured modulus ratio norm times the criterion partial
    sum to the power 1/r'.  The attached constant is unknown, so the ratio is
    reported, never asserted; it is scale invariant.  A family whose
    criterion diverges is rejected: the ratio would be meaningless.
    """
    from .sequences import criterion_partial_sums

    crit = criterion_partial_sums(lam, p, alpha, n_blocks)
    if crit.symbolic_verdict == "diverges":
        raise ValueError("criterion series diverges for this family; ratio is meaningless")
    lhs = lambda_variation(f, lam)
    if lhs == 0.0:
        return 0.0, 0.0, 0.0
    ratio_norm = p_cont_ratio_norm(f, p, alpha, dyadic_depth, grid_refinement).value
    rhs_core = ratio_norm * crit.partial_sums[-1] ** (1.0 / crit.r_prime)
    return lhs, rhs_core, lhs / rhs_core


def perlman_witness(d, p: float) -> LambdaSequence:
    """Weight sequence lambda_n = (sum_{k<=n} d_k^p) / d_n^(p-1) built from a
    nonincreasing positive sequence d.

    Its defining property: sum d_n/lambda_n = sum d_n^p / sum_{k<=n} d_k^p
    diverges whenever sum d_n^p does, while sum lambda_n^-p' converges, the
    classical divergent/convergent companion pair.  The reciprocal weights
    are nonincreasing already (numerator nonincreasing, denominator
    nondecreasing); a sorting fallback guards the float edge case.
    """
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must satisfy p > 1")
    arr = np.asarray(d, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("d must be a nonempty sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("d entries must be positive and finite")
    if np.any(np.diff(arr) > 0.0):
        raise ValueError("d must be nonincreasing")
    alpha = arr ** (p - 1.0) / np.cumsum(arr**p)
    if np.any(np.diff(alpha) > 0.0):
        alpha = np.sort(alpha)[::-1]
    return LambdaSequence.explicit(1.0 / alpha)


def wang_gap_family(p: float, alpha: float, s: float) -> LambdaSequence:
    """Block weight family for which the power necessary condition holds (its
    series converges) while the embedding criterion fails (its series
    diverges): lambda_k = 2^(n(1-alpha)) n^((1-alpha)s) on k in
    [2^n, 2^(n+1)), for s strictly inside (1, (1+1/p-alpha)/(1-alpha))."""
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must satisfy p > 1")
    if not (1.0 / p < alpha < 1.0):
        raise ValueError("alpha must lie in (1/p, 1)")
    upper = (1.0 + 1.0 / p - alpha) / (1.0 - alpha)
    if not (math.isfinite(s) and 1.0 < s < upper):
        raise ValueError(f"s must lie strictly inside the gap window (1, {upper:g})")
    return LambdaSequence.block_power_log(s, alpha)
