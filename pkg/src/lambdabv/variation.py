"""Variation functionals of periodic piecewise-linear functions: p-variation,
weighted (Lambda) variation, modulus of p-continuity, L^p-modulus, ratio
norms, and independent brute-force oracles.

All suprema over interval systems are computed exactly on their grids.  Two
reductions make this tractable and are themselves cross-checked by the oracle
tests: a maximizing system may take all its endpoints at local extrema, and
cutting the circle at a global maximum never loses value (splitting any
interval at a global max point can only increase the objective).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .periodic import (
    IntervalSystem,
    MonotoneArcDecomposition,
    PiecewiseLinearPeriodic,
    increment,
    monotone_arcs,
)
from .sequences import LambdaSequence

__all__ = [
    "ModulusQuery",
    "RatioNormReport",
    "p_variation",
    "lambda_variation",
    "modulus_p_continuity",
    "lp_modulus",
    "lip_norm",
    "p_cont_ratio_norm",
    "brute_p_variation",
    "brute_lambda_variation",
    "system_p_sum",
    "system_lambda_sum",
    "MAX_EXACT_ARCS",
]

# subset search over local extrema is exponential; beyond this arc count only
# baseline-separated functions are supported
MAX_EXACT_ARCS = 16

_CUT_POLICIES = ("argmax", "all")


@dataclass(frozen=True)
class ModulusQuery:
    """Query for the modulus of p-continuity.

    ``delta`` bounds the interval lengths; ``grid_refinement`` adds that many
    uniform points per breakpoint segment; ``cut_candidates`` selects where
    the circle is cut before the chain maximization ("argmax" cuts at a
    global maximum, which is exact on the grid; "all" tries every grid point
    and serves as a cross-check).
    """

    delta: float
    grid_refinement: int = 0
    cut_candidates: str = "argmax"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and 0.0 < self.delta <= 1.0):
            raise ValueError("delta must lie in (0, 1]")
        if self.grid_refinement < 0:
            raise ValueError("grid_refinement must be nonnegative")
        if self.cut_candidates not in _CUT_POLICIES:
            raise ValueError(f"cut_candidates must be one of {_CUT_POLICIES}")


@dataclass(frozen=True)
class RatioNormReport:
    """Sup over a dyadic delta grid of modulus(delta) / delta^exponent.

    ``per_delta`` rows are (delta, modulus, ratio) with delta decreasing from
    1 to 2^-delta_grid; ``value`` equals the max of the ratio column.
    """

    value: float
    per_delta: tuple[tuple[float, float, float], ...]
    delta_grid: int


def _validate_lambda(lam: LambdaSequence) -> None:
    if not isinstance(lam, LambdaSequence):
        raise TypeError("lam must be a LambdaSequence")


def _refined_cycle(f: PiecewiseLinearPeriodic, refinement: int):
    """Breakpoint cycle with ``refinement`` uniform interior points inserted
    per segment; positions ascend from the first breakpoint over one period."""
    pos, val = f._pos, f._val
    if refinement == 0:
        return pos, val
    x1 = np.append(pos[1:], pos[0] + 1.0)
    y1 = np.append(val[1:], val[0])
    fr = np.arange(refinement + 1) / (refinement + 1)
    cx = (pos[:, None] + (x1 - pos)[:, None] * fr).ravel()
    cy = (val[:, None] + (y1 - val)[:, None] * fr).ravel()
    return cx, cy


def _chain_from_cycle(cx: np.ndarray, cy: np.ndarray, i: int):
    """Cut the cycle before index ``i``: a chain spanning exactly one period
    from cx[i] to cx[i] + 1."""
    xs = np.concatenate([cx[i:], cx[:i] + 1.0, [cx[i] + 1.0]])
    ys = np.concatenate([cy[i:], cy[:i], [cy[i]]])
    return xs, ys


def _chain_dp(xs: np.ndarray, ys: np.ndarray, p: float, delta: float) -> float:
    """Max of sum |y_j - y_i|^p over nonoverlapping index intervals of the
    chain with x-length <= delta.  Returns the p-power sum."""
    n = len(xs)
    best = np.zeros(n)
    square = p == 2.0
    # the full-period pair is the only one whose float length can exceed 1,
    # and its increment is exactly zero, so delta = 1 admits every pair
    unbounded = delta >= 1.0
    for j in range(1, n):
        lo = 0 if unbounded else int(np.searchsorted(xs, xs[j] - delta, side="left"))
        b = best[j - 1]
        if lo < j:
            d = ys[j] - ys[lo:j]
            cand = best[lo:j] + (d * d if square else np.abs(d) ** p)
            m = cand.max()
            if m > b:
                b = m
        best[j] = b
    return float(best[-1])


def _modulus_power_sum(
    f: PiecewiseLinearPeriodic,
    p: float,
    delta: float,
    refinement: int,
    cut_candidates: str,
) -> float:
    if len(f.positions) == 1:
        return 0.0
    cx, cy = _refined_cycle(f, refinement)
    if cut_candidates == "argmax":
        cuts = [int(np.argmax(cy))]
    else:
        cuts = range(len(cx))
    return max(_chain_dp(*_chain_from_cycle(cx, cy, i), p, delta) for i in cuts)


def p_variation(f: PiecewiseLinearPeriodic, p: float) -> float:
    """v_p(f): sup of (sum |f(I_n)|^p)^(1/p) over systems of nonoverlapping
    intervals in a period.

    For piecewise-linear f the supremum is attained on the breakpoint grid,
    so the chain maximization below is exact (cross-checked against
    brute_p_variation).
    """
    if not (math.isfinite(p) and p >= 1.0):
        raise ValueError("p must satisfy p >= 1")
    return _modulus_power_sum(f, p, 1.0, 0, "argmax") ** (1.0 / p)


def modulus_p_continuity(f: PiecewiseLinearPeriodic, p: float, query: ModulusQuery) -> float:
    """omega_{1-1/p}(f; delta): the p-variation sup restricted to systems
    whose intervals have length <= delta.

    Endpoints run over the refined grid, so the result is a certified lower
    bound of the true supremum, converging upward with grid_refinement along
    nested refinements, and exact at refinement 0 when delta = 1.
    """
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must satisfy p > 1")
    power = _modulus_power_sum(
        f, p, query.delta, query.grid_refinement, query.cut_candidates
    )
    return power ** (1.0 / p)


def _sorted_weighted_sum(d_sorted: np.ndarray, lam: LambdaSequence) -> float:
    k = len(d_sorted)
    if k == 0:
        return 0.0
    lam.require(k)
    return float(d_sorted @ (1.0 / lam.terms(k)))


def _cyclic_subset_max(values: np.ndarray, lam: LambdaSequence) -> float:
    """Exact max of the sorted-weighted increment sum over all systems whose
    endpoints take the given cyclic values.

    For a fixed endpoint subset, tiling the circle with all consecutive
    intervals dominates every sparser pattern (adding a nonnegative increment
    never lowers the sorted sum against nonincreasing weights 1/lambda), so
    only subsets need enumeration.
    """
    m = len(values)
    if m < 2:
        return 0.0
    lam.require(m)
    inv = 1.0 / lam.terms(m)
    best = 0.0
    for mask in range(1, 1 << m):
        if mask.bit_count() < 2:
            continue
        chosen = values[[i for i in range(m) if mask >> i & 1]]
        diffs = np.abs(chosen - np.roll(chosen, -1))
        diffs[::-1].sort()
        s = float(diffs @ inv[: len(diffs)])
        if s > best:
            best = s
    return best


def lambda_variation(f: PiecewiseLinearPeriodic, lam: LambdaSequence) -> float:
    """v_Lambda(f): sup over systems of nonoverlapping intervals of
    sum |f(I_n)| / lambda_n with the increments assigned to the weights in
    nonincreasing order (optimal by rearrangement).

    Exact for baseline-separated functions (all local minima equal, or all
    local maxima equal), where the sorted arc increments realize the
    supremum, and for functions with at most MAX_EXACT_ARCS monotone arcs via
    subset search over the local extrema.  Other shapes raise, rather than
    silently undercounting the supremum.
    """
    _validate_lambda(lam)
    dec = monotone_arcs(f)
    k = len(dec.arcs)
    if k == 0:
        return 0.0
    if dec.is_baseline_separated():
        d = np.sort(np.abs(dec.increments))[::-1]
        return _sorted_weighted_sum(d, lam)
    if k <= MAX_EXACT_ARCS:
        return _cyclic_subset_max(np.asarray(dec.start_values), lam)
    raise ValueError(
        f"function has {k} monotone arcs and no common baseline; the exact "
        f"search is exponential and supported only up to {MAX_EXACT_ARCS} arcs"
    )


def brute_lambda_variation(f: PiecewiseLinearPeriodic, lam: LambdaSequence, candidate_points) -> float:
    """Oracle: exact max of sum |f(I_n)| / lambda_sigma(n) over all systems of
    nonoverlapping intervals with endpoints among the candidates and all
    weight assignments sigma (sorted-decreasing is optimal by rearrangement).
    """
    _validate_lambda(lam)
    pts = np.unique(np.mod(np.asarray(candidate_points, dtype=float), 1.0))
    if len(pts) > 14:
        raise ValueError("brute enumeration supports at most 14 candidate points")
    if len(pts) < 2:
        return 0.0
    return _cyclic_subset_max(np.asarray(f.eval(pts)), lam)


def brute_p_variation(f: PiecewiseLinearPeriodic, p: float, candidate_points) -> float:
    """Oracle for v_p on a finite grid: chain maximization over sorted
    candidates, tried over every circle cut.  Returns the p-power sum."""
    if not (math.isfinite(p) and p >= 1.0):
        raise ValueError("p must satisfy p >= 1")
    pts = np.unique(np.mod(np.asarray(candidate_points, dtype=float), 1.0))
    if len(pts) < 2:
        return 0.0
    vals = np.asarray(f.eval(pts))
    return max(
        _chain_dp(*_chain_from_cycle(pts, vals, i), p, 1.0) for i in range(len(pts))
    )


def system_p_sum(f: PiecewiseLinearPeriodic, system: IntervalSystem, p: float) -> float:
    """(sum |f(I)|^p)^(1/p) for one explicit interval system."""
    if not system.intervals:
        return 0.0
    incs = np.asarray([increment(f, iv) for iv in system.intervals])
    return float(np.sum(np.abs(incs) ** p) ** (1.0 / p))


def system_lambda_sum(f: PiecewiseLinearPeriodic, system: IntervalSystem, lam: LambdaSequence) -> float:
    """Sorted-weighted increment sum for one explicit interval system."""
    _validate_lambda(lam)
    if not system.intervals:
        return 0.0
    incs = np.sort(np.abs([increment(f, iv) for iv in system.intervals]))[::-1]
    return _sorted_weighted_sum(incs, lam)


def _shift_norm(f: PiecewiseLinearPeriodic, h: float, p: float) -> float:
    """||f(.+h) - f||_p via exact integration of the piecewise-linear
    difference (kinks at breakpoints and at breakpoints shifted by -h)."""
    if h == 0.0 or len(f.positions) == 1:
        return 0.0
    pos = f._pos
    kinks = np.unique(np.concatenate([pos, np.mod(pos - h, 1.0)]))
    x1 = np.append(kinks[1:], kinks[0] + 1.0)
    u = f.eval(kinks + h) - f.eval(kinks)
    v = f.eval(x1 + h) - f.eval(x1)
    w = x1 - kinks
    # integral of |linear u -> v|^p over a piece of width w:
    # w * (G(v) - G(u)) / (v - u) with G(c) = sign(c)|c|^{p+1}/(p+1)
    scale = np.maximum(np.maximum(np.abs(u), np.abs(v)), 1.0)
    flat = np.abs(v - u) <= 1e-14 * scale
    g = lambda c: np.sign(c) * np.abs(c) ** (p + 1.0) / (p + 1.0)
    denom = np.where(flat, 1.0, v - u)
    pieces = np.where(
        flat,
        w * 0.5 * (np.abs(u) ** p + np.abs(v) ** p),
        w * (g(v) - g(u)) / denom,
    )
    return float(np.sum(pieces) ** (1.0 / p))


_DYADIC_SHIFTS = tuple(2.0 ** (-j) for j in range(41))


def _shift_candidates(f: PiecewiseLinearPeriodic, delta: float, h_samples: int) -> np.ndarray:
    """Shift sample set on [0, delta]: breakpoint difference kinks, a uniform
    grid of density ~h_samples per unit shift, all dyadic shifts, and delta.

    The uniform grid has a fixed power-of-two step, so candidate sets are
    nested along dyadic deltas and the sampled modulus stays monotone there.
    """
    pos = f._pos
    hs = [np.asarray([delta]), np.asarray(_DYADIC_SHIFTS)]
    if len(pos) ** 2 <= 1_000_000:
        diff = np.mod(pos[None, :] - pos[:, None], 1.0).ravel()
        hs.append(diff)
    count = 2 ** math.ceil(math.log2(max(h_samples, 1)))
    hs.append(np.linspace(0.0, 1.0, count + 1))
    h = np.unique(np.concatenate(hs))
    return h[(h > 0.0) & (h <= delta)]


def lp_modulus(f: PiecewiseLinearPeriodic, p: float, delta: float, h_samples: int = 64) -> float:
    """omega(f; delta)_p: sup over shifts h in [0, delta] of ||f(.+h) - f||_p.

    The shift integral is exact in closed form; the sup is taken over the
    sampled shift set, so the result is a lower bound converging upward in
    h_samples (monotone in delta along dyadic grids).
    """
    if not (math.isfinite(p) and p >= 1.0):
        raise ValueError("p must satisfy p >= 1")
    if not (math.isfinite(delta) and 0.0 <= delta <= 1.0):
        raise ValueError("delta must lie in [0, 1]")
    if h_samples < 1:
        raise ValueError("h_samples must be positive")
    if delta == 0.0 or len(f.positions) == 1:
        return 0.0
    return max(_shift_norm(f, float(h), p) for h in _shift_candidates(f, delta, h_samples))


def _dyadic_grid(depth: int) -> list[float]:
    return [2.0 ** (-j) for j in range(depth + 1)]


def lip_norm(
    f: PiecewiseLinearPeriodic,
    p: float,
    alpha: float,
    dyadic_depth: int,
    h_samples: int = 64,
) -> RatioNormReport:
    """sup over dyadic delta of omega(f; delta)_p / delta^alpha, a lower
    bound of the shift-modulus ratio norm (within a factor 2^alpha of the
    continuum sup by subadditivity of the modulus)."""
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must satisfy p > 1")
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must lie in (0, 1]")
    if dyadic_depth < 1:
        raise ValueError("dyadic_depth must be at least 1")
    if len(f.positions) == 1:
        deltas = _dyadic_grid(dyadic_depth)
        return RatioNormReport(0.0, tuple((d, 0.0, 0.0) for d in deltas), dyadic_depth)
    hs = _shift_candidates(f, 1.0, h_samples)
    norms = np.asarray([_shift_norm(f, float(h), p) for h in hs])
    rows = []
    for d in _dyadic_grid(dyadic_depth):
        sel = norms[hs <= d]
        modulus = float(sel.max()) if sel.size else 0.0
        rows.append((d, modulus, modulus / d**alpha))
    value = max(r[2] for r in rows)
    return RatioNormReport(value, tuple(rows), dyadic_depth)


def p_cont_ratio_norm(
    f: PiecewiseLinearPeriodic,
    p: float,
    alpha: float,
    dyadic_depth: int,
    grid_refinement: int = 0,
) -> RatioNormReport:
    """sup over dyadic delta of omega_{1-1/p}(f; delta) / delta^(alpha - 1/p).

    Requires alpha > 1/p; below that threshold the ratio norm does not
    control bounded functions and the query is rejected.
    """
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must satisfy p > 1")
    if not (1.0 / p < alpha <= 1.0):
        raise ValueError("alpha must lie in (1/p, 1]")
    if dyadic_depth < 1:
        raise ValueError("dyadic_depth must be at least 1")
    exponent = alpha - 1.0 / p
    deltas = _dyadic_grid(dyadic_depth)
    if len(f.positions) == 1:
        return RatioNormReport(0.0, tuple((d, 0.0, 0.0) for d in deltas), dyadic_depth)
    cx, cy = _refined_cycle(f, grid_refinement)
    cut = int(np.argmax(cy))
    xs, ys = _chain_from_cycle(cx, cy, cut)
    rows = []
    for d in deltas:
        modulus = _chain_dp(xs, ys, p, d) ** (1.0 / p)
        rows.append((d, modulus, modulus / d**exponent))
    value = max(r[2] for r in rows)
    return RatioNormReport(value, tuple(rows), dyadic_depth)
