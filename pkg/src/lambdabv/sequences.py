"""Weight-sequence machinery: named nondecreasing families and explicit
prefixes, membership diagnostics for the divergent-sum classes, the embedding
criterion series over dyadic blocks, the 1/(1-alpha)-power necessary
condition, max-convolution regularization, a dyadic two-sided partial-sum
comparison, and the l^p duality extremizer."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

__all__ = [
    "LambdaSequence",
    "MembershipReport",
    "CriterionReport",
    "WangReport",
    "membership_report",
    "regularize_sequence",
    "criterion_partial_sums",
    "wang_partial_sums",
    "hardy_two_sides",
    "dual_extremizer",
    "weighted_block_sum",
    "sequence_to_json",
    "sequence_from_json",
]

_FAMILIES = ("explicit", "power", "power_log", "block_power_log")

# ranges at most this long are summed term by term; longer ones go through
# Hurwitz-zeta / digamma differences
_DIRECT_SUM_LIMIT = 4096
_POWER_LOG_LIMIT = 1 << 22


def _power_block_sum(c: float, lo: int, hi: int) -> float:
    """sum_{k=lo}^{hi} k^-c, exact for short ranges, zeta differences for
    long ones (the Hurwitz zeta difference telescopes to the finite sum for
    every c != 1; digamma covers c = 1)."""
    if hi < lo:
        return 0.0
    if hi - lo + 1 <= _DIRECT_SUM_LIMIT:
        k = np.arange(lo, hi + 1, dtype=float)
        return float(np.sum(k**-c))
    if abs(c - 1.0) < 1e-12:
        return float(mp.digamma(hi + 1) - mp.digamma(lo))
    with mp.workdps(40):
        return float(mp.zeta(c, lo) - mp.zeta(c, hi + 1))


def _block_index(k: int) -> int:
    return max(int(k).bit_length() - 1, 1)


@dataclass(frozen=True)
class LambdaSequence:
    """Positive nondecreasing weight sequence, 1-indexed.

    Either an explicit finite prefix or a named closed-form family:

    - power:            lambda_n = n^s
    - power_log:        lambda_n = n^s * log(n+1)^t
    - block_power_log:  lambda_k = 2^(n(1-alpha)) * n^((1-alpha)s) for
                        k in [2^n, 2^(n+1)), with the k = 1 block sharing
                        block 1's value

    Positivity and monotonicity are validated at construction: numerically on
    the accessible prefix for explicit sequences, symbolically on the
    parameters for named families.
    """

    family: str
    s: float = 0.0
    t: float = 0.0
    alpha: float = 0.0
    explicit_terms: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"family must be one of {_FAMILIES}")
        if self.family == "explicit":
            arr = np.asarray(self.explicit_terms, dtype=float)
            if arr.ndim != 1 or arr.size == 0:
                raise ValueError("explicit sequence needs at least one term")
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
                raise ValueError("sequence terms must be positive and finite")
            if np.any(np.diff(arr) < 0.0):
                raise ValueError("sequence terms must be nondecreasing")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, "explicit_terms", arr)
            return
        for name in ("s", "t", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"parameter {name} must be finite")
        if self.family == "power":
            if self.s < 0.0:
                raise ValueError("power family needs s >= 0 to be nondecreasing")
        elif self.family == "power_log":
            self._validate_power_log()
        else:
            if not (0.0 < self.alpha < 1.0):
                raise ValueError("block_power_log family needs alpha in (0, 1)")
            if self.s < -1.0:
                raise ValueError("block_power_log family needs s >= -1 to be nondecreasing")

    def _validate_power_log(self) -> None:
        s, t = self.s, self.t
        if s < 0.0:
            raise ValueError("power_log family needs s >= 0")
        if t >= 0.0:
            return
        if s == 0.0:
            raise ValueError("power_log family with s = 0 needs t >= 0")
        # n^s log(n+1)^t is nondecreasing iff s*log(n+1)*(n+1)/n >= -t for all
        # n >= 1; the left side is increasing, so the worst case is n = 1
        if s * math.log(2.0) * 2.0 + t < 0.0:
            raise ValueError("power_log family decreases at n = 1 for these s, t")

    # constructors

    @classmethod
    def explicit(cls, terms) -> "LambdaSequence":
        return cls(family="explicit", explicit_terms=np.asarray(terms, dtype=float))

    @classmethod
    def power(cls, s: float) -> "LambdaSequence":
        return cls(family="power", s=float(s))

    @classmethod
    def power_log(cls, s: float, t: float) -> "LambdaSequence":
        return cls(family="power_log", s=float(s), t=float(t))

    @classmethod
    def block_power_log(cls, s: float, alpha: float) -> "LambdaSequence":
        return cls(family="block_power_log", s=float(s), alpha=float(alpha))

    # accessors

    def __len__(self) -> int:
        if self.family == "explicit":
            return len(self.explicit_terms)
        raise TypeError("named families have no finite length")

    def require(self, n: int) -> None:
        """Fail fast when an explicit prefix is too short for n terms; named
        families extend analytically and never truncate."""
        if self.family == "explicit" and n > len(self.explicit_terms):
            raise ValueError(
                f"explicit sequence has {len(self.explicit_terms)} terms, "
                f"but {n} are required"
            )

    def term(self, n: int) -> float:
        if n < 1:
            raise ValueError("sequence indices start at 1")
        if self.family == "explicit":
            self.require(n)
            return float(self.explicit_terms[n - 1])
        if self.family == "power":
            return float(n) ** self.s
        if self.family == "power_log":
            return float(n) ** self.s * math.log(n + 1.0) ** self.t
        b = _block_index(n)
        return 2.0 ** (b * (1.0 - self.alpha)) * float(b) ** ((1.0 - self.alpha) * self.s)

    def terms(self, n: int) -> np.ndarray:
        """First n terms as an array."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        if self.family == "explicit":
            self.require(n)
            return self.explicit_terms[:n].copy()
        k = np.arange(1, n + 1, dtype=float)
        if self.family == "power":
            return k**self.s
        if self.family == "power_log":
            return k**self.s * np.log(k + 1.0) ** self.t
        b = np.maximum(np.floor(np.log2(np.maximum(k, 1.0))), 1.0)
        return 2.0 ** (b * (1.0 - self.alpha)) * b ** ((1.0 - self.alpha) * self.s)

    def describe(self) -> str:
        if self.family == "explicit":
            return f"explicit[{len(self.explicit_terms)}]"
        if self.family == "power":
            return f"power(s={self.s:g})"
        if self.family == "power_log":
            return f"power_log(s={self.s:g}, t={self.t:g})"
        return f"block_power_log(s={self.s:g}, alpha={self.alpha:g})"


def weighted_block_sum(lam: LambdaSequence, k_exp: float, lam_exp: float, lo: int, hi: int) -> float:
    """sum_{k=lo}^{hi} k^-k_exp * lambda_k^-lam_exp, in closed form where the
    family allows it, so dyadic blocks far beyond direct summation stay exact.
    """
    if lo < 1:
        raise ValueError("block bounds start at 1")
    if hi < lo:
        return 0.0
    if lam.family == "power":
        return _power_block_sum(k_exp + lam_exp * lam.s, lo, hi)
    if lam.family == "block_power_log":
        total = 0.0
        n = _block_index(lo)
        lo_n = lo
        while lo_n <= hi:
            block_hi = min(hi, 2 ** (n + 1) - 1)
            lam_block = 2.0 ** (n * (1.0 - lam.alpha)) * float(n) ** ((1.0 - lam.alpha) * lam.s)
            total += lam_block**-lam_exp * _power_block_sum(k_exp, lo_n, block_hi)
            lo_n = block_hi + 1
            n = _block_index(lo_n)
        return total
    if lam.family == "explicit":
        lam.require(hi)
        k = np.arange(lo, hi + 1, dtype=float)
        return float(np.sum(k**-k_exp * self_terms(lam, lo, hi) ** -lam_exp))
    # power_log has no closed form; cap the direct summation honestly
    if hi - lo + 1 > _POWER_LOG_LIMIT:
        raise ValueError("range too long for direct summation of the power_log family")
    k = np.arange(lo, hi + 1, dtype=float)
    lam_k = k**lam.s * np.log(k + 1.0) ** lam.t
    return float(np.sum(k**-k_exp * lam_k**-lam_exp))


def self_terms(lam: LambdaSequence, lo: int, hi: int) -> np.ndarray:
    """lambda_k for k = lo..hi."""
    if lam.family == "explicit":
        lam.require(hi)
        return lam.explicit_terms[lo - 1 : hi].copy()
    return lam.terms(hi)[lo - 1 :]


_VERDICTS = ("converges", "diverges", "undetermined")
_MEMBER_VERDICTS = ("proved", "refuted", "undetermined-numeric")


@dataclass(frozen=True)
class MembershipReport:
    """Verdicts and partial sums for the divergent-harmonic class (positive
    nondecreasing lambda_n -> infinity with sum 1/lambda_n = infinity) and its
    q-summable subclass (additionally sum lambda_n^-q < infinity).

    Verdicts are "proved"/"refuted" only for named families, where the
    classification is symbolic in the parameters; explicit prefixes stay
    "undetermined-numeric" because finite data cannot settle divergence.
    """

    q: float
    class_S: str
    class_S_partial: tuple[tuple[int, float], ...]
    class_Sq: str
    class_Sq_partial: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class CriterionReport:
    """Dyadic-block partial sums of the embedding criterion series
    sum_n ( sum_{k=2^n}^{2^(n+1)} (k^(alpha-1/p) lambda_k)^-p' )^(r'/p').

    Finiteness of the series characterizes the inclusion of the
    shift-modulus class Lip(alpha; p) in the weighted-variation class of
    lambda; block_terms rows are (n, inner sum, block term).
    """

    p: float
    alpha: float
    r: float
    r_prime: float
    include_upper: bool
    block_terms: tuple[tuple[int, float, float], ...]
    partial_sums: tuple[float, ...]
    symbolic_verdict: str


@dataclass(frozen=True)
class WangReport:
    """Partial sums of sum_n lambda_n^(-1/(1-alpha)) at dyadic checkpoints;
    entry m covers indices up to 2^(m+1) - 1 (dyadic blocks 0..m).  This sum
    must diverge for the embedding to fail, making its convergence a
    necessary condition, but not a sufficient one."""

    alpha: float
    exponent: float
    partial_sums: tuple[float, ...]
    symbolic_verdict: str


def membership_report(lam: LambdaSequence, q: float, n_terms: int) -> MembershipReport:
    """Partial sums of sum 1/lambda_n and sum lambda_n^-q at geometric
    checkpoints up to n_terms, with symbolic verdicts for named families."""
    if not (math.isfinite(q) and q > 1.0):
        raise ValueError("q must satisfy q > 1")
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    lam.require(n_terms)
    checkpoints = sorted({2**j for j in range(0, 64) if 2**j <= n_terms} | {n_terms})
    s_rows, q_rows = [], []
    s_total = q_total = 0.0
    prev = 0
    for cp in checkpoints:
        s_total += weighted_block_sum(lam, 0.0, 1.0, prev + 1, cp)
        q_total += weighted_block_sum(lam, 0.0, q, prev + 1, cp)
        s_rows.append((cp, s_total))
        q_rows.append((cp, q_total))
        prev = cp
    in_s, in_sq = _membership_verdicts(lam, q)
    return MembershipReport(q, in_s, tuple(s_rows), in_sq, tuple(q_rows))


def _membership_verdicts(lam: LambdaSequence, q: float) -> tuple[str, str]:
    if lam.family == "explicit":
        return "undetermined-numeric", "undetermined-numeric"
    if lam.family == "power":
        # needs lambda_n -> infinity, so s = 0 (constant) is out
        in_s = 0.0 < lam.s <= 1.0
        in_sq = in_s and q * lam.s > 1.0
    elif lam.family == "power_log":
        s, t = lam.s, lam.t
        to_inf = s > 0.0 or (s == 0.0 and t > 0.0)
        harmonic_diverges = s < 1.0 or (s == 1.0 and t <= 1.0)
        in_s = to_inf and harmonic_diverges
        qsum_converges = q * s > 1.0 or (q * s == 1.0 and q * t > 1.0)
        in_sq = in_s and qsum_converges
    else:
        # lambda_k^-1 sums to sum_n 2^(n*alpha) n^(-(1-alpha)s) over blocks,
        # which always diverges, and lambda_k -> infinity since alpha < 1
        in_s = True
        qa = q * (1.0 - lam.alpha)
        in_sq = qa > 1.0 or (qa == 1.0 and q * (1.0 - lam.alpha) * lam.s > 1.0)
    return (
        "proved" if in_s else "refuted",
        "proved" if in_sq else "refuted",
    )


def _criterion_verdict(lam: LambdaSequence, p: float, alpha: float, r_prime: float) -> str:
    if lam.family == "explicit":
        return "undetermined"
    if lam.family == "power":
        # block terms decay like 2^(n r' (1 - alpha - s))
        return "converges" if lam.s > 1.0 - alpha else "diverges"
    if lam.family == "power_log":
        if lam.s > 1.0 - alpha:
            return "converges"
        if lam.s < 1.0 - alpha:
            return "diverges"
        return "converges" if lam.t * r_prime > 1.0 else "diverges"
    # block_power_log: block terms behave like 2^(n r' (alpha_fam - alpha))
    # times n^(-r' (1 - alpha_fam) s)
    if alpha > lam.alpha:
        return "converges"
    if alpha < lam.alpha:
        return "diverges"
    return "converges" if r_prime * (1.0 - lam.alpha) * lam.s > 1.0 else "diverges"


def criterion_partial_sums(
    lam: LambdaSequence,
    p: float,
    alpha: float,
    n_blocks: int,
    include_upper: bool = True,
) -> CriterionReport:
    """Block terms and partial sums of the embedding criterion series for
    dyadic blocks n = 0..n_blocks.

    Inner sums include both block endpoints 2^n and 2^(n+1) by default; the
    boundary double count is harmless for convergence and the exclusive
    variant is available via include_upper=False.
    """
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must satisfy p > 1")
    if not (1.0 / p < alpha < 1.0):
        raise ValueError("alpha must lie in (1/p, 1)")
    if n_blocks < 0:
        raise ValueError("n_blocks must be nonnegative")
    p_prime = p / (p - 1.0)
    r = 1.0 / (alpha - 1.0 / p)
    r_prime = 1.0 / (1.0 + 1.0 / p - alpha)
    rows = []
    partial = []
    total = 0.0
    for n in range(n_blocks + 1):
        lo = 2**n
        hi = 2 ** (n + 1) - (0 if include_upper else 1)
        inner = weighted_block_sum(lam, p_prime * (alpha - 1.0 / p), p_prime, lo, hi)
        term = inner ** (r_prime / p_prime)
        total += term
        rows.append((n, inner, term))
        partial.append(total)
    verdict = _criterion_verdict(lam, p, alpha, r_prime)
    return CriterionReport(
        p, alpha, r, r_prime, include_upper, tuple(rows), tuple(partial), verdict
    )


def wang_partial_sums(lam: LambdaSequence, alpha: float, n_blocks: int) -> WangReport:
    """Partial sums of sum_n lambda_n^(-1/(1-alpha)) at the dyadic
    checkpoints 2^(m+1) - 1 for m = 0..n_blocks-1 (empty for n_blocks = 0)."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if n_blocks < 0:
        raise ValueError("n_blocks must be nonnegative")
    exponent = 1.0 / (1.0 - alpha)
    sums = []
    total = 0.0
    for m in range(n_blocks):
        total += weighted_block_sum(lam, 0.0, exponent, 2**m, 2 ** (m + 1) - 1)
        sums.append(total)
    if lam.family == "explicit":
        verdict = "undetermined"
    elif lam.family == "power":
        verdict = "diverges" if lam.s * exponent <= 1.0 else "converges"
    elif lam.family == "power_log":
        se, te = lam.s * exponent, lam.t * exponent
        diverges = se < 1.0 or (se == 1.0 and te <= 1.0)
        verdict = "diverges" if diverges else "converges"
    else:
        # per-block closed form: block m contributes
        # 2^(m (1 - (1-alpha_fam)/(1-alpha))) * m^(-s (1-alpha_fam)/(1-alpha))
        if lam.alpha > alpha:
            verdict = "diverges"
        elif lam.alpha < alpha:
            verdict = "converges"
        else:
            verdict = "converges" if lam.s > 1.0 else "diverges"
    return WangReport(alpha, exponent, tuple(sums), verdict)


def regularize_sequence(a, theta: float, gamma: float) -> np.ndarray:
    """Smallest max-convolution envelope of ``a`` with two-sided geometric
    decay: beta_k = max_j a_j * w_(k-j), w_d = theta^(-gamma d) for d >= 0 and
    theta^d for d < 0.

    Guarantees a_k <= beta_k, theta^-gamma <= beta_(k+1)/beta_k <= theta, and
    sum beta <= theta^(1+gamma) / ((theta-1)(theta^gamma-1)) * sum a.
    """
    if not (math.isfinite(theta) and theta > 1.0):
        raise ValueError("theta must exceed 1")
    if not (math.isfinite(gamma) and gamma > 0.0):
        raise ValueError("gamma must be positive")
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("input must be a nonempty sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ValueError("input terms must be nonnegative and finite")
    if not np.any(arr > 0.0):
        raise ValueError("input must have a positive term")
    k = len(arr)
    offsets = np.arange(-(k - 1), k)
    w = np.where(offsets >= 0, theta ** (-gamma * offsets), theta ** offsets.astype(float))
    # beta_k = max_j a_j * w[k-j]; indices k-j span [-(k-1), k-1]
    idx = np.arange(k)[:, None] - np.arange(k)[None, :] + (k - 1)
    return np.max(arr[None, :] * w[idx], axis=1)


def hardy_two_sides(beta: float, r: float, a, nu) -> tuple[float, float]:
    """Two sides of a dyadic-weight partial-sum comparison.

    lhs = sum_n 2^(-n beta) (sum_{1 <= k <= nu_n} a_k)^(1/r) over all
    available n, and rhs = sum_{n >= 1} 2^(-n beta) with the inner sum taken
    over the block nu_(n-1) <= k <= nu_n (inclusive real bounds on integer
    k).  The lhs dominates the rhs termwise; the interesting direction,
    lhs <= c * rhs, is observed empirically.
    """
    if not (math.isfinite(beta) and beta > 0.0):
        raise ValueError("beta must be positive")
    if not (math.isfinite(r) and r > 1.0):
        raise ValueError("r must satisfy r > 1")
    nu_arr = np.asarray(nu, dtype=float)
    if nu_arr.ndim != 1 or nu_arr.size == 0:
        raise ValueError("nu must be a nonempty sequence")
    if nu_arr[0] != 1.0:
        raise ValueError("nu must start at 1")
    if np.any(np.diff(nu_arr) <= 0.0):
        raise ValueError("nu must be strictly increasing")
    a_arr = np.asarray(a, dtype=float)
    if np.any(a_arr < 0.0):
        raise ValueError("a must be nonnegative")
    m = len(a_arr)
    prefix = np.concatenate([[0.0], np.cumsum(a_arr)])

    def head(bound: float) -> float:
        # sum of a_k over 1 <= k <= bound within the available prefix
        top = min(int(math.floor(bound)), m)
        return float(prefix[top]) if top >= 1 else 0.0

    def block(lo: float, hi: float) -> float:
        lo_i = max(int(math.ceil(lo)), 1)
        hi_i = min(int(math.floor(hi)), m)
        if hi_i < lo_i:
            return 0.0
        return float(prefix[hi_i] - prefix[lo_i - 1])

    lhs = sum(
        2.0 ** (-n * beta) * head(nu_arr[n]) ** (1.0 / r) for n in range(len(nu_arr))
    )
    rhs = sum(
        2.0 ** (-n * beta) * block(nu_arr[n - 1], nu_arr[n]) ** (1.0 / r)
        for n in range(1, len(nu_arr))
    )
    return float(lhs), float(rhs)


def dual_extremizer(x, p: float) -> np.ndarray:
    """The l^p' unit vector realizing sup_{||a||_p' <= 1} sum a_n x_n =
    ||x||_p for nonnegative x: a_n = (x_n / ||x||_p)^(p-1)."""
    if not (math.isfinite(p) and p > 1.0):
        raise ValueError("p must satisfy p > 1")
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("input must be a nonempty sequence")
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("input terms must be nonnegative and finite")
    norm = float(np.sum(arr**p) ** (1.0 / p))
    if norm == 0.0:
        raise ValueError("input must not be all zero")
    return (arr / norm) ** (p - 1.0)


def sequence_to_json(lam: LambdaSequence) -> str:
    """Serialize to the sequence file format."""
    if lam.family == "explicit":
        obj = {"family": "explicit", "terms": [float(v) for v in lam.explicit_terms]}
    elif lam.family == "power":
        obj = {"family": "power", "params": {"s": lam.s}}
    elif lam.family == "power_log":
        obj = {"family": "power_log", "params": {"s": lam.s, "t": lam.t}}
    else:
        obj = {"family": "block_power_log", "params": {"s": lam.s, "alpha": lam.alpha}}
    return json.dumps(obj)


def sequence_from_json(text: str) -> LambdaSequence:
    """Parse the sequence file format:
    {"family": "power"|"power_log"|"block_power_log"|"explicit",
     "params": {...} | "terms": [...]}."""
    obj = json.loads(text)
    if not isinstance(obj, dict) or "family" not in obj:
        raise ValueError('sequence JSON must be an object with a "family" key')
    family = obj["family"]
    if family == "explicit":
        if "terms" not in obj or not isinstance(obj["terms"], list):
            raise ValueError('explicit sequences need a "terms" list')
        return LambdaSequence.explicit(obj["terms"])
    params = obj.get("params")
    if not isinstance(params, dict):
        raise ValueError('named families need a "params" object')
    if family == "power":
        return LambdaSequence.power(params["s"])
    if family == "power_log":
        return LambdaSequence.power_log(params["s"], params["t"])
    if family == "block_power_log":
        return LambdaSequence.block_power_log(params["s"], params["alpha"])
    raise ValueError(f"unknown sequence family {family!r}")
