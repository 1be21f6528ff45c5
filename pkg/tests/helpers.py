"""Shared test utilities: random inputs and an exhaustive system oracle.

The oracle here deliberately avoids the library's chain DP and subset-scan
code paths: it enumerates every system of nonoverlapping index pairs over a
small candidate set, cutting the circle at each candidate in turn, so the
fast implementations can be checked against a search with no shortcuts.
"""

import numpy as np

from lambdabv import Interval, TriangleCombSpec, make_plpf


def random_plpf(rng, max_breaks=8, scale=1.5, min_gap=1e-3):
    n = int(rng.integers(2, max_breaks + 1))
    while True:
        pos = np.sort(rng.uniform(0.0, 1.0, n))
        gaps = np.diff(np.concatenate([pos, [pos[0] + 1.0]]))
        if np.min(gaps) > min_gap:
            break
    vals = rng.uniform(-scale, scale, n)
    return make_plpf(list(zip(pos.tolist(), vals.tolist())))


def random_comb_spec(rng, max_teeth=8):
    n = int(rng.integers(1, max_teeth + 1))
    a = float(rng.uniform(0.0, 1.0))
    length = float(rng.uniform(0.1, 1.0))
    heights = rng.uniform(0.0, 2.0, n)
    heights[int(rng.integers(0, n))] += 0.05  # keep at least one tooth real
    return TriangleCombSpec(Interval(a, length), n, tuple(heights.tolist()))


def random_lambda_prefix(rng, n, start=0.2):
    return start + np.cumsum(rng.uniform(0.05, 1.0, n))


def iter_line_systems(n):
    """Yield every tuple of nonoverlapping index pairs over n ordered points.

    Pairs may share endpoints; interiors never overlap. Each system is
    produced exactly once, ordered by left endpoint.
    """

    def rec(start):
        yield ()
        for i in range(start, n - 1):
            for j in range(i + 1, n):
                for rest in rec(j):
                    yield ((i, j),) + rest

    return rec(0)


def circle_oracle(f, candidates, score, max_length=None):
    """Maximize score(list of increments) over all systems on the circle.

    Cuts the circle at each candidate point, unrolls to a line, and
    enumerates all nonoverlapping pair systems (optionally restricted to
    pairs spanning at most max_length).
    """
    pts = sorted({float(c) % 1.0 for c in candidates})
    m = len(pts)
    vals = [float(f.eval(x)) for x in pts]
    best = 0.0
    for cut in range(m):
        xs = [pts[(cut + k) % m] + (1.0 if cut + k >= m else 0.0) for k in range(m)]
        xs.append(pts[cut] + 1.0)
        ys = [vals[(cut + k) % m] for k in range(m)] + [vals[cut]]
        for system in iter_line_systems(m + 1):
            if max_length is not None and any(
                xs[j] - xs[i] > max_length + 1e-12 for i, j in system
            ):
                continue
            incs = [ys[j] - ys[i] for i, j in system]
            best = max(best, score(incs))
    return best


def p_sum_score(p):
    def score(incs):
        return float(sum(abs(v) ** p for v in incs))

    return score


def lambda_sum_score(lam_terms):
    terms = np.asarray(lam_terms, dtype=float)

    def score(incs):
        mags = sorted((abs(v) for v in incs), reverse=True)
        return float(sum(m / terms[k] for k, m in enumerate(mags)))

    return score
