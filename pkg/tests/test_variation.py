import math

import numpy as np
import pytest

from lambdabv import (
    Interval,
    IntervalSystem,
    LambdaSequence,
    ModulusQuery,
    brute_lambda_variation,
    brute_p_variation,
    derivative_lp_norm,
    lambda_variation,
    lip_norm,
    lp_modulus,
    make_plpf,
    modulus_p_continuity,
    monotone_arcs,
    p_cont_ratio_norm,
    p_variation,
    system_lambda_sum,
    system_p_sum,
)

from helpers import (
    circle_oracle,
    lambda_sum_score,
    p_sum_score,
    random_lambda_prefix,
    random_plpf,
)

TRIANGLE = make_plpf([(0.0, 0.0), (0.5, 1.0)])
LAM_N = LambdaSequence.power(1.0)

# Interval systems can beat every arrangement of whole monotone arcs, so the
# suprema cannot be read off sorted arc increments.  This function's best
# p-variation system uses the two full rises 0 -> 1.9 and 1.9 -> 0 even
# though no single arc realizes them.
SPLIT_RISE = make_plpf([(0.0, 0.0), (0.25, 1.0), (0.5, 0.9), (0.75, 1.9)])


class TestPVariation:
    def test_triangle(self):
        assert p_variation(TRIANGLE, 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert p_variation(TRIANGLE, 1.0) == pytest.approx(2.0, rel=1e-15)

    def test_constant_is_zero(self):
        assert p_variation(make_plpf([(0.0, 4.0)]), 2.0) == 0.0

    def test_exceeds_sorted_arc_power_sum(self):
        arcs = monotone_arcs(SPLIT_RISE).increments
        arc_sum = float(np.sum(np.abs(arcs) ** 2))
        assert arc_sum == pytest.approx(5.62, rel=1e-12)
        assert p_variation(SPLIT_RISE, 2.0) ** 2 == pytest.approx(7.22, rel=1e-12)

    def test_small_p_rejected(self):
        with pytest.raises(ValueError):
            p_variation(TRIANGLE, 0.99)

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(100)
        for _ in range(30):
            f = random_plpf(rng, 5)
            p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
            oracle = circle_oracle(f, f.positions, p_sum_score(p))
            assert p_variation(f, p) ** p == pytest.approx(oracle, rel=1e-9, abs=1e-12)

    def test_matches_brute_dp_with_midpoints(self):
        rng = np.random.default_rng(101)
        for _ in range(40):
            f = random_plpf(rng, 8)
            p = float(rng.choice([1.5, 2.0, 3.0]))
            pos = list(f.positions)
            mids = [
                (a + b) / 2.0 for a, b in zip(pos, pos[1:] + [pos[0] + 1.0])
            ]
            cand = pos + [m % 1.0 for m in mids]
            assert p_variation(f, p) ** p == pytest.approx(
                brute_p_variation(f, p, cand), rel=1e-9, abs=1e-12
            )

    def test_brute_p1_equals_total_arc_variation(self):
        rng = np.random.default_rng(102)
        for _ in range(10):
            f = random_plpf(rng, 6)
            total = float(np.sum(np.abs(monotone_arcs(f).increments)))
            assert brute_p_variation(f, 1.0, f.positions) == pytest.approx(
                total, rel=1e-12, abs=1e-12
            )

    def test_scale_and_reflection_equivariance(self):
        rng = np.random.default_rng(103)
        for _ in range(10):
            f = random_plpf(rng)
            c = float(rng.uniform(0.5, 3.0))
            scaled = make_plpf([(x, c * y) for x, y in f.breakpoints()])
            neg = make_plpf([(x, -y) for x, y in f.breakpoints()])
            v = p_variation(f, 2.0)
            assert p_variation(scaled, 2.0) == pytest.approx(c * v, rel=1e-12)
            assert p_variation(neg, 2.0) == pytest.approx(v, rel=1e-12)

    def test_rotation_invariance_on_dyadic_grid(self):
        rng = np.random.default_rng(104)
        pos = sorted(rng.choice(64, size=6, replace=False).tolist())
        vals = rng.uniform(-1.0, 1.0, 6)
        f = make_plpf([(p / 64.0, v) for p, v in zip(pos, vals)])
        g = make_plpf([(((p + 32) % 64) / 64.0, v) for p, v in zip(pos, vals)])
        assert p_variation(g, 2.0) == pytest.approx(p_variation(f, 2.0), rel=1e-12)


class TestLambdaVariation:
    def test_triangle_lambda_n(self):
        assert lambda_variation(TRIANGLE, LAM_N) == pytest.approx(1.5, rel=1e-15)

    def test_exceeds_sorted_arc_weighted_sum(self):
        lam = LambdaSequence.explicit([1.0, 1.0, 1000.0, 1000.0])
        mags = sorted(np.abs(monotone_arcs(SPLIT_RISE).increments), reverse=True)
        sorted_arc = sum(m / l for m, l in zip(mags, [1.0, 1.0, 1000.0, 1000.0]))
        assert sorted_arc == pytest.approx(2.9011, rel=1e-12)
        assert lambda_variation(SPLIT_RISE, lam) == pytest.approx(3.8, rel=1e-12)

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(105)
        for _ in range(25):
            f = random_plpf(rng, 5)
            lam_terms = random_lambda_prefix(rng, 16)
            lam = LambdaSequence.explicit(lam_terms)
            oracle = circle_oracle(f, f.positions, lambda_sum_score(lam_terms))
            assert lambda_variation(f, lam) == pytest.approx(
                oracle, rel=1e-9, abs=1e-12
            )

    def test_matches_brute_subset_scan(self):
        rng = np.random.default_rng(106)
        for _ in range(40):
            f = random_plpf(rng, 5)
            lam = LambdaSequence.explicit(random_lambda_prefix(rng, 16))
            assert lambda_variation(f, LAM_N) == pytest.approx(
                brute_lambda_variation(f, LAM_N, f.positions), rel=1e-9
            )
            assert lambda_variation(f, lam) == pytest.approx(
                brute_lambda_variation(f, lam, f.positions), rel=1e-9
            )

    def test_baseline_separated_comb_allows_many_arcs(self):
        # 24 teeth -> 48 arcs, fine because all valleys sit at the baseline
        pts = []
        for k in range(24):
            pts.append((k / 24.0, 0.0))
            pts.append((k / 24.0 + 1.0 / 48.0, 1.0 + k / 100.0))
        f = make_plpf(pts)
        expected = sum((1.0 + k / 100.0) for k in range(24))
        got = lambda_variation(f, LambdaSequence.power(0.0))
        # doubled teeth against constant weights: both sides of each tooth count
        assert got == pytest.approx(2.0 * expected, rel=1e-12)

    def test_many_arc_general_function_rejected(self):
        rng = np.random.default_rng(107)
        pts = [(k / 40.0, float((-1) ** k) * (1.0 + rng.uniform(0, 0.5))) for k in range(40)]
        f = make_plpf(pts)
        assert not monotone_arcs(f).is_baseline_separated()
        with pytest.raises(ValueError, match="arcs"):
            lambda_variation(f, LAM_N)

    def test_short_explicit_sequence_rejected(self):
        lam = LambdaSequence.explicit([1.0])
        with pytest.raises(ValueError):
            lambda_variation(SPLIT_RISE, lam)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(108)
        for _ in range(10):
            f = random_plpf(rng, 6)
            c = float(rng.uniform(0.5, 3.0))
            scaled = make_plpf([(x, c * y) for x, y in f.breakpoints()])
            assert lambda_variation(scaled, LAM_N) == pytest.approx(
                c * lambda_variation(f, LAM_N), rel=1e-12
            )

    def test_dominates_single_system(self):
        rng = np.random.default_rng(109)
        for _ in range(20):
            f = random_plpf(rng, 5)
            a = float(rng.uniform(0.0, 0.5))
            w = float(rng.uniform(0.02, (1.0 - a) / 5.1))
            system = IntervalSystem(
                (Interval(a, w), Interval(a + 2 * w, w), Interval(a + 4 * w, w))
            )
            assert system_lambda_sum(f, system, LAM_N) <= lambda_variation(f, LAM_N) + 1e-9
            assert system_p_sum(f, system, 2.0) <= p_variation(f, 2.0) ** 2 + 1e-9

    def test_holder_comparison_with_p_variation(self):
        rng = np.random.default_rng(110)
        pp = 2.0
        for _ in range(20):
            f = random_plpf(rng)
            lam_terms = random_lambda_prefix(rng, 32)
            lam = LambdaSequence.explicit(lam_terms)
            k = len(monotone_arcs(f).arcs)
            cap = p_variation(f, pp) * float(
                np.sum(lam_terms[: max(k, 1)] ** -2.0) ** 0.5
            )
            assert lambda_variation(f, lam) <= cap + 1e-9


class TestModulus:
    def test_query_validation(self):
        with pytest.raises(ValueError):
            ModulusQuery(0.0)
        with pytest.raises(ValueError):
            ModulusQuery(1.5)
        with pytest.raises(ValueError):
            ModulusQuery(0.5, -1)
        with pytest.raises(ValueError):
            ModulusQuery(0.5, 0, "some")

    def test_triangle_quarter_delta(self):
        assert modulus_p_continuity(TRIANGLE, 2.0, ModulusQuery(0.25, 0)) == 0.0
        assert modulus_p_continuity(TRIANGLE, 2.0, ModulusQuery(0.25, 1)) == pytest.approx(
            1.0, rel=1e-12
        )

    def test_endpoint_equals_p_variation_bitwise(self):
        rng = np.random.default_rng(111)
        for _ in range(30):
            f = random_plpf(rng)
            p = float(rng.choice([1.5, 2.0, 3.0]))
            assert modulus_p_continuity(f, p, ModulusQuery(1.0)) == p_variation(f, p)

    def test_cut_policies_agree(self):
        rng = np.random.default_rng(112)
        for _ in range(15):
            f = random_plpf(rng)
            p = float(rng.choice([1.5, 2.0, 3.0]))
            for j in (1, 2, 4):
                qa = ModulusQuery(2.0**-j, 1, "argmax")
                qb = ModulusQuery(2.0**-j, 1, "all")
                va = modulus_p_continuity(f, p, qa)
                vb = modulus_p_continuity(f, p, qb)
                assert va == pytest.approx(vb, rel=1e-12, abs=1e-15)

    def test_monotone_in_delta(self):
        rng = np.random.default_rng(113)
        for _ in range(15):
            f = random_plpf(rng)
            vals = [
                modulus_p_continuity(f, 2.0, ModulusQuery(2.0**-j, 1))
                for j in range(6)
            ]
            assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_monotone_under_nested_refinement(self):
        # grids are nested only along m = 2^k - 1
        rng = np.random.default_rng(114)
        for _ in range(10):
            f = random_plpf(rng)
            vals = [
                modulus_p_continuity(f, 2.0, ModulusQuery(0.25, m))
                for m in (0, 1, 3, 7)
            ]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_matches_length_constrained_oracle(self):
        rng = np.random.default_rng(115)
        for _ in range(12):
            f = random_plpf(rng, 5)
            p = float(rng.choice([1.5, 2.0]))
            delta = float(rng.choice([0.25, 0.5]))
            oracle = circle_oracle(f, f.positions, p_sum_score(p), max_length=delta)
            got = modulus_p_continuity(f, p, ModulusQuery(delta, 0))
            assert got**p == pytest.approx(oracle, rel=1e-9, abs=1e-12)

    def test_holder_bound_from_derivative(self):
        rng = np.random.default_rng(116)
        for _ in range(15):
            f = random_plpf(rng)
            p = float(rng.choice([1.5, 2.0, 3.0]))
            q = 1.0 - 1.0 / p
            for j in (1, 3, 5):
                delta = 2.0**-j
                bound = derivative_lp_norm(f, p) * delta**q
                assert modulus_p_continuity(f, p, ModulusQuery(delta, 1)) <= bound + 1e-9

    def test_requires_p_above_one(self):
        with pytest.raises(ValueError):
            modulus_p_continuity(TRIANGLE, 1.0, ModulusQuery(0.5))


class TestLpModulus:
    def test_triangle_closed_form(self):
        # shift h in [0, 0.1] moves mass linearly; the sup sits at h = 0.1
        assert lp_modulus(TRIANGLE, 1.0, 0.1) == pytest.approx(0.18, rel=1e-12)

    def test_triangle_matches_riemann_oracle(self):
        xs = (np.arange(1_000_000) + 0.5) / 1_000_000
        riemann = float(np.mean(np.abs(TRIANGLE.eval(xs + 0.1) - TRIANGLE.eval(xs))))
        assert lp_modulus(TRIANGLE, 1.0, 0.1) == pytest.approx(riemann, abs=1e-6)

    def test_zero_delta(self):
        assert lp_modulus(TRIANGLE, 2.0, 0.0) == 0.0

    def test_monotone_in_delta(self):
        rng = np.random.default_rng(117)
        for _ in range(10):
            f = random_plpf(rng)
            p = float(rng.choice([1.0, 2.0, 3.0]))
            vals = [lp_modulus(f, p, 2.0**-j) for j in range(7)]
            assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_dominated_by_sup_of_shifts(self):
        rng = np.random.default_rng(118)
        f = random_plpf(rng)
        spread = float(np.max(f.values) - np.min(f.values))
        assert lp_modulus(f, 2.0, 1.0) <= spread + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            lp_modulus(TRIANGLE, 0.5, 0.1)
        with pytest.raises(ValueError):
            lp_modulus(TRIANGLE, 2.0, 1.5)
        with pytest.raises(ValueError):
            lp_modulus(TRIANGLE, 2.0, 0.1, 0)


class TestNormReports:
    def test_lip_value_is_max_ratio(self):
        rep = lip_norm(TRIANGLE, 2.0, 0.75, 6)
        assert rep.value == max(row[2] for row in rep.per_delta)
        assert len(rep.per_delta) == rep.delta_grid + 1
        deltas = [row[0] for row in rep.per_delta]
        assert deltas[0] == 1.0 and deltas[-1] == 2.0**-6

    def test_lip_alpha_one_bounded_by_derivative(self):
        rng = np.random.default_rng(119)
        for _ in range(10):
            f = random_plpf(rng)
            p = float(rng.choice([1.5, 2.0, 3.0]))
            rep = lip_norm(f, p, 1.0, 6)
            assert rep.value <= derivative_lp_norm(f, p) + 1e-9

    def test_ratio_norm_constant_is_zero(self):
        rep = p_cont_ratio_norm(make_plpf([(0.0, 3.0)]), 2.0, 0.75, 4)
        assert rep.value == 0.0

    def test_ratio_norm_rejects_small_alpha(self):
        with pytest.raises(ValueError):
            p_cont_ratio_norm(TRIANGLE, 2.0, 0.5, 4)

    def test_ratio_norm_uses_exact_exponent_weights(self):
        rep = p_cont_ratio_norm(TRIANGLE, 2.0, 0.75, 3, 1)
        for delta, omega, ratio in rep.per_delta:
            assert ratio == pytest.approx(omega / delta**0.25, rel=1e-12)
