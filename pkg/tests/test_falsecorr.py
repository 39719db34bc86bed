import math

import numpy as np
import pytest

from proxcor import (
    FalseCorrParams,
    InvalidParams,
    false_corr_curve,
    false_corr_prob,
    false_corr_prob_closed_form,
    false_corr_prob_extended,
    false_corr_prob_mc,
)


class TestParams:
    def test_offset_formula(self):
        p = FalseCorrParams(20, 0.5, 0.37)
        assert p.c == pytest.approx(abs(0.5 * 0.37) / math.sqrt(1 - 0.37**2), abs=1e-15)

    @pytest.mark.parametrize(
        "n,q,r",
        [
            (2, 0.5, 0.3),
            (10, 0.0, 0.3),
            (10, 1.2, 0.3),
            (10, -0.5, 0.3),
            (10, 0.5, 0.0),
            (10, 0.5, 1.0),
            (10, 0.5, -1.0000001),
        ],
    )
    def test_invalid_rejected(self, n, q, r):
        with pytest.raises(InvalidParams):
            FalseCorrParams(n, q, r)


class TestIndicatorCase:
    def test_worked_example_flips_half_the_time(self, worked_example):
        # c^2 ~ 0.0538 <= 1 - q^2 = 0.25: the sphere's two points straddle
        # the sign boundary, so the flip probability is exactly 1/2
        q, r = worked_example["q"], worked_example["r"]
        p = FalseCorrParams(3, q, r)
        assert p.c**2 == pytest.approx(0.0538, abs=2e-4)
        res = false_corr_prob(p)
        assert res.value == 0.5
        assert res.method == "indicator_n3"

    def test_boundary_inclusive_and_sides(self):
        # q^2 + r^2 = 1 puts c^2 at 1 - q^2; this double pair lands on the
        # boundary bitwise, pinning the <=-inclusive convention
        q_eq, r_eq = 0.8970000000000002, -0.44203054193121044
        p_eq = FalseCorrParams(3, q_eq, r_eq)
        assert p_eq.c**2 == 1 - q_eq * q_eq
        assert false_corr_prob(p_eq).value == 0.5
        assert false_corr_prob(FalseCorrParams(3, 0.59, -0.8)).value == 0.5
        assert false_corr_prob(FalseCorrParams(3, 0.61, -0.8)).value == 0.0

    def test_boundary_sides_agree_with_sampling_oracle(self):
        for q, want in ((0.59, 0.5), (0.61, 0.0)):
            est = false_corr_prob_mc(3, q, -0.8, 20_000, seed=3)
            assert abs(est.estimate - want) <= 3 * est.stderr + 1e-12


class TestQuadratureCase:
    def test_perfect_detector_never_flips(self):
        res = false_corr_prob(FalseCorrParams(10, 1.0, -0.5))
        assert res.value == 0.0

    def test_matches_sampling_oracle(self):
        res = false_corr_prob(FalseCorrParams(20, 0.5, 0.37))
        est = false_corr_prob_mc(20, 0.5, 0.37, 200_000, seed=1)
        assert abs(res.value - est.estimate) <= 3 * est.stderr

    def test_agrees_with_closed_form_on_random_grid(self):
        rng = np.random.default_rng(123)
        checked = 0
        while checked < 200:
            n = int(rng.integers(4, 250))
            q = float(rng.uniform(0.02, 0.999))
            r = float(rng.uniform(-0.95, 0.95))
            if abs(r) < 1e-3:
                continue
            params = FalseCorrParams(n, q, r)
            a = false_corr_prob(params).value
            b = false_corr_prob_closed_form(params).value
            assert abs(a - b) < 1e-8, (n, q, r)
            checked += 1

    def test_closed_form_requires_larger_n(self):
        with pytest.raises(InvalidParams):
            false_corr_prob_closed_form(FalseCorrParams(3, 0.5, 0.3))

    def test_closed_form_small_n_spot(self):
        params = FalseCorrParams(4, 0.6, -0.4)
        a = false_corr_prob(params).value
        b = false_corr_prob_closed_form(params).value
        assert abs(a - b) < 1e-8

    def test_tiny_offset_corners(self):
        # near-zero q*r makes the CDF transition microscopically narrow
        # (alpha ~ 1e8); the quadrature must still see all of it
        for n, q, r in [(4, 0.01, 0.01), (10, 0.02, 0.002), (500, 0.05, 0.005)]:
            params = FalseCorrParams(n, q, r)
            a = false_corr_prob(params)
            b = false_corr_prob_closed_form(params)
            assert abs(a.value - b.value) < 1e-10, (n, q, r)
            assert abs(a.value - b.value) <= a.abs_error_bound + b.abs_error_bound

    def test_range_and_sign_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = int(rng.integers(3, 120))
            q = float(rng.uniform(0.05, 1.0))
            r = float(rng.uniform(0.05, 0.9))
            pos = false_corr_prob(FalseCorrParams(n, q, r)).value
            neg = false_corr_prob(FalseCorrParams(n, q, -r)).value
            assert pos == neg
            assert 0.0 <= pos <= 0.5

    def test_error_bound_is_honest(self):
        params = FalseCorrParams(35, 0.4, 0.25)
        res = false_corr_prob(params)
        ref = false_corr_prob_closed_form(params)
        assert abs(res.value - ref.value) <= res.abs_error_bound + ref.abs_error_bound


class TestMonotonicity:
    def test_decreasing_in_n(self):
        for q, r in [(0.2, -0.6), (0.5, 0.37), (0.8, 0.37)]:
            vals = [
                false_corr_prob(FalseCorrParams(n, q, r)).value for n in range(4, 101)
            ]
            assert all(b < a for a, b in zip(vals, vals[1:])), (q, r)

    def test_degenerate_combo_is_identically_zero(self):
        # q^2 >= 1 - r^2 leaves no sphere point past the sign boundary
        for n in (4, 20, 100):
            assert false_corr_prob(FalseCorrParams(n, 0.8, -0.6)).value == 0.0

    def test_decreasing_in_q(self):
        qs = [round(0.05 * k, 2) for k in range(1, 20)]  # 0.05 .. 0.95
        for n in (5, 20, 100):
            vals = [false_corr_prob(FalseCorrParams(n, q, -0.25)).value for q in qs]
            assert all(b < a for a, b in zip(vals, vals[1:])), n
            # the q=1 endpoint is an exact zero below every positive value
            assert false_corr_prob(FalseCorrParams(n, 1.0, -0.25)).value == 0.0
            assert vals[-1] > 0.0


class TestExtended:
    def test_positive_branch_matches_h(self):
        base = false_corr_prob(FalseCorrParams(12, 0.45, -0.5)).value
        assert false_corr_prob_extended(12, 0.45, -0.5) == base

    def test_zero_is_a_coin_flip(self):
        assert false_corr_prob_extended(9, 0.0, 0.3) == 0.5

    def test_negative_branch_reflects(self):
        h = false_corr_prob(FalseCorrParams(10, 0.4, -0.5)).value
        assert false_corr_prob_extended(10, -0.4, -0.5) == pytest.approx(1 - h, abs=1e-15)

    def test_negative_branch_matches_sampling(self, anchor20):
        # empirical check of the reflection identity at q_hat = -0.4
        from proxcor import TsphereSpec, construct_pair, sample_tsphere

        n, q_hat, r = 10, -0.4, -0.5
        u, v = construct_pair(n, r, seed=8)
        spec = TsphereSpec(anchor=u, q=q_hat)
        batch = sample_tsphere(spec, 100_000, seed=9)
        rho = batch.vectors @ v.values
        frac = float(np.mean(rho >= 0.0))
        target = false_corr_prob_extended(n, q_hat, r)
        se = math.sqrt(target * (1 - target) / 100_000)
        assert abs(frac - target) <= 3 * se

    def test_continuity_near_zero(self):
        lo = false_corr_prob_extended(15, -1e-9, 0.4)
        hi = false_corr_prob_extended(15, 1e-9, 0.4)
        assert abs(lo - 0.5) < 1e-6
        assert abs(hi - 0.5) < 1e-6


class TestCurve:
    def test_direct_curve_strictly_decreasing(self):
        pts = false_corr_curve(0.5, 0.37, 4, 200)
        ns = [n for n, _ in pts]
        vals = [p for _, p in pts]
        assert ns == list(range(4, 201))
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_single_point_curve(self):
        pts = false_corr_curve(0.5, 0.37, 5, 5)
        assert len(pts) == 1 and pts[0][0] == 5

    def test_bad_range_rejected(self):
        with pytest.raises(InvalidParams):
            false_corr_curve(0.5, 0.37, 10, 4)
