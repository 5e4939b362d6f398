import math

import numpy as np
import pytest

from minfx import multiple_testing as mt
from minfx.types import DegenerateScaleError, GroundTruth, InputError, Rescaling

from oracles import naive_bh, naive_posthoc


class TestRescaledPvalues:
    def test_center_maps_to_half(self):
        p = mt.rescaled_pvalues([2.0], Rescaling(2.0, 1.0))
        assert p[0] == pytest.approx(0.5, abs=1e-15)

    def test_antitone_in_observation(self):
        y = np.array([-1.0, 0.0, 0.5, 3.0])
        p = mt.rescaled_pvalues(y, Rescaling(0.3, 2.0))
        assert np.all(np.diff(p) < 0)

    def test_rejects_bad_scale(self):
        with pytest.raises(InputError):
            Rescaling(0.0, 0.0)
        with pytest.raises(InputError):
            mt.rescaled_pvalues([1.0], (0.0, -1.0))

    def test_oracle_rescaling_gives_uniform_nulls(self):
        rng = np.random.default_rng(0)
        theta, sigma = 1.5, 2.0
        y = theta + sigma * rng.standard_normal(100_000)
        p = mt.rescaled_pvalues(y, Rescaling(theta, sigma))
        # Kolmogorov-Smirnov distance against the uniform cdf
        srt = np.sort(p)
        grid = np.arange(1, srt.size + 1) / srt.size
        dist = float(np.max(np.abs(srt - grid)))
        assert dist <= 1.63 / math.sqrt(srt.size)  # 1% critical value


class TestBhProcedure:
    def test_worked_example(self):
        out = mt.bh_procedure([0.01, 0.04, 0.03, 0.5], 0.1)
        ell, t, rejected = naive_bh([0.01, 0.04, 0.03, 0.5], 0.1)
        assert (ell, t) == (3, pytest.approx(0.075))
        assert out.ell_hat == ell
        assert out.t_hat == pytest.approx(t)
        assert list(out.rejected) == rejected == [0, 1, 2]

    def test_nothing_passes(self):
        out = mt.bh_procedure([0.9, 0.8, 0.7], 0.1)
        assert out.ell_hat == 0 and out.size == 0

    def test_everything_at_zero(self):
        out = mt.bh_procedure(np.zeros(5), 0.1)
        assert out.ell_hat == 5 and list(out.rejected) == [0, 1, 2, 3, 4]

    def test_matches_naive_oracle_randomized(self):
        rng = np.random.default_rng(1)
        for _ in range(400):
            n = int(rng.integers(1, 50))
            p = np.round(rng.uniform(0, 1, n), 2)  # rounding forces ties
            alpha = float(rng.uniform(0.01, 0.6))
            ell, t, rejected = naive_bh(p, alpha)
            out = mt.bh_procedure(p, alpha)
            assert out.ell_hat == ell
            assert list(out.rejected) == rejected

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(2)
        p = rng.uniform(0, 1, 40)
        perm = rng.permutation(40)
        base = set(mt.bh_procedure(p, 0.3).rejected)
        moved = mt.bh_procedure(p[perm], 0.3).rejected
        assert {int(perm[i]) for i in moved} == base

    def test_rejects_bad_levels(self):
        for bad in (0.0, 1.0, -0.2):
            with pytest.raises(InputError):
                mt.bh_procedure([0.5], bad)


class TestMetrics:
    def test_fdp_example(self):
        # six hypotheses, nulls at positions {1, 2, 4} (0-based)
        truth = GroundTruth(n=6, outliers=[0, 3, 5])
        assert mt.fdp([0, 1, 2], truth) == pytest.approx(2.0 / 3.0)

    def test_empty_selection(self):
        truth = GroundTruth(n=6, outliers=[0, 3, 5])
        assert mt.fdp([], truth) == 0.0
        assert mt.tdp([], truth) == 0.0

    def test_perfect_selection(self):
        truth = GroundTruth(n=6, outliers=[0, 3, 5])
        assert mt.fdp([0, 3, 5], truth) == 0.0
        assert mt.tdp([0, 3, 5], truth) == 1.0

    def test_accepts_selection_outcome(self):
        truth = GroundTruth(n=4, outliers=[3])
        out = mt.bh_procedure([0.9, 0.9, 0.9, 1e-6], 0.1)
        assert mt.tdp(out, truth) == 1.0
        assert mt.fdp(out, truth) == 0.0

    def test_no_outliers_tdp_zero(self):
        truth = GroundTruth(n=3, outliers=[])
        assert mt.tdp([0, 1], truth) == 0.0


class TestPosthocBound:
    def test_empty_subset(self):
        assert mt.posthoc_bound([0.5, 0.5], [], 0.2) == 0.0

    def test_all_pvalues_at_one(self):
        p = np.ones(10)
        assert mt.posthoc_bound(p, np.arange(10), 0.2) == 1.0

    def test_matches_naive_oracle_randomized(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            n = int(rng.integers(2, 40))
            p = np.round(rng.uniform(0, 1, n), 2)
            size = int(rng.integers(0, n + 1))
            subset = rng.choice(n, size=size, replace=False)
            alpha = float(rng.uniform(0.05, 0.5))
            assert mt.posthoc_bound(p, subset, alpha) == pytest.approx(
                naive_posthoc(p, subset, alpha), abs=1e-12)

    def test_small_pvalues_certify_discoveries(self):
        p = np.concatenate([np.full(5, 1e-12), np.full(5, 0.9)])
        bound = mt.posthoc_bound(p, np.arange(5), 0.2)
        assert bound <= 0.2


class TestLevelTransform:
    def test_identity_at_oracle(self):
        r = Rescaling(1.0, 2.0)
        for t in (0.01, 0.3, 0.9):
            assert mt.level_transform(t, r, 1.0, 2.0) == pytest.approx(t, abs=1e-12)

    def test_roundtrip(self):
        r = Rescaling(0.7, 1.3)
        for t in (0.001, 0.05, 0.42, 0.97):
            fwd = mt.level_transform(t, r, -0.5, 2.2, direction="forward")
            back = mt.level_transform(fwd, r, -0.5, 2.2, direction="inverse")
            assert back == pytest.approx(t, abs=1e-10)

    def test_event_identity_monte_carlo(self):
        # {p(u, s) <= t} must coincide with {p* <= transform(t)}
        rng = np.random.default_rng(4)
        theta, sigma = 0.4, 1.7
        r = Rescaling(0.9, 1.2)
        y = theta + sigma * rng.standard_normal(20_000)
        t = 0.07
        p_rescaled = mt.rescaled_pvalues(y, r)
        p_oracle = mt.rescaled_pvalues(y, Rescaling(theta, sigma))
        lhs = p_rescaled <= t
        rhs = p_oracle <= mt.level_transform(t, r, theta, sigma)
        assert np.array_equal(lhs, rhs)

    def test_rejects_boundary_levels(self):
        with pytest.raises(InputError):
            mt.level_transform(0.0, Rescaling(0.0, 1.0), 0.0, 1.0)
        with pytest.raises(InputError):
            mt.level_transform(0.5, Rescaling(0.0, 1.0), 0.0, 1.0, direction="backward")


class TestSelectOutliers:
    def test_composition_identity(self):
        rng = np.random.default_rng(5)
        y = rng.standard_normal(500)
        y[:30] += 5.0
        outcome, rescaling = mt.select_outliers(y, 0.2, 50)
        direct = mt.bh_procedure(mt.rescaled_pvalues(y, rescaling), 0.2)
        assert outcome.ell_hat == direct.ell_hat
        assert np.array_equal(outcome.rejected, direct.rejected)

    def test_rejected_are_largest_observations(self):
        rng = np.random.default_rng(6)
        y = rng.standard_normal(400)
        y[:25] += 6.0
        outcome, _ = mt.select_outliers(y, 0.1, 40)
        if outcome.size:
            cutoff = y[outcome.rejected].min()
            kept = np.setdiff1d(np.arange(y.size), outcome.rejected)
            assert np.all(y[kept] < cutoff)

    def test_degenerate_scale_raises(self):
        with pytest.raises(DegenerateScaleError):
            mt.select_outliers(np.zeros(100), 0.2, 10)

    @pytest.mark.slow
    def test_null_fdr_stays_near_level(self):
        n, reps, alpha, k0 = 10_000, 500, 0.2, 1000
        truth = GroundTruth(n=n, outliers=[])
        fdrs = np.empty(reps)
        for r in range(reps):
            y = np.random.default_rng((30, r)).standard_normal(n)
            outcome, _ = mt.select_outliers(y, alpha, k0)
            fdrs[r] = mt.fdp(outcome, truth)
        assert fdrs.mean() <= alpha + 0.03


def test_oracle_rescaling_reproduces_oracle_selection():
    # rescaling at the true location/scale yields the oracle p-values
    # themselves, hence the identical rejection set
    rng = np.random.default_rng(40)
    theta, sigma = -0.8, 1.9
    y = theta + sigma * rng.standard_normal(3000)
    y[:150] += 7.0
    p_direct = mt.rescaled_pvalues((y - theta) / sigma, Rescaling(0.0, 1.0))
    p_oracle = mt.rescaled_pvalues(y, Rescaling(theta, sigma))
    assert np.allclose(p_direct, p_oracle, rtol=0, atol=1e-15)
    a = mt.bh_procedure(p_direct, 0.2)
    b = mt.bh_procedure(p_oracle, 0.2)
    assert np.array_equal(a.rejected, b.rejected)


class TestSimesEvent:
    def test_detects_small_pvalue(self):
        assert mt.simes_event([1e-9, 0.9], 0.2, 10)

    def test_all_large(self):
        assert not mt.simes_event([0.5, 0.9], 0.2, 10)


class TestClip:
    def test_clip_bounds(self):
        out = mt.clip_pvalues_for_export(np.array([0.0, 1e-320, 0.5, 1.0]))
        assert out[0] == 1e-300 and out[1] == 1e-300
        assert out[2] == 0.5 and out[3] == 1.0


@pytest.mark.slow
def test_posthoc_bound_covers_every_subset_when_event_fails():
    # exhaustive check at n = 12: on replications where the step event
    # fails, the bound dominates the false fraction of all 4096 subsets
    n, n1, alpha, reps = 12, 4, 0.2, 120
    truth = GroundTruth(n=n, outliers=np.arange(n1))
    null_mask = ~truth.outlier_mask()
    popcount = np.array([bin(s).count("1") for s in range(1 << n)])
    checked = 0
    for r in range(reps):
        rng = np.random.default_rng((31, r))
        y = rng.standard_normal(n)
        y[:n1] += 2.0
        p = mt.rescaled_pvalues(y, Rescaling(0.0, 1.0))
        if mt.simes_event(p[null_mask], alpha, n):
            continue
        checked += 1
        bounds = np.array([
            mt.posthoc_bound(p, np.nonzero([(s >> i) & 1 for i in range(n)])[0], alpha)
            for s in range(1 << n)
        ])
        null_bits = sum(1 << int(i) for i in np.nonzero(null_mask)[0])
        false_count = popcount[np.arange(1 << n) & null_bits]
        sizes = np.maximum(popcount[: 1 << n], 1)
        assert np.all(false_count / sizes <= bounds + 1e-12)
    assert checked >= reps // 2
