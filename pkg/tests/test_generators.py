import math

import numpy as np
import pytest

from jumpmg.generators import (
    CoxSpec,
    OneShotSpec,
    RandomWalkSpec,
    SpecError,
    cox_step_integrals,
    gen_cox,
    gen_det_alternating,
    gen_oneshot,
    gen_random_walk,
)
from jumpmg.presets import PRule, rare_spike_schedule
from jumpmg import rng


class TestRandomWalk:
    def test_zero_rule_gives_zero_path(self):
        spec = RandomWalkSpec("zero", "pow2", 50)
        for seed in (0, 1, 99):
            assert np.all(gen_random_walk(spec, seed).values == 0.0)

    def test_determinism(self):
        spec = RandomWalkSpec("alt_harmonic", "pow2", 500)
        a = gen_random_walk(spec, 123)
        b = gen_random_walk(spec, 123)
        assert np.array_equal(a.values, b.values)
        c = gen_random_walk(spec, 124)
        assert not np.array_equal(a.values, c.values)

    def test_two_point_law_at_first_step(self):
        # P(dX_1 = x_1) = 1 - p_1 and the fired branch carries p_1
        spec = RandomWalkSpec("const_neg_half", "pow2", 1)
        m = spec.model
        n = 100_000
        fired = 0
        for seed in range(n):
            path = gen_random_walk(spec, seed)
            assert path.jumps[0] in (m.x[0], m.b[0])
            fired += path.jumps[0] == m.b[0]
        p = m.p[0]
        se = math.sqrt(p * (1 - p) / n)
        assert abs(fired / n - p) <= 3 * se

    def test_step_mean_zero_to_rounding(self):
        # algebraic cancellation: (1-p)x + p x(1-1/p) = 0; in floats the
        # residual is a few ulps of |x| (dyadic p scales exactly)
        spec = RandomWalkSpec("alt_inv_sqrt", "pow2", 200)
        m = spec.model
        mean = (1.0 - m.p) * m.x + m.p * m.b
        assert np.all(np.abs(mean) <= 1e-14 * np.maximum(np.abs(m.x), 1e-300))

    def test_martingale_mean(self):
        spec = RandomWalkSpec("neg_geom", PRule("geom", {"base": 4.0}), 50)
        finals = np.array([gen_random_walk(spec, s).values[-1] for s in range(20_000)])
        z = abs(np.mean(finals)) / (np.std(finals, ddof=1) / math.sqrt(finals.size))
        assert z <= 3.0

    def test_borel_cantelli_last_firing(self):
        # expected count of trials with a firing past index 30 is ~1e-5
        spec = RandomWalkSpec("alt_harmonic", "pow2", 200)
        m = spec.model
        late = 0
        for s in range(10_000):
            u = rng.trial_generator(11, s).random(200)
            fired = np.flatnonzero(u < m.p)
            if fired.size and fired[-1] + 1 > 30:
                late += 1
        assert late == 0

    def test_guard_rejects_exact_minus_one_fired_jump(self):
        # sizes 1 with p_1 = 1/2 put the fired jump exactly at -1
        with pytest.raises(SpecError):
            RandomWalkSpec("ones", "pow2", 10).model

    def test_fired_jumps_never_exactly_minus_one(self):
        for x_rule, p_rule in [("alt_inv_sqrt", "light"), ("exp_alt_inv_sqrt", "pow2")]:
            m = RandomWalkSpec(x_rule, p_rule, 2_000).model
            assert np.all(m.x != -1.0) and np.all(m.b != -1.0)


class TestCox:
    def test_zero_rate_never_fires(self):
        spec = CoxSpec("zero", "identity", 10.0, 0.1)
        for seed in range(20):
            path, rho = gen_cox(spec, seed)
            assert rho is None
            assert np.all(path.values == 0.0)

    def test_survival_law(self):
        # P(no jump by t) = exp(-t/(1+t)) for the 1/(1+s)^2 intensity
        spec = CoxSpec("inv_sq", "identity", 9.0, 0.5)
        n = 100_000
        checks = {3.0: 0, 9.0: 0}
        for seed in range(n):
            theta = rng.trial_generator(seed, 0).standard_exponential()
            for t in checks:
                checks[t] += theta >= t / (1.0 + t)
        for t, count in checks.items():
            p = math.exp(-t / (1.0 + t))
            se = math.sqrt(p * (1 - p) / n)
            assert abs(count / n - p) <= 3 * se

    def test_drift_value_on_survival(self):
        # closed form: -(log(1+T) - T/(1+T)) ~ -8.2105 at T = 1e4; the
        # midpoint bias is h^2/24 per unit curvature, so h = 0.04 keeps the
        # grid value within the 1e-4 budget
        spec = CoxSpec("inv_sq", "identity", 10_000.0, 0.04)
        seed = 0
        while True:
            path, rho = gen_cox(spec, seed)
            if rho is None:
                break
            seed += 1
        target = -(math.log(10_001.0) - 10_000.0 / 10_001.0)
        assert path.values[-1] == pytest.approx(target, abs=1e-4)

    def test_jump_size_exact_and_snapped(self):
        spec = CoxSpec("inv_sq", "identity", 50.0, 0.25)
        seed = 0
        while True:
            path, rho = gen_cox(spec, seed)
            if rho is not None:
                break
            seed += 1
        idx = int(np.flatnonzero(path.jumps)[0])
        assert path.jumps[idx] == rho  # gamma(s) = s, stored exactly
        t = path.grid.times_f64()
        assert t[idx - 1] < rho <= t[idx]

    def test_step_integrals_cut_at_jump(self):
        spec = CoxSpec("inv_sq", "identity", 10.0, 0.5)
        d, q = cox_step_integrals(spec, 3.1)
        t = spec.grid.times_f64()
        assert np.all(d[t > 3.5] == 0.0)
        assert d[np.searchsorted(t, 3.1)] > 0.0
        full_d, _ = cox_step_integrals(spec, None)
        np.testing.assert_allclose(  # coarse grid: only the cut logic is at stake
            np.add.accumulate(full_d)[-1], spec.drift_exact(10.0), rtol=1e-2
        )
        fine = CoxSpec("inv_sq", "identity", 10.0, 0.005)
        fd, _ = cox_step_integrals(fine, None)
        np.testing.assert_allclose(
            np.add.accumulate(fd)[-1], fine.drift_exact(10.0), rtol=1e-6
        )
        assert q.shape == d.shape

    def test_with_bm_adds_diffusion(self):
        spec = CoxSpec("inv_sq", "identity", 5.0, 0.05, with_bm=True)
        path, _ = gen_cox(spec, 3)
        assert path.diffusion is not None
        # increments have variance step
        assert np.std(path.diffusion[1:]) == pytest.approx(math.sqrt(0.05), rel=0.1)


class TestOneShot:
    def test_two_point_default_is_plus_minus_one(self):
        spec = OneShotSpec()
        assert spec.down_jump == 1.0
        seen = {gen_oneshot(spec, s).jumps[0] for s in range(50)}
        assert seen == {1.0, -1.0}

    def test_two_point_mean_zero(self):
        spec = OneShotSpec()
        vals = np.array([gen_oneshot(spec, s).values[-1] for s in range(100_000)])
        z = abs(vals.mean()) / (vals.std(ddof=1) / math.sqrt(vals.size))
        assert z <= 3.0

    def test_pareto_exp_mean_zero(self):
        spec = OneShotSpec("pareto_exp", beta=1.0)
        vals = np.array([gen_oneshot(spec, s).values[-1] for s in range(100_000)])
        z = abs(vals.mean()) / (vals.std(ddof=1) / math.sqrt(vals.size))
        assert z <= 3.0

    def test_truncated_exponential_moment_grows_toward_heavy_tail(self):
        # E[min(e^theta, M)] increases as the tail index falls toward 1,
        # where E[e^theta] becomes infinite; closed form for the truncated
        # moment checks each estimate
        m_cap = 50.0
        est = {}
        for beta in (2.0, 1.5, 1.2, 1.05):
            spec = OneShotSpec("pareto_exp", beta=beta)
            vals = np.array(
                [min(math.exp(gen_oneshot(spec, s).jumps[0]), m_cap) for s in range(40_000)]
            )
            est[beta] = vals.mean()
            c = math.exp(-1.0 / beta)
            cut = math.log(m_cap / c)
            truncated = (
                c * beta / (beta - 1.0) * (1.0 - math.exp((1.0 - beta) * cut))
                if beta != 1.0
                else c * cut
            ) + m_cap * math.exp(-beta * cut)
            assert est[beta] == pytest.approx(truncated, rel=0.05)
        ordered = [est[b] for b in (2.0, 1.5, 1.2, 1.05)]
        assert ordered == sorted(ordered)

    def test_exp_moment_infinite_at_or_below_one(self):
        assert OneShotSpec("pareto_exp", beta=1.0).exp_moment() == math.inf
        assert OneShotSpec("pareto_exp", beta=2.0).exp_moment() == pytest.approx(
            2.0 * math.exp(-0.5)
        )


class TestDeterministicPaths:
    def test_alternating_partial_sums(self):
        p = gen_det_alternating(2)
        assert p.values[-1] == -0.5  # -1 + 1/2

    def test_alternating_limit_and_variation(self):
        p = gen_det_alternating(10_000)
        assert abs(p.values[-1] + math.log(2.0)) < 1e-4
        total_variation = float(np.sum(np.abs(p.jumps)))
        assert total_variation == pytest.approx(9.787606036044348, rel=1e-12)
        assert total_variation > 9.0  # unbounded in the horizon


class TestSchedule:
    def test_first_exponents(self):
        sched = rare_spike_schedule(5)
        assert list(sched.exponents) == [1, 6, 13, 20, 29]

    def test_inequalities_hold(self):
        sched = rare_spike_schedule(100)
        assert all(sched.holds_at(n) for n in range(1, 101))

    def test_margin_only_shrinks(self):
        base = rare_spike_schedule(30)
        tight = rare_spike_schedule(30, margin=5, margin_start=2)
        assert tight.exponents[0] == base.exponents[0]
        assert np.all(tight.exponents[1:] == base.exponents[1:] + 5)
        assert all(tight.holds_at(n) for n in range(1, 31))

    def test_partial_sums_dominated_by_dyadic_tail(self):
        sched = rare_spike_schedule(100)
        p = sched.p
        n = np.arange(1, 101, dtype=np.float64)
        assert np.all(p <= np.exp2(-n) + 1e-300)


def test_gen_streams_are_keyed_not_sequential():
    a = rng.trial_generator(5, 0).random(4)
    b = rng.trial_generator(5, 1).random(4)
    assert not np.allclose(a, b)
    again = rng.trial_generator(5, 0).random(4)
    assert np.array_equal(a, again)
