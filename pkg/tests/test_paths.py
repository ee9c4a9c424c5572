import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jumpmg.grids import GridError, TimeGrid
from jumpmg.paths import (
    GridMismatchError,
    PathError,
    SamplePath,
    add_paths,
    oscillation,
    quadratic_variation,
    running_extrema,
    write_path_csv,
)
from jumpmg.generators import gen_brownian, gen_cox, gen_random_walk, CoxSpec, RandomWalkSpec


def jump_path(jumps):
    jumps = np.asarray(jumps, dtype=np.float64)
    return SamplePath.from_increments(TimeGrid.events(jumps.size), jumps)


class TestTimeGrid:
    def test_events_grid_is_integers(self):
        g = TimeGrid.events(5)
        assert g.times.dtype == np.int64
        assert list(g.times) == [1, 2, 3, 4, 5]
        assert g.horizon == 5.0

    def test_uniform_requires_divisible_step(self):
        g = TimeGrid.uniform(1.0, 0.25)
        assert g.n_points == 5
        assert g.times[0] == 0.0 and g.times[-1] == 1.0
        with pytest.raises(GridError):
            TimeGrid.uniform(1.0, 0.3)

    def test_window_start(self):
        g = TimeGrid.events(100)
        k = g.window_start(0.1)
        assert g.times[k] == 91  # window is (90, 100]
        with pytest.raises(GridError):
            g.window_start(1.5)


class TestSamplePath:
    def test_reconstruction_is_exact(self):
        rng = np.random.default_rng(3)
        jumps = rng.normal(size=500)
        drift = rng.normal(size=500) * 1e-3
        diff = rng.normal(size=500) * 0.1
        p = SamplePath.from_increments(TimeGrid.events(500), jumps, drift, diff)
        p.validate()  # raises unless exact to the last bit

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60))
    def test_reconstruction_property(self, vals):
        p = jump_path(vals)
        p.validate()
        assert np.all(np.isfinite(p.values))

    def test_immutability(self):
        p = jump_path([1.0, -2.0])
        with pytest.raises(ValueError):
            p.values[0] = 3.0

    def test_rejects_nonfinite(self):
        with pytest.raises(PathError):
            jump_path([1.0, math.inf])


class TestQuadraticVariation:
    def test_single_jump(self):
        # one jump of size 2 -> total variation 4
        p = jump_path([0.0, 2.0, 0.0])
        qv = quadratic_variation(p)
        assert qv.total[-1] == 4.0
        assert qv.continuous[-1] == 0.0

    def test_alt_inv_sqrt_no_firing(self):
        # explicit (-1)^n/sqrt(n) sizes, nothing fired: sum 1/n over n<=4
        jumps = np.array([(-1.0) ** n / math.sqrt(n) for n in range(1, 5)])
        qv = quadratic_variation(jump_path(jumps))
        assert qv.total[-1] == pytest.approx(25.0 / 12.0, rel=1e-15)

    def test_total_splits_exactly(self):
        rng = np.random.default_rng(1)
        p = SamplePath.from_increments(
            TimeGrid.events(200), rng.normal(size=200), None, rng.normal(size=200)
        )
        qv = quadratic_variation(p)
        assert np.array_equal(qv.total, qv.continuous + qv.jump_part)
        assert np.all(np.diff(qv.total) >= 0)
        assert np.all(np.diff(qv.continuous) >= 0)

    def test_brownian_grid_qv_near_horizon(self):
        # realized variance of a Brownian path on [0,1] at step 1e-4:
        # var of the estimate is 2h, so |QV-1| < 0.05 is a 3.5 sigma event
        hits = 0
        n = 200
        for seed in range(n):
            b = gen_brownian(1.0, 1e-4, seed)
            if abs(quadratic_variation(b).total[-1] - 1.0) < 0.05:
                hits += 1
        assert hits >= 0.95 * n


class TestExtremaOscillation:
    def test_constant_zero(self):
        p = jump_path([0.0, 0.0, 0.0])
        sup, inf = running_extrema(p)
        assert np.all(sup == 0.0) and np.all(inf == 0.0)
        assert oscillation(p, 3.0) == 0.0

    def test_documented_scan(self):
        p = jump_path([0.0, 1.0, -3.0])  # values 0, 1, -2
        sup, inf = running_extrema(p)
        assert list(sup) == [0.0, 1.0, 1.0]
        assert list(inf) == [0.0, 0.0, -2.0]

    def test_window_max_minus_min(self):
        p = jump_path([5.0, -4.0, 2.0, -1.0])  # values 5 1 3 2
        assert oscillation(p, 3.0) == 2.0

    def test_window_bounds(self):
        p = jump_path([1.0, 1.0])
        with pytest.raises(PathError):
            oscillation(p, 0.0)
        with pytest.raises(PathError):
            oscillation(p, 3.0)

    def test_bracketing_property(self):
        rng = np.random.default_rng(7)
        p = jump_path(rng.normal(size=300))
        sup, inf = running_extrema(p)
        assert np.all(inf <= p.values) and np.all(p.values <= sup)

    def test_drift_only_path_nonpositive_sup(self):
        # surviving hazard path: pure negative drift
        spec = CoxSpec("inv_sq", "identity", 50.0, 0.01)
        seed = 0
        while True:
            path, rho = gen_cox(spec, seed)
            if rho is None:
                break
            seed += 1
        sup, _ = running_extrema(path)
        assert np.all(sup <= 0.0)

    def test_alternating_tail_oscillation(self):
        # (-1)^n/n sizes: window oscillation at 1e4 is ~2e-4
        spec = RandomWalkSpec("alt_harmonic", "pow2", 10_000)
        small = sum(
            oscillation(gen_random_walk(spec, s), 1_000.0) < 2e-3 for s in range(200)
        )
        assert small >= 0.99 * 200


class TestAddPaths:
    def test_identity(self):
        a = jump_path([1.0, -2.0, 0.5])
        z = jump_path([0.0, 0.0, 0.0])
        s = add_paths(a, z)
        np.testing.assert_array_equal(s.values, a.values)
        np.testing.assert_array_equal(s.jumps, a.jumps)

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatchError):
            add_paths(jump_path([1.0]), jump_path([1.0, 2.0]))

    def test_jumps_and_drift_combine(self):
        g = TimeGrid.events(3)
        a = SamplePath.from_increments(g, [1.0, 0.0, 0.0])
        b = SamplePath.from_increments(g, [0.0, 0.0, 0.0], [0.1, 0.1, 0.1])
        s = add_paths(a, b)
        np.testing.assert_array_equal(s.jumps, a.jumps)
        np.testing.assert_array_equal(s.drift, b.drift)
        s.validate()

    def test_disjoint_jump_qv_additivity(self):
        rng = np.random.default_rng(11)
        n = 400
        a_j = np.where(np.arange(n) % 2 == 0, rng.normal(size=n), 0.0)
        b_j = np.where(np.arange(n) % 2 == 1, rng.normal(size=n), 0.0)
        a, b = jump_path(a_j), jump_path(b_j)
        total = quadratic_variation(add_paths(a, b)).total[-1]
        oracle = math.fsum((a_j + b_j) ** 2)
        assert total == pytest.approx(oracle, rel=1e-12)
        assert total == pytest.approx(
            quadratic_variation(a).total[-1] + quadratic_variation(b).total[-1], rel=1e-12
        )

    def test_brownian_plus_jump_split(self):
        spec = CoxSpec("inv_sq", "identity", 10.0, 0.01)
        cox, _ = gen_cox(spec, 5)
        bm = gen_brownian(10.0, 0.01, 6)
        s = add_paths(bm, cox)
        qs = quadratic_variation(s)
        assert qs.jump_part[-1] == quadratic_variation(cox).jump_part[-1]
        assert qs.continuous[-1] == quadratic_variation(bm).continuous[-1]


def test_path_csv_roundtrippable_text(tmp_path):
    p = jump_path([1.5, -0.25])
    f = tmp_path / "p.csv"
    write_path_csv(p, str(f))
    lines = f.read_text().splitlines()
    assert lines[0] == "t,X,dX,dXc"
    assert lines[1].split(",") == ["1", "1.5", "1.5", "0.0"]
    assert len(lines) == 3
