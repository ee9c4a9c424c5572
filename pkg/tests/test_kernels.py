import math

import numpy as np
import pytest

from jumpmg import kernels, rng
from jumpmg.characteristics import empirical_jump_integral
from jumpmg.events import ProxyParams
from jumpmg.generators import RandomWalkSpec
from jumpmg.grids import TimeGrid
from jumpmg.integrands import abs_tail, pos_tail, sq_cap_abs, sq_cap_one, square
from jumpmg.paths import SamplePath, quadratic_variation, running_extrema
from jumpmg.presets import PRule, XRule
from jumpmg.transforms import transform_bundle
from jumpmg.trials import walk_trial_table

HAS_CY = "cy" in kernels.available_backends()

LOG_FIELDS = ("logabs_e", "le_sup_w", "le_inf_w", "y_final", "y_sup_w",
              "y_inf_w", "dy_err", "id_err", "mu_neg_log", "mu_x_mlog")
EXACT_FIELDS = [f for f in kernels.FIELDS if f not in LOG_FIELDS]


def summarize(spec, seed, backend, w_start=0):
    m = spec.model
    u = rng.trial_generator(seed, 0).random(spec.horizon)
    kw = {}
    if m.log_safe:
        kw = dict(gamma=m.gamma, big_gamma=m.big_gamma)
    return kernels.rw_summary(m.x, m.b, m.p, u, w_start=w_start, backend=backend, **kw)


def path_from_stream(spec, base, trial):
    """The exact path the trial table evaluated for stream (base, trial)."""
    u = rng.trial_generator(base, trial).random(spec.horizon)
    m = spec.model
    jumps = np.where(u < m.p, m.b, m.x)
    return SamplePath.from_increments(TimeGrid.events(spec.horizon), jumps)


@pytest.mark.skipif(not HAS_CY, reason="compiled kernel not built")
class TestBackendAgreement:
    @pytest.mark.parametrize("x_rule,p_rule", [
        ("neg_geom", "pow2"),
        ("alt_harmonic", "pow2"),
        ("alt_inv_sqrt", "light"),
        ("const_neg_half", "pow2"),
        ("osc_harmonic", "light"),
        ("neg_harmonic", "light"),
    ])
    def test_fields(self, x_rule, p_rule):
        spec = RandomWalkSpec(XRule(x_rule), PRule(p_rule), 3_000)
        for seed in range(25):
            a = summarize(spec, seed, "py", w_start=2_700)
            c = summarize(spec, seed, "cy", w_start=2_700)
            for name in EXACT_FIELDS:
                i = kernels.F[name]
                assert a[i] == c[i] or (math.isnan(a[i]) and math.isnan(c[i])), name
            for name in LOG_FIELDS:
                i = kernels.F[name]
                if math.isnan(a[i]) and math.isnan(c[i]):
                    continue
                # NumPy's transcendental loops may differ from libm by an ulp
                assert abs(a[i] - c[i]) <= 1e-13 * max(1.0, abs(a[i])), name


class TestKernelAgainstPathModules:
    """Second, independent route: the fused per-trial summary must match
    the path-level operations it replaces."""

    @pytest.mark.parametrize("x_rule,p_rule", [
        ("neg_geom", PRule("geom", {"base": 4.0})),
        ("alt_harmonic", PRule("pow2")),
    ])
    def test_consistency(self, x_rule, p_rule):
        spec = RandomWalkSpec(XRule(x_rule), p_rule, 800)
        params = ProxyParams()
        base = 31
        tab = walk_trial_table(spec, 5, base, params)
        w = TimeGrid.events(spec.horizon).window_start(params.window)
        for i in range(5):
            path = path_from_stream(spec, base, i)
            row = tab[i]
            assert row[kernels.F["final_x"]] == path.values[-1]
            assert row[kernels.F["qv"]] == quadratic_variation(path).total[-1]
            sup, inf = running_extrema(path)
            assert row[kernels.F["sup"]] == sup[-1]
            assert row[kernels.F["inf"]] == inf[-1]
            assert row[kernels.F["sup_w"]] == path.values[w:].max()
            assert row[kernels.F["inf_w"]] == path.values[w:].min()
            for field, f in [("mu_sq_cap_abs", sq_cap_abs()),
                             ("mu_sq_cap_one", sq_cap_one()),
                             ("mu_pos_tail", pos_tail(params.kappa)),
                             ("mu_abs_tail", abs_tail()),
                             ("mu_square", square())]:
                assert row[kernels.F[field]] == empirical_jump_integral(path, f)[-1], field
            if spec.model.log_safe:
                bundle = transform_bundle(spec, path)
                assert row[kernels.F["y_final"]] == bundle.y_values[-1]
                assert row[kernels.F["logabs_e"]] == bundle.e_logabs[-1]
            nz = np.flatnonzero(path.jumps == -1.0)
            assert row[kernels.F["tau_j"]] == (nz[0] + 1 if nz.size else 0)


def test_backend_forced_by_env(monkeypatch):
    # the dispatcher honors explicit backend choice per call
    spec = RandomWalkSpec("neg_geom", "pow2", 100)
    a = summarize(spec, 0, "py")
    assert a.shape == (kernels.N_FIELDS,)
    assert kernels.BACKEND in kernels.available_backends()
