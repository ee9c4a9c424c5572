"""Per-trial evaluation for the Monte Carlo layer.

Walk trials run through the kernel backend one seeded stream at a time
(optionally in process chunks); hazard-construction and one-shot trials
need no grid at all -- every statistic has a closed form given the jump
time -- so they are evaluated vectorized across all trials.  Results are
plain (trials x fields) float arrays indexed by kernels.F / COX_F / OS_F.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels, rng
from .characteristics import compensator_integral, cox_nu
from .events import ProxyParams, classify_codes, condition_flags, limit_events, transform_events
from .generators import CoxSpec, OneShotSpec, RandomWalkSpec
from .grids import TimeGrid
from .integrands import neg_log_tail, pos_tail, sq_cap_abs, x_minus_log
from .presets import LocalizationFacts


# ---------------------------------------------------------------------------
# compensated random walk


def _walk_chunk(spec: RandomWalkSpec, base_seed: int, start: int, stop: int,
                w_start: int, kappa: float, eta: float) -> np.ndarray:
    m = spec.model
    n = spec.horizon
    out = np.empty((stop - start, kernels.N_FIELDS))
    u = np.empty(n)
    gamma = m.gamma if m.log_safe else None
    big_gamma = m.big_gamma if m.log_safe else None
    for i in range(start, stop):
        rng.trial_generator(base_seed, i).random(out=u)
        kernels.rw_summary(m.x, m.b, m.p, u, gamma, big_gamma,
                           w_start=w_start, kappa=kappa, eta=eta,
                           out=out[i - start])
    return out


def _walk_chunk_star(args):
    return _walk_chunk(*args)


def walk_trial_table(spec: RandomWalkSpec, n_trials: int, base_seed: int,
                     params: ProxyParams, threads: int = 1) -> np.ndarray:
    """(n_trials x kernels.N_FIELDS) summary table; row i is stream i."""
    w_start = TimeGrid.events(spec.horizon).window_start(params.window)
    args = (spec, base_seed, 0, n_trials, w_start, params.kappa, params.eta)
    if threads <= 1 or n_trials < 256:
        return _walk_chunk(*args)
    n_chunks = min(threads * 4, max(1, n_trials // 64))
    bounds = np.linspace(0, n_trials, n_chunks + 1).astype(int)
    jobs = [
        (spec, base_seed, int(a), int(b), w_start, params.kappa, params.eta)
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(_walk_chunk_star, jobs))
    return np.concatenate(parts, axis=0)


def walk_flag_columns(spec: RandomWalkSpec, tab: np.ndarray, params: ProxyParams,
                      analyzers=("conditions", "limit_events", "transform_events")):
    """Boolean flag columns derived from a walk summary table."""
    F = kernels.F
    m = spec.model
    n_trials = tab.shape[0]
    x_codes = classify_codes(tab[:, F["sup_w"]], tab[:, F["inf_w"]], params)
    e_codes = classify_codes(tab[:, F["le_sup_w"]], tab[:, F["le_inf_w"]], params)
    tau_seen = tab[:, F["tau_j"]] > 0.0
    char_value = compensator_integral(spec, sq_cap_abs(), spec.horizon)
    flags: dict[str, np.ndarray] = {}
    if "conditions" in analyzers:
        flags.update(
            condition_flags(
                n_trials,
                x_codes,
                tab[:, F["inf_w"]],
                tab[:, F["sup_w"]],
                tab[:, F["qv"]],
                char_value,
                m.facts.sum_abs_finite if m.facts else False,
                m.localization or LocalizationFacts(False, False, False, False),
                e_codes == 0,
                tau_seen,
                params,
            )
        )
    if "limit_events" in analyzers:
        flags.update(
            limit_events(
                n_trials,
                x_codes,
                tab[:, F["inf_w"]],
                tab[:, F["sup_w"]],
                tab[:, F["qv"]],
                char_value,
                params,
            )
        )
    if "transform_events" in analyzers and m.log_safe:
        y_codes = classify_codes(tab[:, F["y_sup_w"]], tab[:, F["y_inf_w"]], params)
        flags.update(
            transform_events(
                n_trials,
                x_codes,
                y_codes,
                float(m.big_gamma[-1]),
                compensator_integral(spec, neg_log_tail(params.eta), spec.horizon),
                compensator_integral(spec, pos_tail(params.kappa), spec.horizon),
                params,
            )
        )
    return x_codes, flags


# ---------------------------------------------------------------------------
# hazard construction, evaluated in closed form (no grid, hence exact)

COX_F = {
    name: i
    for i, name in enumerate(
        (
            "theta",
            "rho",  # nan = sentinel for "past the horizon"
            "fired",
            "final_x",
            "qv",
            "sup",
            "inf",
            "sup_w",
            "inf_w",
            "y_final",
            "y_sup_w",
            "y_inf_w",
            "le_sup_w",
            "le_inf_w",
            "char_value",
            "v_value",
            "postail_value",
        )
    )
}

_COX_LOC = {
    ("inv_sq", "identity"): LocalizationFacts(True, False, False, False),
    ("inv_sq", "inv_linear"): LocalizationFacts(True, True, True, True),
    ("inv_sq", "sq_linear"): LocalizationFacts(True, False, False, False),
    ("inv_sq", "constant"): LocalizationFacts(True, True, True, True),
}
_COX_CHAR_TAIL_FINITE = {
    ("inv_sq", "identity"): False,
    ("inv_sq", "inv_linear"): True,
    ("inv_sq", "sq_linear"): False,
    ("inv_sq", "constant"): True,
}


def cox_localization(spec: CoxSpec) -> LocalizationFacts:
    if spec.rate.name == "zero" or spec.size.name == "zero":
        return LocalizationFacts(True, True, True, True)
    return _COX_LOC.get((spec.rate.name, spec.size.name),
                        LocalizationFacts(True, False, False, False))


def cox_char_tail_finite(spec: CoxSpec) -> bool:
    if spec.rate.name == "zero" or spec.size.name == "zero":
        return True
    return _COX_CHAR_TAIL_FINITE.get((spec.rate.name, spec.size.name), False)


def cox_trial_table(spec: CoxSpec, n_trials: int, base_seed: int,
                    params: ProxyParams) -> np.ndarray:
    """Closed-form per-trial statistics of the continuum path (the grid is
    only a rendering device; nothing here needs it)."""
    if not spec.compensated:
        raise ValueError("trial batteries use the compensated (martingale) variant")
    theta = np.empty(n_trials)
    for i in range(n_trials):
        theta[i] = rng.trial_generator(base_seed, i).standard_exponential()
    t_end = spec.horizon
    fired = theta < float(spec.rate.cum(t_end))
    rho = np.full(n_trials, np.nan)
    rho[fired] = spec.rate.inverse_cum(theta[fired])

    def dval(t):
        d = spec.drift_exact(t)
        if d is None:
            raise ValueError("no closed drift integral for this preset pair")
        return d

    t_w = t_end * (1.0 - params.window)
    cut = np.where(fired, rho, t_end)
    size = np.where(fired, np.asarray(spec.size.gam(np.where(fired, rho, 0.0))), 0.0)
    d_cut = dval(cut)
    d_w = float(dval(t_w))
    d_end = float(dval(t_end))
    settle = size - d_cut  # value from the jump on (0 while unfired)

    final_x = np.where(fired, settle, -d_end)
    qv = np.where(fired, size * size, 0.0)
    sup = np.maximum(0.0, np.where(fired, settle, -np.inf))
    inf = np.minimum(-d_cut, np.where(fired, settle, np.inf))
    in_w = fired & (rho > t_w)
    before_w = fired & (rho <= t_w)
    sup_w = np.where(before_w, settle, np.maximum(-d_w, np.where(in_w, settle, -np.inf)))
    inf_w = np.where(before_w, settle, np.minimum(-d_cut, np.where(in_w, settle, np.inf)))

    out = np.full((n_trials, len(COX_F)), np.nan)
    C = COX_F
    out[:, C["theta"]] = theta
    out[:, C["rho"]] = rho
    out[:, C["fired"]] = fired
    out[:, C["final_x"]] = final_x
    out[:, C["qv"]] = qv
    out[:, C["sup"]] = sup
    out[:, C["inf"]] = inf
    out[:, C["sup_w"]] = sup_w
    out[:, C["inf_w"]] = inf_w

    q_end = spec.logdrift_exact(t_end)
    if q_end is not None:
        q_w = float(spec.logdrift_exact(t_w))
        q_cut = spec.logdrift_exact(cut)
        y_settle = np.log1p(size) - q_cut
        out[:, C["y_final"]] = np.where(fired, y_settle, -float(q_end))
        out[:, C["y_sup_w"]] = np.where(
            before_w, y_settle, np.maximum(-q_w, np.where(in_w, y_settle, -np.inf))
        )
        out[:, C["y_inf_w"]] = np.where(
            before_w, y_settle, np.minimum(-q_cut, np.where(in_w, y_settle, np.inf))
        )
        le_settle = np.log1p(size) - d_cut
        out[:, C["le_sup_w"]] = np.where(
            before_w, le_settle, np.maximum(-d_w, np.where(in_w, le_settle, -np.inf))
        )
        out[:, C["le_inf_w"]] = np.where(
            before_w, le_settle, np.minimum(-d_cut, np.where(in_w, le_settle, np.inf))
        )

    f_char = sq_cap_abs()
    f_v = x_minus_log()
    f_pos = pos_tail(params.kappa)
    char_v = np.empty(n_trials)
    v_v = np.empty(n_trials)
    pos_v = np.empty(n_trials)
    full_char = cox_nu(spec, f_char, t_end)
    full_v = cox_nu(spec, f_v, t_end)
    full_pos = cox_nu(spec, f_pos, t_end)
    for i in range(n_trials):
        if fired[i]:
            char_v[i] = cox_nu(spec, f_char, float(rho[i]))
            v_v[i] = cox_nu(spec, f_v, float(rho[i]))
            pos_v[i] = cox_nu(spec, f_pos, float(rho[i]))
        else:
            char_v[i] = full_char
            v_v[i] = full_v
            pos_v[i] = full_pos
    out[:, C["char_value"]] = char_v
    out[:, C["v_value"]] = v_v
    out[:, C["postail_value"]] = pos_v
    return out


def cox_flag_columns(spec: CoxSpec, tab: np.ndarray, params: ProxyParams,
                     analyzers=("conditions", "limit_events", "transform_events")):
    C = COX_F
    n_trials = tab.shape[0]
    x_codes = classify_codes(tab[:, C["sup_w"]], tab[:, C["inf_w"]], params)
    have_y = not np.all(np.isnan(tab[:, C["y_final"]]))
    flags: dict[str, np.ndarray] = {}
    fired = tab[:, C["fired"]] > 0.0
    char_analytic = fired | cox_char_tail_finite(spec)
    if "conditions" in analyzers:
        if have_y:
            e_codes = classify_codes(tab[:, C["le_sup_w"]], tab[:, C["le_inf_w"]], params)
            e_conv = e_codes == 0
        else:
            e_conv = np.zeros(n_trials, dtype=bool)
        flags.update(
            condition_flags(
                n_trials,
                x_codes,
                tab[:, C["inf_w"]],
                tab[:, C["sup_w"]],
                tab[:, C["qv"]],
                tab[:, C["char_value"]],
                char_analytic,
                cox_localization(spec),
                e_conv,
                np.zeros(n_trials, dtype=bool),
                params,
            )
        )
    if "limit_events" in analyzers:
        flags.update(
            limit_events(
                n_trials,
                x_codes,
                tab[:, C["inf_w"]],
                tab[:, C["sup_w"]],
                tab[:, C["qv"]],
                tab[:, C["char_value"]],
                params,
            )
        )
    if "transform_events" in analyzers and have_y:
        y_codes = classify_codes(tab[:, C["y_sup_w"]], tab[:, C["y_inf_w"]], params)
        flags.update(
            transform_events(
                n_trials,
                x_codes,
                y_codes,
                tab[:, C["v_value"]],
                0.0,  # no negative jumps in this family
                tab[:, C["postail_value"]],
                params,
            )
        )
    return x_codes, flags


# ---------------------------------------------------------------------------
# one-shot family

OS_F = {name: i for i, name in enumerate(("theta", "final_x", "qv", "exp_x"))}


def oneshot_trial_table(spec: OneShotSpec, n_trials: int, base_seed: int) -> np.ndarray:
    theta = np.empty(n_trials)
    if spec.kind == "two_point":
        for i in range(n_trials):
            u = rng.trial_generator(base_seed, i).random()
            theta[i] = spec.a if u < spec.q else -spec.down_jump
    else:
        for i in range(n_trials):
            e = rng.trial_generator(base_seed, i).standard_exponential()
            theta[i] = e / spec.beta - 1.0 / spec.beta
    out = np.empty((n_trials, len(OS_F)))
    out[:, OS_F["theta"]] = theta
    out[:, OS_F["final_x"]] = theta
    out[:, OS_F["qv"]] = theta * theta
    with np.errstate(over="ignore"):
        out[:, OS_F["exp_x"]] = np.exp(theta)
    return out


@dataclass(frozen=True)
class TrialTables:
    """One experiment's evaluated trials: the raw stats, verdict codes,
    and boolean flag columns."""

    stats: np.ndarray
    columns: dict
    x_codes: np.ndarray
    flags: dict[str, np.ndarray]


def evaluate_trials(spec, n_trials: int, base_seed: int, params: ProxyParams,
                    threads: int = 1, analyzers=("conditions", "limit_events",
                                                 "transform_events")) -> TrialTables:
    if isinstance(spec, RandomWalkSpec):
        tab = walk_trial_table(spec, n_trials, base_seed, params, threads)
        x_codes, flags = walk_flag_columns(spec, tab, params, analyzers)
        return TrialTables(tab, kernels.F, x_codes, flags)
    if isinstance(spec, CoxSpec):
        tab = cox_trial_table(spec, n_trials, base_seed, params)
        x_codes, flags = cox_flag_columns(spec, tab, params, analyzers)
        return TrialTables(tab, COX_F, x_codes, flags)
    if isinstance(spec, OneShotSpec):
        tab = oneshot_trial_table(spec, n_trials, base_seed)
        sup_w = inf_w = tab[:, OS_F["final_x"]]
        x_codes = classify_codes(sup_w, inf_w, params)
        return TrialTables(tab, OS_F, x_codes, {})
    raise TypeError(f"unsupported spec {type(spec).__name__}")
