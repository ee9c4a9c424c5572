"""Finite-horizon convergence verdicts and event proxies.

A verdict is a label computed from the final window of a path.  It is an
honest proxy, not a decision procedure: no finite horizon can tell a limit
from sufficiently slow divergence, so the thresholds are calibrated per
experiment and recorded in its config.

Two kinds of flags are derived:

* condition flags -- one boolean per convergence condition.  Conditions
  about stationary localization are properties of the law, not of a path;
  they come from the preset's analytic table and are never estimated.
* event proxies -- purely path-level booleans (window verdicts and
  value-below-cap checks) used for the pairwise agreement batteries.

The rule ordering is: CONVERGED when the window oscillation is below tol;
otherwise a divergence label needs the window to keep moving (oscillation
at least ``floor``) so that, for tolerances at or below the floor,
tightening tol can only turn CONVERGED into UNDECIDED.
"""

import enum
from dataclasses import dataclass, replace

import numpy as np

from .paths import SamplePath


class Verdict(enum.Enum):
    CONVERGED = "CONVERGED"
    DIVERGED_MINUS = "DIVERGED_MINUS"
    DIVERGED_PLUS = "DIVERGED_PLUS"
    OSCILLATING = "OSCILLATING"
    UNDECIDED = "UNDECIDED"


_CODES = {
    0: Verdict.CONVERGED,
    1: Verdict.DIVERGED_MINUS,
    2: Verdict.DIVERGED_PLUS,
    3: Verdict.OSCILLATING,
    4: Verdict.UNDECIDED,
}
CONVERGED_CODE = 0


@dataclass(frozen=True)
class ProxyParams:
    window: float = 0.1  # fraction of the horizon
    tol: float = 5e-3
    big: float = 5.0
    floor: float = 5e-3  # minimum window movement for a divergence label
    eta: float = 0.25
    kappa: float = 1.0
    cap_char: float = 50.0
    cap_qv: float = 1000.0
    cap_v: float = 50.0
    cap_tail: float = 50.0
    levels: tuple = (10.0, 20.0, 30.0, 40.0, 50.0)

    def __post_init__(self):
        if not 0.0 < self.window < 1.0:
            raise ValueError("window must be a fraction in (0,1)")
        if self.tol <= 0 or self.big <= 0 or self.floor <= 0:
            raise ValueError("tol, big and floor must be positive")

    def with_(self, **kw) -> "ProxyParams":
        return replace(self, **kw)


DEFAULTS = ProxyParams()


def classify_codes(sup_w, inf_w, params: ProxyParams) -> np.ndarray:
    """Vectorized verdict codes from final-window extrema."""
    sup_w = np.asarray(sup_w, dtype=np.float64)
    inf_w = np.asarray(inf_w, dtype=np.float64)
    osc = sup_w - inf_w
    out = np.full(sup_w.shape, 4, dtype=np.int8)
    moving = osc >= params.floor
    out[moving & (sup_w < -params.big)] = 1
    out[moving & (inf_w > params.big)] = 2
    out[(osc > params.big) & (out == 4)] = 3
    out[osc < params.tol] = 0
    return out


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    limit: float | None
    final_value: float
    window_sup: float
    window_inf: float
    oscillation: float


def classify(path: SamplePath, params: ProxyParams = DEFAULTS) -> Classification:
    w = path.grid.window_start(params.window)
    tail = path.values[w:]
    sup_w = float(tail.max())
    inf_w = float(tail.min())
    code = int(classify_codes([sup_w], [inf_w], params)[0])
    verdict = _CODES[code]
    limit = float(np.add.accumulate(tail)[-1] / tail.size) if verdict is Verdict.CONVERGED else None
    return Classification(
        verdict=verdict,
        limit=limit,
        final_value=float(path.values[-1]),
        window_sup=sup_w,
        window_inf=inf_w,
        oscillation=sup_w - inf_w,
    )


# ---------------------------------------------------------------------------
# flag assembly (vectorized over trials; scalars broadcast)


def _b(x, n):
    return np.broadcast_to(np.asarray(x), (n,))


def condition_flags(
    n_trials: int,
    x_codes,
    inf_w,
    sup_w,
    qv,
    char_value,
    char_analytic,
    loc,
    e_converged,
    tau_j_seen,
    params: ProxyParams,
) -> dict[str, np.ndarray]:
    """Per-condition booleans.

    ``loc`` is the preset's LocalizationFacts; ``char_analytic`` says whether
    the capped-square compensator integral (plus A) stays finite in the law;
    ``char_value`` is its horizon value (infinite values simply fail the
    cap).  ``e_converged`` is the window verdict of log|E(X)|.
    """
    x_codes = _b(x_codes, n_trials)
    conv = x_codes == CONVERGED_CODE
    flags = {
        "limit_exists": conv,
        "liminf_finite": _b(inf_w, n_trials) > -params.big,
        "x_minus_sli": _b(loc.x_minus, n_trials).copy(),
        "x_plus_sli": _b(loc.x_plus, n_trials).copy(),
        "x_sli": _b(loc.x, n_trials).copy(),
        "char_finite": _b(char_analytic, n_trials) & (_b(char_value, n_trials) <= params.cap_char),
        "qv_limsup": (
            (_b(qv, n_trials) <= params.cap_qv)
            & (_b(sup_w, n_trials) > -params.big)
            & _b(loc.neg_jump_min, n_trials)
        ),
        "exp_limit": _b(e_converged, n_trials) | _b(tau_j_seen, n_trials),
    }
    return flags


def limit_events(n_trials, x_codes, inf_w, sup_w, qv, char_value, params) -> dict[str, np.ndarray]:
    """Path-level proxies for the four almost-surely-equal limit events:
    limit exists / liminf finite / characteristic integral finite / finite
    quadratic variation with limsup finite."""
    x_codes = _b(x_codes, n_trials)
    return {
        "e_limit": x_codes == CONVERGED_CODE,
        "e_liminf": _b(inf_w, n_trials) > -params.big,
        "e_char": _b(char_value, n_trials) <= params.cap_char,
        "e_qv_limsup": (_b(qv, n_trials) <= params.cap_qv) & (_b(sup_w, n_trials) > -params.big),
    }


def transform_events(
    n_trials, x_codes, y_codes, v_value, neglog_value, postail_value, params
) -> dict[str, np.ndarray]:
    """Path-level proxies for the four joint X/Y convergence events."""
    x_conv = _b(x_codes, n_trials) == CONVERGED_CODE
    y_conv = _b(y_codes, n_trials) == CONVERGED_CODE
    return {
        "f_both_limits": x_conv & y_conv,
        "f_v_finite": _b(v_value, n_trials) <= params.cap_v,
        "f_x_neglog": x_conv & (_b(neglog_value, n_trials) <= params.cap_tail),
        "f_y_postail": y_conv & (_b(postail_value, n_trials) <= params.cap_tail),
    }


# ---------------------------------------------------------------------------
# crossing-time localizer


@dataclass(frozen=True)
class LocalizerReport:
    levels: np.ndarray
    crossing_times: np.ndarray  # nan where the level is never crossed
    crossing_increments: np.ndarray  # full step change at the crossing
    bounds: np.ndarray  # level + |increment|
    stopped_sup_abs: np.ndarray  # max |X| over the stopped path
    coverage: bool

    def domination_holds(self) -> bool:
        """The stopped path never exceeds level + |change at the crossing|."""
        return bool(np.all(self.stopped_sup_abs <= self.bounds))


def crossing_localizer(path: SamplePath, levels) -> LocalizerReport:
    levels = np.asarray(levels, dtype=np.float64)
    if levels.size == 0 or np.any(levels <= 0) or np.any(np.diff(levels) <= 0):
        raise ValueError("levels must be positive and increasing")
    absx = np.abs(path.values)
    run_max = np.maximum.accumulate(absx)
    times = path.grid.times_f64()
    steps = np.diff(np.concatenate(([0.0], path.values)))
    n = levels.size
    cross_t = np.full(n, np.nan)
    incs = np.zeros(n)
    bounds = levels.copy()
    sup_abs = np.empty(n)
    for i, lev in enumerate(levels):
        idx = np.searchsorted(run_max, lev, side="left")  # first index with |X| >= lev
        if idx >= absx.size or run_max[-1] < lev:
            sup_abs[i] = run_max[-1]
            continue
        cross_t[i] = times[idx]
        incs[i] = steps[idx]
        bounds[i] = lev + abs(steps[idx])
        sup_abs[i] = run_max[idx]
    coverage = bool(run_max[-1] < levels[-1])
    return LocalizerReport(levels, cross_t, incs, bounds, sup_abs, coverage)


# ---------------------------------------------------------------------------
# series predicates for the walk size rules


@dataclass(frozen=True)
class SeriesPredicates:
    sum_converges: bool
    sum_sq_finite: bool
    sum_abs_finite: bool
    partial_sum: float
    partial_sum_sq: float
    partial_sum_abs: float


def series_predicates(x_rule, n: int) -> SeriesPredicates:
    """Symbolic convergence triple for a size rule, with partial-sum
    diagnostics at n.  Only named presets carry the symbolic truths."""
    facts = x_rule.facts
    if facts is None:
        raise ValueError(f"no symbolic facts for x rule {x_rule.name!r}")
    x = x_rule.values(n)
    return SeriesPredicates(
        sum_converges=facts.sum_converges,
        sum_sq_finite=facts.sum_sq_finite,
        sum_abs_finite=facts.sum_abs_finite,
        partial_sum=float(np.add.accumulate(x)[-1]),
        partial_sum_sq=float(np.add.accumulate(x * x)[-1]),
        partial_sum_abs=float(np.add.accumulate(np.abs(x))[-1]),
    )
