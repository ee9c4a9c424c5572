"""Reproducible Monte Carlo batteries.

An experiment is (generator spec, trial count, base seed, proxy parameters,
analyzer selection).  Trials are independent work units seeded by
(base_seed, index); aggregation is order-independent, so results are
byte-identical no matter how many workers run them.  Event probabilities
are reported with Wilson 95% intervals, which stay honest near 0 and 1
where most of our events live, and pairwise event agreement is the
empirical test object for the almost-sure event identities.
"""

import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, kernels, rng
from ._util import atomic_write_text, write_csv
from .events import _CODES, ProxyParams
from .generators import CoxSpec, OneShotSpec, RandomWalkSpec
from .trials import TrialTables, evaluate_trials

WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class MCEstimate:
    p_hat: float
    n: int
    lo: float
    hi: float

    def covers(self, p: float) -> bool:
        return self.lo <= p <= self.hi


def wilson(successes: int, n: int, z: float = WILSON_Z) -> MCEstimate:
    if n < 1:
        raise ValueError("need at least one trial")
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == n else min(1.0, center + half)
    return MCEstimate(p, n, lo, hi)


def mean_test(samples) -> float:
    """z-score of the sample mean against zero: mean / (SD / sqrt(n))."""
    a = np.asarray(samples, dtype=np.float64)
    if a.size < 2:
        raise ValueError("need at least two samples")
    mean = float(np.add.accumulate(a)[-1] / a.size)
    sd = float(np.std(a, ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return 0.0
        raise ValueError("zero variance with nonzero mean")
    return mean / (sd / math.sqrt(a.size))


@dataclass(frozen=True)
class AgreementMatrix:
    labels: tuple
    rates: np.ndarray  # symmetric, unit diagonal
    marginals: dict

    def min_pairwise(self) -> float:
        if len(self.labels) < 2:
            return 1.0
        off = self.rates[~np.eye(len(self.labels), dtype=bool)]
        return float(off.min())

    def pair(self, a: str, b: str) -> float:
        i, j = self.labels.index(a), self.labels.index(b)
        return float(self.rates[i, j])


def agreement_matrix(flags: dict[str, np.ndarray], labels=None) -> AgreementMatrix:
    labels = tuple(labels if labels is not None else flags.keys())
    cols = [np.asarray(flags[k], dtype=bool) for k in labels]
    k = len(cols)
    n = cols[0].size if k else 0
    rates = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            rates[i, j] = rates[j, i] = float(np.count_nonzero(cols[i] == cols[j]) / n)
    marg = {lab: wilson(int(np.count_nonzero(c)), n) for lab, c in zip(labels, cols)}
    return AgreementMatrix(labels, rates, marg)


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class ExperimentSpec:
    generator: object
    trials: int
    base_seed: int
    params: ProxyParams = ProxyParams()
    analyzers: tuple = ("conditions", "limit_events", "transform_events")
    agreement: tuple | None = None  # flag columns to cross-tabulate
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.analyzers:
            raise ValueError("analyzer list must be nonempty")


@dataclass(frozen=True)
class MCResult:
    exp: ExperimentSpec
    tables: TrialTables
    agreement: AgreementMatrix | None
    manifest: dict

    def verdict_labels(self) -> np.ndarray:
        return np.array([_CODES[int(c)].value for c in self.tables.x_codes])

    def marginal(self, flag: str) -> MCEstimate:
        col = self.tables.flags[flag]
        return wilson(int(np.count_nonzero(col)), col.size)


def _spec_echo(exp: ExperimentSpec) -> dict:
    gen = exp.generator
    d = {"trials": exp.trials, "base_seed": exp.base_seed,
         "threads": exp.threads, "analyzers": list(exp.analyzers),
         "params": asdict(exp.params), "generator_type": type(gen).__name__}
    if isinstance(gen, RandomWalkSpec):
        d["generator"] = {
            "x_rule": gen.x_rule.name, "x_params": dict(gen.x_rule.params),
            "p_rule": gen.p_rule.name, "p_params": dict(gen.p_rule.params),
            "horizon": gen.horizon,
        }
    elif isinstance(gen, CoxSpec):
        d["generator"] = {
            "rate": gen.rate.name, "rate_params": dict(gen.rate.params),
            "size": gen.size.name, "size_params": dict(gen.size.params),
            "horizon": gen.horizon, "step": gen.step,
            "with_bm": gen.with_bm, "compensated": gen.compensated,
        }
    elif isinstance(gen, OneShotSpec):
        d["generator"] = {"kind": gen.kind, "a": gen.a, "q": gen.q,
                          "beta": gen.beta, "horizon": gen.horizon}
    return d


def run_trials(exp: ExperimentSpec) -> MCResult:
    t0 = time.perf_counter()
    tables = evaluate_trials(
        exp.generator, exp.trials, exp.base_seed, exp.params,
        threads=exp.threads, analyzers=exp.analyzers,
    )
    agree = None
    if tables.flags:
        labels = exp.agreement if exp.agreement else tuple(tables.flags.keys())
        missing = [k for k in labels if k not in tables.flags]
        if missing:
            raise ValueError(f"agreement columns not computed: {missing}")
        agree = agreement_matrix(tables.flags, labels)
    echo = _spec_echo(exp)
    blob = json.dumps(echo, sort_keys=True).encode()
    manifest = {
        "tool": "jumpmg",
        "version": __version__,
        "backend": kernels.BACKEND,
        "bit_generator": rng.BIT_GENERATOR,
        "spec": echo,
        "spec_sha256": hashlib.sha256(blob).hexdigest(),
        "wall_time_s": round(time.perf_counter() - t0, 6),
    }
    return MCResult(exp, tables, agree, manifest)


# ---------------------------------------------------------------------------
# file outputs


def _stat_columns(tables: TrialTables) -> list[str]:
    cols = tables.columns
    preferred = [
        "final_x", "qv", "sup_w", "inf_w", "logabs_e", "y_final",
        "rho", "fired", "theta", "n_fired", "tau_j",
    ]
    return [c for c in preferred if c in cols]


def write_outputs(result: MCResult, outdir: str) -> dict:
    """results.csv + summary.csv + manifest.json under outdir.

    The two CSVs are byte-identical across reruns of the same experiment on
    the same backend; the manifest carries wall time and is not.
    """
    import os

    os.makedirs(outdir, exist_ok=True)
    tables = result.tables
    n = tables.x_codes.size
    stat_cols = _stat_columns(tables)
    flag_cols = list(tables.flags.keys())
    header = ["trial", "seed", "verdict"] + flag_cols + stat_cols
    base = result.exp.base_seed
    verd = result.verdict_labels()

    def rows():
        for i in range(n):
            row = [i, f"{base}:{i}", verd[i]]
            row += [bool(tables.flags[c][i]) for c in flag_cols]
            row += [float(tables.stats[i, tables.columns[c]]) for c in stat_cols]
            yield row

    results_path = os.path.join(outdir, "results.csv")
    write_csv(results_path, header, rows())

    srows = []
    for lab in flag_cols:
        est = result.marginal(lab)
        srows.append(("marginal", lab, "", est.p_hat, est.lo, est.hi))
    if result.agreement is not None:
        labs = result.agreement.labels
        for i in range(len(labs)):
            for j in range(i + 1, len(labs)):
                srows.append(("agreement", labs[i], labs[j],
                              float(result.agreement.rates[i, j]), "", ""))
    write_csv(os.path.join(outdir, "summary.csv"),
              ["kind", "a", "b", "value", "lo", "hi"], srows)

    with open(results_path, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    manifest = dict(result.manifest)
    manifest["results_sha256"] = digest
    atomic_write_text(os.path.join(outdir, "manifest.json"),
                      json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return {"results": results_path,
            "summary": os.path.join(outdir, "summary.csv"),
            "manifest": os.path.join(outdir, "manifest.json")}


# ---------------------------------------------------------------------------
# running exponential-moment estimates


@dataclass(frozen=True)
class SupExpReport:
    times: np.ndarray
    log_means: np.ndarray  # log of the per-time mean of e^{c Y_t}
    means: np.ndarray
    ses: np.ndarray
    c: float

    @property
    def max_mean(self) -> float:
        return float(self.means.max())

    @property
    def argmax_time(self) -> float:
        return float(self.times[int(np.argmax(self.means))])

    @property
    def se_at_max(self) -> float:
        return float(self.ses[int(np.argmax(self.means))])


def _logsumexp(col: np.ndarray) -> float:
    m = float(col.max())
    if math.isinf(m):
        return m
    return m + math.log(float(np.add.accumulate(np.exp(col - m))[-1]))


def sup_exp_moment(spec, c: float, times, n_trials: int, base_seed: int) -> SupExpReport:
    """Estimate max_t E[e^{c Y_t}] over a deterministic time grid.

    For independent-increment walks e^{cY} is a submartingale, so the
    supremum over bounded stopping times is attained along deterministic
    times and the grid maximum is the real thing; in general it is a lower
    bound.  Accumulation is done in log space.
    """
    if c == 0.0:
        raise ValueError("c must be nonzero")
    times = np.asarray(times, dtype=np.float64)
    if isinstance(spec, RandomWalkSpec):
        m = spec.model
        if not m.log_safe:
            raise ValueError("Y undefined: jumps reach -1 for this preset")
        n = spec.horizon
        idx = times.astype(np.int64) - 1
        if np.any((idx < 0) | (idx >= n)) or np.any(times != np.floor(times)):
            raise ValueError("times must be integer event times within the horizon")
        cy = np.empty((n_trials, times.size))
        u = np.empty(n)
        for i in range(n_trials):
            rng.trial_generator(base_seed, i).random(out=u)
            jumps = np.where(u < m.p, m.b, m.x)
            y = np.add.accumulate(np.log1p(jumps)) + m.big_gamma
            cy[i] = c * y[idx]
    elif isinstance(spec, CoxSpec):
        if spec.logdrift_exact(0.0) is None:
            raise ValueError("no closed log-drift integral for this preset pair")
        theta = np.empty(n_trials)
        for i in range(n_trials):
            theta[i] = rng.trial_generator(base_seed, i).standard_exponential()
        fired_at = spec.rate.inverse_cum(np.minimum(theta, spec.rate.cum_limit * (1 - 1e-15)))
        cy = np.empty((n_trials, times.size))
        for j, t in enumerate(times):
            fired = theta < float(spec.rate.cum(t))
            cut = np.where(fired, fired_at, t)
            y = -np.asarray(spec.logdrift_exact(cut))
            y = y + np.where(fired, np.log1p(np.asarray(spec.size.gam(cut))), 0.0)
            cy[:, j] = c * y
    else:
        raise TypeError(f"unsupported spec {type(spec).__name__}")

    log_means = np.array([_logsumexp(cy[:, j]) - math.log(n_trials)
                          for j in range(times.size)])
    with np.errstate(over="ignore"):
        vals = np.exp(cy)
        means = np.exp(log_means)
        ses = np.std(vals, axis=0, ddof=1) / math.sqrt(n_trials)
    return SupExpReport(times, log_means, means, ses, c)
