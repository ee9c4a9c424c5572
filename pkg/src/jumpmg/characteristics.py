"""Predictable characteristics of the preset families.

Everything here is derived from the law, not estimated from paths: for the
random walk the jump compensator at time n is the two-point law of dX_n, so
any integral F*nu is a finite sum; for the hazard construction it is
lambda(s) ds up to the jump, so F*nu is an ordinary integral with a closed
form for the preset pairs (quadrature otherwise).  Empirical jump-measure
integrals F*mu exist only as cross checks against these.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._util import fmt_float, write_csv
from .generators import CoxSpec, OneShotSpec, RandomWalkSpec, cox_step_integrals
from .integrands import (
    ABS_TAIL,
    EXP_REMAINDER,
    LOG1P_SQ_CAP,
    NEG_LOG_TAIL,
    POS_TAIL,
    POW_C,
    SQ_CAP_ABS,
    SQ_CAP_ONE,
    SQUARE,
    X_MINUS_LOG,
    Integrand,
)
from .presets import RareSpikeSchedule

QUAD_TOL = 1e-10


class CharacteristicsError(ValueError):
    pass


# ---------------------------------------------------------------------------
# random walk: F*nu as a finite sum over the two-point laws


def walk_nu_terms(spec: RandomWalkSpec, f: Integrand) -> np.ndarray:
    """E[F(dX_n)] for each n, excluding zero-size atoms (the jump measure
    only charges nonzero jumps)."""
    m = spec.model
    gamma = m.gamma if m.gamma is not None else np.zeros(spec.horizon)
    if f.needs_log and not m.log_safe:
        raise CharacteristicsError(f"{f} undefined: jumps reach -1 for this preset")
    fx = f(m.x, gamma)
    fb = f(m.b, gamma)
    return (1.0 - m.p) * fx * (m.x != 0.0) + m.p * fb * (m.b != 0.0)


def walk_nu_series(spec: RandomWalkSpec, f: Integrand) -> np.ndarray:
    return np.add.accumulate(walk_nu_terms(spec, f))


# ---------------------------------------------------------------------------
# hazard construction: deterministic F*nu(t) = int_0^t F(gamma(s)) lambda(s) ds


def _cox_nu_closed(spec: CoxSpec, f: Integrand, t: float) -> float | None:
    rate, size = spec.rate.name, spec.size.name
    kind, prm = f.kind, f.param
    if rate == "zero" or size == "zero":
        if kind == POW_C:
            return float(spec.rate.cum(min(t, 1e300)))
        return 0.0
    if kind == NEG_LOG_TAIL:
        return 0.0  # jump sizes are nonnegative for every preset pair
    if rate != "inv_sq":
        return None

    if size == "identity":  # gamma(s) = s
        if kind == X_MINUS_LOG:
            if math.isinf(t):
                return math.inf
            return float(spec.drift_exact(t) - spec.logdrift_exact(t))
        if kind == SQUARE:
            if math.isinf(t):
                return math.inf
            return float(t - 2.0 * np.log1p(t) - 1.0 / (1.0 + t) + 1.0)
        if kind in (POS_TAIL, ABS_TAIL):
            kap = prm if kind == POS_TAIL else 1.0
            if t <= kap:
                return 0.0
            if math.isinf(t):
                return math.inf
            hi = np.log1p(t) + 1.0 / (1.0 + t)
            lo = np.log1p(kap) + 1.0 / (1.0 + kap)
            return float(hi - lo)
        if kind in (SQ_CAP_ABS, SQ_CAP_ONE):
            def below(x):  # int_0^x s^2/(1+s)^2
                return x - 2.0 * np.log1p(x) - 1.0 / (1.0 + x) + 1.0
            if t <= 1.0:
                return float(below(t))
            if kind == SQ_CAP_ABS:
                if math.isinf(t):
                    return math.inf
                tail = (np.log1p(t) + 1.0 / (1.0 + t)) - (math.log(2.0) + 0.5)
            else:
                tail = (0.5 - 1.0 / (1.0 + t)) if not math.isinf(t) else 0.5
            return float(below(1.0) + tail)
        if kind == POW_C:
            if math.isinf(t):
                return 1.0 / (1.0 - prm)
            return float((1.0 - math.exp((prm - 1.0) * math.log1p(t))) / (1.0 - prm))
        if kind == LOG1P_SQ_CAP:
            # u = log(1+s): int u^2 e^-u du = 2 - e^-U (U^2 + 2U + 2)
            hi = min(t, prm)
            if hi <= 0.0:
                return 0.0
            u = math.log1p(hi)
            return float(2.0 - math.exp(-u) * (u * u + 2.0 * u + 2.0))
        return None

    if size == "inv_linear":
        # with u = 1/(1+s) the integral becomes int_{u_t}^{1} F(u) du
        u_t = 0.0 if math.isinf(t) else 1.0 / (1.0 + t)
        def on(lo, hi, anti):
            return float(anti(hi) - anti(lo)) if hi > lo else 0.0
        if kind in (SQ_CAP_ABS, SQ_CAP_ONE, SQUARE):  # u <= 1 so all agree
            return on(u_t, 1.0, lambda u: u ** 3 / 3.0)
        if kind == POS_TAIL:
            return on(max(u_t, prm), 1.0, lambda u: u * u / 2.0)
        if kind == ABS_TAIL:
            return 0.0
        if kind == X_MINUS_LOG:
            return on(u_t, 1.0, lambda u: u * u / 2.0 + u - (1.0 + u) * np.log1p(u))
        if kind == EXP_REMAINDER:
            return on(u_t, 1.0, lambda u: math.exp(u) - u * u / 2.0 - u)
        if kind == POW_C:
            if prm == -1.0:
                return on(u_t, 1.0, lambda u: math.log1p(u))
            return on(u_t, 1.0, lambda u: math.exp((prm + 1.0) * math.log1p(u)) / (prm + 1.0))
        if kind == LOG1P_SQ_CAP:
            def anti(u):
                low = np.log1p(u)
                return (1.0 + u) * (low * low - 2.0 * low + 2.0)
            return on(u_t, min(1.0, prm), anti)
        return None
    return None


def _cox_nu_quad(spec: CoxSpec, f: Integrand, t: float) -> float:
    def integrand(s):
        return float(f(np.atleast_1d(spec.size.gam(s)))[0] * spec.rate.lam(s))
    pts = [p for p in (1.0, f.param) if p is not None and 0.0 < p < t] if not math.isinf(t) else None
    val, _ = quad(integrand, 0.0, t, points=pts, limit=200, epsabs=QUAD_TOL, epsrel=QUAD_TOL)
    return float(val)


def cox_nu(spec: CoxSpec, f: Integrand, t: float) -> float:
    closed = _cox_nu_closed(spec, f, t)
    if closed is not None:
        return closed
    return _cox_nu_quad(spec, f, t)


# ---------------------------------------------------------------------------
# single-jump law at time 1


def _oneshot_expect(spec: OneShotSpec, g) -> float:
    if spec.kind == "two_point":
        return spec.q * g(spec.a) + (1.0 - spec.q) * g(-spec.down_jump)
    b = spec.beta
    val, _ = quad(lambda e: g(e / b - 1.0 / b) * math.exp(-e), 0.0, math.inf,
                  limit=200, epsabs=QUAD_TOL, epsrel=QUAD_TOL)
    return float(val)


def oneshot_nu(spec: OneShotSpec, f: Integrand, t: float) -> float:
    if t < 1.0:
        return 0.0
    if f.kind == EXP_REMAINDER:
        # E[e^theta] - 1 - E[theta]; infinite once the tail index reaches 1
        return spec.exp_moment() - 1.0
    if f.needs_log and not spec.log_safe:
        raise CharacteristicsError(f"{f} undefined: jump support reaches -1")
    return _oneshot_expect(spec, lambda x: 0.0 if x == 0.0 else float(f(np.atleast_1d(x))[0]))


# ---------------------------------------------------------------------------
# public operations


def compensator_integral(spec, f: Integrand, t: float) -> float:
    """F*nu_t for the family's deterministic compensator version.

    For the hazard construction this is the value on {rho > t}; the
    path-coupled version (stopped at the jump) lives in the report and the
    Monte Carlo cross checks.
    """
    if isinstance(spec, RandomWalkSpec):
        n = min(spec.horizon, int(math.floor(t)))
        if n <= 0:
            return 0.0
        return float(np.add.accumulate(walk_nu_terms(spec, f)[:n])[-1])
    if isinstance(spec, CoxSpec):
        return cox_nu(spec, f, t)
    if isinstance(spec, OneShotSpec):
        return oneshot_nu(spec, f, t)
    raise TypeError(f"unsupported spec {type(spec).__name__}")


def empirical_jump_integral(path, f: Integrand, gamma=None) -> np.ndarray:
    """Cumulative F*mu_t: the raw sum of F over observed nonzero jumps."""
    jumps = path.jumps
    mask = jumps != 0.0
    g = np.zeros_like(jumps) if gamma is None else np.asarray(gamma, dtype=np.float64)
    vals = np.zeros_like(jumps)
    if np.any(mask):
        vals[mask] = f(jumps[mask], g[mask])
    return np.add.accumulate(vals)


def gamma_series(spec, t: float) -> float:
    """The predictable log-jump compensation at time t:
    gamma_t = -int log(1+x) nu({t}, dx).  Zero off predictable jump times,
    and identically zero for the quasi-left-continuous family."""
    if isinstance(spec, CoxSpec):
        return 0.0
    if isinstance(spec, RandomWalkSpec):
        m = spec.model
        if not m.log_safe:
            raise CharacteristicsError("gamma undefined: jump support reaches -1")
        n = int(t)
        if t != n or not 1 <= n <= spec.horizon:
            return 0.0
        return float(m.gamma[n - 1])
    if isinstance(spec, OneShotSpec):
        if t != 1.0:
            return 0.0
        if not spec.log_safe:
            raise CharacteristicsError("gamma undefined: jump support reaches -1")
        return -_oneshot_expect(spec, lambda x: math.log1p(x))
    raise TypeError(f"unsupported spec {type(spec).__name__}")


def exponential_compensator(spec, path=None, rho: float | None = None) -> np.ndarray:
    """V_t = [X^c,X^c]_t/2 + (x - log(1+x))*nu_t per grid time, path-coupled
    (stopped at the jump) for the hazard construction."""
    if isinstance(spec, RandomWalkSpec):
        m = spec.model
        if not m.log_safe:
            raise CharacteristicsError("V undefined: jumps reach -1")
        return m.big_gamma.copy()
    if isinstance(spec, CoxSpec):
        d, q = cox_step_integrals(spec, rho)
        v = np.add.accumulate(d) - np.add.accumulate(q)
        if spec.with_bm and path is not None and path.diffusion is not None:
            v = v + 0.5 * np.add.accumulate(path.diffusion * path.diffusion)
        return v
    if isinstance(spec, OneShotSpec):
        g = gamma_series(spec, 1.0)
        out = np.full(spec.horizon, g)
        return out
    raise TypeError(f"unsupported spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# the rare-spike exponential-moment bounds


def _kappa_terms(k: int, c: float) -> tuple[float, float]:
    p = math.ldexp(1.0, -k)
    # p^{1-c} stays representable far past the underflow point of p itself
    p_pow = 2.0 ** (-k * (1.0 - c))
    one_pc = math.exp(c * math.log1p(p))
    exact = math.log1p(p_pow * one_pc - p) - c * p * math.log1p(p) - c * math.log(2.0) * k * p
    # p log(1+1/p) written as p log1p(p) + k log2 p to survive p -> 0
    plog_inv = p * math.log1p(p) + math.log(2.0) * k * p
    bound = math.log1p(2.0 * p_pow) - c * plog_inv
    return exact, bound


def kappa_n(schedule: RareSpikeSchedule, n: int, c: float) -> tuple[float, float]:
    """(exact, bound) for the n-th exponential-moment increment of the
    constant -1/2 walk: exact from the two-point law, bound from the
    closed-form inequality log(2 p^{1-c} + 1) - c p log(1 + 1/p)."""
    if not c < 1.0:
        raise CharacteristicsError("the moment exponent must satisfy c < 1")
    return _kappa_terms(int(schedule.exponents[n - 1]), c)


def kappa_threshold(c: float) -> int:
    return max(1, math.ceil(max(-c, 1.0 / (1.0 - c))))


# ---------------------------------------------------------------------------
# report assembly


@dataclass(frozen=True)
class CharacteristicsReport:
    times: np.ndarray
    nu_series: dict
    mu_series: dict
    gamma: np.ndarray | None
    a_series: np.ndarray
    v_series: np.ndarray | None

    def write_csv(self, file_path: str) -> None:
        is_int = self.times.dtype == np.int64
        def t_str(t):
            return str(int(t)) if is_int else fmt_float(t)
        rows = []
        for name, series in sorted(self.nu_series.items()):
            rows += [(t_str(t), name, v) for t, v in zip(self.times, series)]
        for name, series in sorted(self.mu_series.items()):
            rows += [(t_str(t), f"MU:{name}", v) for t, v in zip(self.times, series)]
        extra = [("gamma", self.gamma), ("A", self.a_series), ("V", self.v_series)]
        for name, series in extra:
            if series is not None:
                rows += [(t_str(t), name, v) for t, v in zip(self.times, series)]
        write_csv(file_path, ["t", "integrand", "value"], rows)


def characteristics_report(spec, path, integrand_list, rho=None, a_series=None) -> CharacteristicsReport:
    times = path.grid.times
    nu = {}
    mu = {}
    glist = None
    if isinstance(spec, RandomWalkSpec) and spec.model.log_safe:
        glist = spec.model.gamma
    for f in integrand_list:
        try:
            if isinstance(spec, RandomWalkSpec):
                nu[str(f)] = walk_nu_series(spec, f)
            elif isinstance(spec, CoxSpec):
                cut = times.astype(np.float64) if rho is None else np.minimum(times, rho)
                nu[str(f)] = np.array([cox_nu(spec, f, float(t)) for t in cut])
            else:
                nu[str(f)] = np.array([oneshot_nu(spec, f, float(t)) for t in times])
            mu[str(f)] = empirical_jump_integral(path, f, glist)
        except CharacteristicsError:
            continue
    gam = None
    if not (isinstance(spec, RandomWalkSpec) and not spec.model.log_safe):
        try:
            if isinstance(spec, RandomWalkSpec):
                gam = spec.model.gamma.copy()
            else:
                gam = np.array([gamma_series(spec, float(t)) for t in times])
        except CharacteristicsError:
            gam = None
    if a_series is None:
        a_series = np.zeros(path.grid.n_points)
    try:
        v = exponential_compensator(spec, path, rho)
    except CharacteristicsError:
        v = None
    return CharacteristicsReport(times, nu, mu, gam, a_series, v)
