"""Seeded construction of the process families.

Three random families plus two deterministic helpers:

* ``gen_random_walk`` -- compensated two-point walk with a jump at every
  integer time.
* ``gen_cox``         -- single jump at a totally inaccessible time obtained
  by inverting the cumulative hazard against a standard exponential draw,
  compensated by the deterministic drift -int gamma lambda up to the jump.
* ``gen_oneshot``     -- one mean-zero jump at time 1 (two-point or
  exponential-Pareto law).
* ``gen_det_alternating`` / ``gen_brownian`` -- deterministic alternating
  path and a plain Brownian path for cross checks.

Determinism: a path is a pure function of (spec, seed); the per-seed stream
is Philox keyed by (seed, 0), so generation order never matters.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import rng
from .grids import TimeGrid
from .paths import SamplePath
from .presets import (
    PRule,
    RateRule,
    SizeRule,
    XRule,
    drift_integral,
    logdrift_integral,
)

GUARD_TOL = 1e-6  # reject specs whose fired jump could sit this close to -1


class SpecError(ValueError):
    pass


def _coerce(rule, cls):
    if isinstance(rule, cls):
        return rule
    if isinstance(rule, str):
        return cls(rule)
    raise SpecError(f"expected {cls.__name__} or name, got {type(rule).__name__}")


# ---------------------------------------------------------------------------
# compensated random walk


@dataclass(frozen=True)
class RandomWalkSpec:
    x_rule: XRule
    p_rule: PRule
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "x_rule", _coerce(self.x_rule, XRule))
        object.__setattr__(self, "p_rule", _coerce(self.p_rule, PRule))
        if self.horizon < 1:
            raise SpecError("horizon must be a positive integer")

    @cached_property
    def model(self) -> "RandomWalkModel":
        return RandomWalkModel(self)


class RandomWalkModel:
    """Materialized arrays for one walk spec: sizes, probabilities, fired
    jumps, and (when every jump stays above -1) the per-step log-jump
    compensation gamma_n and its running sum."""

    def __init__(self, spec: RandomWalkSpec):
        self.spec = spec
        n = spec.horizon
        self.x = spec.x_rule.values(n)
        self.p = spec.p_rule.values(n)
        self.b = self.x * (1.0 - 1.0 / self.p)
        if not np.all(np.isfinite(self.b)):
            raise SpecError("fired jumps overflow; probabilities decay too fast")
        # A fired jump can equal -1 only on the positive-size branch, when
        # p == x/(1+x).  How close is too close for log(1+dX) is not
        # knowable in general; a fired jump within 1e-6 of -1 is rejected.
        pos = self.x > 0
        if np.any(np.abs(self.b[pos] + 1.0) < GUARD_TOL):
            raise SpecError("p_n too close to x_n/(1+x_n); a fired jump sits at -1")
        self.log_safe = bool(np.all(self.x > -1.0) and np.all(self.b > -1.0))
        if self.log_safe:
            self.gamma = -((1.0 - self.p) * np.log1p(self.x) + self.p * np.log1p(self.b))
            self.big_gamma = np.add.accumulate(self.gamma)
        else:
            self.gamma = None
            self.big_gamma = None
        for a in (self.x, self.p, self.b, self.gamma, self.big_gamma):
            if a is not None:
                a.flags.writeable = False

    @property
    def facts(self):
        return self.spec.x_rule.facts

    @property
    def localization(self):
        return self.spec.x_rule.localization


def gen_random_walk(spec: RandomWalkSpec, seed: int) -> SamplePath:
    m = spec.model
    u = rng.trial_generator(seed, 0).random(spec.horizon)
    jumps = np.where(u < m.p, m.b, m.x)
    return SamplePath.from_increments(TimeGrid.events(spec.horizon), jumps)


# ---------------------------------------------------------------------------
# hazard construction (single totally inaccessible jump)


@dataclass(frozen=True)
class CoxSpec:
    rate: RateRule
    size: SizeRule
    horizon: float
    step: float
    with_bm: bool = False
    compensated: bool = True  # False: raw negative jump, drift moved to A

    def __post_init__(self):
        object.__setattr__(self, "rate", _coerce(self.rate, RateRule))
        object.__setattr__(self, "size", _coerce(self.size, SizeRule))
        TimeGrid.uniform(self.horizon, self.step)  # validates the pair

    @cached_property
    def grid(self) -> TimeGrid:
        return TimeGrid.uniform(self.horizon, self.step)

    def survival(self, t) -> np.ndarray:
        """P(jump after t) = exp(-cumulative hazard)."""
        return np.exp(-self.rate.cum(t))

    def drift_exact(self, t):
        """Closed form of int_0^t gamma lambda ds when the pair admits one."""
        return drift_integral(self.rate, self.size, t)

    def logdrift_exact(self, t):
        return logdrift_integral(self.rate, self.size, t)


def cox_step_integrals(spec: CoxSpec, rho: float | None) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint-rule step increments of int gamma lambda ds and of
    int log(1+gamma) lambda ds, cut off at the jump time.

    The step containing rho is integrated over [t_{k-1}, rho) with the
    midpoint of the partial interval.  Both integrals share the evaluation
    points, so identities relating them cancel the quadrature error
    structurally.  Slot 0 (time 0) is zero.
    """
    times = spec.grid.times_f64()
    n = times.size
    d = np.zeros(n)
    q = np.zeros(n)
    h = spec.step
    lo, hi = times[:-1], times[1:]
    mids = 0.5 * (lo + hi)
    widths = np.full(n - 1, h)
    if rho is not None and rho < spec.horizon:
        k = int(np.searchsorted(times, rho, side="left"))  # first time >= rho
        widths = widths.copy()
        widths[k:] = 0.0
        if rho > lo[k - 1]:
            widths[k - 1] = rho - lo[k - 1]
            mids = mids.copy()
            mids[k - 1] = 0.5 * (lo[k - 1] + rho)
    lam = spec.rate.lam(mids)
    gam = spec.size.gam(mids)
    d[1:] = gam * lam * widths
    q[1:] = np.log1p(gam) * lam * widths
    return d, q


def gen_cox(spec: CoxSpec, seed: int) -> tuple[SamplePath, float | None]:
    """One path plus the jump time (None when it lies past the horizon).

    The jump is stored at the first grid point >= rho with its exact size
    gamma(rho); the horizon-exceeded case is a sentinel, never an infinity.
    """
    gen = rng.trial_generator(seed, 0)
    theta = float(gen.standard_exponential())
    hazard_at_t = float(spec.rate.cum(spec.horizon))
    fired = theta < hazard_at_t
    rho = float(spec.rate.inverse_cum(theta)) if fired else None

    grid = spec.grid
    jumps = np.zeros(grid.n_points)
    if fired:
        size = float(spec.size.gam(rho))
        jumps[int(np.searchsorted(grid.times_f64(), rho, side="left"))] = (
            -size if not spec.compensated else size
        )
    d_steps, _ = cox_step_integrals(spec, rho)
    drift = -d_steps if spec.compensated else None
    diffusion = None
    if spec.with_bm:
        diffusion = np.zeros(grid.n_points)
        diffusion[1:] = gen.standard_normal(grid.n_points - 1) * math.sqrt(spec.step)
    path = SamplePath.from_increments(grid, jumps, drift, diffusion)
    return path, rho


def cox_a_series(spec: CoxSpec, rho: float | None) -> np.ndarray:
    """Predictable nondecreasing part A for the uncompensated variant
    (zero for the martingale variant)."""
    if spec.compensated:
        return np.zeros(spec.grid.n_points)
    d_steps, _ = cox_step_integrals(spec, rho)
    return np.add.accumulate(d_steps)


# ---------------------------------------------------------------------------
# single mean-zero jump at time 1


@dataclass(frozen=True)
class OneShotSpec:
    """Jump law with E[theta] = 0; the exponential-Pareto preset has
    E[e^theta] = infinity once beta <= 1."""

    kind: str = "two_point"  # or "pareto_exp"
    a: float = 1.0
    q: float = 0.5
    beta: float = 1.0
    horizon: int = 3

    def __post_init__(self):
        if self.kind not in ("two_point", "pareto_exp"):
            raise SpecError(f"unknown one-shot kind {self.kind!r}")
        if self.kind == "two_point":
            if not (self.a > 0 and 0 < self.q < 1):
                raise SpecError("two_point needs a > 0 and q in (0,1)")
        elif self.beta <= 0:
            raise SpecError("pareto_exp needs beta > 0")
        if self.horizon < 1:
            raise SpecError("horizon must be a positive integer")

    @property
    def down_jump(self) -> float:
        return self.a * self.q / (1.0 - self.q)

    @property
    def exp_moment_finite(self) -> bool:
        return True if self.kind == "two_point" else self.beta > 1.0

    @property
    def log_safe(self) -> bool:
        if self.kind == "two_point":
            return self.down_jump < 1.0
        return self.beta >= 1.0  # theta > -1/beta

    def exp_moment(self) -> float:
        """E[e^theta]; +inf when the tail is too heavy."""
        if self.kind == "two_point":
            return self.q * math.exp(self.a) + (1.0 - self.q) * math.exp(-self.down_jump)
        if self.beta <= 1.0:
            return math.inf
        return math.exp(-1.0 / self.beta) * self.beta / (self.beta - 1.0)


def gen_oneshot(spec: OneShotSpec, seed: int) -> SamplePath:
    gen = rng.trial_generator(seed, 0)
    if spec.kind == "two_point":
        theta = spec.a if gen.random() < spec.q else -spec.down_jump
    else:
        theta = float(gen.standard_exponential()) / spec.beta - 1.0 / spec.beta
    jumps = np.zeros(spec.horizon)
    jumps[0] = theta  # event grid starts at time 1
    return SamplePath.from_increments(TimeGrid.events(spec.horizon), jumps)


# ---------------------------------------------------------------------------
# deterministic helpers


def gen_det_alternating(n: int) -> SamplePath:
    """A_t = sum_{m<=[t]} (-1)^m / m: convergent, but with unbounded
    total variation (the partial sums of 1/m)."""
    m = np.arange(1, n + 1, dtype=np.float64)
    jumps = np.where(np.arange(1, n + 1) % 2 == 0, 1.0, -1.0) / m
    return SamplePath.from_increments(TimeGrid.events(n), jumps)


def gen_brownian(horizon: float, step: float, seed: int) -> SamplePath:
    grid = TimeGrid.uniform(horizon, step)
    gen = rng.trial_generator(seed, 0)
    diffusion = np.zeros(grid.n_points)
    diffusion[1:] = gen.standard_normal(grid.n_points - 1) * math.sqrt(step)
    return SamplePath.from_increments(grid, np.zeros(grid.n_points), None, diffusion)


GeneratorSpec = RandomWalkSpec | CoxSpec | OneShotSpec
