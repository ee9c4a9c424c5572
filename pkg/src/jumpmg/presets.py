"""Preset catalog: jump-size rules, firing-probability rules, and the
hazard-construction rate/size functions, together with the analytic facts
each preset carries.

The compensated random walk puts a jump at every integer n <= N:

    dX_n = x_n            with probability 1 - p_n
    dX_n = x_n (1 - 1/p_n) with probability p_n

so each step has mean zero.  A preset bundles the rule n -> x_n with
symbolic truth values (does sum x_n converge, is sum x_n^2 finite, is
sum |x_n| finite) plus law-level localization facts that are not observable
from any finite path.  Those truths drive the analytic condition flags; the
Monte Carlo layer never tries to estimate them.

Size rules whose first term would be exactly -1 (so the first factor of the
product transform would vanish surely) start at n = 2 instead; the zeroed
first term changes no tail statement.
"""

import math
from dataclasses import dataclass, field

import numpy as np

_P_FLOOR = 2.0 ** -1000  # keeps 1/p finite; firing prob below this is 0 at any trial count


class PresetError(ValueError):
    pass


# ---------------------------------------------------------------------------
# jump-size rules


@dataclass(frozen=True)
class SeriesFacts:
    """Symbolic truths about (x_n): carried by the rule, not estimated."""

    sum_converges: bool
    sum_sq_finite: bool
    sum_abs_finite: bool


@dataclass(frozen=True)
class LocalizationFacts:
    """Law-level stationary-localization truths for the walk built on a rule.

    ``neg_jump_min``: (dX)^- wedge X^- admits stationary localization with
    integrable dominators.  ``x_minus`` / ``x_plus`` / ``x``: same for X^-,
    X^+ and X.  These do not depend on the firing probabilities (given that
    they are summable), because the fired branch contributes |x_n| per step
    to every compensator tail regardless of p_n.
    """

    neg_jump_min: bool
    x_minus: bool
    x_plus: bool
    x: bool


@dataclass(frozen=True)
class XRule:
    name: str
    params: dict = field(default_factory=dict)

    def values(self, n_max: int) -> np.ndarray:
        n = np.arange(1, n_max + 1, dtype=np.float64)
        nm = self.name
        if nm == "zero":
            return np.zeros(n_max)
        if nm == "explicit":
            vals = np.asarray(self.params["values"], dtype=np.float64)
            if vals.size < n_max:
                raise PresetError("explicit rule shorter than the horizon")
            return vals[:n_max].copy()
        if nm == "alt_inv_sqrt":
            x = np.where(n % 2 == 0, 1.0, -1.0) / np.sqrt(n)
            x[0] = 0.0
            return x
        if nm == "ones":
            return np.ones(n_max)
        if nm == "exp_alt_inv_sqrt":
            return np.expm1(np.where(n % 2 == 0, 1.0, -1.0) / np.sqrt(n))
        if nm == "neg_harmonic":
            x = -1.0 / n
            x[0] = 0.0
            return x
        if nm == "alt_harmonic":
            x = np.where(n % 2 == 0, 1.0, -1.0) / n
            x[0] = 0.0
            return x
        if nm == "const_neg_half":
            return np.full(n_max, -0.5)
        if nm == "neg_geom":
            a = float(self.params.get("a", 2.0))
            base = float(self.params.get("base", 4.0))
            return -a * np.exp2(-np.log2(base) * n)
        if nm == "osc_harmonic":
            return _osc_harmonic(n_max)
        raise PresetError(f"unknown x rule {nm!r}")

    @property
    def facts(self) -> SeriesFacts | None:
        return _X_FACTS.get(self.name)

    @property
    def localization(self) -> LocalizationFacts | None:
        return _X_LOC.get(self.name)


def _osc_harmonic(n_max: int) -> np.ndarray:
    # |x_n| = 1/n with signs in blocks: climb past +1, drop below -1,
    # climb past +2, ... so the partial sums swing with unbounded range.
    x = np.empty(n_max)
    total = 0.0
    level = 1.0
    up = True
    for i in range(n_max):
        step = (1.0 if up else -1.0) / (i + 1)
        x[i] = step
        total += step
        if up and total >= level:
            up = False
        elif not up and total <= -level:
            up = True
            level += 1.0
    return x


_T, _F = True, False
_X_FACTS = {
    "zero": SeriesFacts(_T, _T, _T),
    "alt_inv_sqrt": SeriesFacts(_T, _F, _F),
    "ones": SeriesFacts(_F, _F, _F),
    "osc_harmonic": SeriesFacts(_F, _T, _F),
    "exp_alt_inv_sqrt": SeriesFacts(_F, _F, _F),
    "neg_harmonic": SeriesFacts(_F, _T, _F),
    "alt_harmonic": SeriesFacts(_T, _T, _F),
    "const_neg_half": SeriesFacts(_F, _F, _F),
    "neg_geom": SeriesFacts(_T, _T, _T),
}
_X_LOC = {
    "zero": LocalizationFacts(_T, _T, _T, _T),
    # The whole point of these walks: dropping the localization hypothesis.
    "alt_inv_sqrt": LocalizationFacts(_F, _F, _F, _F),
    "ones": LocalizationFacts(_F, _F, _F, _F),
    "osc_harmonic": LocalizationFacts(_F, _F, _F, _F),
    "exp_alt_inv_sqrt": LocalizationFacts(_F, _F, _F, _F),
    # Negative sizes fire upward, so (dX)^- stays bounded by 1/2 here.
    "neg_harmonic": LocalizationFacts(_T, _F, _F, _F),
    "alt_harmonic": LocalizationFacts(_F, _F, _F, _F),
    "const_neg_half": LocalizationFacts(_T, _F, _F, _F),
    # Absolutely summable sizes give a uniformly integrable martingale.
    "neg_geom": LocalizationFacts(_T, _T, _T, _T),
}

X_RULES = tuple(sorted(_X_FACTS))


# ---------------------------------------------------------------------------
# firing-probability rules


@dataclass(frozen=True)
class PRule:
    name: str
    params: dict = field(default_factory=dict)

    def values(self, n_max: int) -> np.ndarray:
        n = np.arange(1, n_max + 1, dtype=np.float64)
        nm = self.name
        if nm == "explicit":
            vals = np.asarray(self.params["values"], dtype=np.float64)
            if vals.size < n_max:
                raise PresetError("explicit rule shorter than the horizon")
            p = vals[:n_max].copy()
        elif nm == "pow2":
            p = np.exp2(-n)
        elif nm == "geom":
            base = float(self.params.get("base", 2.0))
            scale = float(self.params.get("scale", 1.0))
            if base <= 1.0:
                raise PresetError("geom p rule needs base > 1 to be summable")
            p = scale * np.exp2(-np.log2(base) * n)
        elif nm == "light":
            p = 0.1 * np.exp2(-np.log2(10.0) * n)
        elif nm == "example56":
            sched = rare_spike_schedule(
                n_max,
                margin=int(self.params.get("margin", 0)),
                margin_start=int(self.params.get("margin_start", 2)),
            )
            p = sched.p
        else:
            raise PresetError(f"unknown p rule {nm!r}")
        p = np.maximum(p, _P_FLOOR)
        if np.any(p >= 1.0) or np.any(p <= 0.0):
            raise PresetError("firing probabilities must lie in (0,1)")
        return p


P_RULES = ("pow2", "geom", "light", "example56", "explicit")


# ---------------------------------------------------------------------------
# the rare-spike schedule (two inequalities per index, dyadic probabilities)


def _plog(p: float) -> float:
    # p * log(1 + 1/p), written to stay finite as p -> 0
    if p == 0.0:
        return 0.0
    return p * math.log1p(p) + p * (-math.log(p))


@dataclass(frozen=True)
class RareSpikeSchedule:
    """p_n = 2^{-k_n}: the largest dyadic value satisfying both

        p log(1 + 1/p) <= n^-3   and   p <= 2^-n (e^{1/n^2} - 1)^n,

    optionally pushed down by ``margin`` extra halvings from index
    ``margin_start`` on (index 1 is left alone: its compensated spike has
    unit size and is harmless, while the later spikes scale like 1/p_n).

    Exponents are kept as integers because beyond n ~ 78 the probabilities
    fall below the smallest positive double; ``p`` clamps those entries at
    2^-1000 for simulation, which no feasible trial count can distinguish
    from the true value.
    """

    n_max: int
    margin: int = 0
    margin_start: int = 2
    exponents: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        ks = np.empty(self.n_max, dtype=np.int64)
        for i in range(self.n_max):
            n = i + 1
            # log2 of the second bound, computed in log space
            lb2 = -n + n * math.log2(math.expm1(1.0 / (n * n)))
            k = max(1, math.ceil(-lb2 - 1e-12))
            while not (self._ineq2(n, k) and self._ineq1(n, k)):
                k += 1
            if n >= self.margin_start:
                k += self.margin
            ks[i] = k
        ks.flags.writeable = False
        object.__setattr__(self, "exponents", ks)

    @staticmethod
    def _ineq1(n: int, k: int) -> bool:
        return _plog(2.0 ** -min(k, 1074)) <= n ** -3

    @staticmethod
    def _ineq2(n: int, k: int) -> bool:
        lb2 = -n + n * math.log2(math.expm1(1.0 / (n * n)))
        return -k <= lb2 + 1e-12

    @property
    def p(self) -> np.ndarray:
        return np.maximum(np.exp2(-self.exponents.astype(np.float64)), _P_FLOOR)

    def holds_at(self, n: int) -> bool:
        # Both bounds are upper bounds on p and the left side of the first
        # one is increasing in p, so extra halvings can only help.
        k = int(self.exponents[n - 1])
        return self._ineq1(n, k) and self._ineq2(n, k)


def rare_spike_schedule(n_max: int, margin: int = 0, margin_start: int = 2) -> RareSpikeSchedule:
    return RareSpikeSchedule(n_max, margin, margin_start)


# ---------------------------------------------------------------------------
# hazard-construction rate and jump-size functions


@dataclass(frozen=True)
class RateRule:
    """Jump intensity s -> lambda(s) with its cumulative hazard in closed form."""

    name: str
    params: dict = field(default_factory=dict)

    def lam(self, s):
        s = np.asarray(s, dtype=np.float64)
        if self.name == "inv_sq":
            return 1.0 / np.square(1.0 + s)
        if self.name == "constant":
            return np.full_like(s, float(self.params.get("c", 1.0)))
        if self.name == "zero":
            return np.zeros_like(s)
        raise PresetError(f"unknown rate rule {self.name!r}")

    def cum(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.name == "inv_sq":
            return t / (1.0 + t)
        if self.name == "constant":
            return float(self.params.get("c", 1.0)) * t
        if self.name == "zero":
            return np.zeros_like(t)
        raise PresetError(self.name)

    @property
    def cum_limit(self) -> float:
        if self.name == "inv_sq":
            return 1.0
        if self.name == "constant":
            return math.inf
        if self.name == "zero":
            return 0.0
        raise PresetError(self.name)

    def inverse_cum(self, u):
        """Smallest t with cum(t) >= u, for u < cum_limit."""
        u = np.asarray(u, dtype=np.float64)
        if self.name == "inv_sq":
            return u / (1.0 - u)
        if self.name == "constant":
            return u / float(self.params.get("c", 1.0))
        raise PresetError(f"rate rule {self.name!r} has no finite inverse")


@dataclass(frozen=True)
class SizeRule:
    name: str
    params: dict = field(default_factory=dict)

    def gam(self, s):
        s = np.asarray(s, dtype=np.float64)
        if self.name == "identity":
            return s.astype(np.float64).copy() if s.shape else np.float64(s)
        if self.name == "inv_linear":
            return 1.0 / (1.0 + s)
        if self.name == "sq_linear":
            return np.square(1.0 + s)
        if self.name == "constant":
            return np.full_like(s, float(self.params.get("c", 1.0)))
        if self.name == "zero":
            return np.zeros_like(s)
        raise PresetError(f"unknown size rule {self.name!r}")


RATE_RULES = ("inv_sq", "constant", "zero")
SIZE_RULES = ("identity", "inv_linear", "sq_linear", "constant", "zero")


def drift_integral(rate: RateRule, size: SizeRule, t):
    """Closed form of int_0^t gamma lambda ds, or None if no closed form."""
    t = np.asarray(t, dtype=np.float64)
    rn, sn = rate.name, size.name
    if rn == "zero" or sn == "zero":
        return np.zeros_like(t)
    if rn == "inv_sq":
        if sn == "identity":
            return np.log1p(t) - t / (1.0 + t)
        if sn == "inv_linear":
            return 0.5 * (1.0 - 1.0 / np.square(1.0 + t))
        if sn == "sq_linear":
            return t.astype(np.float64).copy() if t.shape else np.float64(t)
        if sn == "constant":
            return float(size.params.get("c", 1.0)) * t / (1.0 + t)
    if rn == "constant":
        c = float(rate.params.get("c", 1.0))
        if sn == "identity":
            return 0.5 * c * np.square(t)
        if sn == "constant":
            return c * float(size.params.get("c", 1.0)) * t
    return None


def logdrift_integral(rate: RateRule, size: SizeRule, t):
    """Closed form of int_0^t log(1+gamma) lambda ds, or None."""
    t = np.asarray(t, dtype=np.float64)
    rn, sn = rate.name, size.name
    if rn == "zero" or sn == "zero":
        return np.zeros_like(t)
    if rn == "inv_sq":
        if sn == "identity":
            return 1.0 - (1.0 + np.log1p(t)) / (1.0 + t)
        if sn == "inv_linear":
            u = 1.0 / (1.0 + t)
            at_1 = 2.0 * math.log(2.0) - 1.0
            return at_1 - ((1.0 + u) * np.log1p(u) - u)
        if sn == "constant":
            return math.log1p(float(size.params.get("c", 1.0))) * t / (1.0 + t)
    return None
