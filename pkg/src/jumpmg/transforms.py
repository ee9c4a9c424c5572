"""Stochastic exponential and logarithmic transform.

The product transform

    E(X)_t = exp(C_t - [X^c,X^c]_t / 2) * prod_{s<=t} (1 + dX_s)

(C = continuous-plus-drift part) is carried in (sign, log|.|) form so long
products neither underflow nor overflow; the linear scale is materialized
only for reporting.  When every jump exceeds -1 the law admits the
martingale transform Y with dY_t = log(1 + dX_t) + gamma_t, the exponential
compensator V, and the identity E(X) = exp(Y - V), which this module checks
numerically.  Both Y and V reuse the very arrays the generator and the
compensator module produced, so the identity holds to rounding, not to
quadrature accuracy.

Paths with a jump at or below -1 cannot carry Y: the transform is reported
up to the first such jump and flagged.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._util import fmt_float, write_csv
from .characteristics import CharacteristicsError, exponential_compensator
from .generators import CoxSpec, OneShotSpec, RandomWalkSpec, cox_step_integrals
from .grids import EVENTS
from .paths import SamplePath


@dataclass(frozen=True)
class TransformBundle:
    path: SamplePath
    e_values: np.ndarray  # E(X) in linear scale
    e_logabs: np.ndarray  # log|E(X)|, -inf once the product hits zero
    e_signs: np.ndarray
    y_values: np.ndarray | None
    v_values: np.ndarray | None
    tau_j: float | None  # first time with dX == -1 exactly
    y_valid_upto: int  # index count on which Y (and the identity) is defined

    def __post_init__(self):
        for a in (self.e_values, self.e_logabs, self.e_signs, self.y_values, self.v_values):
            if a is not None:
                a.flags.writeable = False

    @property
    def y_flagged(self) -> bool:
        return self.y_valid_upto < self.path.grid.n_points

    def write_csv(self, file_path: str) -> None:
        times = self.path.grid.times
        is_int = self.path.grid.kind == EVENTS
        n = self.path.grid.n_points
        nan = float("nan")
        err = identity_errors(self)
        rows = []
        for k in range(n):
            rows.append(
                (
                    str(int(times[k])) if is_int else fmt_float(times[k]),
                    self.e_values[k],
                    self.y_values[k] if self.y_values is not None and k < self.y_valid_upto else nan,
                    self.v_values[k] if self.v_values is not None else nan,
                    err[k] if err is not None and k < self.y_valid_upto else nan,
                )
            )
        write_csv(file_path, ["t", "E", "Y", "V", "identity_err"], rows)


def _log_jump_parts(jumps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(log|1+dX| per step, sign per step); -inf where 1+dX == 0."""
    one_plus = 1.0 + jumps
    logs = np.empty_like(jumps)
    above = jumps > -1.0
    logs[above] = np.log1p(jumps[above])
    below = jumps < -1.0
    logs[below] = np.log1p(-2.0 - jumps[below])
    logs[one_plus == 0.0] = -math.inf
    signs = np.where(one_plus < 0.0, -1.0, 1.0)
    return logs, signs


def stochastic_exponential(path: SamplePath) -> np.ndarray:
    """E(X) per grid time, zero from the first jump of exactly -1 on."""
    logs, signs = _log_jump_parts(path.jumps)
    cont = np.add.accumulate(path.cont_increments())
    half_qv = 0.0
    if path.diffusion is not None:
        half_qv = 0.5 * np.add.accumulate(path.diffusion * path.diffusion)
    log_abs = cont - half_qv + np.add.accumulate(logs)
    sign = np.multiply.accumulate(signs)
    with np.errstate(over="ignore"):
        return sign * np.exp(log_abs)


def tau_j(path: SamplePath) -> float | None:
    """First grid time whose jump is exactly -1, if any."""
    hits = np.flatnonzero(path.jumps == -1.0)
    if hits.size == 0:
        return None
    return float(path.grid.times[hits[0]])


def logarithmic_transform(spec, path: SamplePath, rho: float | None = None) -> np.ndarray:
    """Y_t = X^c_t + log(1+x)*(mu-nu)_t for the given family.

    Requires every jump of the law to exceed -1 (checked per family); for
    paths nonetheless carrying a jump <= -1 use transform_bundle, which
    truncates and flags.
    """
    bundle = transform_bundle(spec, path, rho)
    if bundle.y_values is None:
        raise CharacteristicsError("Y undefined: jump support reaches -1")
    return bundle.y_values.copy()


def transform_bundle(spec, path: SamplePath, rho: float | None = None) -> TransformBundle:
    n = path.grid.n_points
    logs, signs = _log_jump_parts(path.jumps)
    cont = np.add.accumulate(path.cont_increments())
    half_qv = 0.0
    diff_cum = None
    if path.diffusion is not None:
        diff_cum = np.add.accumulate(path.diffusion)
        half_qv = 0.5 * np.add.accumulate(path.diffusion * path.diffusion)
    log_abs = cont - half_qv + np.add.accumulate(logs)
    sign = np.multiply.accumulate(signs)
    with np.errstate(over="ignore"):
        e_values = sign * np.exp(log_abs)

    bad = np.flatnonzero(path.jumps <= -1.0)
    valid_upto = int(bad[0]) if bad.size else n

    y = None
    v = None
    try:
        v = exponential_compensator(spec, path, rho)
    except CharacteristicsError:
        v = None
    if v is not None:
        if isinstance(spec, RandomWalkSpec):
            y = np.add.accumulate(np.log1p(np.where(path.jumps > -1.0, path.jumps, 0.0)))
            y = y + spec.model.big_gamma
        elif isinstance(spec, CoxSpec):
            _, q = cox_step_integrals(spec, rho)
            y = np.add.accumulate(np.log1p(path.jumps)) - np.add.accumulate(q)
            if diff_cum is not None:
                y = y + diff_cum
        elif isinstance(spec, OneShotSpec):
            y = np.add.accumulate(np.log1p(np.where(path.jumps > -1.0, path.jumps, 0.0)))
            y = y + v  # v is the constant gamma_1 from time 1 on
        else:
            raise TypeError(f"unsupported spec {type(spec).__name__}")

    return TransformBundle(
        path=path,
        e_values=e_values,
        e_logabs=log_abs,
        e_signs=sign,
        y_values=y,
        v_values=v,
        tau_j=tau_j(path),
        y_valid_upto=valid_upto if y is not None else 0,
    )


def identity_errors(bundle: TransformBundle) -> np.ndarray | None:
    """|E(X) - exp(Y - V)| / (1 + |E(X)|) per time, on the valid range."""
    if bundle.y_values is None or bundle.v_values is None:
        return None
    with np.errstate(over="ignore"):
        recon = np.exp(bundle.y_values - bundle.v_values)
    return np.abs(bundle.e_values - recon) / (1.0 + np.abs(bundle.e_values))


def check_exp_identity(bundle: TransformBundle) -> float:
    """Max relative identity error over the range where jumps exceed -1."""
    err = identity_errors(bundle)
    if err is None:
        raise CharacteristicsError("identity undefined: Y does not exist for this law")
    upto = bundle.y_valid_upto
    if upto == 0:
        raise CharacteristicsError("identity undefined from the first event on")
    return float(np.max(err[:upto]))


def delta_y_errors(spec, bundle: TransformBundle) -> np.ndarray:
    """|dY_t - (log(1+dX_t) + gamma_t)| at every event time (walk families).

    Y is stored as a running sum, so this genuinely exercises rounding: the
    differenced Y must match the defining jump decomposition to float
    accuracy.
    """
    if bundle.y_values is None:
        raise CharacteristicsError("Y undefined for this law")
    y = bundle.y_values
    dy = np.diff(np.concatenate(([0.0], y)))
    jumps = bundle.path.jumps
    if isinstance(spec, RandomWalkSpec):
        gam = spec.model.gamma
    elif isinstance(spec, OneShotSpec):
        gam = np.zeros_like(jumps)
        gam[0] = bundle.v_values[0]
    else:  # quasi-left continuous: gamma == 0, and dY has the drift folded in
        raise CharacteristicsError("event-time identity applies to predictable-jump families")
    expected = np.log1p(jumps) + gam
    return np.abs(dy - expected)
