"""The fixed catalog of jump integrands F used in compensator integrals.

Each integrand acts on jump sizes x (and, for LOG1P_SQ_CAP, on the
predictable log-jump compensation gamma_t at the jump's time).  Log-based
integrands are only defined for x > -1 on the relevant region; evaluating
them at unsupported jumps raises IntegrandDomainError.
"""

from dataclasses import dataclass

import numpy as np

SQ_CAP_ABS = "SQ_CAP_ABS"  # x^2 ∧ |x|
SQ_CAP_ONE = "SQ_CAP_ONE"  # x^2 ∧ 1
POS_TAIL = "POS_TAIL"  # x 1{x>kappa}
ABS_TAIL = "ABS_TAIL"  # |x| 1{|x|>1}
NEG_LOG_TAIL = "NEG_LOG_TAIL"  # -log(1+x) 1{x<-eta}
X_MINUS_LOG = "X_MINUS_LOG"  # x - log(1+x)
EXP_REMAINDER = "EXP_REMAINDER"  # e^x - 1 - x
LOG1P_SQ_CAP = "LOG1P_SQ_CAP"  # (log(1+x)+gamma)^2 1{|x|<=eps}
SQUARE = "SQUARE"  # x^2
POW_C = "POW_C"  # (1+x)^c

_PARAMETRIC = {POS_TAIL, NEG_LOG_TAIL, LOG1P_SQ_CAP, POW_C}
_KINDS = {
    SQ_CAP_ABS,
    SQ_CAP_ONE,
    POS_TAIL,
    ABS_TAIL,
    NEG_LOG_TAIL,
    X_MINUS_LOG,
    EXP_REMAINDER,
    LOG1P_SQ_CAP,
    SQUARE,
    POW_C,
}


class IntegrandDomainError(ValueError):
    pass


@dataclass(frozen=True)
class Integrand:
    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown integrand {self.kind!r}")
        p = self.param
        if self.kind in _PARAMETRIC:
            if p is None:
                raise ValueError(f"{self.kind} needs a parameter")
            if self.kind == POS_TAIL and not p > 0:
                raise ValueError("POS_TAIL needs kappa > 0")
            if self.kind == NEG_LOG_TAIL and not 0 < p < 1:
                raise ValueError("NEG_LOG_TAIL needs eta in (0,1)")
            if self.kind == LOG1P_SQ_CAP and not 0 < p < 1:
                raise ValueError("LOG1P_SQ_CAP needs eps in (0,1)")
            if self.kind == POW_C and not p < 1:
                raise ValueError("POW_C needs c < 1")
        elif p is not None:
            raise ValueError(f"{self.kind} takes no parameter")

    def __str__(self) -> str:
        if self.param is None:
            return self.kind
        return f"{self.kind}[{self.param!r}]"

    @property
    def needs_log(self) -> bool:
        return self.kind in (NEG_LOG_TAIL, X_MINUS_LOG, POW_C)

    def __call__(self, x, gamma=0.0) -> np.ndarray:
        """Evaluate on jump sizes; total on its domain, raises off it."""
        x = np.asarray(x, dtype=np.float64)
        k = self.kind
        # squares may overflow to inf for the analytic fired-jump atoms at
        # unreachable indices; inf is the correct value there
        if k == SQ_CAP_ABS:
            with np.errstate(over="ignore"):
                return np.minimum(x * x, np.abs(x))
        if k == SQ_CAP_ONE:
            with np.errstate(over="ignore"):
                return np.minimum(x * x, 1.0)
        if k == SQUARE:
            with np.errstate(over="ignore"):
                return x * x
        if k == POS_TAIL:
            return np.where(x > self.param, x, 0.0)
        if k == ABS_TAIL:
            ax = np.abs(x)
            return np.where(ax > 1.0, ax, 0.0)
        if k == EXP_REMAINDER:
            with np.errstate(over="ignore"):
                return np.expm1(x) - x
        if k == NEG_LOG_TAIL:
            sel = x < -self.param
            if np.any(x[sel] <= -1.0):
                raise IntegrandDomainError("NEG_LOG_TAIL hit a jump <= -1")
            out = np.zeros_like(x)
            out[sel] = -np.log1p(x[sel])
            return out
        if k == X_MINUS_LOG:
            if np.any(x <= -1.0):
                raise IntegrandDomainError("X_MINUS_LOG hit a jump <= -1")
            return x - np.log1p(x)
        if k == POW_C:
            if np.any(x <= -1.0):
                raise IntegrandDomainError("POW_C hit a jump <= -1")
            with np.errstate(over="ignore"):
                return np.exp(self.param * np.log1p(x))
        if k == LOG1P_SQ_CAP:
            sel = np.abs(x) <= self.param
            g = np.broadcast_to(np.asarray(gamma, dtype=np.float64), x.shape)
            out = np.zeros_like(x)
            t = np.log1p(x[sel]) + g[sel]
            out[sel] = t * t
            return out
        raise AssertionError(k)


def parse_integrand(text: str) -> Integrand:
    """Inverse of str(): e.g. 'POS_TAIL[1.0]' or 'SQUARE'."""
    text = text.strip()
    if "[" in text:
        if not text.endswith("]"):
            raise ValueError(f"malformed integrand {text!r}")
        kind, raw = text[:-1].split("[", 1)
        return Integrand(kind, float(raw))
    return Integrand(text)


def sq_cap_abs() -> Integrand:
    return Integrand(SQ_CAP_ABS)


def sq_cap_one() -> Integrand:
    return Integrand(SQ_CAP_ONE)


def pos_tail(kappa: float = 1.0) -> Integrand:
    return Integrand(POS_TAIL, kappa)


def abs_tail() -> Integrand:
    return Integrand(ABS_TAIL)


def neg_log_tail(eta: float = 0.25) -> Integrand:
    return Integrand(NEG_LOG_TAIL, eta)


def x_minus_log() -> Integrand:
    return Integrand(X_MINUS_LOG)


def exp_remainder() -> Integrand:
    return Integrand(EXP_REMAINDER)


def log1p_sq_cap(eps: float = 0.5) -> Integrand:
    return Integrand(LOG1P_SQ_CAP, eps)


def square() -> Integrand:
    return Integrand(SQUARE)


def pow_c(c: float = 0.5) -> Integrand:
    return Integrand(POW_C, c)
