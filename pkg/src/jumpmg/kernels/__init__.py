"""Kernel backend selection.

The per-trial walk summary is the hot loop of every large battery.  At
import time the compiled extension is preferred; the NumPy reference is the
fallback and the ground truth for agreement tests.  Set JUMPMG_BACKEND=py
or =cy to force a side (forcing cy without the extension built is an error).
"""

import os

import numpy as np

from . import pyref

FIELDS = (
    "final_x",
    "qv",
    "sup",
    "inf",
    "sup_w",
    "inf_w",
    "mean_w",
    "n_fired",
    "last_fired",
    "tau_j",
    "first_bad",
    "sign_flips",
    "logabs_e",
    "le_sup_w",
    "le_inf_w",
    "y_final",
    "y_sup_w",
    "y_inf_w",
    "dy_err",
    "id_err",
    "mu_sq_cap_abs",
    "mu_sq_cap_one",
    "mu_pos_tail",
    "mu_abs_tail",
    "mu_neg_log",
    "mu_x_mlog",
    "mu_square",
)
F = {name: i for i, name in enumerate(FIELDS)}
N_FIELDS = len(FIELDS)

_forced = os.environ.get("JUMPMG_BACKEND", "").strip().lower()
_impl = None
BACKEND = "py"
if _forced != "py":
    try:
        from . import _fast as _impl  # noqa: F401

        BACKEND = "cy"
    except ImportError:
        if _forced == "cy":
            raise
        _impl = None
if _impl is None:
    _impl = pyref
    BACKEND = "py"


def rw_summary(x, b, p, u, gamma=None, big_gamma=None, *, w_start=0,
               kappa=1.0, eta=0.25, out=None, backend=None):
    """One trial's summary statistics from pre-drawn uniforms.

    ``gamma``/``big_gamma`` enable the log-transform fields; they must only
    be passed for laws whose jumps stay above -1.
    """
    impl = _impl if backend is None else (pyref if backend == "py" else _pick_cy())
    if out is None:
        out = np.empty(N_FIELDS)
    has_y = gamma is not None
    if has_y:
        if big_gamma is None or len(big_gamma) != len(x) or len(gamma) != len(x):
            raise ValueError("gamma and big_gamma must match the horizon")
        g, bg = gamma, big_gamma
    else:
        # never read when has_y is false, but memoryviews must be real arrays
        g = np.zeros(len(x))
        bg = g
    impl.rw_summary(x, b, p, u, g, bg, int(w_start), float(kappa), float(eta),
                    bool(has_y), out)
    return out


def _pick_cy():
    from . import _fast

    return _fast


def available_backends() -> tuple[str, ...]:
    try:
        from . import _fast  # noqa: F401

        return ("py", "cy")
    except ImportError:
        return ("py",)
