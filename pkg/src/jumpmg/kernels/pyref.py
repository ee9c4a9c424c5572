"""NumPy reference implementation of the per-trial walk summary.

This is the fallback backend and the semantic definition of the kernel.
Every reduction is written as a sequential accumulation
(np.add.accumulate, never pairwise sums) so the compiled kernel can add in
the same order: all algebraic fields agree bit for bit across backends.
Fields that go through log1p/exp may differ by an ulp or two, because
NumPy ships its own transcendental loops while the compiled kernel calls
libm.  Within one backend every field is exactly reproducible.
"""

import numpy as np

NAN = float("nan")


def rw_summary(x, b, p, u, gamma, big_gamma, w_start, kappa, eta, has_y, out):
    n = x.shape[0]
    fired = u < p
    jumps = np.where(fired, b, x)
    vals = np.add.accumulate(jumps)

    out[0] = vals[-1]
    out[1] = np.add.accumulate(jumps * jumps)[-1]
    out[2] = vals.max()
    out[3] = vals.min()
    w = vals[w_start:]
    out[4] = w.max()
    out[5] = w.min()
    out[6] = np.add.accumulate(w)[-1] / w.shape[0]

    out[7] = float(np.count_nonzero(fired))
    fired_idx = np.flatnonzero(fired)
    out[8] = float(fired_idx[-1] + 1) if fired_idx.size else 0.0
    tj = np.flatnonzero(jumps == -1.0)
    out[9] = float(tj[0] + 1) if tj.size else 0.0
    bad = np.flatnonzero(jumps <= -1.0)
    out[10] = float(bad[0] + 1) if bad.size else 0.0
    out[11] = float(np.count_nonzero(jumps < -1.0))

    one_plus = 1.0 + jumps
    logs = np.empty(n)
    above = jumps > -1.0
    logs[above] = np.log1p(jumps[above])
    below = jumps < -1.0
    logs[below] = np.log1p(-2.0 - jumps[below])  # log(-(1+j)) via the same entry point
    logs[one_plus == 0.0] = -np.inf
    loga = np.add.accumulate(logs)
    out[12] = loga[-1]
    lw = loga[w_start:]
    out[13] = lw.max()
    out[14] = lw.min()

    if has_y:
        ell = np.log1p(jumps)
        big_l = np.add.accumulate(ell)
        y = big_l + big_gamma
        out[15] = y[-1]
        yw = y[w_start:]
        out[16] = yw.max()
        out[17] = yw.min()
        dy = np.diff(np.concatenate(([0.0], y)))
        out[18] = np.abs(dy - (ell + gamma)).max()
        e = np.exp(big_l)
        recon = np.exp(y - big_gamma)
        out[19] = (np.abs(e - recon) / (1.0 + e)).max()
    else:
        out[15] = out[16] = out[17] = out[18] = out[19] = NAN

    aj = np.abs(jumps)
    jj = jumps * jumps
    out[20] = np.add.accumulate(np.minimum(jj, aj))[-1]
    out[21] = np.add.accumulate(np.minimum(jj, 1.0))[-1]
    out[22] = np.add.accumulate(np.where(jumps > kappa, jumps, 0.0))[-1]
    out[23] = np.add.accumulate(np.where(aj > 1.0, aj, 0.0))[-1]
    if has_y:
        ell = np.log1p(jumps)
        out[24] = np.add.accumulate(np.where(jumps < -eta, -ell, 0.0))[-1]
        out[25] = np.add.accumulate(jumps - ell)[-1]
    else:
        out[24] = NAN
        out[25] = NAN
    out[26] = np.add.accumulate(jj)[-1]
    return out
