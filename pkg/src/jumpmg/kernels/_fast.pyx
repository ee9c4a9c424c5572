# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Fused single-pass walk summary.

Agrees with kernels.pyref.rw_summary exactly on every algebraic field
(same accumulation order, IEEE arithmetic, no -ffast-math); log- and
exp-derived fields can differ from the NumPy loops by an ulp or two.
"""

from libc.math cimport fabs, log1p, exp, INFINITY, NAN


def rw_summary(const double[::1] x, const double[::1] b, const double[::1] p,
               const double[::1] u,
               const double[::1] gamma, const double[::1] big_gamma,
               Py_ssize_t w_start, double kappa, double eta, bint has_y,
               double[::1] out):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i
    cdef double j, v = 0.0, qv = 0.0
    cdef double sup = -INFINITY, inf = INFINITY
    cdef double sup_w = -INFINITY, inf_w = INFINITY, sum_w = 0.0
    cdef double n_fired = 0.0, last_fired = 0.0, tau_j = 0.0, first_bad = 0.0
    cdef double sign_flips = 0.0
    cdef double loga = 0.0, le_sup_w = -INFINITY, le_inf_w = INFINITY
    cdef double big_l = 0.0, y = 0.0, y_prev = 0.0
    cdef double y_sup_w = -INFINITY, y_inf_w = INFINITY
    cdef double dy_err = 0.0, id_err = 0.0
    cdef double mu_sca = 0.0, mu_sco = 0.0, mu_pt = 0.0, mu_at = 0.0
    cdef double mu_nl = 0.0, mu_xm = 0.0, mu_sq = 0.0
    cdef double one_plus, ell, e_lin, recon, err, d, jj, aj, m

    for i in range(n):
        if u[i] < p[i]:
            j = b[i]
            n_fired += 1.0
            last_fired = <double>(i + 1)
        else:
            j = x[i]
        v += j
        jj = j * j
        aj = fabs(j)
        qv += jj
        if v > sup:
            sup = v
        if v < inf:
            inf = v
        if i >= w_start:
            if v > sup_w:
                sup_w = v
            if v < inf_w:
                inf_w = v
            sum_w += v

        one_plus = 1.0 + j
        if j == -1.0:
            if tau_j == 0.0:
                tau_j = <double>(i + 1)
            loga += -INFINITY
        elif j > -1.0:
            loga += log1p(j)
        else:
            loga += log1p(-2.0 - j)
            sign_flips += 1.0
        if j <= -1.0 and first_bad == 0.0:
            first_bad = <double>(i + 1)
        if i >= w_start:
            if loga > le_sup_w:
                le_sup_w = loga
            if loga < le_inf_w:
                le_inf_w = loga

        if has_y:
            ell = log1p(j)
            big_l += ell
            y = big_l + big_gamma[i]
            d = (y - y_prev) - (ell + gamma[i])
            if fabs(d) > dy_err:
                dy_err = fabs(d)
            y_prev = y
            if i >= w_start:
                if y > y_sup_w:
                    y_sup_w = y
                if y < y_inf_w:
                    y_inf_w = y
            e_lin = exp(big_l)
            recon = exp(y - big_gamma[i])
            err = fabs(e_lin - recon) / (1.0 + e_lin)
            if err > id_err:
                id_err = err
            mu_xm += j - ell
            if j < -eta:
                mu_nl += -ell

        m = jj if jj < aj else aj
        mu_sca += m
        mu_sco += jj if jj < 1.0 else 1.0
        if j > kappa:
            mu_pt += j
        if aj > 1.0:
            mu_at += aj
        mu_sq += jj

    out[0] = v
    out[1] = qv
    out[2] = sup
    out[3] = inf
    out[4] = sup_w
    out[5] = inf_w
    out[6] = sum_w / <double>(n - w_start)
    out[7] = n_fired
    out[8] = last_fired
    out[9] = tau_j
    out[10] = first_bad
    out[11] = sign_flips
    out[12] = loga
    out[13] = le_sup_w
    out[14] = le_inf_w
    if has_y:
        out[15] = y
        out[16] = y_sup_w
        out[17] = y_inf_w
        out[18] = dy_err
        out[19] = id_err
        out[24] = mu_nl
        out[25] = mu_xm
    else:
        out[15] = NAN
        out[16] = NAN
        out[17] = NAN
        out[18] = NAN
        out[19] = NAN
        out[24] = NAN
        out[25] = NAN
    out[20] = mu_sca
    out[21] = mu_sco
    out[22] = mu_pt
    out[23] = mu_at
    out[26] = mu_sq
    return out
