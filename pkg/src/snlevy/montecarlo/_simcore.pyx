# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled path-advance kernel; mirrors _kernel_py.advance exactly.

Both backends consume the identical random-number stream and must stay
bit-for-bit in sync; any change here has to be applied to the pure
Python reference as well (tests/test_backend_parity.py enforces it).
"""

from libc.math cimport sqrt, fabs, erfc, exp, INFINITY

import numpy as np
cimport numpy as cnp

RULE_PLAIN = 0
RULE_TILDE = 1
RULE_ONESIDED = 2

cdef enum:
    C_RULE_PLAIN = 0
    C_RULE_TILDE = 1
    C_RULE_ONESIDED = 2


cdef inline double _h_locate(const double[::1] ell, const double[::1] hvals,
                             const double[::1] fvals, double target,
                             double* l_out) nogil:
    # invert a cumulative-intensity table (binary search: the inversion
    # may land before the kernel's forward-only cursor) and read the
    # boundary value there; writes the local time through l_out
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = ell.shape[0] - 1
    cdef Py_ssize_t mid
    cdef double dv, w
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if hvals[mid] < target:
            lo = mid
        else:
            hi = mid
    dv = hvals[hi] - hvals[lo]
    if dv > 0.0:
        w = (target - hvals[lo]) / dv
    else:
        w = 1.0
    if w < 0.0:
        w = 0.0
    elif w > 1.0:
        w = 1.0
    l_out[0] = ell[lo] + w * (ell[hi] - ell[lo])
    return fvals[lo] + w * (fvals[hi] - fvals[lo])


cdef inline double _beval(const double[::1] ell, const double[::1] vals,
                          double L, Py_ssize_t* cur) nogil:
    cdef Py_ssize_t n = ell.shape[0]
    cdef Py_ssize_t c = cur[0]
    cdef double e0, w
    while c + 1 < n and L > ell[c + 1]:
        c += 1
    cur[0] = c
    if c + 1 >= n:
        return vals[n - 1]
    e0 = ell[c]
    if L <= e0:
        return vals[c]
    w = (L - e0) / (ell[c + 1] - e0)
    return vals[c] + w * (vals[c + 1] - vals[c])


def advance(double[::1] state, const double[::1] normals,
            const double[::1] jump_t, const double[::1] jump_s,
            const double[::1] ell, const double[::1] fplus,
            const double[::1] fminus, const double[::1] hup,
            const double[::1] hdn, bint has_up, bint has_down, int rule,
            double sigma, double drift, double dt, double eps,
            double res_cut, double t_max, double accel_cap,
            long long max_steps=2 ** 62):
    """Advance one path; returns the number of normals consumed."""
    cdef double t = state[0]
    cdef double x = state[1]
    cdef double L = state[2]
    cdef Py_ssize_t j = <Py_ssize_t> state[3]
    cdef int phase = <int> state[4]
    cdef bint armed = state[5] != 0.0
    cdef double arm_level = state[6]
    cdef double sup_x = state[7]
    cdef Py_ssize_t cur = <Py_ssize_t> state[9]
    cdef double bigz = state[10]
    cdef double amb = state[11]
    cdef double steps = state[12]

    cdef Py_ssize_t n_normals = normals.shape[0]
    cdef Py_ssize_t n_jumps = jump_t.shape[0]
    cdef double guard = 4.0 * sigma * sqrt(dt)
    cdef double fine_dt = dt / 16.0
    cdef int status = 0
    cdef Py_ssize_t k = 0
    cdef long long steps_here = 0

    cdef double up, down, dmag, d, dd, d_feat, h, hd, u, ad
    cdef double t_next, delta, z, x_new
    cdef double z2, hv, lam, lam_up, lam_dn, p, frac
    cdef double big_h_up = 0.0
    cdef double big_h_dn = 0.0
    cdef bint jump_now, in_band, down_active, hazard_step
    cdef bint up_gated, dn_gated
    cdef bint use_hup = has_up and hup.shape[0] > 0
    cdef bint use_hdn = has_down and hdn.shape[0] > 0

    if has_up:
        up = _beval(ell, fplus, L, &cur)
    else:
        up = INFINITY
    if has_down:
        dmag = _beval(ell, fminus, L, &cur)
        down = -dmag
    else:
        dmag = INFINITY
        down = -INFINITY
    if use_hup:
        big_h_up = _beval(ell, hup, L, &cur)
    if use_hdn:
        big_h_dn = _beval(ell, hdn, L, &cur)

    with nogil:
        while k < n_normals:
            if steps_here >= max_steps:
                break
            if t >= t_max:
                status = 4
                break

            down_active = has_down and (rule != C_RULE_TILDE or phase == 2 or armed)
            # boundaries are nondecreasing in L, so a gate that opens never
            # closes again and the cumulative-hazard bookkeeping stays exact
            up_gated = use_hup and up < res_cut
            dn_gated = use_hdn and dmag < res_cut

            # fine detection is keyed to the stop levels only; the band
            # must not alter the step size across its edge, or the
            # estimator picks up an O(sqrt(dt)/eps) occupation bias
            in_band = -eps < x < eps
            hazard_step = in_band and (up_gated or dn_gated)
            d_feat = INFINITY
            if has_up and not up_gated and up - x < d_feat:
                d_feat = up - x
            if down_active:
                if armed:
                    dd = fabs(x - arm_level)
                    if dd < d_feat:
                        d_feat = dd
                elif not dn_gated:
                    dd = x - down
                    if dd < d_feat:
                        d_feat = dd
            if d_feat <= guard:
                h = fine_dt
            elif in_band:
                h = dt
            else:
                d = fabs(x) - eps
                if d_feat < d:
                    d = d_feat
                if drift == 0.0:
                    u = d / (6.0 * sigma)
                    h = u * u
                else:
                    ad = fabs(drift)
                    u = (sqrt(36.0 * sigma * sigma + 4.0 * ad * d)
                         - 6.0 * sigma) / (2.0 * ad)
                    h = u * u
                if h < dt:
                    h = dt
                elif h > dt * accel_cap:
                    h = dt * accel_cap

            t_next = t + h
            jump_now = False
            if j < n_jumps and jump_t[j] <= t_next:
                t_next = jump_t[j]
                jump_now = True
            if t_next > t_max:
                t_next = t_max
                jump_now = False
            delta = t_next - t

            # a hazard step consumes two normals (move + stop decision)
            if hazard_step and k + 1 >= n_normals:
                break
            z = normals[k]
            k += 1
            steps += 1.0
            steps_here += 1
            if z > 6.0 or z < -6.0:
                bigz += 1.0
            x_new = x + drift * delta + sigma * sqrt(delta) * z

            if in_band:
                L += delta / (2.0 * eps)
                if has_up:
                    up = _beval(ell, fplus, L, &cur)
                if has_down:
                    dmag = _beval(ell, fminus, L, &cur)
                    down = -dmag
                if hazard_step:
                    # exact stop intensity over this local-time tick, split
                    # by side; decided with one extra uniform from the stream
                    lam_up = 0.0
                    lam_dn = 0.0
                    if use_hup:
                        hv = _beval(ell, hup, L, &cur)
                        if up_gated:
                            lam_up = hv - big_h_up
                        big_h_up = hv
                    if use_hdn:
                        hv = _beval(ell, hdn, L, &cur)
                        if dn_gated:
                            lam_dn = hv - big_h_dn
                        big_h_dn = hv
                    z2 = normals[k]
                    k += 1
                    lam = lam_up + lam_dn
                    if lam > 0.0:
                        u = 0.5 * erfc(-z2 / sqrt(2.0))
                        p = 1.0 - exp(-lam)
                        if u < p:
                            # place the stop where the intensity accrued,
                            # not at the tick's end, or the steep head of
                            # the boundary piles stops onto a single value
                            if u * lam < p * lam_up:
                                frac = u * lam / (p * lam_up)
                                x = _h_locate(
                                    ell, hup, fplus,
                                    big_h_up - (1.0 - frac) * lam_up, &L)
                                status = 1
                            else:
                                frac = (u * lam - p * lam_up) / (p * lam_dn)
                                x = -_h_locate(
                                    ell, hdn, fminus,
                                    big_h_dn - (1.0 - frac) * lam_dn, &L)
                                status = 2
                            t = t_next
                            break

            if armed:
                if x_new >= arm_level:
                    t = t_next
                    x = arm_level
                    status = 2
                    break
            elif down_active and not dn_gated and x_new <= down:
                t = t_next
                x = down
                status = 2
                break
            if has_up and not up_gated and x_new >= up:
                t = t_next
                x = up
                status = 1
                break

            if -eps < x_new < eps:
                phase = 0
            elif phase == 0:
                phase = 1 if x_new > 0.0 else 2

            if jump_now:
                x_new += jump_s[j]
                j += 1
                if phase == 0 and x_new <= -eps:
                    phase = 2
                    amb += 1.0
                elif phase == 1 and -eps < x_new < eps:
                    phase = 0
                if rule == C_RULE_TILDE:
                    if phase == 2 and not armed and not dn_gated and x_new <= down:
                        armed = True
                        arm_level = down
                elif has_down and not dn_gated and x_new <= down:
                    t = t_next
                    x = x_new
                    status = 3
                    break

            if x_new > sup_x:
                sup_x = x_new
            t = t_next
            x = x_new

    if x > sup_x:
        sup_x = x

    state[0] = t
    state[1] = x
    state[2] = L
    state[3] = <double> j
    state[4] = <double> phase
    state[5] = 1.0 if armed else 0.0
    state[6] = arm_level
    state[7] = sup_x
    state[8] = <double> status
    state[9] = <double> cur
    state[10] = bigz
    state[11] = amb
    state[12] = steps
    return k
