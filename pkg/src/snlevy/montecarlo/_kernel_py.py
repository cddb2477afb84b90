"""Pure-Python path-advance kernel (reference implementation).

The compiled Cython kernel in ``_simcore`` implements exactly the same
algorithm and consumes the same random-number stream, so both backends
produce bit-identical paths; this module is the fallback selected at
import time when the extension is unavailable, and the ground truth the
extension is tested against.

The kernel advances one path until either the normal buffer is
exhausted or the path stops.  Increments of X are exact (Gaussian over
any step length; jump epochs hit exactly), so the step size only
controls event *detection*: it is the base ``dt`` inside the local-time
band, ``dt``/16 within the guard zone of an active stop level, and may
be stretched far away from all features, where the chance of reaching
any of them within one step is kept below the 6-sigma level (set
``accel_cap=1`` for a strict dt grid).

State vector layout (float64):
  0 t    1 x    2 L    3 jump index    4 phase (0 band, 1 pos, 2 neg)
  5 armed    6 arm_level    7 sup_x    8 status    9 cursor
  10 big-z count    11 ambiguous-sign count    12 step count

status: 0 running, 1 stopped upward (creep), 2 stopped downward at the
level (creep or armed return), 3 stopped downward by jump overshoot,
4 censored at t_max.
"""

from __future__ import annotations

import math

# rule codes
RULE_PLAIN = 0     # stop at first passage below -phi_-(L) (and creep up)
RULE_TILDE = 1     # downward stop only in negative excursions, with
                   # undershoot-wait for the continuous return to the level
RULE_ONESIDED = 2  # upward boundary only

IDX_T, IDX_X, IDX_L, IDX_J, IDX_PHASE, IDX_ARMED, IDX_ARM, IDX_SUP, \
    IDX_STATUS, IDX_CUR, IDX_BIGZ, IDX_AMB, IDX_STEPS = range(13)

STATE_SIZE = 13

_INF = math.inf


def _h_locate(ell, hvals, fvals, target):
    """Invert a cumulative-intensity table and read the boundary there.

    Returns (local time, boundary value) at the point where the
    cumulative intensity reaches ``target``; binary search, since the
    inversion may land before the kernel's forward-only cursor.
    """
    lo = 0
    hi = len(ell) - 1
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if hvals[mid] < target:
            lo = mid
        else:
            hi = mid
    dv = hvals[hi] - hvals[lo]
    w = (target - hvals[lo]) / dv if dv > 0.0 else 1.0
    if w < 0.0:
        w = 0.0
    elif w > 1.0:
        w = 1.0
    return (ell[lo] + w * (ell[hi] - ell[lo]),
            fvals[lo] + w * (fvals[hi] - fvals[lo]))


def _beval(ell, vals, L, cur):
    """Piecewise-linear evaluation with a monotone cursor, clamped ends."""
    n = len(ell)
    while cur + 1 < n and L > ell[cur + 1]:
        cur += 1
    if cur + 1 >= n:
        return vals[n - 1], cur
    e0 = ell[cur]
    if L <= e0:
        return vals[cur], cur
    w = (L - e0) / (ell[cur + 1] - e0)
    return vals[cur] + w * (vals[cur + 1] - vals[cur]), cur


def advance(state, normals, jump_t, jump_s,
            ell, fplus, fminus, hup, hdn, has_up, has_down, rule,
            sigma, drift, dt, eps, res_cut, t_max, accel_cap,
            max_steps=2 ** 62):
    """Advance one path; returns the number of normals consumed.

    ``hup``/``hdn`` are cumulative stopping intensities in the
    local-time clock, tabulated on ``ell``.  While a boundary sits
    below ``res_cut`` (the path-resolution scale) crossing it cannot
    be detected reliably, so stops on that side are drawn from the
    exact intensity increment over each local-time tick instead; path
    detection takes over once the boundary clears ``res_cut``.  Empty
    tables disable the mechanism for that side.
    """
    t = state[IDX_T]
    x = state[IDX_X]
    L = state[IDX_L]
    j = int(state[IDX_J])
    phase = int(state[IDX_PHASE])
    armed = state[IDX_ARMED] != 0.0
    arm_level = state[IDX_ARM]
    sup_x = state[IDX_SUP]
    cur = int(state[IDX_CUR])
    bigz = state[IDX_BIGZ]
    amb = state[IDX_AMB]
    steps = state[IDX_STEPS]

    n_normals = len(normals)
    n_jumps = len(jump_t)
    guard = 4.0 * sigma * math.sqrt(dt)
    fine_dt = dt / 16.0
    status = 0
    k = 0

    use_hup = has_up and len(hup) > 0
    use_hdn = has_down and len(hdn) > 0
    big_h_up = 0.0
    big_h_dn = 0.0

    if has_up:
        up, cur = _beval(ell, fplus, L, cur)
    else:
        up = _INF
    if has_down:
        dmag, cur = _beval(ell, fminus, L, cur)
        down = -dmag
    else:
        dmag = _INF
        down = -_INF
    if use_hup:
        big_h_up, cur = _beval(ell, hup, L, cur)
    if use_hdn:
        big_h_dn, cur = _beval(ell, hdn, L, cur)

    steps_here = 0

    while k < n_normals:
        if steps_here >= max_steps:
            break
        if t >= t_max:
            status = 4
            break

        down_active = has_down and (rule != RULE_TILDE or phase == 2 or armed)
        # boundaries are nondecreasing in L, so a gate that opens never
        # closes again and the cumulative-hazard bookkeeping stays exact
        up_gated = use_hup and up < res_cut
        dn_gated = use_hdn and dmag < res_cut

        # -- step-size selection --------------------------------------------
        # fine detection is keyed to the stop levels only; the local-time
        # band must not alter the step size across its edge, or the
        # estimator picks up an O(sqrt(dt)/eps) occupation bias
        in_band = -eps < x < eps
        hazard_step = in_band and (up_gated or dn_gated)
        d_feat = _INF
        if has_up and not up_gated and up - x < d_feat:
            d_feat = up - x
        if down_active:
            if armed:
                dd = abs(x - arm_level)
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
            d = abs(x) - eps  # distance to the local-time band
            if d_feat < d:
                d = d_feat
            # largest h with |drift|*h + 6*sigma*sqrt(h) <= d, so the
            # chance of touching a feature inside the step stays at
            # the 6-sigma level
            if drift == 0.0:
                u = d / (6.0 * sigma)
                h = u * u
            else:
                ad = abs(drift)
                u = (math.sqrt(36.0 * sigma * sigma + 4.0 * ad * d)
                     - 6.0 * sigma) / (2.0 * ad)
                h = u * u
            if h < dt:
                h = dt
            elif h > dt * accel_cap:
                h = dt * accel_cap

        # -- next event time --------------------------------------------------
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
        x_new = x + drift * delta + sigma * math.sqrt(delta) * z

        # local time accrues at the occupation rate while in the band
        if in_band:
            L += delta / (2.0 * eps)
            if has_up:
                up, cur = _beval(ell, fplus, L, cur)
            if has_down:
                dmag, cur = _beval(ell, fminus, L, cur)
                down = -dmag
            if hazard_step:
                # exact stop intensity over this local-time tick, split
                # by side; decided with one extra uniform from the stream
                lam_up = 0.0
                lam_dn = 0.0
                if use_hup:
                    hv, cur = _beval(ell, hup, L, cur)
                    if up_gated:
                        lam_up = hv - big_h_up
                    big_h_up = hv
                if use_hdn:
                    hv, cur = _beval(ell, hdn, L, cur)
                    if dn_gated:
                        lam_dn = hv - big_h_dn
                    big_h_dn = hv
                z2 = normals[k]
                k += 1
                lam = lam_up + lam_dn
                if lam > 0.0:
                    u = 0.5 * math.erfc(-z2 / math.sqrt(2.0))
                    p = 1.0 - math.exp(-lam)
                    if u < p:
                        # place the stop where the intensity accrued,
                        # not at the tick's end, or the steep head of
                        # the boundary piles stops onto a single value
                        if u * lam < p * lam_up:
                            frac = u * lam / (p * lam_up)
                            L, x = _h_locate(
                                ell, hup, fplus,
                                big_h_up - (1.0 - frac) * lam_up)
                            status = 1
                        else:
                            frac = (u * lam - p * lam_up) / (p * lam_dn)
                            L, x = _h_locate(
                                ell, hdn, fminus,
                                big_h_dn - (1.0 - frac) * lam_dn)
                            x = -x
                            status = 2
                        t = t_next
                        break

        # -- diffusive crossings hit levels exactly (no positive jumps) ------
        # the armed return level lies below any upward boundary, so it
        # is necessarily crossed first
        if armed:
            if x_new >= arm_level:
                t, x = t_next, arm_level
                status = 2
                break
        elif down_active and not dn_gated and x_new <= down:
            t, x = t_next, down
            status = 2
            break
        if has_up and not up_gated and x_new >= up:
            t, x = t_next, up
            status = 1
            break

        # -- phase transition from the diffusive move -------------------------
        if -eps < x_new < eps:
            phase = 0
        elif phase == 0:
            phase = 1 if x_new > 0.0 else 2

        # -- jump at this epoch ------------------------------------------------
        if jump_now:
            x_new += jump_s[j]  # jump_s < 0
            j += 1
            if phase == 0 and x_new <= -eps:
                # band exit straddling a jump: resolved as negative
                phase = 2
                amb += 1.0
            elif phase == 1 and -eps < x_new < eps:
                phase = 0
            if rule == RULE_TILDE:
                if phase == 2 and not armed and not dn_gated and x_new <= down:
                    armed = True
                    arm_level = down
            elif has_down and not dn_gated and x_new <= down:
                t, x = t_next, x_new
                status = 3
                break

        if x_new > sup_x:
            sup_x = x_new
        t = t_next
        x = x_new

    if x > sup_x:
        sup_x = x

    state[IDX_T] = t
    state[IDX_X] = x
    state[IDX_L] = L
    state[IDX_J] = float(j)
    state[IDX_PHASE] = float(phase)
    state[IDX_ARMED] = 1.0 if armed else 0.0
    state[IDX_ARM] = arm_level
    state[IDX_SUP] = sup_x
    state[IDX_STATUS] = float(status)
    state[IDX_CUR] = float(cur)
    state[IDX_BIGZ] = bigz
    state[IDX_AMB] = amb
    state[IDX_STEPS] = steps
    return k
