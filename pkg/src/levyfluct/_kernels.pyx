# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernels.

Twin of `_kernels_py`: same entry points, same per-path random-draw protocol
(see that module's docstring), so both backends produce bit-identical paths
for the same stream.  The underlying distribution routines are numpy's own
C implementations, which is what makes the streams interchangeable with
`numpy.random.Generator` method calls.
"""
import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport NAN, ceil, exp, floor, isnan, sqrt
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (random_poisson,
                                           random_standard_exponential,
                                           random_standard_normal,
                                           random_standard_uniform)

DEF BLOCK = 4096

# summary row layout (see paths.SUMMARY_COLUMNS)
DEF COL_S = 0
DEF COL_I = 1
DEF COL_HS = 2
DEF COL_HI = 3
DEF COL_MLOSS = 4
DEF COL_MGAIN = 5
DEF COL_POSTHI_SUP = 6
DEF COL_POSTHS_MLOSS = 7
DEF COL_CROSSED = 10
DEF COL_TAU_B = 11
DEF COL_RHO_T = 12
DEF COL_I_AT_CROSS = 13
DEF COL_Z_PROBE = 14


cdef bitgen_t *_bitgen(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("invalid BitGenerator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def simulate_into(object gen, double drift, double sigma, double rate,
                  double eta, double gamma, double horizon_fixed, double dt,
                  double t_cap, double stop_level, double[::1] values):
    """See `_kernels_py.simulate_into`."""
    cdef bitgen_t *rng = _bitgen(gen)
    cdef double kill_time, horizon, rem, w, cur, inc0
    cdef bint truncated
    cdef Py_ssize_t n_full, n_cells, k, j, n_jumps, cell, pos, take, bi
    cdef double[::1] jump_u, jump_e, jump_sums
    cdef Py_ssize_t[::1] jump_cells
    cdef double block_buf[BLOCK]

    if gamma > 0.0:
        kill_time = random_standard_exponential(rng) / gamma
        truncated = kill_time > t_cap
        horizon = t_cap if truncated else kill_time
    else:
        kill_time = horizon_fixed
        truncated = False
        horizon = horizon_fixed

    n_full = <Py_ssize_t> floor(horizon / dt)
    rem = horizon - n_full * dt
    n_cells = n_full + 1 if rem > 0.0 else n_full
    if n_cells < 1:
        n_cells = 1
    if n_cells + 1 > values.shape[0]:
        raise ValueError("values buffer too small for horizon/dt")

    n_jumps = 0
    jump_cells = None
    jump_e = None
    if rate > 0.0:
        n_jumps = <Py_ssize_t> random_poisson(rng, rate * horizon)
        jump_u = np.empty(n_jumps)
        jump_e = np.empty(n_jumps)
        jump_cells = np.empty(n_jumps, dtype=np.intp)
        for j in range(n_jumps):
            jump_u[j] = random_standard_uniform(rng)
        for j in range(n_jumps):
            jump_e[j] = random_standard_exponential(rng)
        for j in range(n_jumps):
            cell = <Py_ssize_t> (jump_u[j] * horizon / dt)
            if cell > n_cells - 1:
                cell = n_cells - 1
            jump_cells[j] = cell

    values[0] = 0.0
    if isnan(stop_level):
        # free-running: bulk normals, increments in place, prefix sum
        for k in range(n_cells):
            w = rem if (rem > 0.0 and k == n_cells - 1) else dt
            values[k + 1] = drift * w + sigma * sqrt(w) * random_standard_normal(rng)
        for j in range(n_jumps):
            values[jump_cells[j] + 1] += -jump_e[j] / eta
        for k in range(1, n_cells + 1):
            values[k] += values[k - 1]
        return n_cells, kill_time, horizon, truncated, -1

    # stop-at-level: block-buffered normals, halt at first value > level
    jump_sums = np.zeros(n_cells)
    for j in range(n_jumps):
        jump_sums[jump_cells[j]] += -jump_e[j] / eta
    pos = 0
    cur = 0.0
    while pos < n_cells:
        take = n_cells - pos
        if take > BLOCK:
            take = BLOCK
        for bi in range(BLOCK):
            block_buf[bi] = random_standard_normal(rng)
        for bi in range(take):
            k = pos + bi
            w = rem if (rem > 0.0 and k == n_cells - 1) else dt
            inc0 = drift * w + sigma * sqrt(w) * block_buf[bi] + jump_sums[k]
            cur = cur + inc0
            values[k + 1] = cur
            if cur > stop_level:
                return k + 1, kill_time, horizon, truncated, k + 1
        pos += take
    return n_cells, kill_time, horizon, truncated, -1


def summarize(double[::1] values, Py_ssize_t n_last, double dt, double horizon,
              double level_b, Py_ssize_t probe_steps, double[::1] out):
    """See `_kernels_py.summarize`."""
    cdef Py_ssize_t k, hs_idx, hi_idx, ib, rho_idx
    cdef double v, cur_max, cur_min, mloss, mgain, dd, du, t
    cdef double seg_max, seg_dd, post_sup, pre_min

    cur_max = values[0]
    cur_min = values[0]
    hs_idx = 0
    hi_idx = 0
    mloss = 0.0
    mgain = 0.0
    for k in range(n_last + 1):
        v = values[k]
        if v >= cur_max:
            cur_max = v
            hs_idx = k
        if v <= cur_min:
            cur_min = v
            hi_idx = k
        dd = cur_max - v
        if dd > mloss:
            mloss = dd
        du = v - cur_min
        if du > mgain:
            mgain = du

    out[COL_S] = cur_max
    out[COL_I] = cur_min
    t = hs_idx * dt
    out[COL_HS] = horizon if t > horizon else t
    t = hi_idx * dt
    out[COL_HI] = horizon if t > horizon else t
    out[COL_MLOSS] = mloss
    out[COL_MGAIN] = mgain

    post_sup = values[hi_idx]
    for k in range(hi_idx, n_last + 1):
        if values[k] > post_sup:
            post_sup = values[k]
    out[COL_POSTHI_SUP] = post_sup

    seg_max = values[hs_idx]
    seg_dd = 0.0
    for k in range(hs_idx, n_last + 1):
        v = values[k]
        if v > seg_max:
            seg_max = v
        dd = seg_max - v
        if dd > seg_dd:
            seg_dd = dd
    out[COL_POSTHS_MLOSS] = seg_dd

    out[COL_CROSSED] = 0.0
    out[COL_TAU_B] = NAN
    out[COL_RHO_T] = NAN
    out[COL_I_AT_CROSS] = NAN
    out[COL_Z_PROBE] = NAN
    if not isnan(level_b):
        ib = -1
        for k in range(n_last + 1):
            if values[k] > level_b:
                ib = k
                break
        if ib >= 0:
            pre_min = values[0]
            rho_idx = 0
            for k in range(ib + 1):
                if values[k] <= pre_min:
                    pre_min = values[k]
                    rho_idx = k
            out[COL_CROSSED] = 1.0
            t = ib * dt
            out[COL_TAU_B] = horizon if t > horizon else t
            t = rho_idx * dt
            out[COL_RHO_T] = horizon if t > horizon else t
            out[COL_I_AT_CROSS] = values[rho_idx]
            if probe_steps > 0 and rho_idx + probe_steps < ib:
                out[COL_Z_PROBE] = values[rho_idx + probe_steps] - values[rho_idx]
    return out


cdef inline double _table_interp(double[::1] table, double h, double x,
                                 Py_ssize_t n):
    cdef Py_ssize_t ix = <Py_ssize_t> floor(x / h)
    cdef double frac
    if ix < 0:
        return table[0]
    if ix >= n - 1:
        return table[n - 1]
    frac = x / h - ix
    return table[ix] + frac * (table[ix + 1] - table[ix])


def post_rho_sde(object gen, double drift, double sigma, double rate,
                 double eta, double h_table, double[::1] w_table,
                 double[::1] wd_table, object j_table, double level,
                 double eps, double dt, double t_cap, Py_ssize_t probe_steps,
                 double[::1] z_out, Py_ssize_t max_halvings=60,
                 Py_ssize_t max_substeps=4096):
    """See `_kernels_py.post_rho_sde`."""
    cdef bitgen_t *rng = _bitgen(gen)
    cdef Py_ssize_t n_tab = w_table.shape[0]
    cdef bint has_jumps = rate > 0.0 and j_table is not None
    cdef double[::1] j_view = j_table if has_jumps else w_table
    cdef double sig2 = sigma * sigma
    cdef double w_floor = 1e-12
    cdef double drift_cap = 0.25
    cdef double z = eps
    cdef double z_probe = NAN
    cdef Py_ssize_t n_cells = <Py_ssize_t> ceil(t_cap / dt)
    cdef Py_ssize_t cell, halvings, substeps, n_j, jj, bpos
    cdef double remaining, step, w_here, wd_here, j_here
    cdef double total_drift, jump_sum, xi, z_new
    cdef bint accepted
    cdef double block_buf[BLOCK]

    if n_cells + 1 > z_out.shape[0]:
        raise ValueError("z_out buffer too small for t_cap/dt")
    z_out[0] = eps
    bpos = BLOCK
    for cell in range(1, n_cells + 1):
        remaining = dt
        substeps = 0
        while remaining > 1e-18 * dt:
            substeps += 1
            if substeps > max_substeps:
                return cell - 1, NAN, False, NAN, True
            w_here = _table_interp(w_table, h_table, z, n_tab)
            wd_here = _table_interp(wd_table, h_table, z, n_tab)
            total_drift = drift + sig2 * wd_here / w_here
            if has_jumps:
                j_here = _table_interp(j_view, h_table, z, n_tab)
                total_drift += rate * (eta * exp(-eta * z) * j_here / w_here - 1.0)
            step = remaining
            halvings = 0
            while total_drift * step > drift_cap * z:
                halvings += 1
                if halvings > max_halvings:
                    return cell - 1, NAN, False, NAN, True
                step *= 0.5
            accepted = False
            while not accepted:
                if bpos >= BLOCK:
                    for jj in range(BLOCK):
                        block_buf[jj] = random_standard_normal(rng)
                    bpos = 0
                xi = block_buf[bpos]
                bpos += 1
                jump_sum = 0.0
                if has_jumps:
                    n_j = <Py_ssize_t> random_poisson(rng, rate * step)
                    for jj in range(n_j):
                        jump_sum -= random_standard_exponential(rng) / eta
                z_new = (z + total_drift * step
                         + sigma * sqrt(step) * xi + jump_sum)
                if _table_interp(w_table, h_table, z_new, n_tab) >= w_floor:
                    z = z_new
                    remaining -= step
                    accepted = True
                else:
                    halvings += 1
                    if halvings > max_halvings:
                        return cell - 1, NAN, False, NAN, True
                    step *= 0.5
        z_out[cell] = z
        if z > level:
            return cell, z_probe, True, cell * dt, False
        if cell == probe_steps:
            z_probe = z
    return n_cells, z_probe, False, NAN, False
