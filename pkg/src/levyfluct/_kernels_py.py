"""Pure-numpy simulation kernels (reference implementation).

The compiled extension `levyfluct._kernels` implements the same entry points
with identical random-draw protocols, so for a fixed per-path stream both
backends produce bit-identical paths.  Draw protocol per path:

1. kill time: one standard exponential (skipped in fixed-horizon mode),
2. jump count: one Poisson draw with mean rate * horizon,
3. jump times: `count` uniforms, jump sizes: `count` standard exponentials,
4. Gaussian cell increments: one standard normal per grid cell, drawn in one
   bulk call (free-running mode) or in blocks of `_BLOCK` (stop-at-level
   mode, where unused tail draws of the final block are discarded).

The conditioned-section integrator draws, per attempted sub-step, one normal
(block protocol) and, for jump models, one Poisson count plus that many
standard exponentials.
"""
from __future__ import annotations

import math

import numpy as np

_BLOCK = 4096

# summary row layout (see paths.SUMMARY_COLUMNS)
_S, _I, _HS, _HI, _MLOSS, _MGAIN, _POSTHI_SUP, _POSTHS_MLOSS, _KILL_T, \
    _TRUNCATED, _CROSSED, _TAU_B, _RHO_T, _I_AT_CROSS, _Z_PROBE = range(15)


def simulate_into(gen, drift, sigma, rate, eta, gamma, horizon_fixed, dt,
                  t_cap, stop_level, values):
    """Simulate one path into ``values``; return path metadata.

    Parameters
    ----------
    gen : np.random.Generator
        Per-path stream (the compiled twin takes the underlying bit
        generator's capsule instead).
    gamma : float
        Killing rate; 0 selects fixed-horizon mode using ``horizon_fixed``.
    stop_level : float
        Finite value enables stop-at-level mode: simulation halts at the
        first grid time whose value exceeds the level.  NaN disables.

    Returns
    -------
    (n_last, kill_time, horizon, truncated, crossed_idx)
        ``values[0 : n_last + 1]`` hold the path; ``crossed_idx`` is -1
        without a crossing, else the first index above ``stop_level``.
    """
    if gamma > 0.0:
        kill_time = gen.standard_exponential() / gamma
        truncated = kill_time > t_cap
        horizon = t_cap if truncated else kill_time
    else:
        kill_time = horizon_fixed
        truncated = False
        horizon = horizon_fixed

    n_full = int(math.floor(horizon / dt))
    rem = horizon - n_full * dt
    n_cells = n_full + 1 if rem > 0.0 else n_full
    n_cells = max(n_cells, 1)
    if n_cells + 1 > values.shape[0]:
        raise ValueError("values buffer too small for horizon/dt")

    widths = np.full(n_cells, dt)
    if rem > 0.0:
        widths[n_cells - 1] = rem

    jump_cells = jump_sizes = None
    if rate > 0.0:
        n_jumps = int(gen.poisson(rate * horizon))
        jump_u = gen.random(n_jumps)
        jump_e = gen.standard_exponential(n_jumps)
        jump_cells = np.minimum((jump_u * horizon / dt).astype(np.int64), n_cells - 1)
        jump_sizes = -jump_e / eta

    values[0] = 0.0
    if math.isnan(stop_level):
        xi = gen.standard_normal(n_cells)
        inc = drift * widths + sigma * np.sqrt(widths) * xi
        if jump_cells is not None:
            np.add.at(inc, jump_cells, jump_sizes)
        np.cumsum(inc, out=values[1:n_cells + 1])
        return n_cells, kill_time, horizon, truncated, -1

    # stop-at-level: consume normals in blocks, halt at first value > level
    jump_sums = np.zeros(n_cells)
    if jump_cells is not None:
        np.add.at(jump_sums, jump_cells, jump_sizes)
    pos = 0
    current = 0.0
    while pos < n_cells:
        take = min(_BLOCK, n_cells - pos)
        xi = gen.standard_normal(_BLOCK)[:take]
        w = widths[pos:pos + take]
        inc = drift * w + sigma * np.sqrt(w) * xi
        inc += jump_sums[pos:pos + take]
        inc[0] += current
        block = np.cumsum(inc)
        above = np.nonzero(block > stop_level)[0]
        if above.size:
            stop = int(above[0])
            values[pos + 1:pos + stop + 2] = block[:stop + 1]
            return pos + stop + 1, kill_time, horizon, truncated, pos + stop + 1
        values[pos + 1:pos + take + 1] = block
        current = block[-1]
        pos += take
    return n_cells, kill_time, horizon, truncated, -1


def summarize(values, n_last, dt, horizon, level_b, probe_steps, out):
    """Extract extremes and section statistics from one simulated path.

    Writes the 15-column summary row ``out``; time coordinates are grid
    times min(k * dt, horizon).  The crossing block (columns 10-14) is NaN
    unless ``level_b`` is finite and the path exceeds it.
    """
    v = values[:n_last + 1]
    runmax = np.maximum.accumulate(v)
    runmin = np.minimum.accumulate(v)
    hs_idx = n_last - int(np.argmax(v[::-1]))
    hi_idx = n_last - int(np.argmin(v[::-1]))

    out[_S] = runmax[-1]
    out[_I] = runmin[-1]
    out[_HS] = min(hs_idx * dt, horizon)
    out[_HI] = min(hi_idx * dt, horizon)
    out[_MLOSS] = np.max(runmax - v)
    out[_MGAIN] = np.max(v - runmin)
    out[_POSTHI_SUP] = np.max(v[hi_idx:])
    seg = v[hs_idx:]
    out[_POSTHS_MLOSS] = np.max(np.maximum.accumulate(seg) - seg)

    out[_CROSSED] = 0.0
    out[_TAU_B] = np.nan
    out[_RHO_T] = np.nan
    out[_I_AT_CROSS] = np.nan
    out[_Z_PROBE] = np.nan
    if not math.isnan(level_b):
        above = np.nonzero(v > level_b)[0]
        if above.size:
            ib = int(above[0])
            pre = v[:ib + 1]
            rho_idx = ib - int(np.argmin(pre[::-1]))
            out[_CROSSED] = 1.0
            out[_TAU_B] = min(ib * dt, horizon)
            out[_RHO_T] = min(rho_idx * dt, horizon)
            out[_I_AT_CROSS] = v[rho_idx]
            if probe_steps > 0 and rho_idx + probe_steps < ib:
                out[_Z_PROBE] = v[rho_idx + probe_steps] - v[rho_idx]
    return out


class _NormalBlocks:
    """Block-buffered standard normals matching the compiled protocol."""

    def __init__(self, gen):
        self.gen = gen
        self.buf = None
        self.pos = _BLOCK

    def next(self):
        if self.pos >= _BLOCK:
            self.buf = self.gen.standard_normal(_BLOCK)
            self.pos = 0
        x = self.buf[self.pos]
        self.pos += 1
        return float(x)


def _table_interp(table, h, x, n):
    ix = int(math.floor(x / h))
    if ix < 0:
        return table[0]
    if ix >= n - 1:
        return table[n - 1]
    frac = x / h - ix
    return table[ix] + frac * (table[ix + 1] - table[ix])


def post_rho_sde(gen, drift, sigma, rate, eta, h_table, w_table, wd_table,
                 j_table, level, eps, dt, t_cap, probe_steps, z_out,
                 max_halvings=60, max_substeps=4096):
    """Integrate the conditioned post-minimum dynamics from Z = eps.

    Euler steps of width dt with the singular repulsion drift
    sigma^2 W'(Z)/W(Z) plus, for jump models, the closed-form jump tilt term;
    raw jumps are drawn from the model's jump measure.  Near the entrance
    boundary a full step would overshoot (the drift grows like 1/Z), so a
    sub-step is halved, before drawing, until its deterministic move stays
    below a quarter of Z, and halved again, with a redraw, whenever the
    proposal lands where W < 1e-12 (at or below the boundary).  Sub-step
    widths restart from the remaining cell span after every acceptance, so
    they re-grow as Z leaves the boundary.  Paths exceeding the retry
    budgets are discarded.  Crossings of ``level`` are detected at cell ends
    only, mirroring the grid monitoring of directly simulated paths.

    Cell-end values are stored in ``z_out`` (z_out[0] = eps).  Returns
    (n_last, z_probe, crossed, cross_time, discarded).
    """
    blocks = _NormalBlocks(gen)
    n_tab = w_table.shape[0]
    has_jumps = rate > 0.0 and j_table is not None
    sig2 = sigma * sigma
    w_floor = 1e-12
    drift_cap = 0.25

    z = eps
    n_cells = int(math.ceil(t_cap / dt))
    if n_cells + 1 > z_out.shape[0]:
        raise ValueError("z_out buffer too small for t_cap/dt")
    z_out[0] = eps
    z_probe = np.nan
    for cell in range(1, n_cells + 1):
        remaining = dt
        substeps = 0
        while remaining > 1e-18 * dt:
            substeps += 1
            if substeps > max_substeps:
                return cell - 1, np.nan, False, np.nan, True
            w_here = _table_interp(w_table, h_table, z, n_tab)
            wd_here = _table_interp(wd_table, h_table, z, n_tab)
            total_drift = drift + sig2 * wd_here / w_here
            if has_jumps:
                j_here = _table_interp(j_table, h_table, z, n_tab)
                total_drift += rate * (eta * math.exp(-eta * z) * j_here / w_here - 1.0)
            step = remaining
            halvings = 0
            while total_drift * step > drift_cap * z:
                halvings += 1
                if halvings > max_halvings:
                    return cell - 1, np.nan, False, np.nan, True
                step *= 0.5
            while True:
                xi = blocks.next()
                jump_sum = 0.0
                if has_jumps:
                    n_j = int(gen.poisson(rate * step))
                    for _ in range(n_j):
                        jump_sum -= gen.standard_exponential() / eta
                z_new = (z + total_drift * step
                         + sigma * math.sqrt(step) * xi + jump_sum)
                if _table_interp(w_table, h_table, z_new, n_tab) >= w_floor:
                    z = z_new
                    remaining -= step
                    break
                halvings += 1
                if halvings > max_halvings:
                    return cell - 1, np.nan, False, np.nan, True
                step *= 0.5
        z_out[cell] = z
        if z > level:
            return cell, z_probe, True, cell * dt, False
        if cell == probe_steps:
            z_probe = z
    return n_cells, z_probe, False, np.nan, False
