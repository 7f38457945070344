"""Monte Carlo engine: killed paths, extremes, decomposition, conditioned SDE.

Paths are simulated on a uniform time grid with exact compound-Poisson jump
times binned into grid cells.  Every path owns a counter-based random stream
keyed by (seed, purpose, path index), so results are reproducible and
independent of worker scheduling; aggregation concatenates per-chunk outputs
in index order, making full experiment output bit-identical for a fixed seed
regardless of the worker count.
"""
from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass

import numpy as np

from ._backend import backend_name, get_kernels
from .models import LevyModel

SUMMARY_COLUMNS = (
    "sup", "inf", "h_sup", "h_inf", "max_loss", "max_gain",
    "post_hi_sup", "post_hs_max_loss", "kill_time", "truncated",
    "crossed", "tau_b", "rho", "i_at_cross", "z_probe",
)

# stream namespaces; packed into the high bits of the second Philox key word
PURPOSE_MAIN = 0
PURPOSE_TILT = 1
PURPOSE_SDE = 2
PURPOSE_AUX = 3


def worker_count(override=None):
    """Resolve the worker count: explicit override, else LEVYFLUCT_WORKERS, else CPUs."""
    if override is not None:
        return max(1, int(override))
    env = os.environ.get("LEVYFLUCT_WORKERS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


class PathStreams:
    """Counter-based per-path streams: one Philox rekeyed by (seed, purpose, index)."""

    def __init__(self, seed, purpose=PURPOSE_MAIN):
        if not 0 <= purpose < 256:
            raise ValueError(f"purpose must be in [0, 256), got {purpose}")
        self.seed = int(seed) % 2**64
        self.purpose = purpose
        self._bitgen = np.random.Philox(key=[self.seed, 0])
        self.generator = np.random.Generator(self._bitgen)
        self._state = self._bitgen.state
        self._key = self._state["state"]["key"]
        self._counter = self._state["state"]["counter"]

    def select(self, index):
        """Position the shared generator at the start of stream ``index``."""
        if not 0 <= index < 2**56:
            raise ValueError(f"path index out of range: {index}")
        self._key[1] = (self.purpose << 56) | index
        self._counter[:] = 0
        self._state["buffer_pos"] = 4
        self._state["has_uint32"] = 0
        self._state["uinteger"] = 0
        self._bitgen.state = self._state
        return self.generator


@dataclass
class SimConfig:
    """Simulation configuration for killed paths of one model."""

    model: LevyModel
    gamma: float
    dt: float
    n_paths: int
    seed: int
    t_cap: float | None = None

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not 0.0 < self.dt <= 1e-2:
            raise ValueError(f"dt must be in (0, 1e-2], got {self.dt}")
        if self.n_paths < 1:
            raise ValueError(f"n_paths must be >= 1, got {self.n_paths}")
        if self.t_cap is None:
            # P(T > t_cap) = exp(-10): truncation is rare and counted
            self.t_cap = 10.0 / self.gamma
        if self.t_cap < 10.0 / self.gamma - 1e-12:
            raise ValueError(
                f"t_cap must be >= 10/gamma = {10.0 / self.gamma}, got {self.t_cap}")

    @property
    def buffer_capacity(self):
        return int(math.ceil(self.t_cap / self.dt)) + 2

    def to_dict(self):
        return {"model": self.model.to_dict(), "gamma": self.gamma, "dt": self.dt,
                "n_paths": self.n_paths, "seed": self.seed, "t_cap": self.t_cap}

    @classmethod
    def from_dict(cls, data):
        return cls(model=LevyModel.from_dict(data["model"]), gamma=data["gamma"],
                   dt=data["dt"], n_paths=int(data["n_paths"]),
                   seed=int(data["seed"]), t_cap=data.get("t_cap"))


@dataclass
class SamplePath:
    """One simulated killed trajectory on the monitoring grid."""

    times: np.ndarray
    values: np.ndarray
    kill_time: float
    truncated: bool = False

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")


@dataclass
class PathExtremes:
    """Extremes and decomposition markers extracted from one path."""

    sup: float
    inf: float
    h_sup: float
    h_inf: float
    max_loss: float
    max_gain: float
    rho: float | None = None
    tau_b: float | None = None


@dataclass
class PathSegment:
    times: np.ndarray
    values: np.ndarray

    @property
    def duration(self):
        return float(self.times[-1]) if len(self.times) else 0.0


@dataclass
class PathDecomposition:
    pre_h_sup: PathSegment
    post_h_sup: PathSegment
    post_h_inf: PathSegment
    intermediate: PathSegment | None


def _model_params(model):
    jumps = model.jumps
    if jumps is None or jumps.rate == 0.0:
        return model.drift, model.sigma, 0.0, 1.0
    return model.drift, model.sigma, jumps.rate, jumps.eta


def simulate_path(cfg, path_index, backend=None):
    """Simulate killed path ``path_index``; deterministic in (seed, index)."""
    if not 0 <= path_index < cfg.n_paths:
        raise ValueError(f"path_index must be in [0, {cfg.n_paths}), got {path_index}")
    kern = get_kernels(backend)
    drift, sigma, rate, eta = _model_params(cfg.model)
    values = np.empty(cfg.buffer_capacity)
    gen = PathStreams(cfg.seed, PURPOSE_MAIN).select(path_index)
    n_last, kill_time, horizon, truncated, _ = kern.simulate_into(
        gen, drift, sigma, rate, eta, cfg.gamma, 0.0, cfg.dt, cfg.t_cap,
        math.nan, values)
    times = np.minimum(np.arange(n_last + 1) * cfg.dt, horizon)
    return SamplePath(times=times, values=values[:n_last + 1].copy(),
                      kill_time=kill_time, truncated=bool(truncated))


def extremes_of(path, b=None):
    """Extremes, last-attain times, drawdown/drawup, and (optionally) the
    last exit time from the pre-crossing infimum for a level ``b``.

    Last-attain convention: h_sup and h_inf are the largest grid times at
    which the path equals its running supremum / infimum.
    """
    v = np.asarray(path.values, dtype=float)
    t = np.asarray(path.times, dtype=float)
    n_last = v.size - 1
    runmax = np.maximum.accumulate(v)
    runmin = np.minimum.accumulate(v)
    hs_idx = n_last - int(np.argmax(v[::-1]))
    hi_idx = n_last - int(np.argmin(v[::-1]))
    out = PathExtremes(
        sup=float(runmax[-1]), inf=float(runmin[-1]),
        h_sup=float(t[hs_idx]), h_inf=float(t[hi_idx]),
        max_loss=float(np.max(runmax - v)), max_gain=float(np.max(v - runmin)))
    if b is not None:
        above = np.nonzero(v > b)[0]
        if above.size:
            ib = int(above[0])
            pre = v[:ib + 1]
            rho_idx = ib - int(np.argmin(pre[::-1]))
            out.rho = float(t[rho_idx])
            out.tau_b = float(t[ib])
    return out


def decompose_at_extremes(path, extremes):
    """Split a path at its last supremum / infimum attain times.

    Segment times are rebased to start at zero; values stay absolute.  The
    intermediate section (between the infimum and supremum times) is present
    only when the infimum is attained first.
    """
    t, v = path.times, path.values
    ks = int(np.searchsorted(t, extremes.h_sup))
    ki = int(np.searchsorted(t, extremes.h_inf))

    def seg(lo, hi):
        return PathSegment(times=t[lo:hi + 1] - t[lo], values=v[lo:hi + 1].copy())

    intermediate = seg(ki, ks) if extremes.h_inf < extremes.h_sup else None
    return PathDecomposition(
        pre_h_sup=seg(0, ks),
        post_h_sup=seg(ks, len(t) - 1),
        post_h_inf=seg(ki, len(t) - 1),
        intermediate=intermediate,
    )


class PathSummaries:
    """Column view over per-path summary rows (one row per path)."""

    def __init__(self, data, level_b=None, probe_lag=None):
        self.data = data
        self.level_b = level_b
        self.probe_lag = probe_lag

    def __len__(self):
        return self.data.shape[0]

    def column(self, name):
        return self.data[:, SUMMARY_COLUMNS.index(name)]

    @property
    def sup(self):
        return self.column("sup")

    @property
    def inf(self):
        return self.column("inf")

    @property
    def h_sup(self):
        return self.column("h_sup")

    @property
    def h_inf(self):
        return self.column("h_inf")

    @property
    def max_loss(self):
        return self.column("max_loss")

    @property
    def max_gain(self):
        return self.column("max_gain")

    @property
    def post_hi_sup(self):
        return self.column("post_hi_sup")

    @property
    def post_hs_max_loss(self):
        return self.column("post_hs_max_loss")

    @property
    def kill_time(self):
        return self.column("kill_time")

    @property
    def truncated(self):
        return self.column("truncated") > 0.5

    @property
    def crossed(self):
        return self.column("crossed") > 0.5

    @property
    def tau_b(self):
        return self.column("tau_b")

    @property
    def rho(self):
        return self.column("rho")

    @property
    def i_at_cross(self):
        return self.column("i_at_cross")

    @property
    def z_probe(self):
        return self.column("z_probe")

    @property
    def n_truncated(self):
        return int(np.count_nonzero(self.truncated))

    @property
    def valid(self):
        """Mask of paths usable for estimates (horizon not capped)."""
        return ~self.truncated


def _chunk_ranges(n, workers):
    n_chunks = min(n, max(1, workers * 4))
    edges = np.linspace(0, n, n_chunks + 1, dtype=int)
    return [(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]


def _summary_chunk(args):
    (backend, model_dict, gamma, dt, t_cap, seed, lo, hi, level_b,
     probe_steps, capacity) = args
    kern = get_kernels(backend)
    model = LevyModel.from_dict(model_dict)
    drift, sigma, rate, eta = _model_params(model)
    streams = PathStreams(seed, PURPOSE_MAIN)
    values = np.empty(capacity)
    rows = np.empty((hi - lo, len(SUMMARY_COLUMNS)))
    for i in range(lo, hi):
        gen = streams.select(i)
        n_last, kill_time, horizon, truncated, _ = kern.simulate_into(
            gen, drift, sigma, rate, eta, gamma, 0.0, dt, t_cap, math.nan, values)
        row = rows[i - lo]
        kern.summarize(values, n_last, dt, horizon, level_b, probe_steps, row)
        row[8] = kill_time
        row[9] = 1.0 if truncated else 0.0
    return rows


def _run_chunks(worker, payloads, workers):
    if workers <= 1 or len(payloads) <= 1:
        return [worker(p) for p in payloads]
    with multiprocessing.Pool(processes=workers) as pool:
        return pool.map(worker, payloads)


def path_summaries(cfg, level_b=None, probe_lag=None, workers=None, backend=None):
    """Simulate all paths of ``cfg`` and collect per-path summary rows.

    ``level_b`` enables the crossing block (first passage above b, last exit
    from the pre-crossing infimum); ``probe_lag`` additionally samples the
    post-exit value that much time after the exit.
    """
    workers = worker_count(workers)
    backend = backend_name(backend)
    probe_steps = 0
    if probe_lag is not None:
        probe_steps = int(round(probe_lag / cfg.dt))
        if probe_steps < 1:
            raise ValueError("probe_lag must be at least one grid step")
    level = math.nan if level_b is None else float(level_b)
    payloads = [
        (backend, cfg.model.to_dict(), cfg.gamma, cfg.dt, cfg.t_cap, cfg.seed,
         lo, hi, level, probe_steps, cfg.buffer_capacity)
        for lo, hi in _chunk_ranges(cfg.n_paths, workers)
    ]
    chunks = _run_chunks(_summary_chunk, payloads, workers)
    data = np.concatenate(chunks, axis=0)
    return PathSummaries(data, level_b=level_b, probe_lag=probe_lag)


def dump_summaries_csv(summaries, destination):
    """Write per-path rows as CSV (schema: seed_index,T,S,I,HS,HI,Mloss,Mgain,rho,truncated)."""
    rows = []
    rho = summaries.rho
    for i in range(len(summaries)):
        rho_txt = "" if math.isnan(rho[i]) else format(rho[i], ".12g")
        rows.append(",".join([
            str(i),
            format(summaries.kill_time[i], ".12g"),
            format(summaries.sup[i], ".12g"),
            format(summaries.inf[i], ".12g"),
            format(summaries.h_sup[i], ".12g"),
            format(summaries.h_inf[i], ".12g"),
            format(summaries.max_loss[i], ".12g"),
            format(summaries.max_gain[i], ".12g"),
            rho_txt,
            "true" if summaries.truncated[i] else "false",
        ]))
    text = "seed_index,T,S,I,HS,HI,Mloss,Mgain,rho,truncated\n" + "\n".join(rows) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w") as fh:
            fh.write(text)


def simulate_fixed_horizon(model, horizon, dt, seed, index, stop_level=None,
                           purpose=PURPOSE_TILT, backend=None):
    """Unkilled path on [0, horizon], optionally stopped at a level crossing.

    Returns (values, n_last, crossed_idx); values[0 : n_last + 1] are the
    grid samples, crossed_idx is -1 when no crossing happened.
    """
    kern = get_kernels(backend)
    drift, sigma, rate, eta = _model_params(model)
    capacity = int(math.ceil(horizon / dt)) + 2
    values = np.empty(capacity)
    gen = PathStreams(seed, purpose).select(index)
    stop = math.nan if stop_level is None else float(stop_level)
    n_last, _, _, _, crossed_idx = kern.simulate_into(
        gen, drift, sigma, rate, eta, 0.0, horizon, dt, horizon, stop, values)
    return values[:n_last + 1], n_last, crossed_idx


def simulate_post_rho(ev, cfg, level, eps=None, path_index=0, backend=None):
    """One weak-solution path of the conditioned post-minimum dynamics.

    Starts at ``eps`` above the entrance boundary (default 1e-3 * level) and
    runs until the level is exceeded or cfg.t_cap elapses.  Returns
    (segment, crossed, discarded).
    """
    if not 0 < level <= ev.x_max:
        raise ValueError(f"level must be in (0, x_max], got {level}")
    if eps is None:
        eps = 1e-3 * level
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    kern = get_kernels(backend)
    drift, sigma, rate, eta = _model_params(cfg.model)
    h_tab, w_tab, wd_tab, j_tab = ev.drift_tables()
    z_out = np.empty(int(math.ceil(cfg.t_cap / cfg.dt)) + 2)
    gen = PathStreams(cfg.seed, PURPOSE_SDE).select(path_index)
    n_last, _, crossed, _, discarded = kern.post_rho_sde(
        gen, drift, sigma, rate, eta, h_tab, w_tab, wd_tab, j_tab,
        level, eps, cfg.dt, cfg.t_cap, 0, z_out)
    seg = PathSegment(times=np.arange(n_last + 1) * cfg.dt,
                      values=z_out[:n_last + 1].copy())
    return seg, bool(crossed), bool(discarded)


def _post_rho_chunk(args):
    (backend, model_dict, gamma, dt, t_cap, seed, lo, hi, level, eps,
     probe_steps, h_tab, w_tab, wd_tab, j_tab) = args
    kern = get_kernels(backend)
    model = LevyModel.from_dict(model_dict)
    drift, sigma, rate, eta = _model_params(model)
    streams = PathStreams(seed, PURPOSE_SDE)
    z_out = np.empty(int(math.ceil(t_cap / dt)) + 2)
    probes = np.empty(hi - lo)
    flags = np.empty((hi - lo, 2))
    for i in range(lo, hi):
        gen = streams.select(i)
        _, z_probe, crossed, _, discarded = kern.post_rho_sde(
            gen, drift, sigma, rate, eta, h_tab, w_tab, wd_tab, j_tab,
            level, eps, dt, t_cap, probe_steps, z_out)
        probes[i - lo] = z_probe
        flags[i - lo] = (1.0 if crossed else 0.0, 1.0 if discarded else 0.0)
    return probes, flags


def post_rho_probe_samples(ev, cfg, level, eps, n_paths, probe_lag,
                           workers=None, backend=None):
    """Marginal samples of the conditioned dynamics at time ``probe_lag``.

    Paths that crossed ``level`` before the probe time yield no sample
    (mirroring direct-path sections shorter than the probe).  Returns
    (samples, n_crossed, n_discarded).
    """
    workers = worker_count(workers)
    backend = backend_name(backend)
    probe_steps = int(round(probe_lag / cfg.dt))
    if probe_steps < 1:
        raise ValueError("probe_lag must be at least one grid step")
    h_tab, w_tab, wd_tab, j_tab = ev.drift_tables()
    payloads = [
        (backend, cfg.model.to_dict(), cfg.gamma, cfg.dt, cfg.t_cap, cfg.seed,
         lo, hi, level, eps, probe_steps, h_tab, w_tab, wd_tab, j_tab)
        for lo, hi in _chunk_ranges(n_paths, workers)
    ]
    outs = _run_chunks(_post_rho_chunk, payloads, workers)
    probes = np.concatenate([o[0] for o in outs])
    flags = np.concatenate([o[1] for o in outs], axis=0)
    samples = probes[~np.isnan(probes)]
    return samples, int(flags[:, 0].sum()), int(flags[:, 1].sum())
