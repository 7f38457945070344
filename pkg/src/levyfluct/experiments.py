"""Named verification experiments: analytic formulas against Monte Carlo.

Each experiment simulates once, evaluates the relevant identity on a
parameter grid, and reports per-point gaps with pass/fail against its
tolerance.  Conditional laws are verified by hard binning: paths whose
extremes land within half-widths (delta_a, delta_b) of the target levels
form the conditional sample; experiments refuse to run on underpopulated
bins instead of silently reporting noise.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson

from . import fluctuation as fl
from ._backend import backend_name, get_kernels
from .models import LevyModel, brownian, CompoundPoissonExp
from .paths import (PURPOSE_MAIN, PURPOSE_TILT, PathStreams, SimConfig,
                    _chunk_ranges, _model_params, _run_chunks,
                    dump_summaries_csv, path_summaries,
                    post_rho_probe_samples, worker_count)
from .scale import build_evaluator
from .statistics import ks_statistic, ks_two_sample

EXPERIMENT_NAMES = ("scale_selftest", "joint_law", "sup_marginal",
                    "post_inf_sup", "max_loss_post_sup", "esscher_presup",
                    "post_rho_sde")


class InsufficientSampleError(RuntimeError):
    """A conditioning bin holds fewer paths than the required minimum."""


@dataclass
class ExperimentSpec:
    """Configuration of one named experiment (JSON-serializable)."""

    name: str
    model: LevyModel
    gamma: float
    dt: float = 1e-3
    n_paths: int = 10_000
    seed: int = 0
    a_values: tuple = ()
    b_values: tuple = ()
    d_values: tuple = ()
    delta_a: float = 0.05
    delta_b: float = 0.05
    tolerance: float = 0.05
    min_bin_count: int = 500
    x_max: float = 6.0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in EXPERIMENT_NAMES:
            raise ValueError(f"unknown experiment {self.name!r}; "
                             f"expected one of {EXPERIMENT_NAMES}")
        self.a_values = tuple(float(a) for a in self.a_values)
        self.b_values = tuple(float(b) for b in self.b_values)
        self.d_values = tuple(float(d) for d in self.d_values)
        if (self.a_values or self.b_values) and self.delta_a <= 0:
            raise ValueError("delta_a must be > 0 for conditioning experiments")
        # canonical JSON form (tuples become lists) so specs round-trip
        self.options = json.loads(json.dumps(self.options))

    def to_dict(self):
        out = {"name": self.name, "model": self.model.to_dict(),
               "gamma": self.gamma, "dt": self.dt, "n_paths": self.n_paths,
               "seed": self.seed, "a_values": list(self.a_values),
               "b_values": list(self.b_values), "d_values": list(self.d_values),
               "delta_a": self.delta_a, "delta_b": self.delta_b,
               "tolerance": self.tolerance, "min_bin_count": self.min_bin_count,
               "x_max": self.x_max, "options": self.options}
        return out

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["model"] = LevyModel.from_dict(data["model"])
        for key in ("a_values", "b_values", "d_values"):
            if key in data:
                data[key] = tuple(data[key])
        return cls(**data)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass
class ReportRow:
    label: str
    analytic: float
    empirical: float
    n_samples: int
    tolerance: float
    passed: bool

    @property
    def abs_gap(self):
        return abs(self.analytic - self.empirical)


@dataclass
class ExperimentReport:
    spec: dict
    rows: list
    summary: dict
    runtime_s: float
    n_truncated: int = 0

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    @property
    def max_gap(self):
        return max((r.abs_gap for r in self.rows), default=0.0)

    def to_csv(self):
        lines = ["experiment,label,analytic,empirical,n_samples,abs_gap,tolerance,passed"]
        name = self.spec["name"]
        for r in self.rows:
            lines.append(",".join([
                name, r.label, format(r.analytic, ".12g"),
                format(r.empirical, ".12g"), str(r.n_samples),
                format(r.abs_gap, ".12g"), format(r.tolerance, ".12g"),
                "true" if r.passed else "false"]))
        return "\n".join(lines) + "\n"

    def summary_text(self):
        lines = [f"experiment: {self.spec['name']}",
                 f"spec: {json.dumps(self.spec, sort_keys=True)}",
                 f"rows: {len(self.rows)}",
                 f"max abs gap: {self.max_gap:.6g}",
                 f"truncated paths: {self.n_truncated}",
                 f"runtime: {self.runtime_s:.2f} s"]
        for key in sorted(self.summary):
            lines.append(f"{key}: {self.summary[key]}")
        for r in self.rows:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"  [{status}] {r.label}: analytic={r.analytic:.6g} "
                         f"empirical={r.empirical:.6g} gap={r.abs_gap:.3g} "
                         f"tol={r.tolerance:g} n={r.n_samples}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def emit_report(report, out_dir):
    """Write report.csv and summary.txt under ``out_dir``; returns their paths.

    The CSV holds only seed-determined data, so re-running the same spec
    reproduces it byte for byte regardless of worker count.
    """
    import os

    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "report.csv")
    txt_path = os.path.join(out_dir, "summary.txt")
    with open(csv_path, "w") as fh:
        fh.write(report.to_csv())
    with open(txt_path, "w") as fh:
        fh.write(report.summary_text())
    return csv_path, txt_path


# ---------------------------------------------------------------------------
# experiment implementations
# ---------------------------------------------------------------------------

def _scale_selftest(spec, workers, backend):
    rel_laplace = spec.options.get("laplace_rtol", 1e-4)
    z_tol = spec.options.get("z_abs_tol", 1e-8)
    inv_rtol = spec.options.get("inversion_rtol", 1e-6)
    big_x = spec.options.get("laplace_x_max", 40.0)
    big_h = spec.options.get("laplace_h_grid", 2e-3)
    rows = []

    # truncated Laplace transform of W against 1/(psi - gamma), in damped
    # form so the integrand stays O(1) out to large x
    ev_big = build_evaluator(spec.model, spec.gamma, x_max=big_x, h_grid=big_h)
    for shift in (0.5, 1.0, 2.0):
        lam = ev_big.phi + shift
        integrand = np.exp((ev_big.phi - lam) * ev_big.xs) * ev_big.damped_grid
        got = float(cumulative_simpson(integrand, dx=ev_big.h_grid, initial=0.0)[-1])
        want = 1.0 / (spec.model.psi(lam) - spec.gamma)
        rel = abs(got - want) / abs(want)
        rows.append(ReportRow(f"laplace_identity_shift={shift:g}", want, got,
                              ev_big.xs.size, rel_laplace, rel <= rel_laplace))

    # Z - 1 - gamma * Simpson(W) on the desk-scale grid
    ev = build_evaluator(spec.model, spec.gamma, x_max=min(spec.x_max, 5.0))
    quad = cumulative_simpson(ev.w_grid, dx=ev.h_grid, initial=0.0)
    dev = float(np.max(np.abs(ev.z_grid - 1.0 - ev.gamma * quad)))
    rows.append(ReportRow("z_quadrature_consistency", 0.0, dev,
                          ev.xs.size, z_tol, dev <= z_tol))

    # closed form against forced inversion (jump-free models only)
    if spec.model.jumps is None or spec.model.jumps.rate == 0.0:
        ev_inv = build_evaluator(spec.model, spec.gamma,
                                 x_max=min(spec.x_max, 5.5), method="inversion")
        xs = np.linspace(0.01, 5.0, 500)
        rel = float(np.max(np.abs(ev_inv.w(xs) - ev.w(np.minimum(xs, ev.x_max)))
                           / ev.w(np.minimum(xs, ev.x_max))))
        rows.append(ReportRow("closed_vs_inversion", 0.0, rel,
                              xs.size, inv_rtol, rel <= inv_rtol))
    return rows, {"method": ev.method}, 0


def _joint_law(spec, workers, backend):
    span_max = max(spec.b_values) - min(spec.a_values)
    ev = build_evaluator(spec.model, spec.gamma, x_max=span_max + 2.0)
    cfg = SimConfig(model=spec.model, gamma=spec.gamma, dt=spec.dt,
                    n_paths=spec.n_paths, seed=spec.seed)
    s = path_summaries(cfg, workers=workers, backend=backend)
    ok = s.valid
    n = int(np.count_nonzero(ok))
    sup, inf = s.sup[ok], s.inf[ok]
    rows = []
    for a in spec.a_values:
        for b in spec.b_values:
            analytic = fl.joint_sup_inf_cdf(ev, fl.Window(a, b))
            empirical = float(np.mean((inf > a) & (sup < b)))
            gap = abs(analytic - empirical)
            rows.append(ReportRow(f"a={a:g};b={b:g}", analytic, empirical, n,
                                  spec.tolerance, gap <= spec.tolerance))
    return rows, {}, s.n_truncated, s


def _sup_marginal(spec, workers, backend):
    dt_levels = tuple(spec.options.get("dt_levels", (spec.dt, spec.dt / 2.0)))
    mean_rtol = spec.options.get("mean_rtol", 0.02)
    phi = spec.model.phi(spec.gamma)
    rows = []
    ks_values = []
    n_trunc = 0
    first_summaries = None
    for dt in dt_levels:
        cfg = SimConfig(model=spec.model, gamma=spec.gamma, dt=dt,
                        n_paths=spec.n_paths, seed=spec.seed)
        s = path_summaries(cfg, workers=workers, backend=backend)
        if first_summaries is None:
            first_summaries = s
        n_trunc += s.n_truncated
        sup = s.sup[s.valid]
        ks = ks_statistic(lambda x: -np.expm1(-phi * x), sup)
        ks_values.append(ks)
        rows.append(ReportRow(f"ks_exponential_dt={dt:g}", 0.0, ks, sup.size,
                              spec.tolerance, ks <= spec.tolerance))
        if dt == dt_levels[0]:
            mean = float(np.mean(sup))
            want = 1.0 / phi
            rows.append(ReportRow("mean_sup", want, mean, sup.size,
                                  mean_rtol, abs(mean - want) / want <= mean_rtol))
    if len(ks_values) >= 2:
        diff = ks_values[-1] - ks_values[0]
        rows.append(ReportRow("ks_change_under_dt_halving", 0.0, diff,
                              spec.n_paths, spec.tolerance, diff < 0.0))
    return rows, {"ks_values": [float(k) for k in ks_values]}, n_trunc, first_summaries


def _post_inf_sup(spec, workers, backend):
    a = spec.a_values[0]
    span_max = max(spec.b_values) - a
    ev = build_evaluator(spec.model, spec.gamma, x_max=span_max + 2.0)
    cfg = SimConfig(model=spec.model, gamma=spec.gamma, dt=spec.dt,
                    n_paths=spec.n_paths, seed=spec.seed)
    s = path_summaries(cfg, workers=workers, backend=backend)
    sel = s.valid & (np.abs(s.inf - a) <= spec.delta_a)
    count = int(np.count_nonzero(sel))
    if count < spec.min_bin_count:
        raise InsufficientSampleError(
            f"insufficient conditional sample: bin |I - ({a:g})| <= "
            f"{spec.delta_a:g} holds {count} < {spec.min_bin_count} paths")
    post_sup = s.post_hi_sup[sel]
    rows = []
    for b in spec.b_values:
        analytic = fl.post_inf_sup_cdf(ev, a, b)
        empirical = float(np.mean(post_sup <= b))
        gap = abs(analytic - empirical)
        rows.append(ReportRow(f"b={b:g}", analytic, empirical, count,
                              spec.tolerance, gap <= spec.tolerance))
    return rows, {"bin_count": count}, s.n_truncated, s


def _max_loss_post_sup(spec, workers, backend):
    a, b = spec.a_values[0], spec.b_values[0]
    ev = build_evaluator(spec.model, spec.gamma, x_max=(b - a) + 2.0)
    cfg = SimConfig(model=spec.model, gamma=spec.gamma, dt=spec.dt,
                    n_paths=spec.n_paths, seed=spec.seed)
    s = path_summaries(cfg, workers=workers, backend=backend)
    sel = (s.valid & (np.abs(s.inf - a) <= spec.delta_a)
           & (np.abs(s.sup - b) <= spec.delta_b) & (s.h_inf < s.h_sup))
    count = int(np.count_nonzero(sel))
    if count < spec.min_bin_count:
        raise InsufficientSampleError(
            f"insufficient conditional sample: bin |I - ({a:g})| <= "
            f"{spec.delta_a:g}, |S - {b:g}| <= {spec.delta_b:g} with the "
            f"infimum first holds {count} < {spec.min_bin_count} paths")
    losses = s.post_hs_max_loss[sel]
    rows = []
    for d in spec.d_values:
        analytic = fl.max_loss_post_sup_cdf(ev, d, a, b)
        empirical = float(np.mean(losses < d))
        gap = abs(analytic - empirical)
        rows.append(ReportRow(f"d={d:g}", analytic, empirical, count,
                              spec.tolerance, gap <= spec.tolerance))
    return rows, {"bin_count": count}, s.n_truncated, s


def _truncated_exp_inverse(u, phi, lo, hi):
    e_lo = math.exp(-phi * lo)
    e_hi = math.exp(-phi * hi)
    return -math.log(e_lo - u * (e_lo - e_hi)) / phi


def _pre_sup_increment_chunk(args):
    """Re-simulate selected paths and pool pre-supremum lag increments."""
    (backend, model_dict, gamma, dt, t_cap, seed, indices, lag_steps,
     capacity) = args
    kern = get_kernels(backend)
    model = LevyModel.from_dict(model_dict)
    drift, sigma, rate, eta = _model_params(model)
    streams = PathStreams(seed, PURPOSE_MAIN)
    values = np.empty(capacity)
    pools = []
    for i in indices:
        gen = streams.select(int(i))
        n_last, _, _, _, _ = kern.simulate_into(
            gen, drift, sigma, rate, eta, gamma, 0.0, dt, t_cap, math.nan,
            values)
        v = values[:n_last + 1]
        hs_idx = n_last - int(np.argmax(v[::-1]))
        if hs_idx >= lag_steps:
            pools.append(np.diff(v[:hs_idx + 1:lag_steps]))
    if not pools:
        return np.empty(0)
    return np.concatenate(pools)


def _tilted_chunk(args):
    """Simulate tilted paths to first passage; pool lag increments.

    The passage level is drawn per path from the exponential supremum law
    restricted to the conditioning bin, so the tilted ensemble matches the
    binned conditioning of the direct paths.
    """
    (backend, tilted_dict, phi, b_lo, b_hi, horizon, dt, seed, lo, hi,
     lag_steps) = args
    kern = get_kernels(backend)
    tilted = LevyModel.from_dict(tilted_dict)
    drift, sigma, rate, eta = _model_params(tilted)
    streams = PathStreams(seed, PURPOSE_TILT)
    capacity = int(math.ceil(horizon / dt)) + 2
    values = np.empty(capacity)
    pools = []
    taus = []
    n_uncrossed = 0
    for i in range(lo, hi):
        gen = streams.select(i)
        level = _truncated_exp_inverse(gen.random(), phi, b_lo, b_hi)
        n_last, _, _, _, crossed_idx = kern.simulate_into(
            gen, drift, sigma, rate, eta, 0.0, horizon, dt, horizon,
            level, values)
        if crossed_idx < 0:
            n_uncrossed += 1
            continue
        taus.append(crossed_idx * dt)
        if crossed_idx >= lag_steps:
            pools.append(np.diff(values[:crossed_idx + 1:lag_steps]))
    inc = np.concatenate(pools) if pools else np.empty(0)
    return inc, np.asarray(taus), n_uncrossed


def _esscher_presup(spec, workers, backend):
    b = spec.b_values[0]
    lag = spec.options.get("lag", 0.1)
    min_conditional = spec.options.get("min_conditional", 5000)
    tau_tol = spec.options.get("passage_time_tolerance", 0.05)
    lag_steps = int(round(lag / spec.dt))
    if lag_steps < 1:
        raise ValueError("lag must be at least one grid step")

    cfg = SimConfig(model=spec.model, gamma=spec.gamma, dt=spec.dt,
                    n_paths=spec.n_paths, seed=spec.seed)
    s = path_summaries(cfg, workers=workers, backend=backend)
    sel = s.valid & (np.abs(s.sup - b) <= spec.delta_b)
    indices = np.nonzero(sel)[0]
    count = indices.size
    if count < min_conditional:
        raise InsufficientSampleError(
            f"insufficient conditional sample: bin |S - {b:g}| <= "
            f"{spec.delta_b:g} holds {count} < {min_conditional} paths")

    # direct side: pre-supremum increments of the conditioned paths
    payloads = [
        (backend, spec.model.to_dict(), spec.gamma, spec.dt, cfg.t_cap,
         spec.seed, indices[lo:hi], lag_steps, cfg.buffer_capacity)
        for lo, hi in _chunk_ranges(count, workers)
    ]
    direct_inc = np.concatenate(
        _run_chunks(_pre_sup_increment_chunk, payloads, workers))

    # tilted side: fresh paths of the Esscher-tilted model run to passage
    tilted = spec.model.esscher_tilt(spec.gamma)
    phi = spec.model.phi(spec.gamma)
    speed = tilted.psi_prime(0.0)
    horizon = spec.options.get("tilt_horizon",
                               30.0 * (b + spec.delta_b) / speed + 10.0)
    payloads = [
        (backend, tilted.to_dict(), phi, b - spec.delta_b, b + spec.delta_b,
         horizon, spec.dt, spec.seed, lo, hi, lag_steps)
        for lo, hi in _chunk_ranges(count, workers)
    ]
    outs = _run_chunks(_tilted_chunk, payloads, workers)
    tilted_inc = np.concatenate([o[0] for o in outs])
    tilted_tau = np.concatenate([o[1] for o in outs])
    n_uncrossed = sum(o[2] for o in outs)

    rows = []
    ks_inc = ks_two_sample(direct_inc, tilted_inc)
    rows.append(ReportRow(f"increments_ks_lag={lag:g}", 0.0, ks_inc,
                          min(direct_inc.size, tilted_inc.size),
                          spec.tolerance, ks_inc <= spec.tolerance))
    ks_tau = ks_two_sample(s.h_sup[sel], tilted_tau)
    rows.append(ReportRow("passage_time_ks", 0.0, ks_tau,
                          min(count, tilted_tau.size), tau_tol,
                          ks_tau <= tau_tol))
    summary = {"n_conditional": int(count), "n_tilted_uncrossed": int(n_uncrossed),
               "n_increments_direct": int(direct_inc.size),
               "n_increments_tilted": int(tilted_inc.size)}
    return rows, summary, s.n_truncated, s


def _post_rho_sde(spec, workers, backend):
    a, b = spec.a_values[0], spec.b_values[0]
    level = b - a
    probe_lag = spec.options.get("probe_lag", 0.25)
    eps_factors = tuple(spec.options.get("eps_factors", (1e-2, 1e-3, 1e-4)))
    n_sde = spec.options.get("n_sde", 20_000)
    gate_count = spec.options.get("gate_eps_count", 2)

    ev = build_evaluator(spec.model, spec.gamma, x_max=level + 2.0)
    cfg = SimConfig(model=spec.model, gamma=spec.gamma, dt=spec.dt,
                    n_paths=spec.n_paths, seed=spec.seed)
    s = path_summaries(cfg, level_b=b, probe_lag=probe_lag, workers=workers,
                       backend=backend)
    sel = (s.valid & s.crossed
           & (np.abs(s.i_at_cross - a) <= spec.delta_a)
           & ~np.isnan(s.z_probe))
    direct = s.z_probe[sel]
    count = direct.size
    if count < spec.min_bin_count:
        raise InsufficientSampleError(
            f"insufficient conditional sample: bin |I - ({a:g})| <= "
            f"{spec.delta_a:g} on crossing paths holds {count} < "
            f"{spec.min_bin_count} probe samples")

    rows = []
    summary = {"n_direct": int(count)}
    for k, f in enumerate(sorted(eps_factors, reverse=True)):
        eps = f * level
        samples, n_crossed, n_discarded = post_rho_probe_samples(
            ev, cfg, level, eps, n_sde, probe_lag, workers=workers,
            backend=backend)
        ks = ks_two_sample(direct, samples)
        gated = k >= len(eps_factors) - gate_count
        rows.append(ReportRow(f"marginal_ks_eps={f:g}*level", 0.0, ks,
                              min(count, samples.size), spec.tolerance,
                              (ks <= spec.tolerance) if gated else True))
        summary[f"sde_eps_{f:g}"] = {"ks": float(ks), "n_samples": int(samples.size),
                                     "n_discarded": int(n_discarded),
                                     "gated": bool(gated)}
    return rows, summary, s.n_truncated, s


_IMPLEMENTATIONS = {
    "scale_selftest": _scale_selftest,
    "joint_law": _joint_law,
    "sup_marginal": _sup_marginal,
    "post_inf_sup": _post_inf_sup,
    "max_loss_post_sup": _max_loss_post_sup,
    "esscher_presup": _esscher_presup,
    "post_rho_sde": _post_rho_sde,
}


def run_experiment(spec, workers=None, backend=None, dump_paths=None):
    """Run one experiment; returns an :class:`ExperimentReport`.

    ``dump_paths`` optionally writes the raw per-path summary CSV of the
    main simulation (experiments that simulate paths only).
    """
    workers = worker_count(workers)
    backend = backend_name(backend)
    t0 = time.perf_counter()
    result = _IMPLEMENTATIONS[spec.name](spec, workers, backend)
    rows, summary, n_truncated = result[0], result[1], result[2]
    summaries = result[3] if len(result) > 3 else None
    if dump_paths is not None:
        if summaries is None:
            raise ValueError(f"experiment {spec.name!r} has no path dump")
        dump_summaries_csv(summaries, dump_paths)
    runtime = time.perf_counter() - t0
    return ExperimentReport(spec=spec.to_dict(), rows=rows, summary=summary,
                            runtime_s=runtime, n_truncated=n_truncated)


# ---------------------------------------------------------------------------
# default experiment specs: the acceptance suite
# ---------------------------------------------------------------------------

_BM = brownian(0.0, 1.0)
_CP = LevyModel(1.0, 1.0, CompoundPoissonExp(1.0, 2.0))


def default_specs(name):
    """The shipped defaults for one experiment name (the acceptance suite)."""
    if name == "scale_selftest":
        return [ExperimentSpec(name=name, model=m, gamma=g)
                for m in (_BM, _CP) for g in (0.25, 0.5, 1.0)]
    if name == "joint_law":
        return [ExperimentSpec(
            name=name, model=_BM, gamma=0.5, dt=1e-4, n_paths=200_000,
            seed=20_240_601, a_values=(-0.5, -1.0, -1.5),
            b_values=(0.5, 1.0, 1.5), tolerance=0.01)]
    if name == "sup_marginal":
        return [ExperimentSpec(
            name=name, model=_BM, gamma=0.5, dt=1e-4, n_paths=100_000,
            seed=20_240_602, tolerance=0.015,
            options={"dt_levels": (1e-4, 5e-5), "mean_rtol": 0.02})]
    if name == "post_inf_sup":
        return [ExperimentSpec(
            name=name, model=_BM, gamma=0.5, dt=1e-4, n_paths=1_000_000,
            seed=20_240_603, a_values=(-1.0,),
            b_values=(-0.5, 0.0, 0.5, 1.0, 2.0), delta_a=0.05,
            tolerance=0.03)]
    if name == "max_loss_post_sup":
        return [ExperimentSpec(
            name=name, model=_BM, gamma=0.5, dt=1e-4, n_paths=1_000_000,
            seed=20_240_604, a_values=(-1.0,), b_values=(1.0,),
            d_values=(0.5, 1.0, 1.5), delta_a=0.1, delta_b=0.1,
            tolerance=0.05, min_bin_count=500)]
    if name == "esscher_presup":
        return [ExperimentSpec(
            name=name, model=_BM, gamma=0.5, dt=1e-4, n_paths=200_000,
            seed=20_240_605, b_values=(1.0,), delta_b=0.05, tolerance=0.02,
            options={"lag": 0.1, "min_conditional": 5000})]
    if name == "post_rho_sde":
        return [ExperimentSpec(
            name=name, model=_BM, gamma=0.5, dt=1e-4, n_paths=200_000,
            seed=20_240_606, a_values=(-1.0,), b_values=(1.0,), delta_a=0.1,
            tolerance=0.05,
            options={"probe_lag": 0.25, "eps_factors": (1e-2, 1e-3, 1e-4),
                     "n_sde": 20_000})]
    raise ValueError(f"unknown experiment {name!r}")


def all_default_specs():
    out = []
    for name in EXPERIMENT_NAMES:
        out.extend(default_specs(name))
    return out
