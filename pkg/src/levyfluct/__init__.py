"""Fluctuation identities and path decomposition of killed spectrally
negative Levy processes, verified against Monte Carlo simulation."""

from ._backend import HAVE_COMPILED, backend_name
from .experiments import (ExperimentReport, ExperimentSpec,
                          InsufficientSampleError, default_specs, emit_report,
                          run_experiment)
from .fluctuation import (Window, exit_down_lt, exit_up_lt,
                          exit_up_lt_from_min, joint_sup_inf_cdf,
                          killed_before_down, killed_before_exit,
                          killed_before_up, killed_in_window,
                          max_loss_post_sup_cdf, one_sided_down_lt,
                          post_inf_sup_cdf)
from .models import CompoundPoissonExp, LevyModel, brownian
from .paths import (PathExtremes, PathSegment, SamplePath, SimConfig,
                    decompose_at_extremes, extremes_of, path_summaries,
                    simulate_path, simulate_post_rho)
from .scale import (ScaleAccuracyError, ScaleEvaluator, ScaleRangeError,
                    build_evaluator)
from .statistics import EmpiricalCdf, ks_statistic, ks_two_sample

__version__ = "0.1.0"

__all__ = [
    "CompoundPoissonExp", "EmpiricalCdf", "ExperimentReport",
    "ExperimentSpec", "HAVE_COMPILED", "InsufficientSampleError", "LevyModel",
    "PathExtremes", "PathSegment", "SamplePath", "ScaleAccuracyError",
    "ScaleEvaluator", "ScaleRangeError", "SimConfig", "Window",
    "backend_name", "brownian", "build_evaluator", "decompose_at_extremes",
    "default_specs", "emit_report", "exit_down_lt", "exit_up_lt",
    "exit_up_lt_from_min", "extremes_of", "joint_sup_inf_cdf",
    "killed_before_down", "killed_before_exit", "killed_before_up",
    "killed_in_window", "ks_statistic", "ks_two_sample",
    "max_loss_post_sup_cdf", "one_sided_down_lt", "path_summaries",
    "post_inf_sup_cdf", "run_experiment", "simulate_path",
    "simulate_post_rho",
]
