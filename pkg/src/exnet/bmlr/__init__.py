"""Bayesian multilevel logistic regression for institutional best paper rates."""

from .fit import FitResult, fit, split_fit
from .model import ModelData, ModelParams, log_posterior
from .predict import (
    DicResult,
    all_edge_rates,
    all_ref_rates,
    dic,
    overall_rate,
    predict_edge_rate,
    predict_ref_rate,
    ref_rate_transform_of_mean,
)
from .sampler import (
    Chain,
    ChainConfig,
    InterceptOnlyFit,
    fit_intercept_only,
    mh_sample,
    sample_chains,
)
from .summaries import (
    DiagnosticsReport,
    PosteriorSummary,
    autocorrelation,
    diagnostics,
    effective_sample_size,
    goldstein_interval,
    hpd_interval,
    icc,
    summarize,
)

__all__ = [
    "Chain",
    "ChainConfig",
    "DiagnosticsReport",
    "DicResult",
    "FitResult",
    "InterceptOnlyFit",
    "ModelData",
    "ModelParams",
    "PosteriorSummary",
    "all_edge_rates",
    "all_ref_rates",
    "autocorrelation",
    "diagnostics",
    "dic",
    "effective_sample_size",
    "fit",
    "fit_intercept_only",
    "goldstein_interval",
    "hpd_interval",
    "icc",
    "log_posterior",
    "mh_sample",
    "overall_rate",
    "predict_edge_rate",
    "predict_ref_rate",
    "ref_rate_transform_of_mean",
    "sample_chains",
    "split_fit",
    "summarize",
]
