"""Volatility clustering measurement for return series."""

from ._core import (
    AnalysisConfig,
    BinningScheme,
    ConditionalDistribution,
    DvcProfile,
    DvcResult,
    Error,
    GarchFit,
    GarchParams,
    NumericError,
    PipelineError,
    PriceSeries,
    ProfilePoint,
    ReturnSeries,
    SymbolicSeries,
    ValidationError,
    analyze,
    build_bins,
    compute_returns,
    conditional_abs_mean,
    conditional_distribution,
    dvc_profile,
    filter,
    fit,
    fit_dvc,
    iid_gaussian,
    load_prices,
    load_prices_text,
    neg_log_likelihood,
    shuffle,
    simulate,
    standardize,
    symbol_value,
    symbolize,
)

__version__ = "0.1.0"
