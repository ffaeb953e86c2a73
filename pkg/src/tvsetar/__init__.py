"""Two-regime SETAR(1) models with wavelet-series time-varying thresholds."""

__version__ = "0.1.0"

from tvsetar.bootstrap import (
    BootstrapResult,
    CoverageReport,
    bootstrap_model,
    center_residuals,
    coverage_experiment,
    percentile_interval,
    resample_path,
    sup_t_band,
)
from tvsetar.diagnostics import AcfResult, LjungBoxResult, acf, difference, error_metrics, ljung_box
from tvsetar.errors import (
    BootstrapUnstable,
    ConfigError,
    ConstantSeries,
    DegenerateRegime,
    DomainError,
    FitFailed,
    IngestionError,
    InsufficientResolution,
    InvalidVariance,
    NonergodicModel,
    TvSetarError,
    UnsupportedWavelet,
)
from tvsetar.estimation import (
    BetaVector,
    FitResult,
    SearchSpace,
    conditional_ls,
    design_row,
    fit_constant,
    fit_fourier,
    fit_wavelet,
    profile_objective,
    select_resolution,
)
from tvsetar.threshold_models import (
    ConstantThreshold,
    FourierThreshold,
    FunctionThreshold,
    RegimeCoefficients,
    SetarModel,
    TimeSeries,
    WaveletThreshold,
    eval_threshold,
    regime_path,
    simulate,
)
from tvsetar.wavelets import (
    FilterBank,
    WaveletBasis,
    WaveletCoefficients,
    build_filter_bank,
    eval_father,
    eval_mother,
    eval_scaled,
    eval_threshold_series,
    make_basis,
    project_function,
)
