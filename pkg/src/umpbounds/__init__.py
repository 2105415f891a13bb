"""Finite-blocklength bounds and coset-code simulation for unequal message
protection over the binary symmetric and binary erasure channels."""

__version__ = "0.1.0"

from .achievability import (
    ClassProfile,
    HeaderSplit,
    SimplexWeights,
    dt_class_bound,
    expected_error_dt,
    header_ach_bound,
    max_log2M_dt,
)
from .asymptotics import (
    ModDevPoint,
    ModDevSchedule,
    expected_rate,
    expected_rate_loss,
    kl_divergence_bits,
    md_exponent_and_speed,
    normal_approx_log2M,
    optimal_lambda,
)
from .channel import (
    ChannelKind,
    ChannelSpec,
    ChannelStats,
    InfoDensitySpectrum,
    Symbol,
    channel_stats,
    transmit,
    weight_spectrum,
)
from .converse import (
    NPBetaResult,
    converse_eps_bec,
    converse_max_log2M_bec,
    converse_max_log2M_bsc,
    header_conv_eps_bec,
    header_conv_max_log2M_bsc,
    np_beta_bsc,
)
from .cosets import (
    CosetCodebook,
    DecodeOutcome,
    ResourceBudgetError,
    build_coset_code,
    decode,
    encode,
    info_density_bits,
    load_codebook,
    monte_carlo_error,
    save_codebook,
)
from .numerics import (
    LogValue,
    binary_entropy,
    gaussian_Q,
    gaussian_Q_inv,
    log_add,
    log_binomial,
)

__all__ = [
    "__version__",
    "ChannelKind",
    "ChannelSpec",
    "ChannelStats",
    "ClassProfile",
    "CosetCodebook",
    "DecodeOutcome",
    "HeaderSplit",
    "InfoDensitySpectrum",
    "LogValue",
    "ModDevPoint",
    "ModDevSchedule",
    "NPBetaResult",
    "ResourceBudgetError",
    "SimplexWeights",
    "Symbol",
    "binary_entropy",
    "build_coset_code",
    "channel_stats",
    "converse_eps_bec",
    "converse_max_log2M_bec",
    "converse_max_log2M_bsc",
    "decode",
    "dt_class_bound",
    "encode",
    "expected_error_dt",
    "expected_rate",
    "expected_rate_loss",
    "gaussian_Q",
    "gaussian_Q_inv",
    "header_ach_bound",
    "header_conv_eps_bec",
    "header_conv_max_log2M_bsc",
    "info_density_bits",
    "kl_divergence_bits",
    "load_codebook",
    "log_add",
    "log_binomial",
    "max_log2M_dt",
    "md_exponent_and_speed",
    "monte_carlo_error",
    "normal_approx_log2M",
    "np_beta_bsc",
    "optimal_lambda",
    "save_codebook",
    "transmit",
    "weight_spectrum",
]
