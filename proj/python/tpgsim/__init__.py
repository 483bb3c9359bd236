"""Python access to the tpgsim C++ core."""

from ._core import (
    TruncationError,
    __version__,
    config_hash,
    default_config,
    run_figure,
    tmsv_entropy,
    tmsv_log_negativity,
    tmsv_mean_photons,
    tmsv_photon_dist,
    tps_measures,
    verify_outputs,
)

__all__ = [
    "TruncationError",
    "__version__",
    "config_hash",
    "default_config",
    "run_figure",
    "tmsv_entropy",
    "tmsv_log_negativity",
    "tmsv_mean_photons",
    "tmsv_photon_dist",
    "tps_measures",
    "verify_outputs",
]
