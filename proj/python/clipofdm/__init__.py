"""Clipping distortion, EVM bounds and achievable rate for DCO-/ACO-OFDM."""

from ._core import (
    ConfigError,
    aco_clip_error_power,
    aco_evm,
    alpha,
    amplitude_to_db,
    bussgang_coeffs,
    ceiling_bounce_response,
    clip_and_bias,
    db_to_amplitude,
    dco_clip_error_power,
    dco_evm,
    dco_optimal_bias,
    evm_lower_bound,
    monte_carlo_evm,
    optimal_operating_point,
    presets,
    run_experiment,
    sdr_per_subcarrier,
)

__all__ = [name for name in dir() if not name.startswith("_")]
