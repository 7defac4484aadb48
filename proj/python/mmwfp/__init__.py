"""WiFi-fingerprint mm-wave beam estimation: Python bindings to the C++ core."""

from ._mmwfp import (
    ConfigError,
    CoverageError,
    Error,
    InvalidInput,
    NoCoverageError,
    ParseError,
    RadioMaps,
    StaleMapError,
    affinity_propagate,
    beam_gain,
    codebook,
    default_config_yaml,
    free_space_loss_db,
    load_radio_maps,
    report_timing,
    run_offline,
    run_sweep,
    setup_time,
    sweep_csv,
    validate_config,
)

__all__ = [
    "ConfigError",
    "CoverageError",
    "Error",
    "InvalidInput",
    "NoCoverageError",
    "ParseError",
    "RadioMaps",
    "StaleMapError",
    "affinity_propagate",
    "beam_gain",
    "codebook",
    "default_config_yaml",
    "free_space_loss_db",
    "load_radio_maps",
    "report_timing",
    "run_offline",
    "run_sweep",
    "setup_time",
    "sweep_csv",
    "validate_config",
]
