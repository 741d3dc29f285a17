"""Stochastic routing and wavelength assignment with Benders decomposition."""

from ._core import (
    ConfigError,
    ConflictError,
    ModelError,
    ParseError,
    SimTrace,
    SolverError,
    StageRecord,
    Topology,
    __version__,
    compare,
    evss,
    saa,
    sample_scenarios,
    sign_test_p,
    simulate,
    solve,
)

__all__ = [
    "ConfigError",
    "ConflictError",
    "ModelError",
    "ParseError",
    "SimTrace",
    "SolverError",
    "StageRecord",
    "Topology",
    "__version__",
    "compare",
    "evss",
    "saa",
    "sample_scenarios",
    "sign_test_p",
    "simulate",
    "solve",
]
