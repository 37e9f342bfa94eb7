"""Simulation of multiparty quantum secret sharing over noisy channels.

The building blocks are dense density matrices and Kraus channels
(:mod:`~noisyqss.qstate`, :mod:`~noisyqss.noise`), three error-correcting
schemes (:mod:`~noisyqss.codes`), the sharing protocol with exact and Monte
Carlo evaluation (:mod:`~noisyqss.protocol`, :mod:`~noisyqss.montecarlo`),
closed-form error expressions (:mod:`~noisyqss.closed_form`) and qubit
sharing by teleportation (:mod:`~noisyqss.ssqi`).
"""

from .config import ConfigError, load_config, parse_config
from .montecarlo import run_montecarlo
from .noise import NoiseKind, NoiseSpec
from .protocol import (
    ChoiceTuple,
    ErrorReport,
    Evaluation,
    ProtocolConfig,
    QecMode,
    QecScheme,
    QecSpec,
    run,
    run_exact,
)
from .ssqi import ssqi_report, teleport_fidelity

__version__ = "0.1.0"

__all__ = [
    "ChoiceTuple",
    "ConfigError",
    "ErrorReport",
    "Evaluation",
    "NoiseKind",
    "NoiseSpec",
    "ProtocolConfig",
    "QecMode",
    "QecScheme",
    "QecSpec",
    "load_config",
    "parse_config",
    "run",
    "run_exact",
    "run_montecarlo",
    "ssqi_report",
    "teleport_fidelity",
]
