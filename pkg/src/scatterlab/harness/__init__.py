"""Experiment runner: configs, grid sweeps, rate fits and reports."""
from .config import ConfigError, ExperimentConfig, load_config
from .rates import RateFit, fit_rate
from .report import COLUMNS, Report, VerdictRow, emit
from .runner import run

__all__ = [
    "COLUMNS", "ConfigError", "ExperimentConfig", "RateFit", "Report", "VerdictRow",
    "emit", "fit_rate", "load_config", "run",
]
