"""
Command-line orchestration of experiments
"""

from .schema import ExperimentConfig, SUBCOMMANDS
from .experiments import EXPERIMENTS, BaseExperiment, ExperimentStatus, ExperimentResult
from .manifest import RunManifest
from .commands import (
    EXIT_OK, EXIT_INVALID, EXIT_CHECK_FAILED, ConfigError, RunOutcome,
    parse_config, load_config, run, build_parser, main
)

__all__ = [
    'ExperimentConfig', 'SUBCOMMANDS', 'EXPERIMENTS', 'BaseExperiment', 'ExperimentStatus', 'ExperimentResult',
    'RunManifest', 'EXIT_OK', 'EXIT_INVALID', 'EXIT_CHECK_FAILED', 'ConfigError', 'RunOutcome',
    'parse_config', 'load_config', 'run', 'build_parser', 'main'
]
