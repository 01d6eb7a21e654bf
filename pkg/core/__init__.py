"""
Shared plumbing: errors, seeded randomness, check records, trial parallelism
"""

from .errors import (
    CocycleLabError, ValidationError, HorizonError, UnknownSymbolError,
    DimensionMismatchError, NonUniqueStationaryError, ContainmentError,
    InvarianceError, UngroupableSpectrumError, ResourceLimitError, PreconditionError, ConvergenceError
)
from .rng import RNG_ALGORITHM, make_generator, trial_seeds, derive_seed
from .checks import CheckResult, summarize_checks
from .parallel import map_trials
from .serialize import to_jsonable

__all__ = [
    'CocycleLabError', 'ValidationError', 'HorizonError', 'UnknownSymbolError',
    'DimensionMismatchError', 'NonUniqueStationaryError', 'ContainmentError',
    'InvarianceError', 'UngroupableSpectrumError', 'ResourceLimitError', 'PreconditionError', 'ConvergenceError',
    'RNG_ALGORITHM', 'make_generator', 'trial_seeds', 'derive_seed',
    'CheckResult', 'summarize_checks', 'map_trials', 'to_jsonable'
]
