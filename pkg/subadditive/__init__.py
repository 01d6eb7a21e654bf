"""
Subadditive sequences over cocycles
"""

from .series import (
    LogNormBuilder, AdditiveBuilder, SubadditiveSeries, SubadditivityResidual, KingmanLimit,
    build_series, random_pairs, subadditivity_residual, kingman_limit
)
from .classification import (
    SignTrial, SignEquivalenceReport, RecurrenceReport,
    check_invariant, classify_path, sign_equivalence_trial, atkinson_recurrence
)

__all__ = [
    'LogNormBuilder', 'AdditiveBuilder', 'SubadditiveSeries', 'SubadditivityResidual', 'KingmanLimit',
    'build_series', 'random_pairs', 'subadditivity_residual', 'kingman_limit',
    'SignTrial', 'SignEquivalenceReport', 'RecurrenceReport',
    'check_invariant', 'classify_path', 'sign_equivalence_trial', 'atkinson_recurrence'
]
