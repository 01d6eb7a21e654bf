"""
Lyapunov spectra, filtrations, directional statistics and pathwise verification
"""

from .spectrum import LyapunovSpectrum, group_exponents, spectrum, spectrum_distance
from .filtration import (
    FiltrationEstimate, StableSubspaceEstimate, singular_frame, check_groupable,
    filtration_estimate, stable_subspace, orbit_flags, orbit_stable_frames
)
from .directional import (
    DirectionalExponent, LimsupStats, NonshrinkingSearch, default_burn_in,
    directional_exponent, limsup_stats, find_nonshrinking_vector
)
from .verification import Tolerances, MetReport, verify_met, stable_block_length, blockwise_stable_exponent
from .blocks import BlockMap, BlockCocycle, induced_block_cocycle

__all__ = [
    'LyapunovSpectrum', 'group_exponents', 'spectrum', 'spectrum_distance',
    'FiltrationEstimate', 'StableSubspaceEstimate', 'singular_frame', 'check_groupable',
    'filtration_estimate', 'stable_subspace', 'orbit_flags', 'orbit_stable_frames',
    'DirectionalExponent', 'LimsupStats', 'NonshrinkingSearch', 'default_burn_in',
    'directional_exponent', 'limsup_stats', 'find_nonshrinking_vector',
    'Tolerances', 'MetReport', 'verify_met', 'stable_block_length', 'blockwise_stable_exponent',
    'BlockMap', 'BlockCocycle', 'induced_block_cocycle'
]
