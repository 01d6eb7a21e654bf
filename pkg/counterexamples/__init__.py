"""
Explicit pathological constructions: slow non-exponential decay and Jordan minimal gains
"""

from cocycle.presets import halving_generator
from .words import (
    Word, SlowDecayTrajectory, word_length, slow_decay_word, slow_decay_trajectory,
    closed_form_generation_exponent, generation_exponents
)
from .jordan import GainSeries, minimal_gain, jordan_min_gain

__all__ = [
    'halving_generator', 'Word', 'SlowDecayTrajectory', 'word_length', 'slow_decay_word',
    'slow_decay_trajectory', 'closed_form_generation_exponent', 'generation_exponents',
    'GainSeries', 'minimal_gain', 'jordan_min_gain'
]
