"""
Driving processes: stationary symbol sources and the shift map
"""

from .types import Alphabet, BernoulliSpec, MarkovSpec, GaussianWalkSpec, SamplePath
from .samplers import (
    DriverSpec, sample, sample_bernoulli, sample_markov, sample_gaussian_walk,
    stationary_distribution, closed_classes, shift
)
from .export import path_to_csv, read_path_csv

__all__ = [
    'Alphabet', 'BernoulliSpec', 'MarkovSpec', 'GaussianWalkSpec', 'SamplePath', 'DriverSpec',
    'sample', 'sample_bernoulli', 'sample_markov', 'sample_gaussian_walk',
    'stationary_distribution', 'closed_classes', 'shift',
    'path_to_csv', 'read_path_csv'
]
