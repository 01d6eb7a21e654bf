"""
Shared fixtures: the halving table, fair coin driver and a few constant cocycles
"""

import math

import numpy as np
import pytest

from cocycle import GeneratorMap, halving_generator, jordan_generator, rotation_generator
from driving import Alphabet, BernoulliSpec, SamplePath

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)


def constant_path(n: int, symbol: int = 0) -> SamplePath:
    """Length-n path repeating one symbol"""
    return SamplePath(entries=np.full(n, symbol, dtype=np.int64), seed=None, source_tag="constant",
                      alphabet=Alphabet((0, 1)))


@pytest.fixture
def halving():
    return halving_generator()


@pytest.fixture
def fair_coin():
    return BernoulliSpec(Alphabet((0, 1)), (0.5, 0.5))


@pytest.fixture
def diag_three_half():
    return GeneratorMap.constant(np.diag([3.0, 0.5]), name="diag(3,1/2)")


@pytest.fixture
def jordan():
    return jordan_generator()


@pytest.fixture
def rotation():
    return rotation_generator(1.0)
