"""
Named generator tables used throughout the lab
"""

import math
from typing import Callable, Dict

import numpy as np

from core.errors import ValidationError
from .generator import GeneratorMap


def halving_generator() -> GeneratorMap:
    """{0: I, 1: diag(1/2, 1)}; the e₁ norm halves on every 1"""
    return GeneratorMap.from_table({0: np.eye(2), 1: np.diag([0.5, 1.0])}, name="halving")


def jordan_generator() -> GeneratorMap:
    return GeneratorMap.constant([[1.0, 1.0], [0.0, 1.0]], name="jordan")


def rotation_generator(angle: float = 1.0) -> GeneratorMap:
    c, s = math.cos(angle), math.sin(angle)
    return GeneratorMap.constant([[c, -s], [s, c]], name="rotation")


def identity_generator(dimension: int = 2) -> GeneratorMap:
    return GeneratorMap.constant(np.eye(dimension), name="identity")


PRESETS: Dict[str, Callable[[], GeneratorMap]] = {
    'halving': halving_generator,
    'jordan': jordan_generator,
    'rotation': rotation_generator,
    'identity': identity_generator,
}


def preset(name: str) -> GeneratorMap:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValidationError(f"Unknown generator preset {name!r}; choose from {sorted(PRESETS)}") from None
