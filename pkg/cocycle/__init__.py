"""
Linear cocycles over the shift: generators, long products, norm series
"""

from .norms import (
    NORM_KINDS, check_norm, vector_norm, operator_norm, restricted_operator_norm, sphere_directions
)
from .generator import (
    GeneratorMap, StateRule, AffineRule, ExponentialRule,
    step_matrix, generator_from_dict, load_generator
)
from .presets import PRESETS, preset, halving_generator, jordan_generator, rotation_generator, identity_generator
from .products import (
    CocycleProduct, QRState, NormSeries, product, qr_accumulate, generic_frame, cocycle_identity_residual,
    propagate, restricted_norms, operator_norms
)

__all__ = [
    'NORM_KINDS', 'check_norm', 'vector_norm', 'operator_norm', 'restricted_operator_norm', 'sphere_directions',
    'GeneratorMap', 'StateRule', 'AffineRule', 'ExponentialRule',
    'step_matrix', 'generator_from_dict', 'load_generator',
    'CocycleProduct', 'QRState', 'NormSeries', 'product', 'qr_accumulate', 'generic_frame', 'cocycle_identity_residual',
    'propagate', 'restricted_norms', 'operator_norms',
    'PRESETS', 'preset', 'halving_generator', 'jordan_generator', 'rotation_generator', 'identity_generator'
]
