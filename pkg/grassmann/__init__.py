"""
Subspace geometry on the Grassmannian of R^d
"""

from .subspace import (
    Subspace, Containment, subspace_contains, intersect_with_complement, image_subspace, subspace_to_dict
)
from .metric import hausdorff_distance, principal_angles
from .flag import Flag

__all__ = [
    'Subspace', 'Containment', 'subspace_contains', 'intersect_with_complement', 'image_subspace',
    'subspace_to_dict', 'hausdorff_distance', 'principal_angles', 'Flag'
]
