"""
Conditional stability testers and cost indices
"""

from .conditional import (
    PathClassification, StabilityVerdict, DiagonalInstance, EquivalenceReport,
    wilson_interval, classify_stability, conditional_stability, birkhoff_rate,
    diagonal_instance, random_diagonal_instances, equivalence_check
)
from .cost import COST_KINDS, CostFunction, CostReport, OptimalCostReport, cost_index, optimal_cost_estimate

__all__ = [
    'PathClassification', 'StabilityVerdict', 'DiagonalInstance', 'EquivalenceReport',
    'wilson_interval', 'classify_stability', 'conditional_stability', 'birkhoff_rate',
    'diagonal_instance', 'random_diagonal_instances', 'equivalence_check',
    'COST_KINDS', 'CostFunction', 'CostReport', 'OptimalCostReport', 'cost_index', 'optimal_cost_estimate'
]
