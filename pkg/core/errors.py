"""
Exception hierarchy for the cocycle lab
"""

from typing import Any, Dict, Optional


class CocycleLabError(Exception):
    """Base class for all lab errors"""


class ValidationError(CocycleLabError, ValueError):
    """Invalid specification, matrix, probability vector or parameter"""


class HorizonError(CocycleLabError, IndexError):
    """Requested horizon or shift exceeds the available path"""


class UnknownSymbolError(CocycleLabError, KeyError):
    """Symbol outside the generator's domain"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown symbol"


class DimensionMismatchError(CocycleLabError, ValueError):
    """Objects live in different ambient dimensions"""


class NonUniqueStationaryError(CocycleLabError):
    """Markov kernel has more than one stationary law"""


class ContainmentError(CocycleLabError):
    """A subspace is not contained in another within tolerance"""


class InvarianceError(CocycleLabError):
    """Flag dimensions disagree along an orbit"""


class UngroupableSpectrumError(CocycleLabError):
    """Raw exponents cannot be separated into levels by the gap threshold"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ResourceLimitError(CocycleLabError):
    """Requested object exceeds desk-scale limits"""


class PreconditionError(CocycleLabError):
    """Mathematical precondition of an operation does not hold"""


class ConvergenceError(CocycleLabError):
    """Iterative solver stopped before reaching its accuracy target"""
