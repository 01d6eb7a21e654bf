"""
Conversion of reports to plain JSON values
"""

from typing import Any
import math

import numpy as np


def to_jsonable(value: Any) -> Any:
    """Numpy scalars and arrays become Python values; non-finite floats become "inf", "-inf", "nan" """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, (str, type(None))):
        return value
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    return str(value)
