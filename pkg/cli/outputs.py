"""
Deterministic JSON and CSV emission

Identical reports serialize to identical bytes: keys sorted, floats printed
by repr, non-finite values spelled "inf", "-inf" and "nan".
"""

from pathlib import Path
from typing import Any, Dict
import io
import json
import os
import tempfile

import pandas as pd

from core.serialize import to_jsonable


def json_bytes(data: Dict[str, Any]) -> bytes:
    text = json.dumps(to_jsonable(data), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
    return (text + "\n").encode('utf-8')


def csv_bytes(frame: pd.DataFrame) -> bytes:
    """Comma-separated, header row, LF endings, 17 significant digits"""
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format='%.17g', lineterminator='\n')
    return buffer.getvalue().encode('utf-8')


def write_atomic(target: Path, payload: bytes) -> Path:
    """Write through a temporary file in the same directory, then rename"""
    target = Path(target)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, 'wb') as handle:
            handle.write(payload)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target
