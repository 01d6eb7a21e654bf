"""
CSV exchange for sample paths: metadata comment header, one symbol per row
"""

from pathlib import Path
from typing import Union
import io
import json

import numpy as np
import pandas as pd

from core.errors import ValidationError
from core.rng import RNG_ALGORITHM
from .types import Alphabet, SamplePath

HEADER_PREFIX = "# "


def path_to_csv(path: SamplePath, target: Union[str, Path, None] = None) -> str:
    """Serialize a path; identical paths give identical bytes"""
    meta = dict(path.metadata(), rng=RNG_ALGORITHM)
    if path.alphabet is not None:
        meta['alphabet'] = list(path.alphabet.symbols)

    buffer = io.StringIO()
    buffer.write(HEADER_PREFIX + json.dumps(meta, sort_keys=True, default=str) + "\n")
    frame = pd.DataFrame({'symbol': path.entries})
    frame.to_csv(buffer, index=False, float_format='%.17g', lineterminator='\n')
    text = buffer.getvalue()

    if target is not None:
        Path(target).write_text(text, encoding='utf-8', newline='')
    return text


def read_path_csv(source: Union[str, Path]) -> SamplePath:
    """Inverse of path_to_csv"""
    text = Path(source).read_text(encoding='utf-8')
    first, _, body = text.partition("\n")
    if not first.startswith(HEADER_PREFIX):
        raise ValidationError(f"{source}:1: missing metadata header")
    try:
        meta = json.loads(first[len(HEADER_PREFIX):])
    except json.JSONDecodeError as e:
        raise ValidationError(f"{source}:1: malformed metadata header: {e.msg}") from e

    alphabet = Alphabet(tuple(meta['alphabet'])) if 'alphabet' in meta else None
    textual = alphabet is not None and all(isinstance(s, str) for s in alphabet.symbols)
    frame = pd.read_csv(io.StringIO(body), dtype=str if textual else None)
    if list(frame.columns) != ['symbol']:
        raise ValidationError(f"{source}:2: expected a single 'symbol' column")

    entries = frame['symbol'].to_numpy()
    if alphabet is not None and entries.dtype.kind in 'iu':
        entries = entries.astype(np.int64)

    return SamplePath(
        entries=entries,
        seed=meta.get('seed'),
        source_tag=meta.get('source_tag', 'csv'),
        alphabet=alphabet,
        stationary=bool(meta.get('stationary', True)),
        offset=int(meta.get('offset', 0))
    )
