"""
Batch readers for query records.

Three layouts are accepted: JSON lines (one record per line), a JSON array
of records, and CSV with the header ``id,a,b,c,f,g,h,p,q,r,d,x,y,z[,tol]``.
Each reader yields ``(row, record)`` pairs in input order; a row that cannot
be parsed yields a ``RowError`` in its place so the batch keeps going.
"""

import io
import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Tuple, Union

import pandas as pd

from surfaces.algebra import COEFF_NAMES

logger = logging.getLogger(__name__)

FORMATS = ('jsonl', 'json', 'csv')
CSV_COLUMNS = ('id',) + COEFF_NAMES + ('x', 'y', 'z')

EXTENSION_FORMATS = {
    'jsonl': 'jsonl',
    'ndjson': 'jsonl',
    'json': 'json',
    'csv': 'csv',
}


class IngestError(Exception):
    """The input as a whole cannot be read (bad layout, missing columns)."""


@dataclass(frozen=True)
class RowError:
    row: int
    reason: str

    def as_record(self) -> Dict[str, Any]:
        return {'id': str(self.row), 'error': 'invalid_record', 'detail': self.reason}


Row = Tuple[int, Union[Dict[str, Any], RowError]]


def format_for(filename: str, default: str = 'jsonl') -> str:
    extension = filename.rsplit('.', 1)[-1].lower() if '.' in filename else ''
    return EXTENSION_FORMATS.get(extension, default)


def read_records(text: str, fmt: str = 'jsonl') -> Iterator[Row]:
    if fmt == 'jsonl':
        return _read_json_lines(text)
    if fmt == 'json':
        return _read_json_array(text)
    if fmt == 'csv':
        return _read_csv(text)
    raise IngestError(f"Unsupported format '{fmt}'; expected one of {', '.join(FORMATS)}")


def _read_json_lines(text: str) -> Iterator[Row]:
    for index, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            logger.warning(f"Line {index} is not valid JSON: {e}")
            yield index, RowError(index, f"invalid JSON: {e.msg}")
            continue
        if not isinstance(record, dict):
            yield index, RowError(index, "record must be a JSON object")
            continue
        yield index, record


def _read_json_array(text: str) -> Iterator[Row]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise IngestError(f"Invalid JSON: {e.msg}") from e

    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise IngestError("JSON must be an array of query records")

    for index, record in enumerate(data, start=1):
        if isinstance(record, dict):
            yield index, record
        else:
            yield index, RowError(index, "record must be a JSON object")


def _read_csv(text: str) -> Iterator[Row]:
    try:
        df = pd.read_csv(io.StringIO(text), dtype={'id': str}, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise IngestError(f"Invalid CSV: {e}") from e

    missing = [column for column in CSV_COLUMNS if column not in df.columns]
    if missing:
        raise IngestError(f"CSV is missing column(s): {', '.join(missing)}")

    for index, row in enumerate(df.to_dict('records'), start=1):
        record: Dict[str, Any] = {
            'id': row['id'] if isinstance(row['id'], str) else str(index),
            'coeffs': {name: row[name] for name in COEFF_NAMES},
            'point': [row['x'], row['y'], row['z']],
        }
        tol = row.get('tol')
        if tol is not None and not (isinstance(tol, float) and math.isnan(tol)):
            record['tol'] = tol
        yield index, record
