"""
Per-record evaluation shared by the management commands, the HTTP API and
the Celery tasks.

``classify_one`` and ``proximity_one`` never raise for bad input: a record
that fails validation or evaluation comes back as an error record
``{"id", "error", "detail"}`` with the error's code. ``run_batch`` keeps one
output per input, in input order, whichever backend runs the records.
"""

import logging
from typing import Any, Dict, Iterable, List, Optional

from celery import group
from django.conf import settings

from surfaces.algebra import QuadricCoeffs
from surfaces.engine import get_proximity_engine
from surfaces.exceptions import QuadricError

from .ingest import Row, RowError
from .serializers import (
    ClassificationSerializer,
    ErrorRecordSerializer,
    ProximitySerializer,
    QueryRecordSerializer,
)

logger = logging.getLogger(__name__)

BACKENDS = ('inline', 'celery')


def error_record(record_id: Optional[str], code: str, detail: str) -> Dict[str, Any]:
    return dict(ErrorRecordSerializer({'id': record_id, 'error': code, 'detail': detail}).data)


def is_error(record: Dict[str, Any]) -> bool:
    return 'error' in record


def describe_errors(errors) -> str:
    """Flatten DRF validation errors into one line."""
    if isinstance(errors, dict):
        return '; '.join(f"{field}: {describe_errors(value)}" for field, value in errors.items())
    if isinstance(errors, (list, tuple)):
        return ' '.join(describe_errors(value) for value in errors)
    return str(errors)


# ==================== EVALUATION ====================

def evaluate_classification(data: Dict[str, Any], tol: Optional[float] = None) -> Dict[str, Any]:
    """
    Classify one validated record.

    Raises:
        QuadricError: when the coefficients are not a quadric.
    """
    q = QuadricCoeffs.from_mapping(data['coeffs'])
    cls, inv = get_proximity_engine().classify(q, data.get('tol') or tol)
    row = {
        'id': data.get('id'),
        'kind': str(cls.kind),
        'J1': inv.j1,
        'J2': inv.j2,
        'J3': inv.j3,
        'det_a': inv.det_a,
        'a0': inv.a0,
        'delta': inv.delta,
        'lambda12': cls.lambda12,
        'lambda3': cls.lambda3,
        'central': cls.central,
    }
    return dict(ClassificationSerializer(row).data)


def evaluate_proximity(data: Dict[str, Any], tol: Optional[float] = None, oracle: bool = False,
                       resolution: Optional[int] = None) -> Dict[str, Any]:
    """
    Foot-points and minimum distance for one validated record.

    Raises:
        QuadricError: for non-axisymmetric, imaginary or degenerate input.
    """
    engine = get_proximity_engine()
    tol = data.get('tol') or tol
    q = QuadricCoeffs.from_mapping(data['coeffs'])
    result = engine.proximity(q, data['point'], tol)

    row = {
        'id': data.get('id'),
        'kind': str(result.aq_class.kind),
        'pc': result.frame.pc.tolist(),
        'v3': result.frame.v3.tolist(),
        'conic': str(result.conic.kind),
        'n': result.conic.n,
        'e': result.conic.e,
        'pp': result.pp.tolist(),
        't': list(result.planar.params),
        'r': list(result.planar.distances),
        'footpoints3d': result.footpoints3d.tolist(),
        'r_min': result.r_min,
        'side': result.side,
        'case': str(result.planar.case_tag),
    }
    if oracle:
        value = engine.oracle(q, data['point'], resolution, tol)
        row['oracle'] = value
        row['oracle_gap'] = value - result.r_min
    return dict(ProximitySerializer(row).data)


def _guarded(raw: Dict[str, Any], require_point: bool, evaluate, **options) -> Dict[str, Any]:
    serializer = QueryRecordSerializer(data=raw, context={'require_point': require_point})
    record_id = raw.get('id') if isinstance(raw, dict) else None
    record_id = None if record_id is None else str(record_id)

    if not serializer.is_valid():
        detail = describe_errors(serializer.errors)
        logger.warning(f"Record {record_id} rejected: {detail}")
        return error_record(record_id, 'invalid_record', detail)

    try:
        return evaluate(serializer.validated_data, **options)
    except QuadricError as e:
        logger.warning(f"Record {record_id} failed ({e.code}): {e}")
        return error_record(record_id, e.code, str(e))


def classify_one(raw: Dict[str, Any], tol: Optional[float] = None) -> Dict[str, Any]:
    return _guarded(raw, False, evaluate_classification, tol=tol)


def proximity_one(raw: Dict[str, Any], tol: Optional[float] = None, oracle: bool = False,
                  resolution: Optional[int] = None) -> Dict[str, Any]:
    return _guarded(raw, True, evaluate_proximity, tol=tol, oracle=oracle, resolution=resolution)


OPERATIONS = {
    'classify': classify_one,
    'proximity': proximity_one,
}


# ==================== BATCHES ====================

def _with_id(record: Dict[str, Any], row: int) -> Dict[str, Any]:
    if record.get('id') in (None, ''):
        return {**record, 'id': str(row)}
    return record


def run_batch(rows: Iterable[Row], operation: str, tol: Optional[float] = None,
              backend: Optional[str] = None, **options) -> List[Dict[str, Any]]:
    """
    Evaluate every row and return one output record per row, in order.

    Args:
        rows: ``(row, record)`` pairs from ``ingest.read_records``
        operation: 'classify' or 'proximity'
        tol: command-level zero threshold; a record's own ``tol`` wins
        backend: 'inline' or 'celery'; defaults to QUADRIC_BATCH_BACKEND
        options: passed through to the operation (oracle, resolution)
    """
    if operation not in OPERATIONS:
        raise ValueError(f"Unknown operation '{operation}'")
    backend = backend or getattr(settings, 'QUADRIC_BATCH_BACKEND', 'inline')
    if backend not in BACKENDS:
        raise ValueError(f"Unknown batch backend '{backend}'")

    rows = list(rows)
    results: List[Optional[Dict[str, Any]]] = [None] * len(rows)
    pending = []
    for position, (row, record) in enumerate(rows):
        if isinstance(record, RowError):
            results[position] = record.as_record()
        else:
            pending.append((position, _with_id(record, row)))

    if backend == 'celery' and pending:
        from .tasks import classify_record, proximity_record

        task = classify_record if operation == 'classify' else proximity_record
        logger.info(f"Dispatching {len(pending)} {operation} records to Celery")
        outcome = group(task.s(record, tol, **options) for _, record in pending).apply_async().join()
    else:
        evaluate = OPERATIONS[operation]
        outcome = [evaluate(record, tol, **options) for _, record in pending]

    for (position, _), result in zip(pending, outcome):
        results[position] = result

    failed = sum(1 for result in results if is_error(result))
    logger.info(f"Batch {operation}: {len(results)} records, {failed} failed ({backend})")
    return results
