from celery import shared_task
import logging

from .runner import classify_one, proximity_one

logger = logging.getLogger(__name__)


# ==================== RECORD TASKS ====================

@shared_task
def classify_record(raw, tol=None):
    """Classify one query record; returns an output or error record."""
    result = classify_one(raw, tol)
    logger.debug(f"classify_record {result.get('id')}: {result.get('class', result.get('error'))}")
    return result


@shared_task
def proximity_record(raw, tol=None, oracle=False, resolution=None):
    """
    Proximity for one query record.

    Args:
        raw: the record as parsed from the batch
        tol: command-level zero threshold
        oracle: also run the brute-force oracle
        resolution: oracle grid resolution
    """
    result = proximity_one(raw, tol, oracle=oracle, resolution=resolution)
    logger.debug(f"proximity_record {result.get('id')}: r_min={result.get('r_min')}")
    return result
