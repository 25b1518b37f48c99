"""
Custom exception handler for consistent API error responses.

Quadric pipeline errors (not axisymmetric, imaginary, degenerate input) are
well-formed requests the engine cannot answer; they map to 422 and carry
the error's code.
"""

from rest_framework.views import exception_handler
from rest_framework.response import Response
from rest_framework import status
import logging

from surfaces.exceptions import QuadricError

logger = logging.getLogger(__name__)


def custom_exception_handler(exc, context):
    """
    Returns:
        Response with standardized error format:
        {
            "error": "Error message",
            "detail": "Detailed error information",
            "status_code": 400
        }
    """
    view = context.get('view')
    request = context.get('request')
    view_name = view.__class__.__name__ if view else 'N/A'
    path = request.path if request else 'N/A'

    if isinstance(exc, QuadricError):
        error_data = {
            'error': exc.code,
            'detail': str(exc),
            'status_code': status.HTTP_422_UNPROCESSABLE_ENTITY,
        }
        logger.warning(f"Quadric error: {exc.code} | View: {view_name} | Path: {path}")
        return Response(error_data, status=status.HTTP_422_UNPROCESSABLE_ENTITY)

    # Call REST framework's default exception handler first
    response = exception_handler(exc, context)

    if response is not None:
        error_data = {
            'error': str(exc),
            'status_code': response.status_code
        }

        if isinstance(response.data, dict):
            error_data['detail'] = response.data
        else:
            error_data['detail'] = {'message': response.data}

        response.data = error_data

        logger.error(f"API Error: {error_data['error']} | View: {view_name} | Path: {path}")
        return response

    # Handle non-DRF exceptions
    logger.critical(f"Unhandled Exception: {exc} | View: {view_name} | Path: {path}", exc_info=True)
    return Response(
        {
            'error': 'Internal server error',
            'detail': str(exc),
            'status_code': status.HTTP_500_INTERNAL_SERVER_ERROR
        },
        status=status.HTTP_500_INTERNAL_SERVER_ERROR
    )
