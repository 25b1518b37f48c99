from rest_framework import status
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.views import APIView

from surfaces.corpus import corpus_records

from .ingest import IngestError, RowError, format_for, read_records
from .runner import (
    evaluate_classification,
    evaluate_proximity,
    is_error,
    run_batch,
)
from .serializers import BatchUploadSerializer, QueryRecordSerializer
import logging

logger = logging.getLogger(__name__)


def _flag(value) -> bool:
    return str(value).lower() in ('1', 'true', 'yes')


class _RecordView(APIView):
    """
    A single record is evaluated directly: validation problems answer 400 and
    quadric errors answer 422 through the exception handler. A list is run as
    a batch, one output per record, with failures reported inline.
    """
    permission_classes = [AllowAny]
    operation = ''
    require_point = False

    def evaluate(self, data, request):
        raise NotImplementedError

    def batch_options(self, request):
        return {}

    def post(self, request, *args, **kwargs):
        if isinstance(request.data, list):
            rows = [
                (row, record if isinstance(record, dict) else RowError(row, "record must be a JSON object"))
                for row, record in enumerate(request.data, start=1)
            ]
            results = run_batch(rows, self.operation, backend='inline', **self.batch_options(request))
            failed = sum(1 for record in results if is_error(record))
            return Response({'count': len(results), 'failed': failed, 'results': results})

        serializer = QueryRecordSerializer(data=request.data, context={'require_point': self.require_point})
        serializer.is_valid(raise_exception=True)
        return Response(self.evaluate(serializer.validated_data, request))


class ClassifyView(_RecordView):
    """
    Classify a quadric into its axisymmetric type.

    POST /api/queries/classify/

    Body: {"id": ..., "coeffs": {"a": ..., ..., "d": ...}, "tol": ...}
    or a list of such records.
    """
    operation = 'classify'

    def evaluate(self, data, request):
        return evaluate_classification(data)


class ProximityView(_RecordView):
    """
    Minimum distance and foot-points from a point to an axisymmetric quadric.

    POST /api/queries/proximity/

    Body: {"id": ..., "coeffs": {...}, "point": [x, y, z], "tol": ...}
    or a list of such records.
    Query params:
    - oracle: add the brute-force oracle distance (slow)
    """
    operation = 'proximity'
    require_point = True

    def batch_options(self, request):
        return {'oracle': _flag(request.query_params.get('oracle', ''))}

    def evaluate(self, data, request):
        return evaluate_proximity(data, **self.batch_options(request))


class BatchUploadView(APIView):
    """
    Evaluate a file of query records.

    POST /api/queries/batch/

    Form Data:
    - file: .jsonl, .ndjson, .json or .csv
    - operation: classify or proximity (default: proximity)
    - tol: zero threshold for records without their own
    """
    permission_classes = [AllowAny]

    def post(self, request, *args, **kwargs):
        serializer = BatchUploadSerializer(data=request.data)

        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        file = serializer.validated_data['file']
        operation = serializer.validated_data['operation']

        try:
            text = file.read().decode('utf-8')
            rows = list(read_records(text, format_for(file.name)))
        except UnicodeDecodeError:
            return Response({'error': 'File must be UTF-8 text'}, status=status.HTTP_400_BAD_REQUEST)
        except IngestError as e:
            return Response({'error': str(e)}, status=status.HTTP_400_BAD_REQUEST)

        results = run_batch(rows, operation, serializer.validated_data.get('tol'))
        failed = sum(1 for record in results if is_error(record))
        logger.info(f"Batch upload {file.name}: {len(results)} records, {failed} failed")

        return Response({
            'file_name': file.name,
            'operation': operation,
            'count': len(results),
            'failed': failed,
            'results': results,
        })


class CorpusView(APIView):
    """
    The built-in reference quadrics as query records.

    GET /api/queries/corpus/
    """
    permission_classes = [AllowAny]

    def get(self, request):
        records = corpus_records()
        return Response({'count': len(records), 'results': records})
