"""
Shared plumbing for the batch commands: read records from a file, stdin or
the built-in corpus, evaluate them, write JSON lines to stdout.

Exit codes: 0 when every record succeeded, 1 when any record failed,
2 for usage errors (bad flags, unreadable input).
"""

import json
import logging
import sys
from typing import List

from django.core.management.base import BaseCommand, CommandError

from surfaces.corpus import corpus_records

from queries.ingest import FORMATS, IngestError, Row, format_for, read_records
from queries.runner import is_error, run_batch

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
RECORD_FAILURE = 1


def positive_float(value: str) -> float:
    number = float(value)
    if not number > 0:
        raise ValueError(value)
    return number


class BatchCommand(BaseCommand):
    operation = ''
    stealth_options = ('stdin',)

    def add_arguments(self, parser):
        parser.add_argument('--input', '-i', default='-',
                            help="Input file, or '-' for stdin (default)")
        parser.add_argument('--format', choices=FORMATS,
                            help="Input layout; defaults from the file extension, jsonl for stdin")
        parser.add_argument('--tol', type=positive_float,
                            help="Zero threshold after normalization (default: QUADRIC_TOLERANCE)")
        parser.add_argument('--corpus', action='store_true',
                            help="Evaluate the built-in reference cases instead of reading input")
        parser.add_argument('--async', dest='use_celery', action='store_true',
                            help="Fan records out to Celery workers")

    def operation_options(self, options) -> dict:
        return {}

    def read_rows(self, options) -> List[Row]:
        if options['corpus']:
            return list(enumerate(corpus_records(), start=1))

        path = options['input']
        try:
            if path == '-':
                text = options.get('stdin', sys.stdin).read()
                fmt = options['format'] or 'jsonl'
            else:
                with open(path, encoding='utf-8') as handle:
                    text = handle.read()
                fmt = options['format'] or format_for(path)
            rows = list(read_records(text, fmt))
        except OSError as e:
            raise CommandError(f"Cannot read input: {e}", returncode=USAGE_ERROR)
        except IngestError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)
        logger.debug(f"Read {len(rows)} {fmt} records from {path}")
        return rows

    def handle(self, *args, **options):
        rows = self.read_rows(options)
        backend = 'celery' if options['use_celery'] else None
        results = run_batch(rows, self.operation, options['tol'], backend, **self.operation_options(options))

        for record in results:
            self.stdout.write(json.dumps(record))

        failed = sum(1 for record in results if is_error(record))
        if failed:
            raise CommandError(f"{failed} of {len(results)} records failed", returncode=RECORD_FAILURE)
