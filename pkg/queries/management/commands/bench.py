"""
Per-type timing of the full proximity pipeline (classify, reduce, planar
solve, lift).

Each case is warmed up, then called ``--cycles`` times; every call is timed
with ``perf_counter_ns``. The report has one row per surface type with the
median, mean and standard deviation of ns per query, fastest type first.
"""

import json
import logging
import sys
import time

import pandas as pd
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from surfaces.algebra import QuadricCoeffs
from surfaces.corpus import corpus_records
from surfaces.engine import get_proximity_engine
from surfaces.exceptions import QuadricError

from queries.ingest import IngestError, RowError, format_for, read_records
from queries.serializers import BenchRowSerializer, QueryRecordSerializer
from queries.runner import describe_errors

logger = logging.getLogger(__name__)

WARMUP_CALLS = 10
REPORT_COLUMNS = ['kind', 'cases', 'cycles', 'median_ns', 'mean_ns', 'std_ns']


class Command(BaseCommand):
    help = "Time proximity queries per surface type (built-in corpus or a record file)"
    stealth_options = ('stdin',)

    def add_arguments(self, parser):
        parser.add_argument('--cycles', type=int,
                            help="Timed calls per case (default: QUADRIC_BENCH_CYCLES)")
        parser.add_argument('--kind', action='append', default=[],
                            help="Only bench this surface type; repeatable")
        parser.add_argument('--input', '-i',
                            help="Record file to bench instead of the built-in corpus; '-' for stdin")
        parser.add_argument('--report', help="Also write the report to this CSV file")

    def load_records(self, options):
        path = options['input']
        if not path:
            return corpus_records()
        try:
            if path == '-':
                text, fmt = options.get('stdin', sys.stdin).read(), 'jsonl'
            else:
                with open(path, encoding='utf-8') as handle:
                    text, fmt = handle.read(), format_for(path)
            rows = list(read_records(text, fmt))
        except OSError as e:
            raise CommandError(f"Cannot read input: {e}", returncode=2)
        except IngestError as e:
            raise CommandError(str(e), returncode=2)
        return [record for _, record in rows if not isinstance(record, RowError)]

    def prepare(self, records, kinds):
        """Validated (id, kind, coeffs, point, tol) cases; unusable records are skipped."""
        engine = get_proximity_engine()
        cases = []
        for raw in records:
            serializer = QueryRecordSerializer(data=raw, context={'require_point': True})
            if not serializer.is_valid():
                logger.warning(f"Bench skips record {raw.get('id')}: {describe_errors(serializer.errors)}")
                continue
            data = serializer.validated_data
            q = QuadricCoeffs.from_mapping(data['coeffs'])
            try:
                result = engine.proximity(q, data['point'], data.get('tol'))
            except QuadricError as e:
                logger.warning(f"Bench skips record {data.get('id')}: {e}")
                continue
            kind = str(result.aq_class.kind)
            if kinds and kind not in kinds:
                continue
            cases.append((data.get('id'), kind, q, data['point'], data.get('tol')))
        return cases

    def handle(self, *args, **options):
        cycles = options['cycles']
        if cycles is None:
            cycles = int(getattr(settings, 'QUADRIC_BENCH_CYCLES', 1000))
        if cycles < 0:
            raise CommandError("--cycles must be non-negative", returncode=2)

        cases = self.prepare(self.load_records(options), set(options['kind']))
        engine = get_proximity_engine()

        timings = []
        if cycles:
            for case_id, kind, q, point, tol in cases:
                for _ in range(WARMUP_CALLS):
                    engine.proximity(q, point, tol)
                for _ in range(cycles):
                    start = time.perf_counter_ns()
                    engine.proximity(q, point, tol)
                    timings.append((kind, case_id, time.perf_counter_ns() - start))
                logger.info(f"Bench {case_id} ({kind}): {cycles} cycles")

        report = self.summarize(timings, cycles)
        for row in report.to_dict('records'):
            self.stdout.write(json.dumps(dict(BenchRowSerializer(row).data)))

        if options['report']:
            report.to_csv(options['report'], index=False)
            logger.info(f"Bench report written to {options['report']}")

    @staticmethod
    def summarize(timings, cycles) -> pd.DataFrame:
        if not timings:
            return pd.DataFrame(columns=REPORT_COLUMNS)
        df = pd.DataFrame(timings, columns=['kind', 'case', 'ns'])
        report = df.groupby('kind').agg(
            cases=('case', 'nunique'),
            median_ns=('ns', 'median'),
            mean_ns=('ns', 'mean'),
            std_ns=('ns', lambda ns: float(ns.std(ddof=0))),
        ).reset_index()
        report['cycles'] = cycles
        return report.sort_values('median_ns', kind='stable')[REPORT_COLUMNS]
