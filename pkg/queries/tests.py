import json
import math
import os
import tempfile
from io import StringIO

import pandas as pd
from django.core.files.uploadedfile import SimpleUploadedFile
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from rest_framework.test import APIClient

from surfaces.corpus import GOLDEN_CASES, golden_case

from .ingest import IngestError, RowError, format_for, read_records
from .runner import classify_one, proximity_one, run_batch
from .serializers import QueryRecordSerializer

UNIT_SPHERE = {'a': 1, 'b': 1, 'c': 1, 'f': 0, 'g': 0, 'h': 0, 'p': 0, 'q': 0, 'r': 0, 'd': -1}
ONE_SHEET = {**UNIT_SPHERE, 'c': -1}
ELLIPSOID = {**UNIT_SPHERE, 'b': 2, 'c': 3}
PLANE = {'a': 0, 'b': 0, 'c': 0, 'f': 0, 'g': 0, 'h': 0, 'p': 1, 'q': 0, 'r': 0, 'd': -1}


def record(record_id, coeffs, point=None, **extra):
    data = {'id': record_id, 'coeffs': coeffs, **extra}
    if point is not None:
        data['point'] = list(point)
    return data


def json_lines(*records) -> str:
    return ''.join(json.dumps(r) + '\n' for r in records)


def output_records(stream: StringIO):
    return [json.loads(line) for line in stream.getvalue().splitlines() if line.strip()]


def run_command(name, *args, stdin_text=None, **options):
    """Run a command and return (records written to stdout, CommandError or None)."""
    out = StringIO()
    if stdin_text is not None:
        options['stdin'] = StringIO(stdin_text)
    try:
        call_command(name, *args, stdout=out, stderr=StringIO(), **options)
    except CommandError as e:
        return output_records(out), e
    return output_records(out), None


# ==================== INGESTION ====================

class IngestTests(SimpleTestCase):

    def test_format_from_extension(self):
        self.assertEqual(format_for('cases.csv'), 'csv')
        self.assertEqual(format_for('cases.NDJSON'), 'jsonl')
        self.assertEqual(format_for('cases.json'), 'json')
        self.assertEqual(format_for('cases'), 'jsonl')

    def test_json_lines_keep_going_after_a_bad_line(self):
        text = json_lines(record('s', UNIT_SPHERE)) + '{not json\n\n' + json_lines(record('t', UNIT_SPHERE))
        rows = list(read_records(text, 'jsonl'))

        self.assertEqual([row for row, _ in rows], [1, 2, 4])
        self.assertIsInstance(rows[1][1], RowError)
        self.assertEqual(rows[2][1]['id'], 't')

    def test_json_array_accepts_a_single_object(self):
        rows = list(read_records(json.dumps(record('s', UNIT_SPHERE)), 'json'))
        self.assertEqual(len(rows), 1)

        with self.assertRaises(IngestError):
            list(read_records('42', 'json'))

    def test_csv_rows(self):
        text = "id,a,b,c,f,g,h,p,q,r,d,x,y,z,tol\n" \
               "s1,1,1,1,0,0,0,0,0,0,-1,3,0,0,\n" \
               ",1,1,1,0,0,0,0,0,0,-4,0,0,5,1e-5\n"
        rows = list(read_records(text, 'csv'))

        first, second = rows[0][1], rows[1][1]
        self.assertEqual(first['id'], 's1')
        self.assertEqual(first['point'], [3, 0, 0])
        self.assertNotIn('tol', first)
        self.assertEqual(second['id'], '2')
        self.assertEqual(second['coeffs']['d'], -4)
        self.assertEqual(second['tol'], 1e-5)

    def test_csv_missing_columns(self):
        with self.assertRaisesMessage(IngestError, 'x, y, z'):
            list(read_records("id,a,b,c,f,g,h,p,q,r,d\n1,1,1,1,0,0,0,0,0,0,-1\n", 'csv'))

    def test_unknown_format(self):
        with self.assertRaises(IngestError):
            read_records('', 'xml')


# ==================== RECORD VALIDATION ====================

class QueryRecordSerializerTests(SimpleTestCase):

    def test_missing_and_unknown_coefficients(self):
        coeffs = {**UNIT_SPHERE, 'k': 2}
        del coeffs['d']
        serializer = QueryRecordSerializer(data=record('x', coeffs))

        self.assertFalse(serializer.is_valid())
        self.assertIn('Missing coefficient(s): d.', str(serializer.errors['coeffs']))

    def test_point_required_for_proximity(self):
        serializer = QueryRecordSerializer(data=record('x', UNIT_SPHERE), context={'require_point': True})

        self.assertFalse(serializer.is_valid())
        self.assertIn('point', serializer.errors)

    def test_point_must_have_three_coordinates(self):
        serializer = QueryRecordSerializer(data=record('x', UNIT_SPHERE, [1, 2]))
        self.assertFalse(serializer.is_valid())

    def test_tolerance_must_be_positive(self):
        serializer = QueryRecordSerializer(data=record('x', UNIT_SPHERE, tol=0))
        self.assertFalse(serializer.is_valid())

    def test_coefficients_come_back_in_canonical_order(self):
        serializer = QueryRecordSerializer(data=record('x', dict(reversed(list(UNIT_SPHERE.items())))))

        self.assertTrue(serializer.is_valid())
        self.assertEqual(list(serializer.validated_data['coeffs']), list(UNIT_SPHERE))


# ==================== RUNNER ====================

class RunnerTests(SimpleTestCase):

    def test_classification_record(self):
        result = classify_one(record('unit', UNIT_SPHERE))

        self.assertEqual(result['id'], 'unit')
        self.assertEqual(result['class'], 'SphereReal')
        self.assertEqual(list(result)[:2], ['id', 'class'])
        self.assertAlmostEqual(result['J3'], 1.0)
        self.assertAlmostEqual(result['det_a'], -1.0)
        self.assertTrue(result['central'])

    def test_degenerate_record_is_an_error_record(self):
        result = classify_one(record('plane', PLANE))

        self.assertEqual(result, {
            'id': 'plane',
            'error': 'invalid_quadric',
            'detail': 'degenerate: no quadratic terms',
        })

    def test_proximity_record(self):
        result = proximity_one(record('unit', UNIT_SPHERE, [3, 0, 0]))

        self.assertAlmostEqual(result['r_min'], 2.0)
        self.assertEqual(result['side'], 'outside')
        self.assertNotIn('oracle', result)
        self.assertTrue(any(math.isclose(p[0], 1.0, abs_tol=1e-9) for p in result['footpoints3d']))

    def test_non_axisymmetric_record(self):
        result = proximity_one(record('ellipsoid', ELLIPSOID, [1, 1, 1]))
        self.assertEqual(result['error'], 'not_axisymmetric')

    def test_oracle_fields(self):
        result = proximity_one(record('unit', UNIT_SPHERE, [0, 3, 0]), oracle=True, resolution=60)

        self.assertAlmostEqual(result['oracle'], 2.0, delta=1e-6)
        self.assertLess(abs(result['oracle_gap']), 1e-6)

    def test_batch_keeps_input_order_and_fills_ids(self):
        rows = [
            (1, record('', UNIT_SPHERE, [0, 3, 0])),
            (2, RowError(2, 'invalid JSON')),
            (3, record('plane', PLANE, [0, 0, 0])),
            (4, {'coeffs': ONE_SHEET, 'point': [3, 0, 0]}),
        ]
        results = run_batch(rows, 'proximity', backend='inline')

        self.assertEqual([r['id'] for r in results], ['1', '2', 'plane', '4'])
        self.assertEqual(results[1]['error'], 'invalid_record')
        self.assertEqual(results[2]['error'], 'invalid_quadric')
        self.assertAlmostEqual(results[3]['r_min'], math.sqrt(3.5))

    def test_celery_backend_matches_inline(self):
        rows = list(enumerate([case.as_record() for case in GOLDEN_CASES], start=1))

        inline = run_batch(rows, 'classify', backend='inline')
        fanned_out = run_batch(rows, 'classify', backend='celery')

        self.assertEqual(fanned_out, inline)

    def test_unknown_operation_and_backend(self):
        with self.assertRaises(ValueError):
            run_batch([], 'bench')
        with self.assertRaises(ValueError):
            run_batch([], 'classify', backend='threads')


# ==================== COMMANDS ====================

class ClassifyCommandTests(SimpleTestCase):

    def test_corpus_types(self):
        records, error = run_command('classify', corpus=True)

        self.assertIsNone(error)
        self.assertEqual([r['id'] for r in records], [case.id for case in GOLDEN_CASES])
        for r in records:
            with self.subTest(case=r['id']):
                case = golden_case(r['id'])
                self.assertEqual(r['class'], case.kind.value)
                self.assertAlmostEqual(r['J3'], case.j3, delta=2e-3)

    def test_stdin_with_a_failed_record(self):
        text = json_lines(record('unit', UNIT_SPHERE), record('plane', PLANE))
        records, error = run_command('classify', stdin_text=text)

        self.assertEqual(error.returncode, 1)
        self.assertIn('1 of 2 records failed', str(error))
        self.assertEqual(records[0]['class'], 'SphereReal')
        self.assertEqual(records[1]['detail'], 'degenerate: no quadratic terms')

    def test_spheroid_subtype(self):
        text = json_lines(record('oblate', {**UNIT_SPHERE, 'c': 2}))
        records, error = run_command('classify', stdin_text=text)

        self.assertIsNone(error)
        self.assertEqual(records[0]['class'], 'OblateSpheroid')

    def test_csv_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'cases.csv')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write("id,a,b,c,f,g,h,p,q,r,d,x,y,z\n")
                handle.write("cone,1,1,-1,0,0,0,0,0,0,0,1,2,3\n")
                handle.write("cyl,1,1,0,0,0,0,0,0,0,-1,0,0,0\n")
            records, error = run_command('classify', input=path)

        self.assertIsNone(error)
        self.assertEqual([r['class'] for r in records], ['ConeReal', 'CylinderReal'])

    def test_unreadable_input_is_a_usage_error(self):
        records, error = run_command('classify', input='/nonexistent/cases.jsonl')

        self.assertEqual(error.returncode, 2)
        self.assertEqual(records, [])

    def test_malformed_json_array_is_a_usage_error(self):
        _, error = run_command('classify', stdin_text='{"id": 1', format='json')
        self.assertEqual(error.returncode, 2)

    def test_non_positive_tolerance_is_rejected(self):
        with self.assertRaises(CommandError):
            call_command('classify', '--tol=-1', '--corpus', stdout=StringIO())

    def test_async_flag_runs_through_celery(self):
        records, error = run_command('classify', corpus=True, use_celery=True)

        self.assertIsNone(error)
        self.assertEqual(len(records), len(GOLDEN_CASES))


class ProximityCommandTests(SimpleTestCase):

    def test_corpus_distances(self):
        records, error = run_command('proximity', corpus=True)

        self.assertIsNone(error)
        for r in records:
            with self.subTest(case=r['id']):
                self.assertAlmostEqual(r['r_min'], golden_case(r['id']).r_min, delta=1e-3)

    def test_point_on_surface(self):
        text = json_lines(record('on', ONE_SHEET, [math.sqrt(2), 0, 1]))
        records, error = run_command('proximity', stdin_text=text)

        self.assertIsNone(error)
        self.assertAlmostEqual(records[0]['r_min'], 0.0, delta=1e-9)
        self.assertEqual(records[0]['side'], 'on')

    def test_structured_errors(self):
        text = json_lines(
            record('ellipsoid', ELLIPSOID, [1, 1, 1]),
            record('imaginary', {**UNIT_SPHERE, 'd': 1}, [1, 1, 1]),
            record('no-point', UNIT_SPHERE),
        )
        records, error = run_command('proximity', stdin_text=text)

        self.assertEqual(error.returncode, 1)
        self.assertEqual([r['error'] for r in records], ['not_axisymmetric', 'imaginary_surface', 'invalid_record'])

    def test_oracle_column(self):
        text = json_lines(record('unit', UNIT_SPHERE, [3, 0, 0]))
        records, error = run_command('proximity', stdin_text=text, oracle=True, resolution=60)

        self.assertIsNone(error)
        self.assertLess(abs(records[0]['oracle_gap']), 1e-6)

    def test_output_is_stable(self):
        first, _ = run_command('proximity', corpus=True)
        second, _ = run_command('proximity', corpus=True)
        self.assertEqual(first, second)


class BenchCommandTests(SimpleTestCase):

    def test_zero_cycles_gives_an_empty_report(self):
        records, error = run_command('bench', cycles=0)

        self.assertIsNone(error)
        self.assertEqual(records, [])

    def test_single_sphere_case(self):
        text = json_lines(record('unit', UNIT_SPHERE, [3, 0, 0]))
        records, error = run_command('bench', input='-', stdin_text=text, cycles=3)

        self.assertIsNone(error)
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0]['kind'], 'SphereReal')
        self.assertEqual(records[0]['cases'], 1)
        self.assertEqual(records[0]['cycles'], 3)
        self.assertGreater(records[0]['median_ns'], 0)

    def test_kind_filter_and_report(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'bench.csv')
            records, error = run_command('bench', cycles=2, kind=['ConeReal', 'Paraboloid'], report=path)
            report = pd.read_csv(path)

        self.assertIsNone(error)
        self.assertEqual(sorted(r['kind'] for r in records), ['ConeReal', 'Paraboloid'])
        self.assertEqual(list(report.columns), ['kind', 'cases', 'cycles', 'median_ns', 'mean_ns', 'std_ns'])
        self.assertEqual(len(report), 2)

    def test_corpus_has_one_row_per_type(self):
        records, _ = run_command('bench', cycles=1)

        self.assertEqual(len(records), len({case.kind for case in GOLDEN_CASES}))
        medians = [r['median_ns'] for r in records]
        self.assertEqual(medians, sorted(medians))

    def test_unusable_cases_are_skipped(self):
        text = json_lines(record('ellipsoid', ELLIPSOID, [1, 1, 1]))
        records, error = run_command('bench', input='-', stdin_text=text, cycles=2)

        self.assertIsNone(error)
        self.assertEqual(records, [])


class VerifyCommandTests(SimpleTestCase):

    def test_random_cases_agree_with_oracle(self):
        records, error = run_command('verify', cases=8, seed=3, resolution=80, verbosity=0)

        self.assertIsNone(error)
        summary = records[0]
        self.assertEqual(summary['cases'], 8)
        self.assertEqual(summary['mismatches'], 0)
        self.assertEqual(summary['errors'], 0)

    def test_no_cases(self):
        records, error = run_command('verify', cases=0, verbosity=0)

        self.assertIsNone(error)
        self.assertEqual(records[0]['max_gap'], 0.0)
        self.assertEqual(records[0]['max_gap_by_kind'], {})


# ==================== API ====================

class QueryApiTests(SimpleTestCase):

    def setUp(self):
        self.client = APIClient()

    def test_classify_single_record(self):
        response = self.client.post('/api/queries/classify/', golden_case('cone').as_record(), format='json')

        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['class'], 'ConeReal')

    def test_classify_list_reports_failures_inline(self):
        response = self.client.post(
            '/api/queries/classify/', [record('unit', UNIT_SPHERE), record('plane', PLANE), 7], format='json',
        )

        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['count'], 3)
        self.assertEqual(response.data['failed'], 2)
        self.assertEqual(response.data['results'][2]['error'], 'invalid_record')

    def test_proximity_single_record(self):
        response = self.client.post('/api/queries/proximity/', record('unit', UNIT_SPHERE, [-4, 0, 0]), format='json')

        self.assertEqual(response.status_code, 200)
        self.assertAlmostEqual(response.data['r_min'], 3.0)

    def test_proximity_with_oracle(self):
        response = self.client.post(
            '/api/queries/proximity/?oracle=1', record('unit', UNIT_SPHERE, [0, 2, 0]), format='json',
        )

        self.assertEqual(response.status_code, 200)
        self.assertIn('oracle_gap', response.data)

    def test_quadric_error_is_unprocessable(self):
        response = self.client.post('/api/queries/proximity/', record('e', ELLIPSOID, [1, 1, 1]), format='json')

        self.assertEqual(response.status_code, 422)
        self.assertEqual(response.data['error'], 'not_axisymmetric')
        self.assertEqual(response.data['status_code'], 422)

    def test_validation_error_envelope(self):
        response = self.client.post('/api/queries/proximity/', record('u', UNIT_SPHERE), format='json')

        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.data['status_code'], 400)
        self.assertIn('point', response.data['detail'])

    def test_batch_upload(self):
        upload = SimpleUploadedFile(
            'cases.jsonl',
            json_lines(record('unit', UNIT_SPHERE, [3, 0, 0]), record('plane', PLANE, [0, 0, 0])).encode(),
        )
        response = self.client.post('/api/queries/batch/', {'file': upload}, format='multipart')

        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['operation'], 'proximity')
        self.assertEqual(response.data['count'], 2)
        self.assertEqual(response.data['failed'], 1)
        self.assertAlmostEqual(response.data['results'][0]['r_min'], 2.0)

    def test_batch_upload_rejects_other_extensions(self):
        upload = SimpleUploadedFile('cases.txt', b'{}')
        response = self.client.post('/api/queries/batch/', {'file': upload}, format='multipart')

        self.assertEqual(response.status_code, 400)
        self.assertIn('file', response.data)

    def test_batch_upload_with_bad_csv_header(self):
        upload = SimpleUploadedFile('cases.csv', b'id,a\n1,2\n')
        response = self.client.post('/api/queries/batch/', {'file': upload, 'operation': 'classify'},
                                    format='multipart')

        self.assertEqual(response.status_code, 400)
        self.assertIn('missing column', response.data['error'])

    def test_corpus(self):
        response = self.client.get('/api/queries/corpus/')

        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['count'], len(GOLDEN_CASES))
        self.assertEqual(response.data['results'][0]['tol'], 1e-4)

    def test_schema(self):
        response = self.client.get('/schema/')
        self.assertEqual(response.status_code, 200)
