import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from surfaces.algebra import QuadricCoeffs
from surfaces.classify import AqKind
from surfaces.corpus import GOLDEN_CASES, GOLDEN_TOLERANCE, RANDOM_KINDS, canonical_quadric, random_case
from surfaces.engine import ProximityEngine, get_proximity_engine, proximity3d, transform_quadric
from surfaces.exceptions import ImaginarySurface, InvalidQuadric, NotAxisymmetric
from surfaces.oracle import oracle_min_distance

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def surface_gap(q: QuadricCoeffs, points) -> np.ndarray:
    """First-order distance of each point from the surface."""
    points = np.atleast_2d(points)
    return np.abs(q.evaluate(points)) / np.maximum(np.linalg.norm(q.gradient(points), axis=1), 1e-300)


class GoldenProximityTests(SimpleTestCase):

    def test_minimum_distances(self):
        for case in GOLDEN_CASES:
            with self.subTest(case=case.id):
                result = proximity3d(case.coeffs, case.point, GOLDEN_TOLERANCE)
                self.assertEqual(result.aq_class.kind, case.kind)
                self.assertAlmostEqual(result.r_min, case.r_min, delta=1e-3)

    def test_every_foot_point_distance(self):
        for case in GOLDEN_CASES:
            if not case.distances:
                continue
            with self.subTest(case=case.id):
                result = proximity3d(case.coeffs, case.point, GOLDEN_TOLERANCE)
                np.testing.assert_allclose(sorted(result.planar.distances), sorted(case.distances), atol=1e-3)

    def test_planar_coordinates(self):
        for case in GOLDEN_CASES:
            with self.subTest(case=case.id):
                result = proximity3d(case.coeffs, case.point, GOLDEN_TOLERANCE)
                if case.kind is AqKind.CYLINDER_REAL:
                    # the axial coordinate depends on which axis point is the origin
                    self.assertAlmostEqual(abs(result.pp[0]), case.pp[0], delta=1e-3)
                else:
                    np.testing.assert_allclose(np.abs(result.pp), case.pp, atol=1e-3)

    def test_root_parameters(self):
        for case in GOLDEN_CASES:
            if not case.params:
                continue
            with self.subTest(case=case.id):
                result = proximity3d(case.coeffs, case.point, GOLDEN_TOLERANCE)
                np.testing.assert_allclose(sorted(np.abs(result.planar.params)), sorted(case.params), atol=1e-3)

    def test_root_parameters_follow_the_side_of_the_axial_coordinate(self):
        case = next(case for case in GOLDEN_CASES if case.id == 'prolate-spheroid')
        result = proximity3d(case.coeffs, case.point, GOLDEN_TOLERANCE)
        expected = sorted(-np.sign(result.pp[1]) * np.array([0.4646, -0.4169]))
        np.testing.assert_allclose(sorted(result.planar.params), expected, atol=1e-3)

    def test_lifted_foot_points(self):
        for case in GOLDEN_CASES:
            with self.subTest(case=case.id):
                result = proximity3d(case.coeffs, case.point, GOLDEN_TOLERANCE)
                lifted = np.linalg.norm(result.footpoints3d - np.asarray(case.point), axis=1)
                np.testing.assert_allclose(lifted, result.planar.distances, atol=1e-9)
                self.assertTrue(np.all(surface_gap(case.coeffs, result.footpoints3d) <= 1e-3))

    def test_side_of_the_surface(self):
        sides = {case.id: proximity3d(case.coeffs, case.point, GOLDEN_TOLERANCE).side for case in GOLDEN_CASES}
        self.assertEqual(sides['sphere'], 'outside')
        self.assertTrue(set(sides.values()) <= {'inside', 'outside'})


class ProximityTests(SimpleTestCase):

    def test_unit_sphere(self):
        result = proximity3d(QuadricCoeffs(1, 1, 1, 0, 0, 0, 0, 0, 0, -1), [3.0, 0.0, 0.0])
        self.assertAlmostEqual(result.r_min, 2.0, places=12)
        np.testing.assert_allclose(result.nearest, [1.0, 0.0, 0.0], atol=1e-12)

    def test_query_on_the_axis(self):
        q = canonical_quadric(AqKind.PROLATE_SPHEROID, radial=1.0, axial=2.0)
        result = proximity3d(q, [0.0, 0.0, 3.0])
        self.assertTrue(result.frame.collinear)
        self.assertAlmostEqual(result.r_min, 1.0, places=12)
        np.testing.assert_allclose(result.nearest, [0.0, 0.0, 2.0], atol=1e-12)

    def test_query_on_the_surface(self):
        q = canonical_quadric(AqKind.HYPERBOLOID_ONE_SHEET, radial=1.0, axial=1.0)
        point = [np.sqrt(2.0), 0.0, 1.0]
        result = proximity3d(q, point)
        self.assertEqual(result.r_min, 0.0)
        self.assertEqual(result.side, 'on')
        np.testing.assert_array_equal(result.nearest, point)

    def test_query_on_the_axis_for_any_section_plane(self):
        q = canonical_quadric(AqKind.OBLATE_SPHEROID, radial=2.0, axial=1.0)
        point = np.array([0.0, 0.0, 0.4])
        expected = proximity3d(q, point).r_min
        for angle in np.linspace(0.0, 315.0, 8):
            rotation = Rotation.from_euler('zx', [angle, 35.0], degrees=True).as_matrix()
            moved = transform_quadric(q, rotation, [0.3, -0.2, 0.1])
            result = proximity3d(moved, rotation @ point + [0.3, -0.2, 0.1])
            self.assertAlmostEqual(result.r_min, expected, delta=1e-9 * expected)

    def test_bad_input(self):
        with self.assertRaises(NotAxisymmetric):
            proximity3d(QuadricCoeffs(1, 2, 3, 0, 0, 0, 0, 0, 0, -1), [1.0, 1.0, 1.0])
        with self.assertRaises(ImaginarySurface):
            proximity3d(QuadricCoeffs(1, 1, 1, 0, 0, 0, 0, 0, 0, 1), [1.0, 1.0, 1.0])
        with self.assertRaises(InvalidQuadric):
            proximity3d(QuadricCoeffs(1, 1, 1, 0, 0, 0, 0, 0, 0, -1), [1.0, float('nan'), 0.0])
        with self.assertRaises(InvalidQuadric):
            proximity3d(QuadricCoeffs(1, 1, 1, 0, 0, 0, 0, 0, 0, -1), [1.0, 0.0])

    def test_query_just_off_the_equator(self):
        q = canonical_quadric(AqKind.PROLATE_SPHEROID, radial=1.478, axial=1.667)
        result = proximity3d(q, [5.184, 0.0, 8.05e-4])
        self.assertGreaterEqual(result.r_min, 5.184 - 1.478 - 1e-12)
        self.assertLessEqual(result.r_min, np.hypot(5.184 - 1.478, 8.05e-4) + 1e-12)

    @given(st.floats(min_value=1.0, max_value=1.5), st.floats(min_value=1.6, max_value=3.0),
           st.floats(min_value=1.2, max_value=5.0), st.floats(min_value=-6.0, max_value=-2.0),
           st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=200, deadline=None)
    def test_queries_near_the_equator(self, radial, axial, factor, exponent, sign):
        q = canonical_quadric(AqKind.PROLATE_SPHEROID, radial=radial, axial=axial)
        x, z = factor * radial, sign * 10.0 ** exponent
        result = proximity3d(q, [x, 0.0, z])
        self.assertGreaterEqual(result.r_min, x - radial - 1e-12)
        self.assertLessEqual(result.r_min, np.hypot(x - radial, z) + 1e-12)

    def test_far_translated_cylinder(self):
        shift = np.array([50.0, 15.0, 0.0])
        q = transform_quadric(canonical_quadric(AqKind.CYLINDER_REAL, radial=1.0), np.eye(3), shift)
        result = proximity3d(q, shift + [3.0, 0.0, 1.0])
        self.assertEqual(result.aq_class.kind, AqKind.CYLINDER_REAL)
        self.assertTrue(np.all(np.isfinite(result.footpoints3d)))
        self.assertAlmostEqual(result.r_min, 2.0, delta=1e-9)

    def test_translated_paraboloid(self):
        q = canonical_quadric(AqKind.PARABOLOID, focal=0.5)
        local = np.array([1.0, 0.5, 2.0])
        expected = proximity3d(q, local).r_min
        shift = np.array([10.0, 3.0, 0.0])
        result = proximity3d(transform_quadric(q, np.eye(3), shift), local + shift)
        self.assertEqual(result.aq_class.kind, AqKind.PARABOLOID)
        self.assertAlmostEqual(result.r_min, expected, delta=1e-6 * (1 + expected))

    @given(seeds, st.sampled_from(RANDOM_KINDS))
    @settings(max_examples=300, deadline=None)
    def test_foot_points_are_normal(self, seed, kind):
        case = random_case(np.random.default_rng(seed), kind)
        result = proximity3d(case.coeffs, case.point)
        scale = 1.0 + np.linalg.norm(case.point - case.translation)
        self.assertTrue(np.all(surface_gap(case.coeffs, result.footpoints3d) <= 1e-5 * scale))
        for fp, distance in zip(result.footpoints3d, result.planar.distances):
            if distance <= 1e-9:
                continue
            normal = case.coeffs.gradient(fp)
            offset = case.point - fp
            sine = np.linalg.norm(np.cross(offset, normal)) / (np.linalg.norm(offset) * np.linalg.norm(normal))
            self.assertLess(sine, 1e-4)

    @given(seeds, st.sampled_from(RANDOM_KINDS))
    @settings(max_examples=200, deadline=None)
    def test_rigid_motion_does_not_change_the_distance(self, seed, kind):
        case = random_case(np.random.default_rng(seed), kind)
        moved = proximity3d(case.coeffs, case.point).r_min
        local = proximity3d(case.canonical, case.local_point).r_min
        self.assertAlmostEqual(moved, local, delta=1e-6 * (1 + local))

    @given(seeds, st.floats(min_value=-50.0, max_value=50.0).filter(lambda k: abs(k) > 1e-2))
    @settings(max_examples=100, deadline=None)
    def test_scaling_the_coefficients_does_not_change_the_distance(self, seed, k):
        case = random_case(np.random.default_rng(seed))
        base = proximity3d(case.coeffs, case.point).r_min
        self.assertAlmostEqual(proximity3d(case.coeffs.scaled(k), case.point).r_min, base, delta=1e-7 * (1 + base))

    def test_transform_moves_points_with_the_surface(self):
        rng = np.random.default_rng(5)
        q = canonical_quadric(AqKind.CONE_REAL, radial=1.0, axial=2.0)
        rotation, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        translation = np.array([1.0, -2.0, 0.5])
        moved = transform_quadric(q, rotation, translation)
        points = rng.normal(size=(20, 3))
        np.testing.assert_allclose(moved.evaluate(points @ rotation.T + translation), q.evaluate(points), atol=1e-9)


class OracleAgreementTests(SimpleTestCase):

    def test_golden_cases(self):
        for case in GOLDEN_CASES:
            with self.subTest(case=case.id):
                closed = proximity3d(case.coeffs, case.point, GOLDEN_TOLERANCE).r_min
                brute = oracle_min_distance(case.coeffs, case.point, tol=GOLDEN_TOLERANCE)
                self.assertAlmostEqual(closed, brute, delta=max(1e-4, 1e-3 * closed))

    def test_random_corpus(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            case = random_case(rng)
            with self.subTest(kind=case.kind):
                closed = proximity3d(case.coeffs, case.point).r_min
                brute = oracle_min_distance(case.coeffs, case.point)
                self.assertLessEqual(closed, brute + 1e-9)
                self.assertAlmostEqual(closed, brute, delta=max(1e-4, 1e-3 * closed))


class EngineFacadeTests(SimpleTestCase):

    def test_one_engine_per_process(self):
        self.assertIs(get_proximity_engine(), get_proximity_engine())
        self.assertIs(ProximityEngine(), get_proximity_engine())

    @override_settings(QUADRIC_TOLERANCE=1e-5, QUADRIC_ORACLE_RESOLUTION=120)
    def test_reads_project_settings(self):
        engine = get_proximity_engine()
        self.assertEqual(engine.describe(), {'tolerance': 1e-5, 'oracle_resolution': 120})

    def test_classify_reports_input_invariants(self):
        case = GOLDEN_CASES[0]
        cls, inv = get_proximity_engine().classify(case.coeffs, GOLDEN_TOLERANCE)
        self.assertEqual(cls.kind, AqKind.PROLATE_SPHEROID)
        self.assertAlmostEqual(inv.j3, case.j3, delta=1e-3)
