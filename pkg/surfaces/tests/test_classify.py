import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from surfaces.algebra import QuadricCoeffs
from surfaces.classify import AqKind, canonical_orientation, classify_quadric
from surfaces.corpus import GOLDEN_CASES, GOLDEN_TOLERANCE, RANDOM_KINDS, canonical_quadric, random_case
from surfaces.engine import transform_quadric
from surfaces.exceptions import ImaginarySurface, NotAxisymmetric


def diagonal(a, b, c, d, r=0.0):
    return QuadricCoeffs(a, b, c, 0, 0, 0, 0, 0, r, d)


TRANSLATED_SHAPES = {
    AqKind.PROLATE_SPHEROID: {'radial': 1.0, 'axial': 2.0},
    AqKind.OBLATE_SPHEROID: {'radial': 2.0, 'axial': 1.0},
    AqKind.SPHERE_REAL: {'radial': 1.0},
    AqKind.HYPERBOLOID_ONE_SHEET: {'radial': 1.0, 'axial': 1.5},
    AqKind.HYPERBOLOID_TWO_SHEETS: {'radial': 1.5, 'axial': 1.0},
    AqKind.CONE_REAL: {'radial': 1.0, 'axial': 2.0},
    AqKind.PARABOLOID: {'focal': 0.5},
    AqKind.CYLINDER_REAL: {'radial': 1.0},
}


class GoldenClassificationTests(SimpleTestCase):

    def test_golden_kinds(self):
        for case in GOLDEN_CASES:
            with self.subTest(case=case.id):
                cls = classify_quadric(case.coeffs, GOLDEN_TOLERANCE)
                self.assertEqual(cls.kind, case.kind)
                self.assertTrue(cls.is_real)

    def test_golden_eigenvalues_on_the_input_scale(self):
        for case in GOLDEN_CASES:
            with self.subTest(case=case.id):
                cls = classify_quadric(case.coeffs, GOLDEN_TOLERANCE)
                self.assertAlmostEqual(cls.lambda12, case.lambda12, delta=1e-3)
                self.assertAlmostEqual(cls.lambda3, case.lambda3, delta=1e-3)

    def test_central_flag(self):
        central = {case.id: classify_quadric(case.coeffs, GOLDEN_TOLERANCE).central for case in GOLDEN_CASES}
        self.assertFalse(central['paraboloid'])
        self.assertFalse(central['cylinder'])
        self.assertTrue(central['cone'])
        self.assertTrue(central['prolate-spheroid'])


class DecisionTreeTests(SimpleTestCase):

    def test_axis_aligned_examples(self):
        examples = [
            (diagonal(1, 1, 0.25, -1), AqKind.PROLATE_SPHEROID),
            (diagonal(1, 1, 4, -1), AqKind.OBLATE_SPHEROID),
            (diagonal(1, 1, 4, 1), AqKind.SPHEROID_IMAGINARY),
            (diagonal(1, 1, 1, -1), AqKind.SPHERE_REAL),
            (diagonal(1, 1, 1, 1), AqKind.SPHERE_IMAGINARY),
            (diagonal(1, 1, -1, -1), AqKind.HYPERBOLOID_ONE_SHEET),
            (diagonal(1, 1, -1, 1), AqKind.HYPERBOLOID_TWO_SHEETS),
            (diagonal(1, 1, -1, 0), AqKind.CONE_REAL),
            (diagonal(1, 1, 1, 0), AqKind.CONE_IMAGINARY),
            (diagonal(1, 1, 0, 0, r=-1), AqKind.PARABOLOID),
            (diagonal(1, 1, 0, -1), AqKind.CYLINDER_REAL),
            (diagonal(1, 1, 0, 1), AqKind.CYLINDER_IMAGINARY),
            (diagonal(1, 2, 3, -1), AqKind.NON_AXISYMMETRIC),
            (diagonal(1, 0, 0, -1), AqKind.NON_AXISYMMETRIC),
        ]
        for q, expected in examples:
            with self.subTest(kind=expected):
                self.assertEqual(classify_quadric(q).kind, expected)

    def test_imaginary_kinds_are_not_real(self):
        for q in (diagonal(1, 1, 1, 1), diagonal(1, 1, 4, 1), diagonal(1, 1, 1, 0), diagonal(1, 1, 0, 1)):
            self.assertFalse(classify_quadric(q).is_real)

    @given(st.floats(min_value=-100.0, max_value=100.0).filter(lambda k: abs(k) > 1e-2),
           st.integers(min_value=0, max_value=len(GOLDEN_CASES) - 1))
    @settings(max_examples=80, deadline=None)
    def test_nonzero_multiples_keep_their_kind(self, k, index):
        case = GOLDEN_CASES[index]
        self.assertEqual(classify_quadric(case.coeffs.scaled(k), GOLDEN_TOLERANCE).kind, case.kind)

    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.sampled_from(RANDOM_KINDS))
    @settings(max_examples=300, deadline=None)
    def test_rigidly_moved_surfaces_keep_their_kind(self, seed, kind):
        case = random_case(np.random.default_rng(seed), kind)
        self.assertEqual(classify_quadric(case.coeffs).kind, kind)

    def test_translated_surfaces_keep_their_kind(self):
        for kind, shape in TRANSLATED_SHAPES.items():
            for shift in (10.0, 25.0, 50.0):
                with self.subTest(kind=kind, shift=shift):
                    q = transform_quadric(canonical_quadric(kind, **shape), np.eye(3), [shift, 0.3 * shift, 0.0])
                    cls = classify_quadric(q)
                    self.assertEqual(cls.kind, kind)
                    self.assertTrue(cls.is_real)

    @given(st.sampled_from(RANDOM_KINDS), st.floats(min_value=-60.0, max_value=60.0),
           st.floats(min_value=-60.0, max_value=60.0), st.floats(min_value=-60.0, max_value=60.0))
    @settings(max_examples=300, deadline=None)
    def test_translation_never_changes_the_kind(self, kind, x, y, z):
        q = transform_quadric(canonical_quadric(kind, **TRANSLATED_SHAPES[kind]), np.eye(3), [x, y, z])
        self.assertEqual(classify_quadric(q).kind, kind)


class CanonicalOrientationTests(SimpleTestCase):

    def test_repeated_eigenvalue_becomes_positive(self):
        for case in GOLDEN_CASES:
            with self.subTest(case=case.id):
                qn, cls = canonical_orientation(case.coeffs.scaled(-3.0), GOLDEN_TOLERANCE)
                self.assertEqual(cls.factor, 1.0)
                self.assertGreater(cls.lambda12, 0)
                self.assertAlmostEqual(qn.scale, 1.0)

    def test_rejects_non_axisymmetric(self):
        with self.assertRaises(NotAxisymmetric):
            canonical_orientation(diagonal(1, 2, 3, -1))

    def test_rejects_imaginary(self):
        with self.assertRaises(ImaginarySurface):
            canonical_orientation(diagonal(1, 1, 1, 1))
