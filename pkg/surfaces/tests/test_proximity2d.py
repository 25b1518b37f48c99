import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import assume, given, settings, strategies as st

from surfaces.proximity2d import (
    CaseTag,
    _regime,
    central_conic_proximity,
    circle_proximity,
    conic_proximity,
    intersecting_lines_proximity,
    parabola_proximity,
    parallel_lines_proximity,
)
from surfaces.reduce import ConicForm, ConicKind

coordinate = st.floats(min_value=-6.0, max_value=6.0, allow_nan=False, allow_infinity=False)


@st.composite
def central_conics(draw):
    """(n, e) for an ellipse or a hyperbola, away from the parabolic limit."""
    n = draw(st.floats(min_value=0.5, max_value=3.0))
    e = draw(st.one_of(st.floats(min_value=0.3, max_value=0.95), st.floats(min_value=1.05, max_value=3.0)))
    return n, e


def central_residual(point, n, e):
    e1 = e * e - 1
    return (point[0] ** 2 - e1 * point[1] ** 2) / (e1 * n * n) + 1


def central_samples(n, e, count=200001):
    e1 = e * e - 1
    m = n * math.sqrt(abs(e1))
    if e < 1:
        angle = np.linspace(-math.pi, math.pi, count)
        return np.column_stack([m * np.sin(angle), n * np.cos(angle)])
    s = np.linspace(-8.0, 8.0, count)
    upper = np.column_stack([m * np.sinh(s), n * np.cosh(s)])
    return np.vstack([upper, upper * [1, -1]])


def astroid(n, e, theta):
    m = n * math.sqrt(1 - e * e)
    return np.array([(m * m - n * n) / m * math.cos(theta) ** 3, (n * n - m * m) / n * math.sin(theta) ** 3])


class CircleTests(SimpleTestCase):

    def test_outside(self):
        result = circle_proximity([3.0, 4.0], 1.0)
        self.assertAlmostEqual(result.r_min, 4.0)
        np.testing.assert_allclose(result.nearest, [0.6, 0.8])
        self.assertEqual(result.case_tag, CaseTag.DIRECT)

    def test_center_is_a_tie(self):
        result = circle_proximity([0.0, 0.0], 2.0)
        self.assertTrue(result.tie)
        self.assertAlmostEqual(result.r_min, 2.0)


class ParabolaTests(SimpleTestCase):

    def test_inside_beyond_the_curvature_center(self):
        result = parabola_proximity([0.0, 5.0], 1.0)
        self.assertEqual(result.case_tag, CaseTag.A2)
        self.assertTrue(result.tie)
        self.assertAlmostEqual(result.r_min, 4.0)
        np.testing.assert_allclose(np.abs(result.footpoints[:, 0]), [2 * math.sqrt(3)] * 2)

    def test_axis_point_near_the_vertex(self):
        for u2p in (1.0, -1.0):
            result = parabola_proximity([0.0, u2p], 1.0)
            self.assertEqual(result.case_tag, CaseTag.A1)
            self.assertAlmostEqual(result.r_min, 1.0)

    def test_off_axis_cases(self):
        self.assertEqual(parabola_proximity([1.0, 5.0], 1.0).case_tag, CaseTag.B1)
        self.assertEqual(len(parabola_proximity([1.0, 5.0], 1.0).footpoints), 3)

        on_evolute = parabola_proximity([2.0, 5.0], 1.0)
        self.assertEqual(on_evolute.case_tag, CaseTag.B2)
        self.assertAlmostEqual(on_evolute.r_min, math.sqrt(5.0))

        self.assertEqual(parabola_proximity([3.0, 5.0], 1.0).case_tag, CaseTag.B3)

        at_curvature_center = parabola_proximity([1.0, 2.0], 1.0)
        self.assertEqual(at_curvature_center.case_tag, CaseTag.B4)
        np.testing.assert_allclose(at_curvature_center.nearest, [2.0, 1.0], atol=1e-12)

    def test_point_on_the_parabola(self):
        result = conic_proximity(ConicForm(ConicKind.PARABOLA, e=1.0, gamma=1.0), [2.0, 1.0])
        self.assertEqual(result.case_tag, CaseTag.ON_CURVE)
        self.assertEqual(result.r_min, 0.0)

    @given(coordinate, coordinate, st.floats(min_value=0.2, max_value=3.0))
    @settings(max_examples=300, deadline=None)
    def test_foot_points_are_normal_and_nearest(self, u1p, u2p, gamma):
        assume(abs(u1p * u1p - 4 * gamma * u2p) > 1e-3)
        pp = np.array([u1p, u2p])
        result = parabola_proximity(pp, gamma)
        for fp in result.footpoints:
            self.assertAlmostEqual(fp[0] ** 2 / (4 * gamma), fp[1], delta=1e-6 * (1 + abs(fp[1])))
            normal = np.array([2 * fp[0], -4 * gamma])
            offset = pp - fp
            cross = offset[0] * normal[1] - offset[1] * normal[0]
            self.assertLessEqual(abs(cross), 1e-5 * np.linalg.norm(offset) * np.linalg.norm(normal) + 1e-9)

        u1 = np.linspace(-60.0, 60.0, 200001)
        samples = np.column_stack([u1, u1 * u1 / (4 * gamma)])
        self.assertLessEqual(result.r_min, np.min(np.linalg.norm(samples - pp, axis=1)) + 1e-7)

    @given(st.floats(min_value=0.2, max_value=3.0), st.floats(min_value=0.1, max_value=3.0),
           st.floats(min_value=0.05, max_value=0.95))
    @settings(max_examples=100, deadline=None)
    def test_inside_the_evolute_three_normals(self, gamma, w, fraction):
        u1p = fraction * math.sqrt(4 * w ** 3 / (27 * gamma))
        result = parabola_proximity([u1p, 2 * gamma + w], gamma)
        self.assertEqual(result.case_tag, CaseTag.B1)
        self.assertEqual(len(result.footpoints), 3)

    @given(st.floats(min_value=0.2, max_value=3.0), st.floats(min_value=-6.0, max_value=1.95))
    @settings(max_examples=100, deadline=None)
    def test_axis_below_the_curvature_center_takes_the_vertex(self, gamma, ratio):
        u2p = ratio * gamma
        assume(abs(u2p) > 1e-3)
        result = parabola_proximity([0.0, u2p], gamma)
        self.assertEqual(result.case_tag, CaseTag.A1)
        self.assertAlmostEqual(result.r_min, abs(u2p), delta=1e-12)

    @given(st.floats(min_value=0.2, max_value=3.0), st.floats(min_value=2.1, max_value=8.0))
    @settings(max_examples=100, deadline=None)
    def test_axis_beyond_the_curvature_center_has_two_normals(self, gamma, ratio):
        u2p = ratio * gamma
        result = parabola_proximity([0.0, u2p], gamma)
        self.assertEqual(result.case_tag, CaseTag.A2)
        self.assertTrue(result.tie)
        self.assertEqual(len(result.footpoints), 2)
        self.assertAlmostEqual(result.r_min, math.sqrt(4 * gamma * u2p - 4 * gamma * gamma), delta=1e-9)

    @given(st.floats(min_value=0.5, max_value=2.0), st.floats(min_value=0.5, max_value=4.0),
           st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=100, deadline=None)
    def test_on_the_evolute_two_normals(self, gamma, ratio, sign):
        w = ratio * gamma
        u1p = sign * math.sqrt(4 * w ** 3 / (27 * gamma))
        result = parabola_proximity([u1p, 2 * gamma + w], gamma)
        self.assertEqual(result.case_tag, CaseTag.B2)
        self.assertEqual(len(result.footpoints), 2)
        for fp in result.footpoints:
            self.assertAlmostEqual(fp[0] ** 2 / (4 * gamma), fp[1], delta=1e-6 * (1 + abs(fp[1])))

    @given(st.floats(min_value=0.5, max_value=2.0), st.floats(min_value=0.5, max_value=4.0),
           st.floats(min_value=1.1, max_value=4.0), st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=100, deadline=None)
    def test_outside_the_evolute_one_normal(self, gamma, ratio, fraction, sign):
        w = ratio * gamma
        u1p = sign * fraction * math.sqrt(4 * w ** 3 / (27 * gamma))
        u2p = 2 * gamma + w
        assume(abs(u1p * u1p - 4 * gamma * u2p) > 1e-3)
        result = parabola_proximity([u1p, u2p], gamma)
        self.assertEqual(result.case_tag, CaseTag.B3)
        self.assertEqual(len(result.footpoints), 1)

    @given(st.floats(min_value=0.2, max_value=3.0), st.floats(min_value=0.05, max_value=6.0),
           st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=100, deadline=None)
    def test_level_with_the_curvature_center_one_normal(self, gamma, ratio, sign):
        u1p = sign * ratio * gamma
        assume(abs(u1p * u1p - 8 * gamma * gamma) > 1e-3 * gamma * gamma)
        result = parabola_proximity([u1p, 2 * gamma], gamma)
        self.assertEqual(result.case_tag, CaseTag.B4)
        self.assertEqual(len(result.footpoints), 1)


class CentralConicTests(SimpleTestCase):

    def test_inside_an_ellipse_on_the_major_axis(self):
        result = central_conic_proximity([0.0, 0.5], 2.0, math.sqrt(0.75))
        self.assertEqual(result.case_tag, CaseTag.A1)
        self.assertTrue(result.tie)
        fp = result.footpoints[0]
        self.assertAlmostEqual(fp[0] ** 2 + fp[1] ** 2 / 4, 1.0)

    def test_beyond_the_ellipse_vertex(self):
        result = central_conic_proximity([0.0, 3.0], 2.0, math.sqrt(0.75))
        self.assertEqual(result.case_tag, CaseTag.A2)
        self.assertAlmostEqual(result.r_min, 1.0)

    def test_ellipse_minor_axis(self):
        result = central_conic_proximity([0.1, 0.0], 2.0, math.sqrt(0.75))
        self.assertEqual(result.case_tag, CaseTag.B1)
        self.assertAlmostEqual(result.r_min, 0.9)

    def test_hyperbola_transverse_axis_between_the_sheets(self):
        result = central_conic_proximity([0.0, 0.3], 1.0, math.sqrt(2.0))
        self.assertEqual(result.case_tag, CaseTag.A2)
        self.assertAlmostEqual(result.r_min, 0.7)

    def test_hyperbola_conjugate_axis(self):
        result = central_conic_proximity([1.0, 0.0], 1.0, math.sqrt(2.0))
        self.assertEqual(result.case_tag, CaseTag.B2)
        self.assertTrue(result.tie)
        for fp in result.footpoints:
            self.assertAlmostEqual(fp[1] ** 2 - fp[0] ** 2, 1.0)

    @given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=0.5, max_value=0.95),
           st.floats(min_value=0.2, max_value=1.37), st.floats(min_value=0.1, max_value=0.9))
    @settings(max_examples=150, deadline=None)
    def test_inside_the_ellipse_evolute_four_normals(self, n, e, theta, fraction):
        pp = fraction * astroid(n, e, theta)
        assume(abs(central_residual(pp, n, e)) > 1e-3)
        result = central_conic_proximity(pp, n, e)
        self.assertEqual(result.case_tag, CaseTag.C1)
        self.assertEqual(len(result.footpoints), 4)

    @given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=0.5, max_value=0.95),
           st.floats(min_value=0.2, max_value=1.37), st.floats(min_value=1.1, max_value=3.0))
    @settings(max_examples=150, deadline=None)
    def test_outside_the_ellipse_evolute_two_normals(self, n, e, theta, fraction):
        pp = fraction * astroid(n, e, theta)
        assume(abs(central_residual(pp, n, e)) > 1e-3)
        result = central_conic_proximity(pp, n, e)
        self.assertEqual(result.case_tag, CaseTag.C3)
        self.assertEqual(len(result.footpoints), 2)

    @given(central_conics(), coordinate, coordinate)
    @settings(max_examples=300, deadline=None)
    def test_foot_points_are_normal_and_nearest(self, conic, u1p, u2p):
        n, e = conic
        assume(abs(u1p) > 1e-3 and abs(u2p) > 1e-3)
        assume(abs(central_residual((u1p, u2p), n, e)) > 1e-3)
        pp = np.array([u1p, u2p])
        e1 = e * e - 1
        result = central_conic_proximity(pp, n, e)
        for fp in result.footpoints:
            self.assertLessEqual(abs(central_residual(fp, n, e)), 1e-5)
            normal = np.array([2 * fp[0], -2 * e1 * fp[1]])
            offset = pp - fp
            cross = offset[0] * normal[1] - offset[1] * normal[0]
            self.assertLessEqual(abs(cross), 1e-5 * np.linalg.norm(offset) * np.linalg.norm(normal) + 1e-9)

        samples = central_samples(n, e)
        self.assertLessEqual(result.r_min, np.min(np.linalg.norm(samples - pp, axis=1)) + 1e-7)

    @given(central_conics(), coordinate, coordinate)
    @settings(max_examples=100, deadline=None)
    def test_reflections_mirror_the_foot_points(self, conic, u1p, u2p):
        n, e = conic
        assume(abs(u1p) > 1e-3 and abs(u2p) > 1e-3)
        assume(abs(central_residual((u1p, u2p), n, e)) > 1e-3)
        base = central_conic_proximity([u1p, u2p], n, e)
        for signs in ([-1, 1], [1, -1], [-1, -1]):
            mirrored = central_conic_proximity(np.array([u1p, u2p]) * signs, n, e)
            self.assertAlmostEqual(mirrored.r_min, base.r_min, delta=1e-9 * (1 + base.r_min))
            np.testing.assert_allclose(np.abs(mirrored.nearest), np.abs(base.nearest), atol=1e-6)

    def test_just_off_the_minor_axis(self):
        n, e = 0.5294, 0.3222
        m = n * math.sqrt(1 - e * e)
        result = central_conic_proximity([2.1883, -0.000563], n, e)
        self.assertEqual(result.case_tag, CaseTag.C3)
        self.assertEqual(len(result.params), 2)
        self.assertAlmostEqual(result.r_min, 2.1883 - m, delta=1e-6)

    @given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=0.3, max_value=0.95),
           st.floats(min_value=1.2, max_value=5.0), st.floats(min_value=-6.0, max_value=-2.0),
           st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=200, deadline=None)
    def test_points_near_the_minor_axis(self, n, e, factor, exponent, sign):
        m = n * math.sqrt(1 - e * e)
        u1p, u2p = factor * m, sign * 10.0 ** exponent
        result = central_conic_proximity([u1p, u2p], n, e)
        self.assertGreaterEqual(result.r_min, u1p - m - 1e-12)
        self.assertLessEqual(result.r_min, math.hypot(u1p - m, u2p) + 1e-12)

    @given(central_conics(), st.floats(min_value=-0.95, max_value=0.95), st.floats(min_value=1.05, max_value=3.0),
           st.sampled_from([-1.0, 1.0]))
    @settings(max_examples=100, deadline=None)
    def test_major_axis_with_two_normals(self, conic, inside, outside, sign):
        n, e = conic
        u2p = (inside if e < 1 else sign * outside) * n * e * e
        result = central_conic_proximity([0.0, u2p], n, e)
        self.assertEqual(result.case_tag, CaseTag.A1)
        self.assertTrue(result.tie)
        self.assertEqual(len(result.footpoints), 2)
        for fp in result.footpoints:
            self.assertLessEqual(abs(central_residual(fp, n, e)), 1e-9)

    @given(central_conics(), st.floats(min_value=-6.0, max_value=6.0))
    @settings(max_examples=100, deadline=None)
    def test_major_axis_at_the_vertex(self, conic, u2p):
        n, e = conic
        outside_band = abs(u2p) > n * e * e if e < 1 else abs(u2p) < n * e * e
        assume(outside_band and abs(abs(u2p) - n) > 1e-3)
        result = central_conic_proximity([0.0, u2p], n, e)
        self.assertEqual(result.case_tag, CaseTag.A2)
        self.assertAlmostEqual(result.r_min, abs(abs(u2p) - n), delta=1e-12)

    @given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=0.3, max_value=0.95),
           st.floats(min_value=-6.0, max_value=6.0))
    @settings(max_examples=100, deadline=None)
    def test_ellipse_minor_axis_takes_the_minor_vertex(self, n, e, u1p):
        m = n * math.sqrt(1 - e * e)
        assume(abs(u1p) > 1e-3 and abs(abs(u1p) - m) > 1e-3)
        result = central_conic_proximity([u1p, 0.0], n, e)
        self.assertEqual(result.case_tag, CaseTag.B1)
        self.assertAlmostEqual(result.r_min, abs(abs(u1p) - m), delta=1e-12)

    @given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=1.05, max_value=3.0),
           st.floats(min_value=-6.0, max_value=6.0))
    @settings(max_examples=100, deadline=None)
    def test_hyperbola_conjugate_axis_two_normals(self, n, e, u1p):
        assume(abs(u1p) > 1e-3)
        result = central_conic_proximity([u1p, 0.0], n, e)
        self.assertEqual(result.case_tag, CaseTag.B2)
        self.assertTrue(result.tie)
        self.assertAlmostEqual(result.r_min, math.sqrt(n * n + u1p * u1p / (e * e)), delta=1e-9)

    @given(st.floats(min_value=0.5, max_value=3.0), st.floats(min_value=0.5, max_value=0.95),
           st.floats(min_value=0.2, max_value=1.37))
    @settings(max_examples=100, deadline=None)
    def test_on_the_ellipse_evolute_three_normals(self, n, e, theta):
        pp = astroid(n, e, theta)
        assume(abs(central_residual(pp, n, e)) > 1e-3)
        result = central_conic_proximity(pp, n, e)
        self.assertEqual(result.case_tag, CaseTag.C2)
        self.assertEqual(len(result.params), 3)

    @given(central_conics(), coordinate, coordinate)
    @settings(max_examples=300, deadline=None)
    def test_root_count_follows_the_regime(self, conic, u1p, u2p):
        n, e = conic
        assume(abs(u1p) > 1e-3 and abs(u2p) > 1e-3)
        assume(abs(central_residual((u1p, u2p), n, e)) > 1e-3)
        delta1, magnitude = _regime((e * e - 1) * u1p * u1p, u2p, n * n * e ** 4)
        assume(abs(delta1) > 1e-6 * magnitude)
        result = central_conic_proximity([u1p, u2p], n, e)
        expected = {CaseTag.C1: 4, CaseTag.C3: 2}[result.case_tag]
        self.assertEqual(result.case_tag, CaseTag.C1 if delta1 > 0 else CaseTag.C3)
        self.assertEqual(len(result.params), expected)


class LinePairTests(SimpleTestCase):

    def test_intersecting_lines(self):
        result = intersecting_lines_proximity([2.0, 0.0], 1.0)
        self.assertAlmostEqual(result.r_min, math.sqrt(2.0))
        self.assertEqual(len(result.footpoints), 2)

    def test_parallel_lines(self):
        result = parallel_lines_proximity([3.0, 7.0], 1.0)
        self.assertAlmostEqual(result.r_min, 2.0)
        np.testing.assert_allclose(result.nearest, [1.0, 7.0])

    def test_dispatch_reports_points_on_a_line(self):
        result = conic_proximity(ConicForm(ConicKind.PARALLEL_LINES, e=math.inf, m=1.0), [1.0, 0.5])
        self.assertEqual(result.r_min, 0.0)
