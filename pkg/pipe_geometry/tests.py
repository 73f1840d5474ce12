import math

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from hypothesis import given, strategies as st

from core.exceptions import NotABend, OutOfRange
from pipe_geometry.geometry import (
    REFERENCE_BEND_RADIUS_MM, REFERENCE_PIPE_RADIUS_MM, Bend, PipeNetwork, PipeSpec, Straight,
    arc_length, effective_mu, effective_radius, locate, reference_network, track_speed_ratios,
)

SPEC = PipeSpec(REFERENCE_PIPE_RADIUS_MM)
ELBOW = Bend(90.0, REFERENCE_BEND_RADIUS_MM)

# orientation -> reference ratio triple
TABLE1_RATIOS = {
    0.0: (0.670, 1.165, 1.165),
    30.0: (0.715, 1.285, 1.000),
    60.0: (0.835, 1.329, 0.835),
}

angles = st.floats(min_value=-720.0, max_value=720.0, allow_nan=False)


class SegmentTests(SimpleTestCase):

    def test_straight_arc_length(self):
        self.assertEqual(arc_length(Straight(550.0)), 550.0)

    def test_elbow_arc_length(self):
        self.assertAlmostEqual(arc_length(Bend(90.0, 418.77)), 657.80, delta=657.83 * 0.0005)
        self.assertAlmostEqual(arc_length(ELBOW), 657.83, places=9)

    def test_u_section_is_twice_the_elbow(self):
        self.assertAlmostEqual(arc_length(Bend(180.0, ELBOW.curvature_radius_R)), 2.0 * arc_length(ELBOW))

    def test_invalid_segments(self):
        with self.assertRaises(ValidationError):
            Straight(0.0)
        with self.assertRaises(ValidationError):
            Bend(0.0, 400.0)
        with self.assertRaises(ValidationError):
            Bend(361.0, 400.0)
        with self.assertRaises(ValidationError):
            PipeSpec(0.0)

    def test_bend_tighter_than_pipe_rejected(self):
        with self.assertRaises(ValidationError):
            PipeNetwork(PipeSpec(150.0), (Straight(100.0), Bend(90.0, 150.0)))

    def test_empty_network_rejected(self):
        with self.assertRaises(ValidationError):
            PipeNetwork(SPEC, ())


class EffectiveRadiusTests(SimpleTestCase):

    def test_module_a_nearest_center_at_zero_roll(self):
        R, r = ELBOW.curvature_radius_R, SPEC.inner_radius_r
        self.assertAlmostEqual(effective_radius(0, 0.0, ELBOW, SPEC), R - r)

    def test_outer_modules_at_zero_roll(self):
        R, r = ELBOW.curvature_radius_R, SPEC.inner_radius_r
        self.assertAlmostEqual(effective_radius(1, 0.0, ELBOW, SPEC), R + r / 2.0)
        self.assertAlmostEqual(effective_radius(2, 0.0, ELBOW, SPEC), R + r / 2.0)

    def test_center_module_at_thirty_degrees(self):
        self.assertAlmostEqual(effective_radius(2, 30.0, ELBOW, SPEC), ELBOW.curvature_radius_R, places=9)

    def test_straight_is_not_a_bend(self):
        with self.assertRaises(NotABend):
            effective_radius(0, 0.0, Straight(100.0), SPEC)

    @given(angles, st.sampled_from([0, 1, 2]))
    def test_radius_stays_within_pipe(self, mu, module):
        R, r = ELBOW.curvature_radius_R, SPEC.inner_radius_r
        value = effective_radius(module, mu, ELBOW, SPEC)
        self.assertGreaterEqual(value, R - r - 1e-9)
        self.assertLessEqual(value, R + r + 1e-9)


class TrackSpeedRatioTests(SimpleTestCase):

    def test_straight_is_uniform(self):
        self.assertEqual(track_speed_ratios(Straight(10.0), 45.0, SPEC), (1.0, 1.0, 1.0))

    def test_table1_ratios(self):
        for mu, reference in TABLE1_RATIOS.items():
            ratios = track_speed_ratios(ELBOW, mu, SPEC)
            for computed, expected in zip(ratios, reference):
                self.assertAlmostEqual(computed, expected, delta=0.002, msg=f'mu={mu}')

    @given(angles)
    def test_mean_ratio_is_one(self, mu):
        self.assertAlmostEqual(sum(track_speed_ratios(ELBOW, mu, SPEC)) / 3.0, 1.0, delta=1e-12)

    @given(angles)
    def test_rotation_by_module_spacing_permutes(self, mu):
        a, b, c = track_speed_ratios(ELBOW, mu, SPEC)
        shifted = track_speed_ratios(ELBOW, mu + 120.0, SPEC)
        for got, expected in zip(shifted, (b, c, a)):
            self.assertAlmostEqual(got, expected, delta=1e-12)


class LocateTests(SimpleTestCase):

    def setUp(self):
        self.network = reference_network()

    def test_total_length(self):
        self.assertAlmostEqual(self.network.total_length, 3023.49, delta=3023.49 * 0.002)
        self.assertAlmostEqual(
            self.network.total_length, sum(arc_length(s) for s in self.network.segments)
        )

    def test_start(self):
        position = locate(self.network, 0.0)
        self.assertEqual((position.segment_index, position.s_local), (0, 0.0))

    def test_joint_belongs_to_downstream_segment(self):
        position = locate(self.network, 550.0)
        self.assertEqual(position.segment_index, 1)
        self.assertEqual(position.s_local, 0.0)

    def test_end_belongs_to_last_segment(self):
        total = self.network.total_length
        position = locate(self.network, total)
        self.assertEqual(position.segment_index, 4)
        self.assertAlmostEqual(position.s_local, 150.0)

    def test_out_of_range(self):
        with self.assertRaises(OutOfRange):
            locate(self.network, -1.0)
        with self.assertRaises(OutOfRange):
            locate(self.network, self.network.total_length + 1.0)


class EffectiveMuTests(SimpleTestCase):

    def test_planar(self):
        self.assertEqual(effective_mu(0.0, ELBOW), 0.0)
        self.assertEqual(effective_mu(30.0, ELBOW), 30.0)

    def test_rolled_bend_plane(self):
        self.assertEqual(effective_mu(0.0, Bend(90.0, 500.0, roll=90.0)), 270.0)

    def test_straight_rejected(self):
        with self.assertRaises(NotABend):
            effective_mu(0.0, Straight(1.0))

    def test_reference_constants(self):
        self.assertAlmostEqual(REFERENCE_BEND_RADIUS_MM, 657.83 * 2.0 / math.pi)
        self.assertAlmostEqual(REFERENCE_PIPE_RADIUS_MM, 137.96, delta=0.05)
