import math

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from hypothesis import given, strategies as st

from core.exceptions import NotABend
from pipe_geometry.geometry import REFERENCE_BEND_RADIUS_MM, Bend, Straight
from robot_model.robot import (
    RobotParams, SpringModel, asym_feasibility, max_asym_angle, robot_speed, spring_compression,
    sprocket_to_track_speed,
)

ROBOT = RobotParams(pi=3.14)
ELBOW = Bend(90.0, REFERENCE_BEND_RADIUS_MM)


class SprocketTests(SimpleTestCase):

    def test_reference_track_speed(self):
        self.assertAlmostEqual(sprocket_to_track_speed(12.0, ROBOT), 50.24, places=9)
        self.assertAlmostEqual(ROBOT.nominal_speed, 50.24, places=9)

    def test_full_precision_pi(self):
        self.assertAlmostEqual(RobotParams().nominal_speed, math.pi * 80.0 * 12.0 / 60.0)

    def test_zero_speed(self):
        self.assertEqual(sprocket_to_track_speed(0.0, ROBOT), 0.0)

    def test_half_speed(self):
        self.assertAlmostEqual(sprocket_to_track_speed(6.0, ROBOT), 25.12, places=9)

    def test_invalid_parameters(self):
        with self.assertRaises(ValidationError):
            RobotParams(sprocket_diameter_Ds=0)
        with self.assertRaises(ValidationError):
            RobotParams(input_speed_omega_u=-1)
        with self.assertRaises(ValidationError):
            RobotParams(asym_YZ=-1)


class RobotSpeedTests(SimpleTestCase):

    def test_equal_tracks(self):
        self.assertEqual(robot_speed((50.24, 50.24, 50.24)), 50.24)

    def test_bend_tracks_average_to_robot_speed(self):
        self.assertAlmostEqual(robot_speed((33.69, 58.515, 58.515)), 50.24, places=3)

    def test_zero(self):
        self.assertEqual(robot_speed((0.0, 0.0, 0.0)), 0.0)


class AsymmetricCompressionTests(SimpleTestCase):

    def test_reference_limit(self):
        self.assertAlmostEqual(max_asym_angle(ROBOT), 4.574, delta=0.001)

    def test_no_offset_no_tilt(self):
        self.assertEqual(max_asym_angle(RobotParams(asym_YZ=0.0)), 0.0)

    def test_equal_offsets_give_forty_five_degrees(self):
        self.assertAlmostEqual(max_asym_angle(RobotParams(asym_YZ=150.0, asym_XZ=150.0)), 45.0)

    @given(st.floats(min_value=0.0, max_value=500.0), st.floats(min_value=0.0, max_value=500.0))
    def test_limit_grows_with_offset(self, a, b):
        low, high = sorted((a, b))
        self.assertLessEqual(
            max_asym_angle(RobotParams(asym_YZ=low)), max_asym_angle(RobotParams(asym_YZ=high))
        )

    def test_reference_elbow_needs_compression(self):
        required, feasible = asym_feasibility(ELBOW, 150.0, ROBOT)
        self.assertAlmostEqual(required, 10.26, delta=0.01)
        self.assertFalse(feasible)

    def test_short_contact_is_feasible(self):
        self.assertTrue(asym_feasibility(ELBOW, 1.0, ROBOT)[1])

    def test_gentle_bend_is_feasible(self):
        self.assertTrue(asym_feasibility(Bend(90.0, 1e6), 150.0, ROBOT)[1])

    def test_straight_rejected(self):
        with self.assertRaises(NotABend):
            asym_feasibility(Straight(100.0), 150.0, ROBOT)

    def test_contact_length_must_be_positive(self):
        with self.assertRaises(ValidationError):
            asym_feasibility(ELBOW, 0.0, ROBOT)


class SpringTests(SimpleTestCase):

    def setUp(self):
        self.spring = SpringModel()

    def test_straight_preload(self):
        self.assertEqual(spring_compression(Straight(100.0), 1.0, self.spring), 1.25)

    def test_inner_and_outer_modules_in_bend(self):
        self.assertEqual(spring_compression(ELBOW, 0.67, self.spring), 2.75)
        self.assertEqual(spring_compression(ELBOW, 1.165, self.spring), 2.75)

    def test_center_module_in_bend(self):
        self.assertEqual(spring_compression(ELBOW, 1.0, self.spring), 1.25)

    def test_clamped_to_maximum(self):
        spring = SpringModel(preload_straight=2.0, bend_extra=2.0, max_compression=4.0)
        self.assertEqual(spring_compression(ELBOW, 0.5, spring), 4.0)

    def test_invalid_model(self):
        with self.assertRaises(ValidationError):
            SpringModel(preload_straight=10.0, bend_extra=10.0, max_compression=16.0)
        with self.assertRaises(ValidationError):
            SpringModel(bend_trigger=-0.1)
