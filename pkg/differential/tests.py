import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from core.exceptions import ConstraintViolation, UnreachableDemand
from differential.kinematics import (
    GearTrainParams, OutputDemand, check_mean_invariant, equal_load_state, output_torques,
    outputs_from_side_gears, ring_kinematics, side_gears_from_outputs, solve_state,
)
from pipe_geometry.geometry import reference_network, track_speed_ratios

PARAMS = GearTrainParams()
speeds = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)


def table1_outputs(mu=0.0):
    network = reference_network()
    ratios = track_speed_ratios(network.segments[1], mu, network.spec)
    return tuple(12.0 * g for g in ratios)


class GearTrainParamsTests(SimpleTestCase):

    def test_defaults(self):
        self.assertEqual(PARAMS.k, 20.0)
        self.assertEqual(PARAMS.j, 2.0)
        self.assertEqual(PARAMS.inertias, (1.0,) * 6)

    def test_rejects_non_positive_ratios(self):
        with self.assertRaises(ValidationError):
            GearTrainParams(k=0)
        with self.assertRaises(ValidationError):
            GearTrainParams(j=-2)

    def test_rejects_negative_inertia(self):
        with self.assertRaises(ValidationError):
            GearTrainParams(inertias=(1, 1, 1, 1, 1, -0.1))

    def test_demand_must_average_to_one(self):
        with self.assertRaises(UnreachableDemand):
            OutputDemand((1.0, 1.0, 1.1))
        self.assertEqual(OutputDemand((0.5, 1.5, 1.0)).output_speeds(120, PARAMS), (6.0, 18.0, 12.0))


class RingKinematicsTests(SimpleTestCase):

    def test_reference_input(self):
        omega_r, tau_r = ring_kinematics(120.0, 3.0, PARAMS)
        self.assertAlmostEqual(omega_r, 6.0)
        self.assertAlmostEqual(tau_r, 20.0)

    def test_zero_input(self):
        self.assertEqual(ring_kinematics(0.0, 0.0, PARAMS), (0.0, 0.0))


class ForwardMapTests(SimpleTestCase):

    def test_uniform_side_gears_give_twelve_rpm(self):
        outputs = outputs_from_side_gears((6.0,) * 6, 120.0, PARAMS)
        for value in outputs:
            self.assertAlmostEqual(value, 12.0, places=12)

    def test_zero(self):
        self.assertEqual(outputs_from_side_gears((0.0,) * 6, 0.0, PARAMS), (0.0, 0.0, 0.0))

    def test_hand_evaluated_unequal_split(self):
        # (w2, w4) = (8, 8), (w3, w5) = (4, 4), (w1, w6) = (4, 8)
        omega_side = (4.0, 8.0, 4.0, 8.0, 4.0, 8.0)
        outputs = outputs_from_side_gears(omega_side, 120.0, PARAMS)
        np.testing.assert_allclose(outputs, (8.0, 16.0, 12.0), atol=1e-12)
        self.assertAlmostEqual(sum(outputs) / 3.0, 12.0, places=12)

    def test_inconsistent_pair_sums(self):
        with self.assertRaises(ConstraintViolation):
            outputs_from_side_gears((6.0, 6.0, 6.0, 6.0, 6.0, 7.0), 120.0, PARAMS)

    @given(st.tuples(speeds, speeds, speeds), st.floats(min_value=0.0, max_value=500.0))
    def test_mean_identity_for_any_consistent_assignment(self, free, omega_u):
        c = 2.0 * omega_u / PARAMS.k
        w1, w3, w5 = free
        omega_side = (w1, c - w1, w3, c - w3, w5, c - w5)
        outputs = outputs_from_side_gears(omega_side, omega_u, PARAMS)
        self.assertLess(abs(sum(outputs) / 3.0 - PARAMS.j * omega_u / PARAMS.k), 1e-9)


class InverseMapTests(SimpleTestCase):

    def assert_consistent(self, omega_side, omega_out, omega_u):
        c = 2.0 * omega_u / PARAMS.k
        w = omega_side
        for a, b in ((0, 1), (2, 3), (4, 5)):
            self.assertLess(abs(w[a] + w[b] - c), 1e-9)
        # rigid pairings S7..S12
        self.assertEqual(w[6:], (w[0], w[2], w[3], w[5], w[4], w[1]))
        np.testing.assert_allclose(outputs_from_side_gears(w, omega_u, PARAMS), omega_out, atol=1e-9)

    def test_equal_outputs_give_uniform_side_gears(self):
        omega_side = side_gears_from_outputs((12.0, 12.0, 12.0), 120.0, PARAMS)
        np.testing.assert_allclose(omega_side, (6.0,) * 12, atol=1e-12)

    def test_table1_ratios_round_trip(self):
        omega_out = table1_outputs(0.0)
        np.testing.assert_allclose(omega_out, (8.05, 13.99, 13.99), atol=0.02)
        self.assert_consistent(side_gears_from_outputs(omega_out, 120.0, PARAMS), omega_out, 120.0)

    def test_asymmetric_demand(self):
        omega_side = side_gears_from_outputs((13.0, 12.0, 11.0), 120.0, PARAMS)
        self.assert_consistent(omega_side, (13.0, 12.0, 11.0), 120.0)

    def test_unreachable_demand(self):
        with self.assertRaises(UnreachableDemand):
            side_gears_from_outputs((12.0, 12.0, 13.0), 120.0, PARAMS)

    def test_randomized_round_trips(self):
        rng = np.random.default_rng(20260919)
        for _ in range(10_000):
            omega_u = rng.uniform(0.0, 300.0)
            mean = PARAMS.j * omega_u / PARAMS.k
            spread = rng.uniform(-0.5, 0.5, size=3) * mean
            omega_out = tuple(mean + spread - spread.mean())
            omega_side = side_gears_from_outputs(omega_out, omega_u, PARAMS)
            forward = outputs_from_side_gears(omega_side, omega_u, PARAMS)
            self.assertLess(abs(sum(forward) / 3.0 - mean), 1e-9)
            self.assertLess(max(abs(a - b) for a, b in zip(forward, omega_out)), 1e-9)

    def test_cyclic_permutation_of_demand(self):
        demand = (9.0, 14.0, 13.0)
        rotated = (13.0, 9.0, 14.0)
        forward = outputs_from_side_gears(side_gears_from_outputs(demand, 120.0, PARAMS), 120.0, PARAMS)
        forward_rotated = outputs_from_side_gears(side_gears_from_outputs(rotated, 120.0, PARAMS), 120.0, PARAMS)
        np.testing.assert_allclose(forward_rotated, (forward[2], forward[0], forward[1]), atol=1e-9)

    def test_doubling_input_doubles_every_speed(self):
        single = side_gears_from_outputs((10.0, 13.0, 13.0), 120.0, PARAMS)
        double = side_gears_from_outputs((20.0, 26.0, 26.0), 240.0, PARAMS)
        np.testing.assert_allclose(double, [2.0 * w for w in single], atol=1e-9)


class TorqueTests(SimpleTestCase):

    def test_steady_state_torque(self):
        for value in output_torques(1.0, (0.0,) * 6, PARAMS):
            self.assertAlmostEqual(value, 10.0 / 3.0, places=12)

    def test_zero_torque(self):
        self.assertEqual(output_torques(0.0, (0.0,) * 6, PARAMS), (0.0, 0.0, 0.0))

    def test_equal_inertia_equal_acceleration(self):
        inertia, accel_rpm_s = 0.5, 30.0
        params = GearTrainParams(inertias=(inertia,) * 6)
        accel_rad = accel_rpm_s * 2.0 * np.pi / 60.0
        expected = params.k * 2.0 / (3.0 * params.j) - 2.0 * inertia * accel_rad / params.j
        np.testing.assert_allclose(output_torques(2.0, (accel_rpm_s,) * 6, params), (expected,) * 3)

    def test_inertia_subscripts_are_interleaved(self):
        # only I2 is non-zero: it pairs with S12 and loads output 3
        params = GearTrainParams(inertias=(0, 1, 0, 0, 0, 0))
        accel = (0, 0, 0, 0, 0, 60.0 / (2.0 * np.pi))  # 1 rad/s^2 on S12
        tau = output_torques(0.0, accel, params)
        np.testing.assert_allclose(tau, (0.0, 0.0, -0.5), atol=1e-12)

    @given(st.floats(min_value=-1e4, max_value=1e4, allow_nan=False))
    @hypothesis_settings(max_examples=200)
    def test_zero_acceleration_gives_equal_torques(self, tau_u):
        expected = PARAMS.k * tau_u / (3.0 * PARAMS.j)
        self.assertEqual(output_torques(tau_u, (0.0,) * 6, PARAMS), (expected,) * 3)


class StateTests(SimpleTestCase):

    def test_equal_load_state(self):
        state = equal_load_state(120.0, 1.0, PARAMS)
        self.assertEqual(state.omega_out, (12.0, 12.0, 12.0))
        self.assertEqual(state.omega_side, (6.0,) * 12)
        self.assertEqual(state.omega_ring, (6.0,) * 3)
        self.assertTrue(check_mean_invariant(state, PARAMS))

    def test_half_speed_input(self):
        self.assertEqual(equal_load_state(60.0, 1.0, PARAMS).omega_out, (6.0, 6.0, 6.0))

    def test_zero_state(self):
        state = equal_load_state(0.0, 0.0, PARAMS)
        self.assertEqual(state.omega_out, (0.0, 0.0, 0.0))
        self.assertEqual(state.tau_out, (0.0, 0.0, 0.0))

    def test_table1_state_keeps_mean(self):
        state = solve_state(table1_outputs(30.0), 120.0, 1.0, PARAMS)
        self.assertTrue(check_mean_invariant(state, PARAMS))

    def test_mean_violation_detected(self):
        state = equal_load_state(120.0, 1.0, PARAMS)
        broken = type(state)(
            omega_u=state.omega_u, omega_ring=state.omega_ring, omega_side=state.omega_side,
            omega_out=(12.0, 12.0, 13.0),
        )
        self.assertFalse(check_mean_invariant(broken, PARAMS))
