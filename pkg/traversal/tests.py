from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from core.exceptions import ApeUndefined, ConfigError
from pipe_geometry.geometry import Bend, PipeNetwork, PipeSpec, Straight, effective_radius, reference_network
from robot_model.robot import RobotParams
from traversal.simulator import SimConfig, TrackFault, ape, run, segment_timing, slip_drag_metric

ROBOT = RobotParams(pi=3.14)
V_R = 50.24
D_R = 3023.49 - 200.0


def reference_config(mu=0.0, **kwargs):
    return SimConfig(network=reference_network(), robot=ROBOT, initial_roll_mu=mu, **kwargs)


class ApeTests(SimpleTestCase):

    def test_signed_percentage(self):
        self.assertAlmostEqual(ape(50.03, 50.24), -0.418, places=3)
        self.assertAlmostEqual(ape(63.8, 64.57), -1.1925, places=3)

    def test_exact_match(self):
        self.assertEqual(ape(50.24, 50.24), 0.0)

    def test_zero_theory_is_undefined(self):
        with self.assertRaises(ApeUndefined):
            ape(1.0, 0.0)
        with self.assertRaises(ZeroDivisionError):
            ape(1.0, 0.0)


class ConfigTests(SimpleTestCase):

    def test_roll_is_normalized(self):
        self.assertEqual(reference_config(mu=390.0).initial_roll_mu, 30.0)

    def test_invalid_step(self):
        with self.assertRaises(ValidationError):
            reference_config(dt=0.0)
        with self.assertRaises(ValidationError):
            reference_config(record_stride=0)

    def test_invalid_fault(self):
        with self.assertRaises(ValidationError):
            TrackFault(track=3, delta=1.0, start=0.0, end=1.0)
        with self.assertRaises(ValidationError):
            TrackFault(track=0, delta=1.0, start=2.0, end=1.0)

    def test_path_length(self):
        self.assertAlmostEqual(reference_config().path_length, D_R, places=6)


class ReferenceTraversalTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.runs = {mu: run(reference_config(mu)) for mu in (0.0, 30.0, 60.0)}

    def test_total_time(self):
        for mu, (_, summary) in self.runs.items():
            self.assertAlmostEqual(summary.total_time, D_R / V_R, delta=D_R / V_R * 0.005, msg=f'mu={mu}')
            self.assertAlmostEqual(summary.total_time, 56.2, delta=0.01)

    def test_straight_speeds(self):
        _, summary = self.runs[0.0]
        straight = [entry for entry in summary.segment_speeds if entry.kind == 'straight']
        self.assertEqual(len(straight), 3)
        for entry in straight:
            for value in entry.theoretical + entry.simulated:
                self.assertAlmostEqual(value, V_R, delta=0.01)

    def test_elbow_speeds(self):
        reference_speeds = {0.0: (33.69, 58.515, 58.515), 30.0: (35.91, 64.57, 50.24)}
        for mu, speeds in reference_speeds.items():
            _, summary = self.runs[mu]
            elbow = next(entry for entry in summary.segment_speeds if entry.segment_index == 1)
            for theory, expected in zip(elbow.theoretical, speeds):
                self.assertAlmostEqual(theory, expected, delta=0.02)
            for simulated, expected in zip(elbow.simulated, speeds):
                self.assertAlmostEqual(simulated, expected, delta=expected * 0.01)

    def test_elbow_ape_within_bound(self):
        _, summary = self.runs[30.0]
        elbow = next(entry for entry in summary.segment_speeds if entry.segment_index == 1)
        for value in elbow.ape:
            self.assertLess(abs(value), 5.0)

    def test_every_bend_ape_within_bound(self):
        for mu, (_, summary) in self.runs.items():
            bends = [entry for entry in summary.segment_speeds if entry.kind == 'bend']
            self.assertEqual(len(bends), 2)
            for entry in bends:
                for value in entry.ape:
                    self.assertLess(abs(value), 5.0, msg=f'mu={mu} segment={entry.segment_index}')

    def test_section_durations(self):
        _, summary = self.runs[0.0]
        durations = {timing.segment_index: timing.duration for timing in summary.segment_times}
        self.assertAlmostEqual(durations[0], 8.96, delta=0.1)
        self.assertAlmostEqual(durations[2], 350.0 / V_R, delta=0.02)

    def test_timings_match_analytic_durations(self):
        for _, summary in self.runs.values():
            rows = segment_timing(summary)
            self.assertEqual([row.segment_index for row in rows], [0, 1, 2, 3, 4])
            for row in rows:
                self.assertTrue(row.within_tolerance, row)

    def test_slip_metric_small_without_fault(self):
        for mu, (_, summary) in self.runs.items():
            for value in summary.slip_metric:
                self.assertLess(value, 0.7, msg=f'mu={mu}')

    def test_compression_bounds(self):
        for trace, summary in self.runs.values():
            for row in trace.rows:
                for value in row.compression:
                    self.assertGreaterEqual(value, 1.25)
                    self.assertLessEqual(value, 2.75)
            self.assertEqual(max(summary.max_compression), 2.75)

    def test_robot_speed_constant(self):
        for trace, _ in self.runs.values():
            for row in trace.rows:
                self.assertAlmostEqual(row.v_R, V_R, delta=1e-9)

    def test_effective_roll_constant_on_planar_network(self):
        for mu, (trace, _) in self.runs.items():
            self.assertEqual({row.mu_effective for row in trace.rows}, {mu})

    def test_bend_speeds_follow_effective_radius(self):
        network = reference_network()
        for mu, (trace, _) in self.runs.items():
            bend = network.segments[1]
            radii = [effective_radius(i, mu, bend, network.spec) for i in range(3)]
            for row in trace.rows:
                if row.segment_index != 1:
                    continue
                by_radius = sorted(range(3), key=lambda i: (radii[i], i))
                by_speed = sorted(range(3), key=lambda i: (row.v_track[i], i))
                self.assertEqual(
                    [round(radii[i], 9) for i in by_radius], [round(radii[i], 9) for i in by_speed]
                )

    def test_row_count_and_positions(self):
        trace, _ = self.runs[0.0]
        self.assertTrue(560 <= len(trace.rows) <= 566)
        self.assertEqual(trace.rows[0].t, 0.0)
        self.assertAlmostEqual(trace.rows[0].s_global, 100.0)
        self.assertAlmostEqual(trace.rows[-1].s_global, 3023.49 - 100.0, places=6)
        times = [row.t for row in trace.rows]
        self.assertEqual(times, sorted(times))

    def test_deterministic(self):
        trace, summary = run(reference_config(0.0))
        self.assertEqual(trace.rows, self.runs[0.0][0].rows)
        self.assertEqual(summary.total_time, self.runs[0.0][1].total_time)

    def test_finer_step_agrees(self):
        trace, summary = run(reference_config(0.0, dt=0.005))
        self.assertAlmostEqual(summary.total_time, self.runs[0.0][1].total_time, delta=1e-6)
        for value in summary.slip_metric:
            self.assertLess(value, 0.35)


class FaultTests(SimpleTestCase):

    def test_injected_slip_is_detected(self):
        fault = TrackFault(track=0, delta=5.0, start=10.0, end=20.0)
        trace, summary = run(reference_config(0.0, fault=fault))
        self.assertGreater(summary.slip_metric[0], 5.0)
        self.assertLess(summary.slip_metric[1], 0.7)
        self.assertEqual(slip_drag_metric(trace, reference_network()), summary.slip_metric)


class DegenerateNetworkTests(SimpleTestCase):

    def test_straight_only_network_has_no_slip(self):
        network = PipeNetwork(PipeSpec(137.9565), (Straight(1000.0),))
        _, summary = run(SimConfig(network=network, robot=ROBOT))
        for value in summary.slip_metric:
            self.assertLess(value, 1e-6)
        for value in summary.ape_per_track:
            self.assertAlmostEqual(value, 0.0, places=9)

    def test_network_shorter_than_robot(self):
        network = PipeNetwork(PipeSpec(137.9565), (Straight(150.0),))
        trace, summary = run(SimConfig(network=network, robot=ROBOT))
        self.assertEqual(len(trace), 0)
        self.assertEqual(summary.total_time, 0.0)

    def test_longer_straight_takes_proportionally_longer(self):
        network = PipeNetwork(PipeSpec(137.9565), (Straight(3216.49),))
        _, summary = run(SimConfig(network=network, robot=ROBOT))
        self.assertAlmostEqual(summary.total_time, 3016.49 / V_R, delta=0.01)
        self.assertAlmostEqual(summary.total_time, 60.04, delta=0.01)

    def test_stationary_robot_rejected(self):
        network = PipeNetwork(PipeSpec(137.9565), (Straight(1000.0),))
        with self.assertRaises(ConfigError):
            run(SimConfig(network=network, robot=RobotParams(input_speed_omega_u=0.0)))


class FinalStepAcrossJointTests(SimpleTestCase):
    """The clipped last step starts in one segment and ends 0.3 mm into the next"""

    def setUp(self):
        network = PipeNetwork(PipeSpec(137.9565), (Straight(500.0), Straight(100.3)))
        self.trace, self.summary = run(SimConfig(network=network, robot=ROBOT))

    def test_segment_times_partition_the_run(self):
        first, last = self.summary.segment_times
        self.assertEqual(first.enter_t, 0.0)
        self.assertEqual(first.exit_t, last.enter_t)
        self.assertEqual(last.exit_t, self.summary.total_time)
        self.assertGreater(first.duration, 0.0)
        self.assertGreater(last.duration, 0.0)
        self.assertAlmostEqual(last.duration, 0.3 / V_R, delta=1e-9)

    def test_end_segment_keeps_its_speeds(self):
        self.assertEqual([entry.segment_index for entry in self.summary.segment_speeds], [0, 1])
        for entry in self.summary.segment_speeds:
            for value in entry.ape:
                self.assertLess(abs(value), 1e-6)

    def test_timings_match_analytic_durations(self):
        rows = segment_timing(self.summary)
        self.assertEqual([row.segment_index for row in rows], [0, 1])
        for row in rows:
            self.assertTrue(row.within_tolerance, row)

    def test_arrival_row_is_in_end_segment(self):
        self.assertEqual(self.trace.rows[-1].segment_index, 1)
        self.assertAlmostEqual(self.trace.rows[-1].s_global, 500.3, places=6)

    def test_network_ending_in_bend(self):
        network = PipeNetwork(PipeSpec(137.9565), (Straight(500.0), Bend(14.0, 418.77)))
        _, summary = run(SimConfig(network=network, robot=ROBOT, initial_roll_mu=30.0))
        self.assertEqual([timing.kind for timing in summary.segment_times], ['straight', 'bend'])
        self.assertEqual(summary.segment_times[-1].exit_t, summary.total_time)
        bend = next(entry for entry in summary.segment_speeds if entry.kind == 'bend')
        for value in bend.ape:
            self.assertLess(abs(value), 1e-6)
