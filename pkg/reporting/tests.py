import io
import tempfile
from dataclasses import replace
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from core.exceptions import ParseError
from pipe_geometry.geometry import PipeNetwork, PipeSpec, Straight
from reporting.config import load_config, parse_config, serialize_config, with_overrides
from reporting.reports import flagged_apes, summary_report, table1_report, table1_rows
from reporting.runner import RunManifest, run_manifest
from reporting.telemetry import CSV_HEADER, emit_csv
from robot_model.robot import RobotParams
from traversal.simulator import SimConfig, TrackFault, TraversalTrace, run

REFERENCE_CONFIG = settings.PIPE_CLIMBER['REFERENCE_CONFIG']

TABLE1_SPEEDS = {
    0.0: (33.69, 58.51, 58.51),
    30.0: (35.91, 64.57, 50.24),
    60.0: (41.97, 66.79, 41.97),
}


def reference():
    return load_config(REFERENCE_CONFIG)


class ParseConfigTests(SimpleTestCase):

    def test_reference_fixture(self):
        config = reference()
        self.assertAlmostEqual(config.network.total_length, 3023.49, delta=0.01)
        self.assertEqual(len(config.network.segments), 5)
        self.assertEqual(config.robot.pi, 3.14)
        self.assertAlmostEqual(config.robot.nominal_speed, 50.24, places=9)
        self.assertEqual((config.dt, config.record_stride), (0.01, 10))
        self.assertIsNone(config.fault)

    def test_minimal_config_uses_defaults(self):
        config = parse_config('pipe r_mm=100\nsegment straight len_mm=500\n')
        self.assertEqual(config.robot, RobotParams())
        self.assertEqual(config.initial_roll_mu, 0.0)

    def test_empty_config(self):
        with self.assertRaises(ParseError):
            parse_config('')
        with self.assertRaises(ParseError):
            parse_config('# only a comment\n\n')

    def test_missing_pipe_or_segments(self):
        with self.assertRaises(ParseError):
            parse_config('segment straight len_mm=500\n')
        with self.assertRaises(ParseError):
            parse_config('pipe r_mm=100\n')

    def test_bend_tighter_than_pipe(self):
        with self.assertRaisesMessage(ValidationError, 'line 3'):
            parse_config('pipe r_mm=100\nsegment straight len_mm=500\nsegment bend theta_deg=90 R_mm=100\n')

    def test_unknown_key_reports_line(self):
        with self.assertRaises(ParseError) as ctx:
            parse_config('pipe r_mm=100\nsegment straight length=500\n')
        self.assertEqual(ctx.exception.lineno, 2)
        self.assertIn('line 2', str(ctx.exception))

    def test_duplicate_line(self):
        with self.assertRaises(ParseError) as ctx:
            parse_config('pipe r_mm=100\npipe r_mm=120\nsegment straight len_mm=500\n')
        self.assertEqual(ctx.exception.lineno, 2)

    def test_malformed_token(self):
        with self.assertRaises(ParseError):
            parse_config('pipe r_mm\nsegment straight len_mm=500\n')
        with self.assertRaises(ParseError):
            parse_config('pipe r_mm=100\nelbow theta_deg=90\n')

    def test_invalid_values(self):
        with self.assertRaises(ValidationError):
            parse_config('pipe r_mm=-1\nsegment straight len_mm=500\n')
        with self.assertRaises(ValidationError):
            parse_config('pipe r_mm=100\nsegment straight len_mm=abc\n')
        with self.assertRaises(ValidationError):
            parse_config('pipe r_mm=100\nsim stride=0\nsegment straight len_mm=500\n')
        with self.assertRaises(ValidationError):
            parse_config('pipe r_mm=100\nspring preload_mm=10 bend_extra_mm=10 max_mm=16\nsegment straight len_mm=500\n')

    def test_fault_line(self):
        config = parse_config(
            'pipe r_mm=100\nfault track=B delta_mm_s=2 start_s=1 end_s=3\nsegment straight len_mm=500\n'
        )
        self.assertEqual((config.fault.track, config.fault.delta), (1, 2.0))
        with self.assertRaises(ValidationError):
            parse_config('pipe r_mm=100\nfault track=D delta_mm_s=2 start_s=1 end_s=3\nsegment straight len_mm=500\n')

    def test_serialized_config_parses_back(self):
        config = with_overrides(reference(), mu=45.0, dt=0.02)
        self.assertEqual(parse_config(serialize_config(config)), config)

    def test_unreadable_path(self):
        with self.assertRaises(OSError):
            load_config('/nonexistent/reference.cfg')


class Table1Tests(SimpleTestCase):

    def setUp(self):
        config = reference()
        self.spec = config.network.spec
        self.robot = config.robot

    def test_cells_match_reference_speeds(self):
        for row in table1_rows(self.spec, self.robot, (0.0, 30.0, 60.0)):
            for computed, expected in zip(row.speeds, TABLE1_SPEEDS[row.mu]):
                self.assertAlmostEqual(computed, expected, delta=0.02, msg=f'mu={row.mu}')

    def test_module_roles(self):
        rows = table1_rows(self.spec, self.robot, (0.0, 30.0))
        self.assertEqual((rows[0].inner, rows[0].outer, rows[0].center), (('A',), ('B', 'C'), ()))
        self.assertEqual((rows[1].inner, rows[1].outer, rows[1].center), (('A',), ('B',), ('C',)))

    def test_module_spacing_rotates_columns(self):
        base, shifted = table1_rows(self.spec, self.robot, (0.0, 120.0))
        a, b, c = base.speeds
        for got, expected in zip(shifted.speeds, (b, c, a)):
            self.assertAlmostEqual(got, expected, places=9)

    def test_report_text(self):
        text = table1_report(self.spec, self.robot, (0.0, 30.0, 60.0))
        self.assertTrue(text.startswith('# pipeclimber table1 v1'))
        self.assertIn('v_R = 50.24 mm/s', text)
        self.assertIn('64.57', text)
        self.assertEqual(len(text.splitlines()), 6)


class TelemetryTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.trace, cls.summary = run(reference())

    def test_empty_trace_writes_header_only(self):
        buffer = io.StringIO()
        self.assertEqual(emit_csv(TraversalTrace(), buffer), 0)
        self.assertEqual(buffer.getvalue(), ','.join(CSV_HEADER) + '\n')

    def test_reference_rows(self):
        buffer = io.StringIO()
        count = emit_csv(self.trace, buffer)
        lines = buffer.getvalue().splitlines()
        self.assertTrue(560 <= count <= 566)
        self.assertEqual(len(lines), count + 1)
        self.assertEqual(lines[0].split(','), list(CSV_HEADER))
        first = lines[1].split(',')
        self.assertEqual(len(first), 17)
        self.assertEqual(first[:3], ['0.000000', '100.000000', '0'])
        self.assertEqual(first[7], '50.240000')

    def test_runs_are_byte_identical(self):
        with tempfile.TemporaryDirectory() as tmp:
            first, second = Path(tmp) / 'a.csv', Path(tmp) / 'b.csv'
            emit_csv(self.trace, first)
            emit_csv(run(reference())[0], second)
            self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_decimal_point_is_a_dot(self):
        buffer = io.StringIO()
        emit_csv(self.trace, buffer)
        for line in buffer.getvalue().splitlines()[1:]:
            for cell in line.split(','):
                self.assertNotIn(' ', cell)
                self.assertRegex(cell, r'^-?\d+(\.\d{6})?$')


class SummaryReportTests(SimpleTestCase):

    def test_reference_summary(self):
        config = reference()
        _, summary = run(config)
        text = summary_report(summary, robot=config.robot, network=config.network)
        self.assertIn('max compression: 2.75 mm', text)
        self.assertIn('total time: 56.200 s', text)
        self.assertIn('requires 10.26 deg, exceeds limit', text)
        self.assertNotIn('differs from v_R', text)

    def test_no_flags_at_thirty_degrees(self):
        config = with_overrides(reference(), mu=30.0)
        _, summary = run(config)
        self.assertEqual(flagged_apes(summary, 5.0), [])
        self.assertNotIn('FLAGGED', summary_report(summary, robot=config.robot, network=config.network))

    def test_faulted_track_flags_and_logs(self):
        config = replace(reference(), fault=TrackFault(track=0, delta=5.0, start=10.0, end=20.0))
        _, summary = run(config)
        self.assertIn((1, 'A'), [(index, name) for index, name, _ in flagged_apes(summary, 5.0)])
        with self.assertLogs('reporting.reports', level='WARNING'):
            text = summary_report(summary)
        self.assertIn('FLAGGED', text)

    def test_straight_only_network(self):
        network = PipeNetwork(PipeSpec(100.0), (Straight(1000.0),))
        _, summary = run(SimConfig(network=network, robot=RobotParams(pi=3.14)))
        text = summary_report(summary)
        self.assertIn('no bends traversed; straight sections are exact (0%)', text)

    def test_straight_only_network_with_slip_is_not_exact(self):
        network = PipeNetwork(PipeSpec(100.0), (Straight(1000.0),))
        fault = TrackFault(track=0, delta=5.0, start=0.0, end=100.0)
        _, summary = run(SimConfig(network=network, robot=RobotParams(pi=3.14), fault=fault))
        with self.assertLogs('reporting.reports', level='WARNING'):
            text = summary_report(summary)
        self.assertNotIn('exact (0%)', text)
        self.assertIn('FLAGGED', text)


class RunManifestTests(SimpleTestCase):

    def test_files_per_orientation(self):
        with tempfile.TemporaryDirectory() as tmp:
            manifest = RunManifest(config_path=REFERENCE_CONFIG, output_dir=tmp, mu_list=(0, 30))
            results = run_manifest(manifest, workers=2)
            self.assertEqual([result.mu for result in results], [0.0, 30.0])
            names = sorted(path.name for path in Path(tmp).iterdir())
            self.assertEqual(names, [
                'summary_mu0.txt', 'summary_mu30.txt', 'table1.txt', 'telemetry_mu0.csv', 'telemetry_mu30.csv',
            ])

    def test_concurrent_and_serial_agree(self):
        manifest = RunManifest(config_path=REFERENCE_CONFIG, mu_list=(0, 60))
        serial = run_manifest(manifest)
        parallel = run_manifest(manifest, workers=2)
        for a, b in zip(serial, parallel):
            self.assertEqual(a.trace.rows, b.trace.rows)

    def test_rejects_unknown_report(self):
        with self.assertRaises(ValidationError):
            RunManifest(config_path=REFERENCE_CONFIG, reports=('everything',))

    def test_equivalent_orientations_run_once(self):
        self.assertEqual(RunManifest(config_path=REFERENCE_CONFIG, mu_list=(0, 360, 30, 390)).mu_list, (0.0, 30.0))
        with tempfile.TemporaryDirectory() as tmp:
            manifest = RunManifest(config_path=REFERENCE_CONFIG, output_dir=tmp, mu_list=(0, 360), reports=('telemetry',))
            results = run_manifest(manifest, workers=2)
            self.assertEqual([result.mu for result in results], [0.0])
            self.assertEqual(sorted(path.name for path in Path(tmp).iterdir()), ['telemetry_mu0.csv'])
