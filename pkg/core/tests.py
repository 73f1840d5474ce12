import io
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from django.conf import settings
from django.contrib import admin
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from .management.commands.run import Command as RunCommand
from .management.commands.table1 import Command as Table1Command
from .models import SimulationRun


def call(name, *args):
    out = io.StringIO()
    call_command(name, *args, stdout=out)
    return out.getvalue()


class RunCommandTests(TestCase):

    def test_reference_run_writes_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = call('run', '--mu', '30', '--out', tmp)
            self.assertTrue((Path(tmp) / 'telemetry_mu30.csv').exists())
            self.assertTrue((Path(tmp) / 'summary_mu30.txt').exists())
            self.assertTrue((Path(tmp) / 'table1.txt').exists())
        self.assertIn('total time: 56.200 s', output)
        self.assertIn('1 run(s) completed', output)

    def test_single_orientation_only(self):
        with self.assertRaises(CommandError) as ctx:
            call('run', '--mu', '0,30')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_bad_config_exits_with_validation_code(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.cfg'
            path.write_text('pipe r_mm=100\nsegment bend theta_deg=90 R_mm=50\n', encoding='utf-8')
            with self.assertRaises(CommandError) as ctx:
                call('run', '--config', str(path))
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('line 2', str(ctx.exception))

    def test_unreadable_config_exits_with_io_code(self):
        with self.assertRaises(CommandError) as ctx:
            call('run', '--config', '/nonexistent/network.cfg')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_orientation_list(self):
        with self.assertRaises(CommandError) as ctx:
            call('run', '--mu', 'north')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_record_stores_history(self):
        call('run', '--mu', '0', '--record', '--label', 'reference')
        run = SimulationRun.objects.get()
        self.assertEqual(run.label, 'reference')
        self.assertEqual(run.mu_deg, 0.0)
        self.assertAlmostEqual(run.total_time_s, 56.2, delta=0.01)
        self.assertAlmostEqual(run.mean_speed_mm_s, 50.24, delta=0.01)
        self.assertEqual(run.max_compression_mm, 2.75)
        self.assertFalse(run.flagged)
        self.assertIn('pipe r_mm=', run.config_text)


class SweepCommandTests(TestCase):

    def test_sweep_writes_every_orientation(self):
        with tempfile.TemporaryDirectory() as tmp:
            output = call('sweep', '--mu', '0,30,60', '--out', tmp, '--report', 'telemetry')
            names = sorted(path.name for path in Path(tmp).iterdir())
        self.assertEqual(names, ['telemetry_mu0.csv', 'telemetry_mu30.csv', 'telemetry_mu60.csv'])
        self.assertIn('3 run(s) completed', output)

    def test_faulted_track_warns(self):
        reference = Path(settings.PIPE_CLIMBER['REFERENCE_CONFIG']).read_text(encoding='utf-8')
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'faulted.cfg'
            path.write_text(reference + '\nfault track=A delta_mm_s=5 start_s=10 end_s=20\n', encoding='utf-8')
            output = call('sweep', '--config', str(path), '--mu', '0', '--ape-bound', '5')
        self.assertIn('APE value(s) above 5%', output)


class Table1CommandTests(TestCase):

    def test_prints_table(self):
        output = call('table1', '--mu', '0,30,60')
        self.assertIn('# pipeclimber table1 v1', output)
        self.assertIn('58.51', output)
        self.assertIn('66.79', output)

    def test_writes_table(self):
        with tempfile.TemporaryDirectory() as tmp:
            call('table1', '--out', tmp)
            self.assertTrue((Path(tmp) / 'table1.txt').exists())


class AdminTests(TestCase):

    def test_run_history_registered(self):
        self.assertTrue(admin.site.is_registered(SimulationRun))


class CommandLineExitCodeTests(SimpleTestCase):
    """Exit status of a command started from the shell"""

    def exit_code(self, command_class, *args):
        stderr = io.StringIO()
        with redirect_stderr(stderr), redirect_stdout(io.StringIO()):
            command = command_class()
            with self.assertRaises(SystemExit) as ctx:
                command.run_from_argv(['manage.py', 'cmd', *args])
        return ctx.exception.code, stderr.getvalue()

    def test_malformed_step_is_a_validation_error(self):
        code, stderr = self.exit_code(RunCommand, '--dt', 'abc')
        self.assertEqual(code, 1)
        self.assertIn('--dt', stderr)

    def test_unknown_report_is_a_validation_error(self):
        code, stderr = self.exit_code(RunCommand, '--report', 'bogus')
        self.assertEqual(code, 1)
        self.assertIn('bogus', stderr)

    def test_unknown_option_is_a_validation_error(self):
        code, _ = self.exit_code(Table1Command, '--speed', '3')
        self.assertEqual(code, 1)

    def test_unreadable_config_is_an_io_error(self):
        code, stderr = self.exit_code(RunCommand, '--config', '/nonexistent/network.cfg', '--skip-checks')
        self.assertEqual(code, 2)
        self.assertIn('I/O failure', stderr)

    def test_call_command_still_raises(self):
        with self.assertRaises(CommandError):
            call_command('run', '--dt', 'abc')
