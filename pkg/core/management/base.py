"""
Shared options and error handling of the simulation commands.

Exit codes: 0 success, 1 invalid config or arguments, 2 I/O failure.
"""
import sys

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import PipeClimberError
from reporting.runner import REPORT_CHOICES, RunManifest, record_run, run_manifest

VALIDATION_EXIT = 1
IO_EXIT = 2


def parse_mu_list(raw):
    if not raw:
        return ()
    try:
        return tuple(float(part) for part in raw.split(',') if part.strip())
    except ValueError:
        raise CommandError(f'--mu expects DEG[,DEG...], got {raw!r}', returncode=VALIDATION_EXIT)


def _messages(exc):
    if isinstance(exc, ValidationError):
        return '; '.join(exc.messages)
    return str(exc)


class SimulationCommand(BaseCommand):
    default_reports = 'all'

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        report = parser.error

        def error(message):
            # bad option values are invalid arguments, not I/O failures
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(VALIDATION_EXIT, f'{parser.prog}: error: {message}\n')
            report(message)

        parser.error = error
        return parser

    def add_arguments(self, parser):
        defaults = settings.PIPE_CLIMBER
        parser.add_argument('--config', default=str(defaults['REFERENCE_CONFIG']),
                            help='Config file (defaults to the reference network)')
        parser.add_argument('--mu', default='', help='Robot orientation(s) in degrees, DEG[,DEG...]')
        parser.add_argument('--dt', type=float, default=None, help='Time step in seconds')
        parser.add_argument('--out', default=None, help='Output directory for reports and telemetry')
        parser.add_argument('--report', choices=REPORT_CHOICES, default=self.default_reports)
        parser.add_argument('--ape-bound', type=float, default=defaults['APE_BOUND_PERCENT'],
                            help='APE percentage above which values are flagged')
        parser.add_argument('--record', action='store_true', help='Store each run in the run history')
        parser.add_argument('--label', default='', help='Label of recorded runs')

    def build_manifest(self, options, mu_list):
        return RunManifest(
            config_path=options['config'],
            output_dir=options['out'],
            reports=(options['report'],),
            mu_list=mu_list,
            dt=options['dt'],
            ape_bound=options['ape_bound'],
        )

    def guarded(self, func, *args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ValidationError, PipeClimberError) as exc:
            raise CommandError(_messages(exc), returncode=VALIDATION_EXIT)
        except OSError as exc:
            raise CommandError(f'I/O failure: {exc}', returncode=IO_EXIT)

    def execute_manifest(self, manifest, options, workers=1):
        results = self.guarded(run_manifest, manifest, workers=workers)
        for result in results:
            self.stdout.write(result.summary_text)
            for path in result.files:
                self.stdout.write(f'✓ wrote {path}')
            if result.flagged:
                self.stdout.write(self.style.WARNING(
                    f'mu={result.mu:g}: {len(result.flags)} APE value(s) above {manifest.ape_bound:g}%'
                ))
            if options['record']:
                run = record_run(result, label=options['label'])
                self.stdout.write(f'✓ recorded run #{run.pk}')
        self.stdout.write(self.style.SUCCESS(f'✓ {len(results)} run(s) completed'))
        return results
