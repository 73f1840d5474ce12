"""
Theoretical track speeds in a bend for several robot orientations
Usage: python manage.py table1 --mu 0,30,60
"""
from pathlib import Path

from django.conf import settings

from core.management.base import SimulationCommand, parse_mu_list
from reporting.config import load_config
from reporting.runner import first_bend, write_table1
from reporting.reports import table1_report


class Command(SimulationCommand):
    help = 'Print the theoretical bend track-speed table'

    def add_arguments(self, parser):
        parser.add_argument('--config', default=str(settings.PIPE_CLIMBER['REFERENCE_CONFIG']))
        parser.add_argument('--mu', default='')
        parser.add_argument('--out', default=None)

    def handle(self, *args, **options):
        mu_list = parse_mu_list(options['mu']) or tuple(settings.PIPE_CLIMBER['DEFAULT_MU_LIST'])
        config = self.guarded(load_config, options['config'])
        if options['out']:
            out = Path(options['out'])
            text = self.guarded(self._write, config, mu_list, out)
            self.stdout.write(text)
            self.stdout.write(self.style.SUCCESS(f'✓ wrote {out / "table1.txt"}'))
        else:
            self.stdout.write(table1_report(
                config.network.spec, config.robot, mu_list, first_bend(config.network)
            ))

    def _write(self, config, mu_list, out):
        out.mkdir(parents=True, exist_ok=True)
        return write_table1(config, mu_list, out / 'table1.txt')
