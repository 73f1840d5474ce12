"""
Simulate the same network at several robot orientations
Usage: python manage.py sweep --mu 0,30,60 --out DIR
"""
from django.conf import settings

from core.management.base import SimulationCommand, parse_mu_list


class Command(SimulationCommand):
    help = 'Simulate the same network at several robot orientations, concurrently'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--workers', type=int, default=settings.PIPE_CLIMBER['SWEEP_WORKERS'])

    def handle(self, *args, **options):
        mu_list = parse_mu_list(options['mu']) or tuple(settings.PIPE_CLIMBER['DEFAULT_MU_LIST'])
        manifest = self.guarded(self.build_manifest, options, mu_list)
        self.execute_manifest(manifest, options, workers=max(1, options['workers']))
