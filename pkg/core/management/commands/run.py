"""
Simulate one traversal of a pipe network
Usage: python manage.py run --config PATH --mu DEG --out DIR
"""
from django.core.management.base import CommandError

from core.management.base import VALIDATION_EXIT, SimulationCommand, parse_mu_list


class Command(SimulationCommand):
    help = 'Simulate one traversal of a pipe network'

    def handle(self, *args, **options):
        mu_list = parse_mu_list(options['mu'])
        if len(mu_list) > 1:
            raise CommandError('run takes a single --mu; use sweep for several', returncode=VALIDATION_EXIT)
        manifest = self.guarded(self.build_manifest, options, mu_list)
        self.execute_manifest(manifest, options)
