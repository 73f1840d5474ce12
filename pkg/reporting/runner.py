"""
Drives simulations for the management commands: one run per orientation,
written to per-run files in the output directory.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from django.core.exceptions import ValidationError

from traversal.simulator import run
from .config import load_config, serialize_config, with_overrides
from .reports import flagged_apes, summary_report, table1_report
from .telemetry import emit_csv

logger = logging.getLogger(__name__)

REPORT_CHOICES = ('table1', 'timings', 'telemetry', 'all')


@dataclass(frozen=True)
class RunManifest:
    config_path: Path
    output_dir: Path = None
    reports: tuple = ('all',)
    mu_list: tuple = ()
    dt: float = None
    ape_bound: float = 5.0

    def __post_init__(self):
        unknown = set(self.reports) - set(REPORT_CHOICES)
        if unknown:
            raise ValidationError(f'Unknown report(s): {", ".join(sorted(unknown))}')
        # orientations equal modulo 360 would write the same files
        object.__setattr__(self, 'mu_list', tuple(dict.fromkeys(float(mu) % 360.0 for mu in self.mu_list)))
        if self.dt is not None and self.dt <= 0:
            raise ValidationError('Time step dt must be positive.')

    def wants(self, report):
        return report in self.reports or 'all' in self.reports


@dataclass
class RunResult:
    config: object
    trace: object
    summary: object
    summary_text: str = ''
    files: list = field(default_factory=list)
    ape_bound: float = 5.0

    @property
    def mu(self):
        return self.config.initial_roll_mu

    @property
    def flagged(self):
        return bool(self.flags)

    @property
    def flags(self):
        return flagged_apes(self.summary, self.ape_bound)


def _tag(mu):
    return f'mu{mu:g}'.replace('.', 'p')


def _prepare_output(output_dir):
    if output_dir is None:
        return None
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir


def simulate_one(config, manifest, output_dir):
    trace, summary = run(config)
    result = RunResult(config=config, trace=trace, summary=summary, ape_bound=manifest.ape_bound)
    result.summary_text = summary_report(
        summary, ape_bound=manifest.ape_bound, robot=config.robot, network=config.network
    )
    if output_dir is not None:
        tag = _tag(config.initial_roll_mu)
        if manifest.wants('telemetry'):
            path = output_dir / f'telemetry_{tag}.csv'
            rows = emit_csv(trace, path)
            logger.info('Wrote %d telemetry rows to %s', rows, path)
            result.files.append(path)
        if manifest.wants('timings'):
            path = output_dir / f'summary_{tag}.txt'
            path.write_text(result.summary_text, encoding='utf-8')
            result.files.append(path)
    return result


def run_manifest(manifest, workers=1):
    """
    Run every orientation of the manifest. Runs are independent, so they
    are spread over a thread pool; results keep the order of mu_list.
    """
    base = load_config(manifest.config_path)
    output_dir = _prepare_output(manifest.output_dir)
    mu_list = manifest.mu_list or (base.initial_roll_mu,)
    configs = [with_overrides(base, mu=mu, dt=manifest.dt) for mu in mu_list]

    if output_dir is not None and manifest.wants('table1'):
        write_table1(base, mu_list, output_dir / 'table1.txt')

    if workers > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: simulate_one(c, manifest, output_dir), configs))
    else:
        results = [simulate_one(c, manifest, output_dir) for c in configs]
    return results


def first_bend(network):
    return next((segment for segment in network.segments if segment.is_bend), None)


def write_table1(config, mu_list, path):
    text = table1_report(config.network.spec, config.robot, mu_list, first_bend(config.network))
    Path(path).write_text(text, encoding='utf-8')
    return text


def record_run(result, label=''):
    """Persist a finished run in the run history"""
    from core.models import SimulationRun

    summary = result.summary
    worst_ape = max(summary.ape_per_track, key=abs) if summary.segment_speeds else 0.0
    return SimulationRun.objects.create(
        label=label,
        config_text=serialize_config(result.config),
        mu_deg=result.mu,
        dt_s=result.config.dt,
        path_length_mm=summary.path_length,
        total_time_s=summary.total_time,
        robot_speed_mm_s=summary.v_R,
        max_compression_mm=max(summary.max_compression),
        worst_slip_mm=max(summary.slip_metric),
        worst_ape_percent=worst_ape,
        flagged=result.flagged,
    )
