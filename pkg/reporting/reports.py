"""
Plain-text reports: the theoretical bend-speed table and the traversal
summary. The text layout is versioned by REPORT_FORMAT_VERSION.
"""
import logging
from dataclasses import dataclass

from pipe_geometry.geometry import (
    MODULE_NAMES, REFERENCE_BEND_RADIUS_MM, Bend, track_speed_ratios,
)
from robot_model.robot import asym_feasibility, max_asym_angle
from traversal.simulator import segment_timing

logger = logging.getLogger(__name__)

REPORT_FORMAT_VERSION = '1'
CENTER_TOLERANCE = 1e-6
MEAN_SPEED_TOLERANCE = 1e-6
EXACT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class BendSpeedRow:
    mu: float
    ratios: tuple
    speeds: tuple

    def _modules(self, test):
        return tuple(MODULE_NAMES[i] for i, g in enumerate(self.ratios) if test(g))

    @property
    def inner(self):
        return self._modules(lambda g: g < 1.0 - CENTER_TOLERANCE)

    @property
    def outer(self):
        return self._modules(lambda g: g > 1.0 + CENTER_TOLERANCE)

    @property
    def center(self):
        return self._modules(lambda g: abs(g - 1.0) <= CENTER_TOLERANCE)


def table1_rows(spec, robot, mu_list, bend=None):
    bend = bend or Bend(90.0, REFERENCE_BEND_RADIUS_MM)
    v_R = robot.nominal_speed
    rows = []
    for mu in mu_list:
        ratios = track_speed_ratios(bend, mu % 360.0, spec)
        rows.append(BendSpeedRow(mu=mu % 360.0, ratios=ratios, speeds=tuple(g * v_R for g in ratios)))
    return rows


def table1_report(spec, robot, mu_list, bend=None):
    """Theoretical track speeds in a bend for each robot orientation"""
    bend = bend or Bend(90.0, REFERENCE_BEND_RADIUS_MM)
    lines = [
        f'# pipeclimber table1 v{REPORT_FORMAT_VERSION}',
        (
            f'v_R = {robot.nominal_speed:.2f} mm/s  R = {bend.curvature_radius_R:.2f} mm  '
            f'r = {spec.inner_radius_r:.2f} mm'
        ),
        f'{"mu_deg":>7} {"gA":>6} {"gB":>6} {"gC":>6} {"vA":>8} {"vB":>8} {"vC":>8}  inner  outer  center',
    ]
    for row in table1_rows(spec, robot, mu_list, bend):
        gA, gB, gC = row.ratios
        vA, vB, vC = row.speeds
        lines.append(
            f'{row.mu:7.1f} {gA:6.3f} {gB:6.3f} {gC:6.3f} {vA:8.2f} {vB:8.2f} {vC:8.2f}  '
            f'{",".join(row.inner) or "-":<6} {",".join(row.outer) or "-":<6} {",".join(row.center) or "-"}'
        )
    return '\n'.join(lines) + '\n'


def flagged_apes(summary, ape_bound):
    """(segment index, track name, APE) for every |APE| above the bound"""
    flagged = []
    for entry in summary.segment_speeds:
        for i, value in enumerate(entry.ape):
            if abs(value) > ape_bound:
                flagged.append((entry.segment_index, MODULE_NAMES[i], value))
    return flagged


def summary_report(summary, ape_bound=5.0, robot=None, network=None):
    """Timings, distances, compressions, slip metric and APE of a run"""
    lines = [
        f'# pipeclimber summary v{REPORT_FORMAT_VERSION}',
        f'path length D_R: {summary.path_length:.2f} mm',
        f'robot speed v_R: {summary.v_R:.4f} mm/s',
        f'total time: {summary.total_time:.3f} s',
        '',
        'segment timings',
        f'{"seg":>4} {"kind":<9} {"path_mm":>9} {"enter_s":>8} {"exit_s":>8} {"mean_mm_s":>10} {"analytic_s":>10}',
    ]
    if summary.total_time > 0:
        mean_speed = summary.path_length / summary.total_time
        if abs(mean_speed - summary.v_R) > MEAN_SPEED_TOLERANCE * max(1.0, summary.v_R):
            lines.insert(4, f'! mean speed {mean_speed:.6f} mm/s differs from v_R')
    for row in segment_timing(summary):
        mark = '' if row.within_tolerance else '  ! off analytic duration by more than 1%'
        lines.append(
            f'{row.segment_index:>4} {row.kind:<9} {row.path_length:9.2f} {row.enter_t:8.3f} '
            f'{row.exit_t:8.3f} {row.mean_speed:10.3f} {row.analytic_duration:10.3f}{mark}'
        )

    lines += ['', 'track distances (mm): ' + '  '.join(
        f'{name}={d:.2f}' for name, d in zip(MODULE_NAMES, summary.track_distances)
    )]

    max_allowed = robot.spring.max_compression if robot is not None else None
    compression = []
    for name, low, high in zip(MODULE_NAMES, summary.min_compression, summary.max_compression):
        mark = ''
        if low < 0 or (max_allowed is not None and high > max_allowed):
            mark = ' !'
        compression.append(f'{name}=[{low:.2f}, {high:.2f}]{mark}')
    lines.append('compression (mm): ' + '  '.join(compression))
    if summary.segment_speeds:
        lines.append(f'max compression: {max(summary.max_compression):.2f} mm')
    lines.append('slip/drag metric (mm): ' + '  '.join(
        f'{name}={m:.4f}' for name, m in zip(MODULE_NAMES, summary.slip_metric)
    ))

    lines += ['', f'APE against theory (bound {ape_bound:g}%)']
    if summary.segment_speeds and all(
        entry.kind == 'straight' and all(abs(value) <= EXACT_TOLERANCE for value in entry.ape)
        for entry in summary.segment_speeds
    ):
        lines.append('no bends traversed; straight sections are exact (0%)')
    for entry in summary.segment_speeds:
        cells = []
        for name, sim, theory, value in zip(MODULE_NAMES, entry.simulated, entry.theoretical, entry.ape):
            mark = ''
            if abs(value) > ape_bound:
                mark = ' FLAGGED'
                logger.warning(
                    'Segment %d track %s: APE %.3f%% exceeds %.1f%%', entry.segment_index, name, value, ape_bound
                )
            cells.append(f'{name} {sim:.2f}/{theory:.2f} ({value:+.3f}%){mark}')
        lines.append(f'{entry.segment_index:>4} {entry.kind:<9} ' + '  '.join(cells))

    if robot is not None and network is not None:
        limit = max_asym_angle(robot)
        lines += ['', f'asymmetric compression advisory (limit {limit:.3f} deg)']
        for index, segment in enumerate(network.segments):
            if not segment.is_bend:
                continue
            required, feasible = asym_feasibility(segment, robot.contact_length, robot)
            verdict = 'ok' if feasible else 'exceeds limit, tracks conform by compression'
            lines.append(f'{index:>4} bend {segment.theta:g} deg: requires {required:.2f} deg, {verdict}')
    return '\n'.join(lines) + '\n'
