"""
Line-oriented simulation config files.

    pipe r_mm=137.9565
    robot Ds_mm=80 LR_mm=200 input_rpm=120 k=20 j=2
    spring preload_mm=1.25 bend_extra_mm=1.5 max_mm=16 trigger=0.05
    sim mu_deg=0 dt_s=0.01 stride=10
    fault track=A delta_mm_s=1 start_s=10 end_s=20
    segment straight len_mm=550
    segment bend theta_deg=90 R_mm=418.7876 roll_deg=0

`pipe` and at least one `segment` are required; every other line is
optional and may appear once. Segments are kept in file order. `#` starts
a comment.
"""
import logging
from dataclasses import replace

from django.core.exceptions import ValidationError

from core.exceptions import ParseError
from core.forms import (
    BendSegmentForm, FaultForm, PipeForm, RobotForm, SimForm, SpringForm, StraightSegmentForm,
)
from differential.kinematics import GearTrainParams
from pipe_geometry.geometry import MODULE_NAMES, Bend, PipeNetwork, PipeSpec, Straight
from robot_model.robot import RobotParams, SpringModel
from traversal.simulator import SimConfig, TrackFault

logger = logging.getLogger(__name__)

SINGLETON_FORMS = {
    'pipe': PipeForm,
    'robot': RobotForm,
    'spring': SpringForm,
    'sim': SimForm,
    'fault': FaultForm,
}
SEGMENT_FORMS = {
    'straight': StraightSegmentForm,
    'bend': BendSegmentForm,
}


def _split_pairs(tokens, lineno):
    data = {}
    for token in tokens:
        key, sep, value = token.partition('=')
        if not sep or not key or not value:
            raise ParseError(f'expected key=value, got {token!r}', lineno)
        if key in data:
            raise ParseError(f'duplicate key {key!r}', lineno)
        data[key] = value
    return data


def _clean(form_class, data, lineno, keyword):
    unknown = sorted(set(data) - set(form_class.base_fields))
    if unknown:
        raise ParseError(f'unknown key(s) for {keyword}: {", ".join(unknown)}', lineno)
    form = form_class(data)
    if not form.is_valid():
        raise ValidationError(f'line {lineno}: {keyword}: {form.describe_errors()}')
    return form.values()


def parse_config(text):
    """Parse and validate config text into a SimConfig"""
    lines = {}
    segments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == 'segment':
            if len(tokens) < 2 or tokens[1] not in SEGMENT_FORMS:
                raise ParseError('segment kind must be "straight" or "bend"', lineno)
            kind = tokens[1]
            values = _clean(SEGMENT_FORMS[kind], _split_pairs(tokens[2:], lineno), lineno, f'segment {kind}')
            segments.append((lineno, kind, values))
        elif keyword in SINGLETON_FORMS:
            if keyword in lines:
                raise ParseError(f'duplicate {keyword!r} line', lineno)
            lines[keyword] = _clean(SINGLETON_FORMS[keyword], _split_pairs(tokens[1:], lineno), lineno, keyword)
        else:
            raise ParseError(f'unknown line keyword {keyword!r}', lineno)

    if not lines and not segments:
        raise ParseError('config is empty')
    if 'pipe' not in lines:
        raise ParseError('missing "pipe" line')
    if not segments:
        raise ParseError('at least one "segment" line is required')

    spec = PipeSpec(lines['pipe']['r_mm'])
    built = []
    for lineno, kind, values in segments:
        if kind == 'straight':
            built.append(Straight(values['len_mm']))
        else:
            bend = Bend(values['theta_deg'], values['R_mm'], values.get('roll_deg', 0.0))
            if bend.curvature_radius_R <= spec.inner_radius_r:
                raise ValidationError(
                    f'line {lineno}: bend radius R={bend.curvature_radius_R} must exceed '
                    f'pipe radius r={spec.inner_radius_r}'
                )
            built.append(bend)
    network = PipeNetwork(spec=spec, segments=built)

    robot = _robot_from(lines.get('robot', {}), lines.get('spring', {}))
    sim = lines.get('sim', {})
    fault = lines.get('fault')
    config = SimConfig(
        network=network,
        robot=robot,
        initial_roll_mu=sim.get('mu_deg', 0.0),
        dt=sim.get('dt_s', SimConfig.dt),
        record_stride=sim.get('stride', SimConfig.record_stride),
        fault=None if fault is None else TrackFault(
            track=MODULE_NAMES.index(fault['track']),
            delta=fault['delta_mm_s'],
            start=fault['start_s'],
            end=fault['end_s'],
        ),
    )
    logger.debug('Parsed config: %d segments, %.2f mm', len(built), network.total_length)
    return config


def _robot_from(robot, spring):
    defaults = RobotParams()
    gear_defaults = defaults.geartrain
    spring_defaults = defaults.spring
    return RobotParams(
        sprocket_diameter_Ds=robot.get('Ds_mm', defaults.sprocket_diameter_Ds),
        robot_length_LR=robot.get('LR_mm', defaults.robot_length_LR),
        input_speed_omega_u=robot.get('input_rpm', defaults.input_speed_omega_u),
        input_torque_tau_u=robot.get('tau_u_Nmm', defaults.input_torque_tau_u),
        geartrain=GearTrainParams(
            k=robot.get('k', gear_defaults.k),
            j=robot.get('j', gear_defaults.j),
            inertias=robot.get('inertia', gear_defaults.inertias),
        ),
        spring=SpringModel(
            preload_straight=spring.get('preload_mm', spring_defaults.preload_straight),
            bend_extra=spring.get('bend_extra_mm', spring_defaults.bend_extra),
            max_compression=spring.get('max_mm', spring_defaults.max_compression),
            bend_trigger=spring.get('trigger', spring_defaults.bend_trigger),
        ),
        asym_YZ=robot.get('asym_YZ_mm', defaults.asym_YZ),
        asym_XZ=robot.get('asym_XZ_mm', defaults.asym_XZ),
        contact_length=robot.get('contact_mm', defaults.contact_length),
        pi=robot.get('pi', defaults.pi),
    )


def serialize_config(config):
    """Config text that parses back to an equal SimConfig"""
    robot = config.robot
    gear = robot.geartrain
    spring = robot.spring
    lines = [
        f'pipe r_mm={config.network.spec.inner_radius_r!r}',
        (
            f'robot Ds_mm={robot.sprocket_diameter_Ds!r} LR_mm={robot.robot_length_LR!r} '
            f'input_rpm={robot.input_speed_omega_u!r} tau_u_Nmm={robot.input_torque_tau_u!r} '
            f'k={gear.k!r} j={gear.j!r} inertia={",".join(repr(i) for i in gear.inertias)} '
            f'asym_YZ_mm={robot.asym_YZ!r} asym_XZ_mm={robot.asym_XZ!r} '
            f'contact_mm={robot.contact_length!r} pi={robot.pi!r}'
        ),
        (
            f'spring preload_mm={spring.preload_straight!r} bend_extra_mm={spring.bend_extra!r} '
            f'max_mm={spring.max_compression!r} trigger={spring.bend_trigger!r}'
        ),
        f'sim mu_deg={config.initial_roll_mu!r} dt_s={config.dt!r} stride={config.record_stride}',
    ]
    if config.fault is not None:
        fault = config.fault
        lines.append(
            f'fault track={MODULE_NAMES[fault.track]} delta_mm_s={fault.delta!r} '
            f'start_s={fault.start!r} end_s={fault.end!r}'
        )
    for segment in config.network.segments:
        if segment.is_bend:
            lines.append(
                f'segment bend theta_deg={segment.theta!r} R_mm={segment.curvature_radius_R!r} '
                f'roll_deg={segment.roll!r}'
            )
        else:
            lines.append(f'segment straight len_mm={segment.length!r}')
    return '\n'.join(lines) + '\n'


def load_config(path):
    """Read and parse a config file; OSError propagates to the caller"""
    with open(path, encoding='utf-8') as handle:
        return parse_config(handle.read())


def with_overrides(config, mu=None, dt=None):
    changes = {}
    if mu is not None:
        changes['initial_roll_mu'] = mu
    if dt is not None:
        changes['dt'] = dt
    return replace(config, **changes) if changes else config
