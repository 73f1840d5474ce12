"""
Fixed-step traversal of a pipe network.

Geometry dictates the track-speed ratios (no slip), the differential supplies
any ratio set with a fixed mean, so every step is closed form. The robot
center starts L_R/2 into the network and stops L_R/2 before its end.
"""
import logging
from dataclasses import dataclass, field

from django.core.exceptions import ValidationError

from core.exceptions import ApeUndefined, ConfigError
from differential.kinematics import OutputDemand, output_torques, side_gears_from_outputs
from pipe_geometry.geometry import (
    PipeNetwork, arc_length, effective_mu, locate, track_speed_ratios,
)
from robot_model.robot import RobotParams, robot_speed, spring_compression, sprocket_to_track_speed

logger = logging.getLogger(__name__)

PATH_TOLERANCE = 1e-9
TIMING_TOLERANCE = 0.01


@dataclass(frozen=True)
class TrackFault:
    """Extra surface speed on one track over a time window, i.e. injected slip"""
    track: int
    delta: float
    start: float
    end: float

    def __post_init__(self):
        if self.track not in (0, 1, 2):
            raise ValidationError('Fault track must be 0, 1 or 2 (A, B, C).')
        if self.end < self.start:
            raise ValidationError('Fault window must end after it starts.')

    def active(self, t):
        return self.start <= t < self.end


@dataclass(frozen=True)
class SimConfig:
    network: PipeNetwork
    robot: RobotParams = field(default_factory=RobotParams)
    initial_roll_mu: float = 0.0
    dt: float = 0.01
    record_stride: int = 10
    fault: TrackFault = None

    def __post_init__(self):
        object.__setattr__(self, 'initial_roll_mu', self.initial_roll_mu % 360.0)
        if self.dt <= 0:
            raise ValidationError('Time step dt must be positive.')
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValidationError('Record stride must be an integer >= 1.')

    @property
    def path_length(self):
        """D_R: centerline distance covered by the robot center"""
        return max(self.network.total_length - self.robot.robot_length_LR, 0.0)


@dataclass(frozen=True)
class TraceRow:
    t: float
    s_global: float
    segment_index: int
    mu_effective: float
    v_track: tuple
    v_R: float
    dist_track: tuple
    compression: tuple
    tau_out: tuple


@dataclass
class TraversalTrace:
    initial_roll_mu: float = 0.0
    rows: list = field(default_factory=list)
    # Per segment: track distance of the steps starting in it, the same distance
    # apportioned by where the centerline actually was, and the exact
    # centerline length advanced inside it.
    segment_track_distance: list = field(default_factory=list)
    segment_track_share: list = field(default_factory=list)
    segment_centerline: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True)
class SegmentTiming:
    segment_index: int
    kind: str
    nominal_length: float
    path_length: float
    enter_t: float
    exit_t: float

    @property
    def duration(self):
        return self.exit_t - self.enter_t


@dataclass(frozen=True)
class SegmentSpeeds:
    """Mean simulated track speeds of a segment against the geometric law"""
    segment_index: int
    kind: str
    simulated: tuple
    theoretical: tuple

    @property
    def ape(self):
        return tuple(ape(s, t) for s, t in zip(self.simulated, self.theoretical))


@dataclass
class TraversalSummary:
    total_time: float = 0.0
    path_length: float = 0.0
    v_R: float = 0.0
    segment_times: list = field(default_factory=list)
    track_distances: tuple = (0.0, 0.0, 0.0)
    max_compression: tuple = (0.0, 0.0, 0.0)
    min_compression: tuple = (0.0, 0.0, 0.0)
    segment_speeds: list = field(default_factory=list)
    ape_per_track: tuple = (0.0, 0.0, 0.0)
    slip_metric: tuple = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class _SegmentDrive:
    mu: float
    ratios: tuple
    omega_out: tuple
    side: tuple
    v_track: tuple
    compression: tuple


def ape(sim_value, theory_value):
    """Signed percentage deviation of a simulated value from theory"""
    if theory_value == 0:
        raise ApeUndefined('APE is undefined for a zero theoretical value.')
    return (sim_value - theory_value) / theory_value * 100.0


def _segment_mu(segment, roll):
    return effective_mu(roll, segment) if segment.is_bend else roll


def _drive_for(config, index):
    robot = config.robot
    segment = config.network.segments[index]
    mu = _segment_mu(segment, config.initial_roll_mu)
    ratios = track_speed_ratios(segment, mu, config.network.spec)
    omega_out = OutputDemand(ratios).output_speeds(robot.input_speed_omega_u, robot.geartrain)
    return _SegmentDrive(
        mu=mu,
        ratios=ratios,
        omega_out=omega_out,
        side=side_gears_from_outputs(omega_out, robot.input_speed_omega_u, robot.geartrain),
        v_track=tuple(sprocket_to_track_speed(w, robot) for w in omega_out),
        compression=tuple(spring_compression(segment, g, robot.spring) for g in ratios),
    )


def run(config):
    """
    Step the robot through the network.

    Returns (TraversalTrace, TraversalSummary).
    """
    network = config.network
    robot = config.robot
    n_segments = len(network.segments)
    offset = robot.robot_length_LR / 2.0
    path_length = config.path_length

    trace = TraversalTrace(
        initial_roll_mu=config.initial_roll_mu,
        segment_track_distance=[[0.0, 0.0, 0.0] for _ in range(n_segments)],
        segment_track_share=[[0.0, 0.0, 0.0] for _ in range(n_segments)],
        segment_centerline=[0.0] * n_segments,
    )
    summary = TraversalSummary(path_length=path_length, v_R=robot.nominal_speed)
    if path_length <= PATH_TOLERANCE:
        logger.info('Network shorter than the robot; nothing to traverse.')
        return trace, summary
    if robot.nominal_speed <= 0:
        raise ConfigError('Robot does not move: input speed is zero.')

    logger.info(
        'Traversal start: D_R=%.2f mm, mu=%.1f deg, dt=%g s', path_length, config.initial_roll_mu, config.dt
    )

    drives = {}
    enter = {}
    exit_ = {}
    dist = [0.0, 0.0, 0.0]
    max_c = [float('-inf')] * 3
    min_c = [float('inf')] * 3
    prev_side = None
    s = 0.0
    t = 0.0
    step = 0

    start_index = locate(network, offset).segment_index
    enter[start_index] = 0.0

    while path_length - s > PATH_TOLERANCE:
        position = locate(network, offset + s)
        index = position.segment_index
        if index not in drives:
            drives[index] = _drive_for(config, index)
        drive = drives[index]

        v_R = robot_speed(drive.v_track)
        h = min(config.dt, (path_length - s) / v_R)
        if prev_side is None:
            accel = (0.0,) * 6
        else:
            accel = tuple((new - old) / h for new, old in zip(drive.side[6:], prev_side[6:]))
        tau = output_torques(robot.input_torque_tau_u, accel, robot.geartrain)
        prev_side = drive.side

        v_track = list(drive.v_track)
        if config.fault is not None and config.fault.active(t):
            v_track[config.fault.track] += config.fault.delta
        v_track = tuple(v_track)

        for i in range(3):
            max_c[i] = max(max_c[i], drive.compression[i])
            min_c[i] = min(min_c[i], drive.compression[i])

        if step % config.record_stride == 0:
            trace.rows.append(TraceRow(
                t=t,
                s_global=offset + s,
                segment_index=index,
                mu_effective=drive.mu,
                v_track=v_track,
                v_R=robot_speed(v_track),
                dist_track=tuple(dist),
                compression=drive.compression,
                tau_out=tau,
            ))

        advance = v_R * h
        seg_dist = trace.segment_track_distance[index]
        for i in range(3):
            dist[i] += v_track[i] * h
            seg_dist[i] += v_track[i] * h

        # split the centerline advance exactly across joints
        a = offset + s
        b = a + advance
        k = index
        while k < n_segments and a < b:
            seg_end = network.starts[k] + arc_length(network.segments[k])
            reached = min(b, seg_end)
            trace.segment_centerline[k] += reached - a
            share = trace.segment_track_share[k]
            for i in range(3):
                share[i] += v_track[i] * (reached - a) / v_R
            a = reached
            crossed = b >= seg_end and k + 1 < n_segments
            if crossed and seg_end < offset + path_length - PATH_TOLERANCE:
                crossing = t + (seg_end - (offset + s)) / v_R
                exit_[k] = crossing
                enter[k + 1] = crossing
                logger.debug('Segment %d -> %d at t=%.3f s', k, k + 1, crossing)
            k += 1

        t += h
        if h < config.dt:
            s = path_length
        else:
            s += advance
        step += 1

    # the last step may straddle a joint; arrival belongs to the segment holding the end point
    index = max(enter)
    if index not in drives:
        drives[index] = _drive_for(config, index)
    drive = drives[index]
    exit_[index] = t
    v_track = list(drive.v_track)
    if config.fault is not None and config.fault.active(t):
        v_track[config.fault.track] += config.fault.delta
    v_track = tuple(v_track)
    for i in range(3):
        max_c[i] = max(max_c[i], drive.compression[i])
        min_c[i] = min(min_c[i], drive.compression[i])
    trace.rows.append(TraceRow(
        t=t,
        s_global=offset + s,
        segment_index=index,
        mu_effective=drive.mu,
        v_track=v_track,
        v_R=robot_speed(v_track),
        dist_track=tuple(dist),
        compression=drive.compression,
        tau_out=tau,
    ))

    summary.total_time = t
    summary.track_distances = tuple(dist)
    summary.max_compression = tuple(max_c)
    summary.min_compression = tuple(min_c)
    summary.segment_times = _segment_times(config, enter, exit_)
    summary.segment_speeds = _segment_speeds(config, trace, summary.segment_times)
    summary.ape_per_track = _worst_ape(summary.segment_speeds)
    summary.slip_metric = slip_drag_metric(trace, network)
    logger.info('Traversal finished: %.3f s over %d steps', t, step)
    return trace, summary


def _segment_times(config, enter, exit_):
    network = config.network
    offset = config.robot.robot_length_LR / 2.0
    lo, hi = offset, offset + config.path_length
    timings = []
    for index in sorted(enter):
        segment = network.segments[index]
        start = network.starts[index]
        end = start + arc_length(segment)
        timings.append(SegmentTiming(
            segment_index=index,
            kind='bend' if segment.is_bend else 'straight',
            nominal_length=arc_length(segment),
            path_length=min(end, hi) - max(start, lo),
            enter_t=enter[index],
            exit_t=exit_.get(index, enter[index]),
        ))
    return timings


def _segment_speeds(config, trace, timings):
    robot = config.robot
    v_nominal = robot.nominal_speed
    speeds = []
    for timing in timings:
        if timing.duration <= 0:
            continue
        segment = config.network.segments[timing.segment_index]
        ratios = track_speed_ratios(
            segment, _segment_mu(segment, config.initial_roll_mu), config.network.spec
        )
        distances = trace.segment_track_share[timing.segment_index]
        speeds.append(SegmentSpeeds(
            segment_index=timing.segment_index,
            kind=timing.kind,
            simulated=tuple(d / timing.duration for d in distances),
            theoretical=tuple(g * v_nominal for g in ratios),
        ))
    return speeds


def _worst_ape(segment_speeds):
    worst = [0.0, 0.0, 0.0]
    for entry in segment_speeds:
        for i, value in enumerate(entry.ape):
            if abs(value) > abs(worst[i]):
                worst[i] = value
    return tuple(worst)


def slip_drag_metric(trace, network):
    """
    Worst per-track mismatch, over segments, between the distance a track
    actually travelled and the distance its contact line requires there.
    """
    worst = [0.0, 0.0, 0.0]
    for index, segment in enumerate(network.segments):
        centerline = trace.segment_centerline[index]
        ratios = track_speed_ratios(
            segment, _segment_mu(segment, trace.initial_roll_mu), network.spec
        )
        for i in range(3):
            mismatch = abs(trace.segment_track_distance[index][i] - ratios[i] * centerline)
            worst[i] = max(worst[i], mismatch)
    return tuple(worst)


@dataclass(frozen=True)
class TimingRow:
    segment_index: int
    kind: str
    path_length: float
    enter_t: float
    exit_t: float
    mean_speed: float
    analytic_duration: float

    @property
    def duration(self):
        return self.exit_t - self.enter_t

    @property
    def within_tolerance(self):
        if self.analytic_duration == 0:
            return self.duration == 0
        return abs(self.duration - self.analytic_duration) <= TIMING_TOLERANCE * self.analytic_duration


def segment_timing(summary):
    """Per-segment enter/exit times with the analytic path_length / v_R check"""
    rows = []
    for timing in summary.segment_times:
        duration = timing.duration
        rows.append(TimingRow(
            segment_index=timing.segment_index,
            kind=timing.kind,
            path_length=timing.path_length,
            enter_t=timing.enter_t,
            exit_t=timing.exit_t,
            mean_speed=timing.path_length / duration if duration > 0 else 0.0,
            analytic_duration=timing.path_length / summary.v_R if summary.v_R else 0.0,
        ))
    return rows
