"""
Pipe networks as ordered straight and bend segments, and the per-module
track-speed ratios a bend imposes on the three tracks.

Modules A, B, C sit 120 degrees apart around the pipe axis. In a bend of
centerline radius R, module i rides at the effective radius
R - r*cos(mu + 120*i), where mu is the roll of module A measured from the
inward bend normal.
"""
import bisect
import math
from dataclasses import dataclass
from functools import cached_property

from django.core.exceptions import ValidationError

from core.exceptions import NotABend, OutOfRange

MODULE_NAMES = ('A', 'B', 'C')
MODULE_SPACING_DEG = 120.0
BOUNDARY_TOLERANCE = 1e-9

# Reference network geometry. R follows from the 90 degree elbow arc length
# (657.83 mm); r from the inner-module ratio at mu = 0 (33.69 / 50.24).
REFERENCE_ELBOW_ARC_MM = 657.83
REFERENCE_BEND_RADIUS_MM = REFERENCE_ELBOW_ARC_MM * 2.0 / math.pi
REFERENCE_PIPE_RADIUS_MM = REFERENCE_BEND_RADIUS_MM * (1.0 - 33.69 / 50.24)


@dataclass(frozen=True)
class PipeSpec:
    inner_radius_r: float

    def __post_init__(self):
        if self.inner_radius_r <= 0:
            raise ValidationError('Pipe inner radius r must be positive.')


@dataclass(frozen=True)
class Straight:
    length: float

    is_bend = False

    def __post_init__(self):
        if self.length <= 0:
            raise ValidationError('Straight segment length must be positive.')


@dataclass(frozen=True)
class Bend:
    """Bend of angle theta (degrees) around centerline radius R"""
    theta: float
    curvature_radius_R: float
    roll: float = 0.0

    is_bend = True

    def __post_init__(self):
        if not 0 < self.theta <= 360:
            raise ValidationError('Bend angle theta must lie in (0, 360] degrees.')
        if self.curvature_radius_R <= 0:
            raise ValidationError('Bend radius R must be positive.')


@dataclass(frozen=True)
class PathPosition:
    segment_index: int
    s_local: float
    s_global: float


@dataclass(frozen=True)
class PipeNetwork:
    spec: PipeSpec
    segments: tuple

    def __post_init__(self):
        object.__setattr__(self, 'segments', tuple(self.segments))
        if not self.segments:
            raise ValidationError('A pipe network needs at least one segment.')
        for index, segment in enumerate(self.segments):
            if segment.is_bend and segment.curvature_radius_R <= self.spec.inner_radius_r:
                raise ValidationError(
                    f'Segment {index}: bend radius R={segment.curvature_radius_R} '
                    f'must exceed pipe radius r={self.spec.inner_radius_r}.'
                )

    @cached_property
    def starts(self):
        """Global arc-length offset of every segment start"""
        offsets = [0.0]
        for segment in self.segments[:-1]:
            offsets.append(offsets[-1] + arc_length(segment))
        return tuple(offsets)

    @cached_property
    def total_length(self):
        return self.starts[-1] + arc_length(self.segments[-1])


def arc_length(segment):
    """Centerline length of a segment in mm"""
    if segment.is_bend:
        return segment.curvature_radius_R * math.radians(segment.theta)
    return segment.length


def _require_bend(segment):
    if not segment.is_bend:
        raise NotABend(f'{segment!r} is not a bend.')


def effective_radius(module_index, mu, bend, spec):
    _require_bend(bend)
    if module_index not in (0, 1, 2):
        raise ValueError(f'Module index must be 0, 1 or 2, got {module_index}.')
    angle = math.radians(mu + MODULE_SPACING_DEG * module_index)
    return bend.curvature_radius_R - spec.inner_radius_r * math.cos(angle)


def track_speed_ratios(segment, mu, spec):
    """Speed of each track relative to the robot centerline speed"""
    if not segment.is_bend:
        return (1.0, 1.0, 1.0)
    R = segment.curvature_radius_R
    return tuple(effective_radius(i, mu, segment, spec) / R for i in range(3))


def effective_mu(global_roll, bend):
    """Roll of module A relative to the plane of a given bend"""
    _require_bend(bend)
    return (global_roll - bend.roll) % 360.0


def locate(network, s_global):
    """
    Segment containing an arc-length position. A position on a joint belongs
    to the downstream segment, except at the very end of the network.
    """
    total = network.total_length
    if s_global < -BOUNDARY_TOLERANCE or s_global > total + BOUNDARY_TOLERANCE:
        raise OutOfRange(f'Position {s_global} mm outside network of length {total} mm.')
    s_global = min(max(s_global, 0.0), total)
    index = bisect.bisect_right(network.starts, s_global) - 1
    index = min(index, len(network.segments) - 1)
    s_local = min(s_global - network.starts[index], arc_length(network.segments[index]))
    return PathPosition(segment_index=index, s_local=s_local, s_global=s_global)


def reference_network(bend_radius=REFERENCE_BEND_RADIUS_MM, pipe_radius=REFERENCE_PIPE_RADIUS_MM):
    """Vertical, elbow, horizontal, U-section, final horizontal"""
    return PipeNetwork(
        spec=PipeSpec(pipe_radius),
        segments=(
            Straight(550.0),
            Bend(90.0, bend_radius),
            Straight(350.0),
            Bend(180.0, bend_radius),
            Straight(150.0),
        ),
    )
