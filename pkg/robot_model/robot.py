"""
Robot parameters and the sprocket, spring and asymmetric-compression laws.
"""
import math
from dataclasses import dataclass, field

from django.core.exceptions import ValidationError

from core.exceptions import NotABend
from differential.kinematics import GearTrainParams


@dataclass(frozen=True)
class SpringModel:
    """Module spring deflections in mm"""
    preload_straight: float = 1.25
    bend_extra: float = 1.5
    max_compression: float = 16.0
    # |g - 1| above which a module counts as inner/outer in a bend
    bend_trigger: float = 0.05

    def __post_init__(self):
        if not 0 <= self.preload_straight <= self.preload_straight + self.bend_extra <= self.max_compression:
            raise ValidationError(
                'Spring model requires 0 <= preload <= preload + bend_extra <= max_compression.'
            )
        if self.bend_trigger < 0:
            raise ValidationError('Spring bend trigger must be non-negative.')


@dataclass(frozen=True)
class RobotParams:
    sprocket_diameter_Ds: float = 80.0
    robot_length_LR: float = 200.0
    input_speed_omega_u: float = 120.0
    input_torque_tau_u: float = 1.0
    geartrain: GearTrainParams = field(default_factory=GearTrainParams)
    spring: SpringModel = field(default_factory=SpringModel)
    asym_YZ: float = 12.0
    asym_XZ: float = 150.0
    contact_length: float = 150.0
    # Circumference constant of the sprocket law. The reference speeds were
    # computed with 3.14; full precision is the default.
    pi: float = math.pi

    def __post_init__(self):
        for name in ('sprocket_diameter_Ds', 'robot_length_LR', 'asym_XZ', 'contact_length', 'pi'):
            if getattr(self, name) <= 0:
                raise ValidationError(f'Robot parameter {name} must be positive.')
        if self.asym_YZ < 0:
            raise ValidationError('Robot parameter asym_YZ must be non-negative.')
        if self.input_speed_omega_u < 0:
            raise ValidationError('Input speed must be non-negative.')

    @property
    def equal_load_output(self):
        return self.geartrain.equal_load_output(self.input_speed_omega_u)

    @property
    def nominal_speed(self):
        """Robot speed with all outputs at the equal-load speed, mm/s"""
        return sprocket_to_track_speed(self.equal_load_output, self)


def sprocket_to_track_speed(omega_out, params):
    """Track speed in mm/s from sprocket speed in rpm"""
    return params.pi * params.sprocket_diameter_Ds * omega_out / 60.0


def robot_speed(track_speeds):
    v_a, v_b, v_c = track_speeds
    return (v_a + v_b + v_c) / 3.0


def max_asym_angle(params):
    """Largest asymmetric module tilt allowed by the linkage, degrees"""
    return math.degrees(math.atan(params.asym_YZ / params.asym_XZ))


def spring_compression(segment, module_ratio, spring):
    compression = spring.preload_straight
    if segment.is_bend and abs(module_ratio - 1.0) > spring.bend_trigger:
        compression += spring.bend_extra
    return min(max(compression, 0.0), spring.max_compression)


def asym_feasibility(bend, contact_length, params):
    """
    Tilt a module needs to keep a rigid contact span on a bend, against the
    asymmetric compression limit. Advisory only.

    Returns (required degrees, feasible).
    """
    if not bend.is_bend:
        raise NotABend(f'{bend!r} is not a bend.')
    if contact_length <= 0:
        raise ValidationError('Contact length must be positive.')
    required = math.degrees(contact_length / (2.0 * bend.curvature_radius_R))
    return required, required <= max_asym_angle(params)
