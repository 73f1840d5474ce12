"""
Kinematics and torque balance of the three-output open differential (3-OOD).

The input U drives three ring gears R1..R3 through a 1/k reduction. Each
ring averages its two side gears (S1..S6); the side gears mesh rigidly with
the side gears S7..S12 of the three two-input differentials, whose rings
R4..R6 drive the outputs O1..O3 through the ratio j.

Rigid pairings between the two layers:

    S1-S7, S3-S8, S5-S11   (stated for the mechanism)
    S4-S9, S6-S10, S2-S12  (the only assignment for which ring R4 averaging
                            S7/S8, R5 averaging S9/S10 and R6 averaging
                            S11/S12 reproduce the output law below)

Angular speeds are in rpm throughout; accelerations are converted to rad/s^2
only inside the torque balance.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError

from core.exceptions import ConstraintViolation, UnreachableDemand

TOLERANCE = 1e-9
RPM_TO_RAD_S = 2.0 * math.pi / 60.0

# omega_7..omega_12 taken from omega_1..omega_6 (zero-based indices)
SIDE_PAIRING = (0, 2, 3, 5, 4, 1)

# Each row selects the side gears summed by one constraint. The first three
# rows are the ring averaging of R1..R3, the last three the output law for
# O1 (w2+w4), O2 (w3+w5), O3 (w1+w6).
CONSTRAINT_MATRIX = np.array([
    [1, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 1, 1],
    [0, 1, 0, 1, 0, 0],
    [0, 0, 1, 0, 1, 0],
    [1, 0, 0, 0, 0, 1],
], dtype=float)


@dataclass(frozen=True)
class GearTrainParams:
    """Static configuration of the differential"""
    k: float = 20.0
    j: float = 2.0
    inertias: tuple = (1.0,) * 6

    def __post_init__(self):
        object.__setattr__(self, 'inertias', tuple(float(i) for i in self.inertias))
        if self.k <= 0:
            raise ValidationError('Gear train ratio k must be positive.')
        if self.j <= 0:
            raise ValidationError('Gear train ratio j must be positive.')
        if len(self.inertias) != 6:
            raise ValidationError('Exactly six side-gear inertias are required.')
        if any(i < 0 for i in self.inertias):
            raise ValidationError('Side-gear inertias must be non-negative.')

    def equal_load_output(self, omega_u):
        return self.j * omega_u / self.k


@dataclass(frozen=True)
class DifferentialState:
    omega_u: float
    omega_ring: tuple
    omega_side: tuple
    omega_out: tuple
    tau_u: float = 0.0
    tau_out: tuple = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class OutputDemand:
    """Output speed ratios relative to the equal-load output speed"""
    ratios: tuple = field(default=(1.0, 1.0, 1.0))

    def __post_init__(self):
        object.__setattr__(self, 'ratios', tuple(float(g) for g in self.ratios))
        if len(self.ratios) != 3:
            raise ValidationError('An output demand has exactly three ratios.')
        if abs(sum(self.ratios) / 3.0 - 1.0) > TOLERANCE:
            raise UnreachableDemand(
                f'Demand ratios {self.ratios} do not average to 1; '
                'the mean output speed is fixed by the input.'
            )

    def output_speeds(self, omega_u, params):
        base = params.equal_load_output(omega_u)
        return tuple(g * base for g in self.ratios)


def ring_kinematics(omega_u, tau_u, params):
    """Speed and torque delivered to each of the three ring gears"""
    return omega_u / params.k, params.k * tau_u / 3.0


def _check_pair_sums(omega_side, omega_u, params):
    target = 2.0 * omega_u / params.k
    sums = CONSTRAINT_MATRIX[:3, :6] @ np.asarray(omega_side[:6], dtype=float)
    bad = np.abs(sums - target) > TOLERANCE * max(1.0, abs(target))
    if bad.any():
        raise ConstraintViolation(
            f'Side-gear pair sums {tuple(sums)} differ from 2*omega_u/k = {target}'
        )


def outputs_from_side_gears(omega_side, omega_u, params):
    """Forward map from side gears S1..S6 to the three outputs"""
    if len(omega_side) < 6:
        raise ConstraintViolation('Six side-gear speeds are required.')
    _check_pair_sums(omega_side, omega_u, params)
    w1, w2, w3, w4, w5, w6 = (float(w) for w in omega_side[:6])
    base = 2.0 * params.j * omega_u / params.k
    half_j = params.j / 2.0
    return (
        base - half_j * (w2 + w4),
        base - half_j * (w3 + w5),
        base - half_j * (w1 + w6),
    )


def expand_side_gears(omega_side_1_to_6):
    """All twelve side-gear speeds from the first six"""
    first = tuple(float(w) for w in omega_side_1_to_6)
    return first + tuple(first[i] for i in SIDE_PAIRING)


def _mean_is_reachable(omega_out, omega_u, params):
    target = params.equal_load_output(omega_u)
    return abs(sum(omega_out) / 3.0 - target) <= TOLERANCE * max(1.0, abs(target))


def side_gears_from_outputs(omega_out, omega_u, params):
    """
    Inverse map: twelve side-gear speeds producing the demanded outputs.

    The six constraints have rank 5, so the solution is picked as the
    minimum-norm deviation from the uniform state omega_u/k.
    """
    if len(omega_out) != 3:
        raise UnreachableDemand('Exactly three output speeds are required.')
    if not _mean_is_reachable(omega_out, omega_u, params):
        raise UnreachableDemand(
            f'Mean of outputs {tuple(omega_out)} differs from j*omega_u/k = '
            f'{params.equal_load_output(omega_u)}'
        )
    c = 2.0 * omega_u / params.k
    b = np.array([c, c, c] + [2.0 * c - 2.0 * w / params.j for w in omega_out])
    uniform = np.full(6, omega_u / params.k)
    delta = np.linalg.lstsq(CONSTRAINT_MATRIX, b - CONSTRAINT_MATRIX @ uniform, rcond=None)[0]
    return expand_side_gears(uniform + delta)


def output_torques(tau_u, side_accel, params):
    """
    Output torques from the input torque and the accelerations of S7..S12.

    Accelerations are given in rpm/s. Inertia subscripts are interleaved as in the
    torque balance: O1 <- I1*S7 + I3*S8, O2 <- I4*S9 + I6*S10,
    O3 <- I2*S12 + I5*S11.
    """
    a7, a8, a9, a10, a11, a12 = (float(a) * RPM_TO_RAD_S for a in side_accel)
    i1, i2, i3, i4, i5, i6 = params.inertias
    base = params.k * tau_u / (3.0 * params.j)
    return (
        base - (i1 * a7 + i3 * a8) / params.j,
        base - (i4 * a9 + i6 * a10) / params.j,
        base - (i2 * a12 + i5 * a11) / params.j,
    )


def solve_state(omega_out, omega_u, tau_u, params, side_accel=(0.0,) * 6):
    """Full differential state for a reachable set of output speeds"""
    omega_side = side_gears_from_outputs(omega_out, omega_u, params)
    omega_r, _ = ring_kinematics(omega_u, tau_u, params)
    return DifferentialState(
        omega_u=float(omega_u),
        omega_ring=(omega_r,) * 3,
        omega_side=omega_side,
        omega_out=outputs_from_side_gears(omega_side, omega_u, params),
        tau_u=float(tau_u),
        tau_out=output_torques(tau_u, side_accel, params),
    )


def equal_load_state(omega_u, tau_u, params, side_accel=(0.0,) * 6):
    """State with all three outputs under equal load"""
    omega_r, _ = ring_kinematics(omega_u, tau_u, params)
    return DifferentialState(
        omega_u=float(omega_u),
        omega_ring=(omega_r,) * 3,
        omega_side=(omega_r,) * 12,
        omega_out=(params.equal_load_output(omega_u),) * 3,
        tau_u=float(tau_u),
        tau_out=output_torques(tau_u, side_accel, params),
    )


def check_mean_invariant(state, params):
    return _mean_is_reachable(state.omega_out, state.omega_u, params)
