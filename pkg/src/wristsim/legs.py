"""Per-leg kinematic chain: forward kinematics and closed-form inverse.

Each of the three legs is a chain of four revolute joints described by the
DH rows below; the mounting arrangement couples the joints pairwise
(q3 = q2 + pi, q4 = -q1), so a leg has two free joints and its coupling
point traces a sphere of radius ``COUPLER_DISTANCE`` around the base.

The minimum parametrization u = (alpha_y, alpha_z) fixes the full coupler
pose: the coupler x-axis is the reflection of the base x-axis about the
line through the coupler center (the half-angle property of this family
of parallel mechanisms), so the center lies on the bisector of the two
x-axes at the fixed coupler distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfWorkspace
from .geometry import Pose, Transform, dh_transform, transform_to_pose

# clamp window for acos arguments that exceed 1 by floating noise only
ACOS_CLAMP = 1e-9

DEFAULT_WORKSPACE_BOUND = 1.3  # rad, per minpose axis


@dataclass(frozen=True)
class LegParams:
    """Fixed design parameters of one leg.

    d: link offset, mm.  alpha: link twist, rad.  eta: leg azimuth about
    the base x-axis (legs at 0, 120, 240 deg).
    """

    d: float = 49.0
    alpha: float = math.pi / 4
    eta: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.alpha < math.pi / 2):
            raise ValueError("alpha must be in (0, pi/2)")
        if self.d <= 0.0:
            raise ValueError("d must be positive")

    @property
    def coupler_distance(self) -> float:
        """Distance from base origin to coupler center, mm (constant)."""
        return self.d * math.sqrt(2.0 * (1.0 - math.cos(self.alpha)))


LEG_A = LegParams(eta=0.0)
LEG_B = LegParams(eta=2.0 * math.pi / 3.0)
LEG_C = LegParams(eta=4.0 * math.pi / 3.0)
LEGS = (LEG_A, LEG_B, LEG_C)

COUPLER_DISTANCE = LEG_A.coupler_distance  # 37.503 mm for d=49, alpha=pi/4


@dataclass(frozen=True)
class LegJointState:
    """Joint angles of one leg, rad."""

    q1: float
    q2: float
    q3: float
    q4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.q3, self.q4])


def leg_frames(q: LegJointState, leg: LegParams) -> list[Transform]:
    """Chain frames [T_b^0, T_b^1, T_b^2, T_b^3, T_b^e] for one leg."""
    t0 = dh_transform(0.0, 0.0, 0.0, leg.eta)
    t1 = t0 @ dh_transform(q.q1, 0.0, 0.0, math.pi / 2)
    t2 = t1 @ dh_transform(q.q2, leg.d, 0.0, -leg.alpha)
    t3 = t2 @ dh_transform(q.q3, -leg.d, 0.0, math.pi / 2)
    te = t3 @ dh_transform(q.q4, 0.0, 0.0, math.pi - leg.eta)
    return [t0, t1, t2, t3, te]


def leg_fk(q: LegJointState, leg: LegParams) -> Transform:
    """Coupler pose from the joint angles of a single leg."""
    return leg_frames(q, leg)[-1]


def _first_two_joints(p, leg: LegParams) -> tuple[float, float]:
    """Closed-form (q1, q2) that place the coupler center at position p.

    q2 comes from the projection of p onto the leg axis; q1 then follows
    from the two in-plane components, which carry sin(q1) and cos(q1)
    separately:

        sin q1  ~  x (1 - cos a) + w sin a sin q2
        cos q1  ~  x sin a sin q2 - w (1 - cos a)

    with w = y cos(eta) + z sin(eta) and a the link twist.
    """
    x_e, y_e, z_e = p
    sa, ca = math.sin(leg.alpha), math.cos(leg.alpha)
    se, ce = math.sin(leg.eta), math.cos(leg.eta)
    arg = (y_e * se - z_e * ce) / (leg.d * sa)
    if abs(arg) > 1.0:
        if abs(arg) > 1.0 + ACOS_CLAMP:
            raise OutOfWorkspace(
                f"|y sin(eta) - z cos(eta)| = {abs(arg) * leg.d * sa:.6g} mm "
                f"exceeds d sin(alpha) = {leg.d * sa:.6g} mm"
            )
        arg = math.copysign(1.0, arg)
    q2 = math.acos(arg)
    s2 = math.sin(q2)
    w = y_e * ce + z_e * se
    q1 = math.atan2(
        x_e * (1.0 - ca) + w * sa * s2,
        x_e * sa * s2 - w * (1.0 - ca),
    )
    return q1, q2


def leg_ik_position(p, leg: LegParams) -> LegJointState:
    """Inverse kinematics from a coupler-center position (mm)."""
    q1, q2 = _first_two_joints(p, leg)
    return LegJointState(q1, q2, q2 + math.pi, -q1)


def leg_ik(u, leg: LegParams) -> LegJointState:
    """Inverse kinematics from the minimum parametrization u = (ay, az)."""
    return leg_ik_position(minpose_to_position(u), leg)


def minpose_to_position(u) -> tuple[float, float, float]:
    """Coupler-center position (mm) for u = (alpha_y, alpha_z)."""
    ay, az = u
    cy, sy = math.cos(ay), math.sin(ay)
    cz, sz = math.cos(az), math.sin(az)
    # coupler x-axis plus base x-axis = (unnormalized) bisector
    bx = cz * cy + 1.0
    by = sz * cy
    bz = -sy
    n = math.sqrt(bx * bx + by * by + bz * bz)
    if n < 1e-9:
        raise OutOfWorkspace("coupler axis opposite to base axis")
    s = COUPLER_DISTANCE / n
    return (bx * s, by * s, bz * s)


def _bisector_angles(px: float, py: float, pz: float) -> tuple[float, float]:
    """Azimuth about the base z-axis and tilt of the bisector direction."""
    b1 = math.atan2(py, px)
    b2 = math.atan2(-pz, math.hypot(px, py))
    return b1, b2


def minpose_to_transform(u, bound: float = DEFAULT_WORKSPACE_BOUND) -> Transform:
    """Coupler transform implied by u = (alpha_y, alpha_z).

    Writing the position direction as azimuth b1 and tilt b2, the coupler
    rotation is Rz(b1) Ry(2 b2) Rz(b1): a tilt of twice the position tilt,
    with no twist about the coupler axis.
    """
    ay, az = u
    if abs(ay) > bound or abs(az) > bound:
        raise OutOfWorkspace(
            f"|u| exceeds workspace bound {bound} rad: ({ay:.4f}, {az:.4f})"
        )
    px, py, pz = minpose_to_position(u)
    b1, b2 = _bisector_angles(px, py, pz)
    c1, s1 = math.cos(b1), math.sin(b1)
    cp, sp = math.cos(2.0 * b2), math.sin(2.0 * b2)
    r = np.array(
        [
            [cp * c1 * c1 - s1 * s1, -s1 * c1 * (1.0 + cp), sp * c1],
            [s1 * c1 * (1.0 + cp), c1 * c1 - cp * s1 * s1, sp * s1],
            [-sp * c1, sp * s1, cp],
        ]
    )
    return Transform.from_parts(r, (px, py, pz))


def coupler_pose_from_minpose(u, bound: float = DEFAULT_WORKSPACE_BOUND) -> Pose:
    """Full coupler pose implied by u = (alpha_y, alpha_z)."""
    return transform_to_pose(minpose_to_transform(u, bound))
