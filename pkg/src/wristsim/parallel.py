"""Forward kinematics of the parallel mechanism from the sensed joints.

Only the first joint of each leg carries an encoder.  The pose follows
from the pair (A, B): eliminating leg A's second joint between the x- and
y-closure equations leaves one linear-trigonometric equation for leg B's
second joint, after which leg B is fully known and single-leg FK yields
the pose.  Leg C is redundant and serves as a consistency check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentEncoders, InconsistentLegs
from .geometry import Pose, transform_to_pose
from .legs import LEG_A, LEG_B, LEG_C, LegJointState, LegParams, leg_fk, leg_ik_position

# negative discriminants beyond this tolerance signal non-physical encoders
DISCRIMINANT_TOL = 1e-12

LEG_AGREEMENT_TOL = 1e-9


@dataclass(frozen=True)
class SensedJoints:
    """Encoder readings: first joint of each leg, rad."""

    qA1: float
    qB1: float
    qC1: float

    def __post_init__(self):
        for name in ("qA1", "qB1", "qC1"):
            v = getattr(self, name)
            if not (-math.pi < v <= math.pi):
                raise ValueError(f"{name}={v:.6f} outside encoder range (-pi, pi]")


@dataclass(frozen=True)
class MechanismState:
    """All three leg joint states plus the common coupler pose."""

    legs: tuple[LegJointState, LegJointState, LegJointState]
    pose: Pose


def solve_qb2(qA1: float, qB1: float, leg_a: LegParams = LEG_A,
              leg_b: LegParams = LEG_B) -> float:
    """Second joint of leg B from the two sensed first joints.

    Requires the base frame aligned with leg A (eta_A = 0).  The closure
    equations reduce to t5*sin(qB2) + sin(eta_B)*cos(qA1)*cos(qB2) = W;
    the root with the positive discriminant branch is the one realized by
    the mechanism's assembly mode.
    """
    if leg_a.eta != 0.0:
        raise ValueError("solve_qb2 assumes leg A azimuth eta = 0")
    ca, sa = math.cos(leg_b.alpha), math.sin(leg_b.alpha)
    ce, se = math.cos(leg_b.eta), math.sin(leg_b.eta)
    cA1, sA1 = math.cos(qA1), math.sin(qA1)
    cB1, sB1 = math.cos(qB1), math.sin(qB1)
    t1 = ca - 1.0
    t2 = cA1 * cB1
    t5 = ce * cA1 * sB1 - cB1 * sA1
    w = t1 * (1.0 - sA1 * sB1 - t2 * ce) / sa
    g = se * cA1
    scale = t5 * t5 + g * g
    disc = scale - w * w
    if disc < 0.0:
        if disc < -DISCRIMINANT_TOL * max(scale, 1.0):
            raise InconsistentEncoders(
                f"encoder pair (qA1={qA1:.6f}, qB1={qB1:.6f}) admits no posture "
                f"(discriminant {disc:.3e})"
            )
        disc = 0.0
    root = math.sqrt(disc)
    s2 = (t5 * w + g * root) / scale
    c2 = (g * w - t5 * root) / scale
    return math.atan2(s2, c2)


def posture_from_encoders(s: SensedJoints) -> Pose:
    """Coupler pose from the sensed first joints (legs A and B solve)."""
    qb2 = solve_qb2(s.qA1, s.qB1)
    leg_b = LegJointState(s.qB1, qb2, qb2 + math.pi, -s.qB1)
    return transform_to_pose(leg_fk(leg_b, LEG_B))


def mechanism_state(s: SensedJoints) -> MechanismState:
    """Full joint state of all legs from the sensed joints."""
    pose = posture_from_encoders(s)
    p = (pose.x_e, pose.y_e, pose.z_e)
    legs = tuple(leg_ik_position(p, leg) for leg in (LEG_A, LEG_B, LEG_C))
    # legs A and B participated in the solve, so they must agree exactly;
    # leg C is redundant and only reported (see leg_c_residual)
    for q, sensed in zip(legs[:2], (s.qA1, s.qB1)):
        if abs(q.q1 - sensed) > LEG_AGREEMENT_TOL:
            raise InconsistentLegs(
                f"reconstructed q1={q.q1:.8f} disagrees with encoder {sensed:.8f}"
            )
    return MechanismState(legs=legs, pose=pose)


def leg_c_residual(s: SensedJoints) -> float:
    """Difference between leg C's sensed and predicted first joint, rad.

    Leg C is not used in the pose solve, so on consistent data this is a
    pure redundancy diagnostic.
    """
    pose = posture_from_encoders(s)
    q_c = leg_ik_position((pose.x_e, pose.y_e, pose.z_e), LEG_C)
    return s.qC1 - q_c.q1
