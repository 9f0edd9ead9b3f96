"""Double universal-joint chain of the pronation/supination transmission.

The chain connects the base to the coupler through two UJs whose centers
sit at the two frame origins, joined by a rigid link of the coupler
distance.  DH rows (q, d, a, alpha):

    base -> 1:   (b1, 0, 0,    -pi/2)
    1 -> 2:      (b2, 0, link,  0)
    2 -> 3:      (b3, 0, 0,    +pi/2)
    3 -> e:      (b4, 0, 0,     0)

For every pose the parallel mechanism can reach, the tilt angles are
pairwise equal (b3 = b2, b4 = b1), which makes the chain a constant
velocity coupling: the hand rotation commanded about the coupler x-axis
arrives without superposed twist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Transform, dh_transform, rot_x
from .legs import COUPLER_DISTANCE

POSITION_TOL = 1e-6


@dataclass(frozen=True)
class UjAngles:
    """The four UJ joint angles, rad."""

    beta1: float
    beta2: float
    beta3: float
    beta4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.beta1, self.beta2, self.beta3, self.beta4])


@dataclass(frozen=True)
class UjCorrection:
    """Affine-in-preload correction of the nominal UJ angles.

    Estimated angle i is (a[i] * delta_ref + b[i]) * nominal[i].  The b
    factors sit near unity; upper-UJ entries below one capture structural
    bending under preload.
    """

    a: tuple[float, float, float, float]
    b: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.a) != 4 or len(self.b) != 4:
            raise ValueError("correction needs 4 slope and 4 scale entries")
        if not all(0.0 < bi <= 1.5 for bi in self.b):
            raise ValueError(f"scale factors must lie in (0, 1.5]: {self.b}")


IDENTITY_CORRECTION = UjCorrection(a=(0.0,) * 4, b=(1.0,) * 4)


@dataclass(frozen=True)
class PsState:
    """Pronation/supination motor angle = hand rotation angle, rad."""

    theta_ps: float


def uj_chain_fk(beta: UjAngles) -> Transform:
    """Pose of the coupler frame for the given UJ angles."""
    return (
        dh_transform(beta.beta1, 0.0, 0.0, -math.pi / 2)
        @ dh_transform(beta.beta2, 0.0, COUPLER_DISTANCE, 0.0)
        @ dh_transform(beta.beta3, 0.0, 0.0, math.pi / 2)
        @ dh_transform(beta.beta4, 0.0, 0.0, 0.0)
    )


def uj_ik(t: Transform) -> UjAngles:
    """UJ angles reproducing a coupler pose at the fixed link distance.

    The first UJ follows from the coupler position alone; the second from
    the residual rotation.  When the position projects to the base z-axis
    (out of the wrist workspace) beta1 is undefined and the tie-break
    beta1 = 0 is used; the same convention resolves the 0/0 ratio on the
    y = 0 meridian, where y/sin(beta1) is continued as x/cos(beta1).
    """
    x_e, y_e, z_e = t.p
    dist = math.sqrt(x_e * x_e + y_e * y_e + z_e * z_e)
    if abs(dist - COUPLER_DISTANCE) > POSITION_TOL:
        raise ValueError(
            f"position norm {dist:.9g} mm != link length {COUPLER_DISTANCE:.9g} mm"
        )
    if abs(x_e) < 1e-12 and abs(y_e) < 1e-12:
        b1 = 0.0  # degenerate axis: any beta1 works, continuity picks 0
    else:
        b1 = math.atan2(y_e, x_e)
    s1, c1 = math.sin(b1), math.cos(b1)
    if abs(s1) > 0.5:
        b2 = math.atan2(-z_e, y_e / s1)
    else:
        b2 = math.atan2(-z_e, x_e / c1)
    t_b2 = dh_transform(b1, 0.0, 0.0, -math.pi / 2) @ dh_transform(
        b2, 0.0, COUPLER_DISTANCE, 0.0
    )
    t_2e = t_b2.inverse() @ t
    m = t_2e.m
    b3 = math.atan2(m[0, 2], -m[1, 2])
    b4 = math.atan2(m[2, 0], m[2, 1])
    return UjAngles(b1, b2, b3, b4)


def hand_pose(pm_pose: Transform, ps: PsState) -> Transform:
    """Hand pose: coupler pose rotated by the PS angle about its x-axis."""
    return pm_pose @ rot_x(ps.theta_ps)


def correct_uj_angles(
    beta_nominal: UjAngles, delta_ref: float, c: UjCorrection
) -> UjAngles:
    """Scale nominal UJ angles by the identified affine-in-preload factors."""
    if delta_ref < 0.0:
        raise ValueError("delta_ref must be non-negative")
    nom = (beta_nominal.beta1, beta_nominal.beta2, beta_nominal.beta3, beta_nominal.beta4)
    est = tuple((c.a[i] * delta_ref + c.b[i]) * nom[i] for i in range(4))
    return UjAngles(*est)
