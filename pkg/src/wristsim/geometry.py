"""Rigid-transform algebra, Euler pose parametrization, and DH factors.

Conventions used throughout the package:
  * millimeters and radians internally; degrees only at CLI boundaries
  * right-handed frames, rotations counter-clockwise about the axis
  * Euler sequence for poses: translation, then Rz(alpha_z) Ry(alpha_y) Rx(alpha_x)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GimbalLock

ORTHONORMALITY_TOL = 1e-10


def _rot_x(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _rot_y(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _rot_z(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class Transform:
    """4x4 homogeneous rigid transform.

    The rotation block is validated on construction: orthonormal to 1e-10
    and right-handed.  Construction fails loudly instead of silently
    re-orthonormalizing.
    """

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"transform must be 4x4, got {m.shape}")
        r = m[:3, :3]
        err = np.abs(r.T @ r - np.eye(3)).max()
        if err > ORTHONORMALITY_TOL:
            raise ValueError(f"rotation not orthonormal (err={err:.3e})")
        if np.linalg.det(r) < 0.0:
            raise ValueError("rotation is left-handed (det < 0)")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def r(self) -> np.ndarray:
        """3x3 rotation block."""
        return self.m[:3, :3]

    @property
    def p(self) -> np.ndarray:
        """Translation, mm."""
        return self.m[:3, 3]

    def __matmul__(self, other: "Transform") -> "Transform":
        return Transform(self.m @ other.m)

    def inverse(self) -> "Transform":
        r, p = self.r, self.p
        m = np.eye(4)
        m[:3, :3] = r.T
        m[:3, 3] = -r.T @ p
        return Transform(m)

    def apply(self, point) -> np.ndarray:
        """Map a 3-point through the transform."""
        return self.r @ np.asarray(point, dtype=float) + self.p

    @staticmethod
    def identity() -> "Transform":
        return Transform(np.eye(4))

    @staticmethod
    def from_parts(r: np.ndarray, p) -> "Transform":
        m = np.eye(4)
        m[:3, :3] = r
        m[:3, 3] = p
        return Transform(m)


def rot_x(a: float) -> Transform:
    return Transform.from_parts(_rot_x(a), (0.0, 0.0, 0.0))


def rot_y(a: float) -> Transform:
    return Transform.from_parts(_rot_y(a), (0.0, 0.0, 0.0))


def rot_z(a: float) -> Transform:
    return Transform.from_parts(_rot_z(a), (0.0, 0.0, 0.0))


def trans_x(p: float) -> Transform:
    return Transform.from_parts(np.eye(3), (p, 0.0, 0.0))


def trans_y(p: float) -> Transform:
    return Transform.from_parts(np.eye(3), (0.0, p, 0.0))


def trans_z(p: float) -> Transform:
    return Transform.from_parts(np.eye(3), (0.0, 0.0, p))


def dh_transform(q: float, d: float, a: float, alpha: float) -> Transform:
    """Transform between subsequent DH frames: Rz(q) Tz(d) Rx(alpha) Tx(a)."""
    cq, sq = math.cos(q), math.sin(q)
    ca, sa = math.cos(alpha), math.sin(alpha)
    # hand-expanded product of the four elementary factors, in the stated order
    m = np.array(
        [
            [cq, -sq * ca, sq * sa, a * cq],
            [sq, cq * ca, -cq * sa, a * sq],
            [0.0, sa, ca, d],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    return Transform(m)


@dataclass(frozen=True)
class Pose:
    """Coupler pose: ZYX Euler angles (rad) plus position (mm)."""

    alpha_x: float
    alpha_y: float
    alpha_z: float
    x_e: float
    y_e: float
    z_e: float

    @property
    def minpose(self) -> tuple[float, float]:
        """The (alpha_y, alpha_z) pair that fixes the 2-DoF wrist posture."""
        return (self.alpha_y, self.alpha_z)

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.alpha_x, self.alpha_y, self.alpha_z, self.x_e, self.y_e, self.z_e]
        )


def pose_to_transform(x: Pose) -> Transform:
    """Homogeneous transform encoding the pose: translation then Rz Ry Rx."""
    cx, sx = math.cos(x.alpha_x), math.sin(x.alpha_x)
    cy, sy = math.cos(x.alpha_y), math.sin(x.alpha_y)
    cz, sz = math.cos(x.alpha_z), math.sin(x.alpha_z)
    m = np.array(
        [
            [cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx, x.x_e],
            [sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx, x.y_e],
            [-sy, cy * sx, cy * cx, x.z_e],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    return Transform(m)


def transform_to_pose(t: Transform) -> Pose:
    """Invert the Euler parametrization (positive-sqrt pitch branch).

    Raises GimbalLock when |alpha_y| is at 90 deg, where the remaining two
    angles are not separable.
    """
    m = t.m
    cy = math.hypot(m[2, 1], m[2, 2])
    if cy * cy < 1e-12:
        raise GimbalLock("alpha_y at +/-90 deg: Euler angles not separable")
    return Pose(
        alpha_x=math.atan2(m[2, 1], m[2, 2]),
        alpha_y=math.atan2(-m[2, 0], cy),
        alpha_z=math.atan2(m[1, 0], m[0, 0]),
        x_e=m[0, 3],
        y_e=m[1, 3],
        z_e=m[2, 3],
    )
