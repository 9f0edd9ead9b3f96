"""Static equilibrium of the parallel mechanism.

Opening each chain at its coupling joint, the coupler equilibrium under an
external wrench and the per-leg joint balances combine into one linear
system in the constraint-wrench coordinates.  The actuated/non-actuated
split leaves a one-parameter family of actuated torques that produce zero
net wrench: the internal-torque direction used for stiffness modulation.

All wrenches are stacked (force [N]; moment [N mm]) about the coupler
center, expressed in the base frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNullspace, InconsistentLegs
from .legs import LEGS, LegJointState, LegParams, leg_frames

COUPLER_RADIUS = 22.5  # mm, coupling point offset along the last joint axis
TAU_LIMIT = 1351.0  # N mm, max continuous torque at the gearbox output shaft

RANK_TOL = 1e-8


@dataclass(frozen=True)
class LegJacobian:
    """6x4 point Jacobian of one leg at its coupling point.

    Rows 0-2 map joint rates to the coupling-point velocity (so the
    transpose maps forces to joint torques); rows 3-5 carry the joint
    axes (transpose maps moments).
    """

    j: np.ndarray
    coupling_point: np.ndarray  # base frame, mm
    coupling_axis: np.ndarray  # unit vector of the coupling revolute


def leg_jacobian(q: LegJointState, leg: LegParams) -> LegJacobian:
    """Geometric Jacobian of one leg at the coupling point.

    Column i is [k_{i-1} x (P - O_{i-1}); k_{i-1}] with k the joint axis
    and P the coupling point, fixed at the coupler radius along the last
    joint axis (so the last column has no translational part).
    """
    frames = leg_frames(q, leg)
    t3 = frames[3]
    p = t3.apply((0.0, 0.0, COUPLER_RADIUS))
    j = np.zeros((6, 4))
    for i in range(4):
        t_prev = frames[i]
        k = t_prev.r[:, 2]
        o = t_prev.p
        j[:3, i] = np.cross(k, p - o)
        j[3:, i] = k
    return LegJacobian(j=j, coupling_point=p, coupling_axis=t3.r[:, 2].copy())


def _skew(v: np.ndarray) -> np.ndarray:
    return np.array(
        [[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]]
    )


@dataclass(frozen=True)
class StaticsMatrices:
    """Assembled equilibrium matrices at one posture."""

    j_full: np.ndarray  # 12x18 block-diagonal of leg Jacobian transposes
    g: np.ndarray  # 6x18 grasp matrix
    h: np.ndarray  # 15x18 constraint-selection matrix
    t_a: np.ndarray  # 3x12 selector of the actuated (first) joints
    t_abar: np.ndarray  # 9x12 complement selector
    coupler_center: np.ndarray


def assemble_statics(
    qs, legs: tuple[LegParams, ...] = LEGS, consistency_tol: float = 1e-6
) -> StaticsMatrices:
    """Build the equilibrium matrices from the three leg joint states."""
    if len(qs) != 3:
        raise ValueError("need exactly three leg joint states")
    fks = [leg_frames(q, leg)[-1] for q, leg in zip(qs, legs)]
    for other in fks[1:]:
        if np.abs(other.m - fks[0].m).max() > consistency_tol:
            raise InconsistentLegs("leg forward kinematics disagree on the pose")
    center = fks[0].p
    jacs = [leg_jacobian(q, leg) for q, leg in zip(qs, legs)]

    j_full = np.zeros((12, 18))
    g = np.zeros((6, 18))
    h = np.zeros((15, 18))
    for i, jac in enumerate(jacs):
        j_full[4 * i : 4 * i + 4, 6 * i : 6 * i + 6] = jac.j.T
        gi = np.eye(6)
        gi[3:, :3] = _skew(jac.coupling_point - center)
        g[:, 6 * i : 6 * i + 6] = gi
        n = jac.coupling_axis
        hi = np.zeros((5, 6))
        hi[:3, :3] = np.eye(3)
        hi[3, 3:] = (-n[1], n[0], 0.0)
        hi[4, 3:] = (-n[2], 0.0, n[0])
        h[5 * i : 5 * i + 5, 6 * i : 6 * i + 6] = hi

    t_a = np.zeros((3, 12))
    t_a[0, 0] = t_a[1, 4] = t_a[2, 8] = 1.0
    t_abar = np.zeros((9, 12))
    for row, col in enumerate(i for i in range(12) if i % 4 != 0):
        t_abar[row, col] = 1.0
    return StaticsMatrices(
        j_full=j_full, g=g, h=h, t_a=t_a, t_abar=t_abar, coupler_center=center
    )


@dataclass(frozen=True)
class _Factorization:
    ght: np.ndarray  # 6x15
    ght_pinv: np.ndarray  # 15x6
    null_basis: np.ndarray  # 15 x 9
    map_a: np.ndarray  # 3x15: tau_A = map_a @ w_tilde
    map_abar: np.ndarray  # 9x15
    lambda0: np.ndarray  # 9-vector: internal family direction in Lambda space
    n0: np.ndarray  # 3-vector, unit internal-torque direction


def _factorize(m: StaticsMatrices) -> _Factorization:
    ght = m.g @ m.h.T
    u, s, vt = np.linalg.svd(ght)
    rank = int((s > RANK_TOL * s[0]).sum())
    if rank != 6:
        raise DegenerateNullspace(f"rank(G H^T) = {rank} != 6 at this posture")
    ght_pinv = vt[:rank].T @ np.diag(1.0 / s[:rank]) @ u.T[:rank]
    null_basis = vt[rank:].T  # 15x9, orthonormal columns
    map_a = m.t_a @ m.j_full @ m.h.T
    map_abar = m.t_abar @ m.j_full @ m.h.T
    b = map_abar @ null_basis  # 9x9
    sb = np.linalg.svd(b, compute_uv=False)
    rank_b = int((sb > RANK_TOL * sb[0]).sum())
    _, _, vtb = np.linalg.svd(b)
    null_b = vtb[rank_b:].T  # 9 x r, r >= 1
    if null_b.shape[1] == 0:
        raise DegenerateNullspace("no internal-force family at this posture")
    # the family that matters is its image in actuated-torque space,
    # which must be exactly one-dimensional
    image = map_a @ null_basis @ null_b  # 3 x r
    ui, si, vti = np.linalg.svd(image)
    if si[0] <= RANK_TOL:
        raise DegenerateNullspace("internal family produces no actuated torque")
    if len(si) > 1 and si[1] > RANK_TOL * si[0]:
        raise DegenerateNullspace(
            f"internal torque family not one-dimensional (sv ratio {si[1] / si[0]:.2e})"
        )
    lambda0 = null_b @ vti[0] / si[0]  # minimal-norm preimage of the unit direction
    n0 = ui[:, 0]
    if n0[0] < 0.0:  # sign convention: leg-A component non-negative
        n0 = -n0
        lambda0 = -lambda0
    return _Factorization(
        ght=ght,
        ght_pinv=ght_pinv,
        null_basis=null_basis,
        map_a=map_a,
        map_abar=map_abar,
        lambda0=lambda0,
        n0=n0,
    )


def internal_torque_basis(m: StaticsMatrices) -> np.ndarray:
    """Unit actuated-torque direction producing zero end-effector wrench.

    Exactly one such direction exists at regular postures; injecting
    lambda times it loads the elastic transmissions without moving or
    wrenching the coupler.
    """
    return _factorize(m).n0


@dataclass(frozen=True)
class EquilibriumSolution:
    """Actuated torques and constraint wrenches balancing one load case."""

    tau_a: np.ndarray  # 3-vector, N mm
    w_tilde: np.ndarray  # 15-vector constraint-wrench coordinates
    n0: np.ndarray  # unit internal-torque direction
    lam: float  # internal-force coordinate along n0, N mm

    @property
    def saturated(self) -> np.ndarray:
        """Per-motor saturation flags against the torque limit."""
        return np.abs(self.tau_a) > TAU_LIMIT


def solve_equilibrium(
    m: StaticsMatrices, w_ext, lam: float = 0.0
) -> EquilibriumSolution:
    """Torques and constraint wrenches for an external wrench at the coupler.

    The solution family has one scalar freedom; ``lam`` selects the member
    whose internal-torque component along n0 is lam (in N mm).  The
    non-actuated joint balance holds for every member.
    """
    w_ext = np.asarray(w_ext, dtype=float)
    if w_ext.shape != (6,):
        raise ValueError("external wrench must be a 6-vector (force; moment)")
    f = _factorize(m)
    w_part = -f.ght_pinv @ w_ext
    # restore the non-actuated balance inside the nullspace of G H^T
    b = f.map_abar @ f.null_basis
    rhs = -f.map_abar @ w_part
    lam_part = np.linalg.lstsq(b, rhs, rcond=RANK_TOL)[0]
    w_tilde = w_part + f.null_basis @ (lam_part + lam * f.lambda0)
    tau_a = f.map_a @ w_tilde
    return EquilibriumSolution(tau_a=tau_a, w_tilde=w_tilde, n0=f.n0, lam=lam)


def equilibrium_residuals(
    m: StaticsMatrices, sol: EquilibriumSolution, w_ext
) -> tuple[float, float]:
    """(non-actuated torque residual, end-effector wrench residual)."""
    w_ext = np.asarray(w_ext, dtype=float)
    res_na = float(np.abs(m.t_abar @ m.j_full @ m.h.T @ sol.w_tilde).max())
    res_ee = float(np.abs(m.g @ m.h.T @ sol.w_tilde + w_ext).max())
    return res_na, res_ee
