"""Exception hierarchy for the wrist model.

Every domain failure raises a subclass of WristError so callers (and the
CLI) can separate model errors from I/O and programming errors.
"""


class WristError(Exception):
    """Base class for all domain errors."""


class GimbalLock(WristError):
    """Euler extraction undefined: pitch at +/-90 deg."""


class OutOfWorkspace(WristError):
    """Requested pose lies outside the reachable workspace."""


class InconsistentEncoders(WristError):
    """Sensed joint angles do not correspond to any mechanism posture."""


class InconsistentLegs(WristError):
    """Per-leg joint states disagree about the coupler pose."""


class DegenerateNullspace(WristError):
    """Internal-torque family is not one-dimensional at this posture."""


class GeometryViolation(WristError):
    """Tendon/pulley geometry impossible (square root of a negative)."""


class NoConvergence(WristError):
    """Iterative solver exhausted its iteration budget."""


class OutOfRange(WristError):
    """Deflection outside the transmission operating range."""


class NoEquilibrium(WristError):
    """Quasi-static equilibrium search failed or left the workspace."""


class DegenerateMarkerSet(WristError):
    """Marker set is too small or collinear for rigid registration."""


class RankDeficient(WristError):
    """Not enough independent data for the requested least-squares fit."""


class SingularStiffness(WristError):
    """Stiffness matrix is not invertible."""


class ConfigError(WristError):
    """Invalid scenario, calibration, or parameter configuration."""
