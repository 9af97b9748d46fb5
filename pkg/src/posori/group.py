"""Rigid motions of R^3 and their action on position-orientation pairs.

A point of position-orientation space is a pair (x, n): a position in R^3
plus a unit orientation vector.  Rigid motions are stored as (t, R) with R
a proper rotation matrix; their generators are twists (v, omega), with
omega kept as a 3-vector axis-angle rate (the skew tensor is ``hat(omega)``).

All types are immutable values (the wrapped arrays are made read-only) and
all operations are pure functions, so everything here is safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Small-angle switch points.  Below ROTATION_EPS the Rodrigues formula is
# replaced by its 2-term Taylor form; the translation mixing matrix of
# exp_se3 loses precision earlier, hence the larger TRANSLATION_EPS.
ROTATION_EPS = 1e-8
TRANSLATION_EPS = 1e-4

_MIN_ORIENTATION_NORM = 1e-12
_ROTATION_TOL = 1e-9


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector components must be finite")
    return a


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PositionOrientation:
    """A position in R^3 together with a unit orientation vector.

    The orientation is normalized on construction; vectors with norm below
    1e-12 are rejected.
    """

    x: np.ndarray
    n: np.ndarray

    def __post_init__(self):
        x = _readonly(_as_vec3(self.x).copy())
        n = _as_vec3(self.n).copy()
        norm = math.sqrt(float(n @ n))
        if norm < _MIN_ORIENTATION_NORM:
            raise ValueError("orientation vector is too short to normalize")
        n = _readonly(n / norm)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "n", n)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A velocity (xdot, ndot) at a base point, with ndot tangent to the sphere.

    ndot is projected onto the plane orthogonal to the base orientation, so
    the tangency constraint holds by construction.
    """

    base: PositionOrientation
    xdot: np.ndarray
    ndot: np.ndarray

    def __post_init__(self):
        xdot = _readonly(_as_vec3(self.xdot).copy())
        ndot = _as_vec3(self.ndot).copy()
        n = self.base.n
        ndot -= float(ndot @ n) * n
        assert abs(float(ndot @ n)) <= 1e-9
        object.__setattr__(self, "xdot", xdot)
        object.__setattr__(self, "ndot", _readonly(ndot))


@dataclass(frozen=True, eq=False)
class RotoTranslation:
    """A rigid motion (t, R): rotate by R, then translate by t."""

    t: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        t = _readonly(_as_vec3(self.t).copy())
        R = np.asarray(self.R, dtype=float)
        if R.shape != (3, 3):
            raise ValueError(f"expected a 3x3 rotation matrix, got shape {R.shape}")
        if np.linalg.norm(R.T @ R - np.eye(3)) > _ROTATION_TOL:
            raise ValueError("rotation matrix is not orthogonal")
        if abs(np.linalg.det(R) - 1.0) > _ROTATION_TOL:
            raise ValueError("rotation matrix must have determinant 1")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "R", _readonly(R.copy()))


@dataclass(frozen=True, eq=False)
class Twist:
    """A rigid-motion generator: translation velocity v and axis-angle rate omega."""

    v: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v", _readonly(_as_vec3(self.v).copy()))
        object.__setattr__(self, "omega", _readonly(_as_vec3(self.omega).copy()))


def identity() -> RotoTranslation:
    """The identity motion (zero translation, identity rotation)."""
    return RotoTranslation(np.zeros(3), np.eye(3))


def hat(w) -> np.ndarray:
    """Skew matrix of a 3-vector: hat(w) @ u == cross(w, u) for every u."""
    w = _as_vec3(w)
    return np.array(
        [
            [0.0, -w[2], w[1]],
            [w[2], 0.0, -w[0]],
            [-w[1], w[0], 0.0],
        ]
    )


def vee(A) -> np.ndarray:
    """Recover the 3-vector from a skew matrix; inverse of :func:`hat`."""
    A = np.asarray(A, dtype=float)
    if A.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {A.shape}")
    if np.linalg.norm(A + A.T) > 1e-9:
        raise ValueError("matrix is not skew-symmetric")
    return np.array([A[2, 1], A[0, 2], A[1, 0]])


def angular_velocity(m: Twist) -> float:
    """Rotation rate of a twist: the Euclidean norm of its axis-angle vector."""
    o = m.omega
    return math.sqrt(float(o @ o))


def compose(g2: RotoTranslation, g1: RotoTranslation) -> RotoTranslation:
    """The motion applying g1 first and then g2."""
    return RotoTranslation(g2.t + g2.R @ g1.t, g2.R @ g1.R)


def inverse(g: RotoTranslation) -> RotoTranslation:
    """The motion undoing g, so compose(inverse(g), g) is the identity."""
    return RotoTranslation(-(g.R.T @ g.t), g.R.T)


def exp_so3(omega) -> np.ndarray:
    """Rotation matrix of an axis-angle vector via the Rodrigues formula.

    Switches to the 2-term Taylor form I + hat + hat^2/2 below ROTATION_EPS.
    """
    omega = _as_vec3(omega)
    theta = math.sqrt(float(omega @ omega))
    K = hat(omega)
    if theta < ROTATION_EPS:
        return np.eye(3) + K + 0.5 * (K @ K)
    K /= theta
    # 1 - cos(theta) written as 2 sin^2(theta/2): no cancellation near zero
    return np.eye(3) + math.sin(theta) * K + (2.0 * math.sin(0.5 * theta) ** 2) * (K @ K)


def left_jacobian(omega) -> np.ndarray:
    """Matrix mixing a twist's translation velocity into the exponential's translation.

    V(omega) = I + ((1 - cos t)/t^2) hat + ((t - sin t)/t^3) hat^2 with
    t = |omega|; its Taylor form I + hat/2 + hat^2/6 is used below
    TRANSLATION_EPS.  Singular exactly at whole turns (t in 2*pi*Z, t != 0).
    """
    omega = _as_vec3(omega)
    theta = math.sqrt(float(omega @ omega))
    K = hat(omega)
    K2 = K @ K
    if theta < TRANSLATION_EPS:
        return np.eye(3) + 0.5 * K + K2 / 6.0
    t2 = theta * theta
    return (
        np.eye(3)
        + (2.0 * math.sin(0.5 * theta) ** 2 / t2) * K
        + ((theta - math.sin(theta)) / (t2 * theta)) * K2
    )


def exp_se3(m: Twist) -> RotoTranslation:
    """Rigid motion generated by a twist: R = exp_so3(omega), t = V(omega) v."""
    return RotoTranslation(left_jacobian(m.omega) @ m.v, exp_so3(m.omega))


def act_point(g: RotoTranslation, p: PositionOrientation) -> PositionOrientation:
    """Move a position-orientation by a rigid motion: (x, n) -> (t + R x, R n)."""
    return PositionOrientation(g.t + g.R @ p.x, g.R @ p.n)


def act_tangent(g: RotoTranslation, tv: TangentVector) -> TangentVector:
    """Push a tangent vector forward: the base moves, the velocities rotate."""
    return TangentVector(act_point(g, tv.base), g.R @ tv.xdot, g.R @ tv.ndot)


def act_algebra(m: Twist, p: PositionOrientation) -> TangentVector:
    """Velocity induced at a point by a twist: (v + omega x x, omega x n)."""
    return TangentVector(p, m.v + np.cross(m.omega, p.x), np.cross(m.omega, p.n))
