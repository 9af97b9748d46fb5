"""Planar roto-translations, screw decomposition, and the mav distance.

Between two position-orientations there is a distinguished rigid motion
whose rotation happens entirely in the plane spanned by the two orientation
vectors.  Its generator with the smallest rotation rate (the "mav" twist,
for minimal angular velocity) exponentiates along a natural connecting
curve, and the metric norm of the twist's induced velocity at the start
point gives a cheap, invariant stand-in for the Riemannian distance.

Geometry of the construction: with rotation angle theta and unit plane
normal l, the motion is a rotation by theta about a center point c plus a
slide along l.  The center sits off the segment midpoint by
(1/2) cot(theta/2) L x_par, where L = hat(l) and x_par is the in-plane part
of the displacement.  The generator's translation velocity is evaluated in
the combined form

    -theta L x_m - f(theta) L^2 x_par + x_perp,   f(theta) = (theta/2) cot(theta/2)

which stays bounded as theta -> 0 even though c itself escapes to infinity.

Degenerate configurations:
  * theta < 1e-7: treated as a pure translation (twist ((x2 - x1), 0)).
  * theta > pi - 1e-6: the rotation plane is (nearly) undefined; a
    deterministic plane through n1 and the default frame seed is used and
    the decomposition is flagged ``non_unique``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .group import (
    PositionOrientation,
    RotoTranslation,
    Twist,
    _readonly,
    act_algebra,
    act_point,
    exp_se3,
    exp_so3,
    hat,
)
from .metric import MetricParams, adapted_frame, norm_sq

PURE_TRANSLATION_EPS = 1e-7
ANTIPODAL_EPS = 1e-6
COT_SERIES_EPS = 1e-4


class PureTranslationError(ValueError):
    """Raised when a screw decomposition is requested but there is (numerically) no rotation."""


@dataclass(frozen=True, eq=False)
class ScrewDisplacement:
    """Rotation about a center point plus a slide along the rotation axis."""

    c: np.ndarray
    omega: np.ndarray
    t_perp: np.ndarray

    def apply(self, x) -> np.ndarray:
        """Evaluate the motion at a position: c + R (x - c) + t_perp."""
        R = exp_so3(self.omega)
        return self.c + R @ (np.asarray(x, dtype=float) - self.c) + self.t_perp


@dataclass(frozen=True, eq=False)
class PlanarDecomposition:
    """Rotation plane and displacement split shared by the constructions here.

    ``axis`` is the unit normal of the rotation plane (zero for pure
    translations) and ``L = hat(axis)``.  ``x_par``/``x_perp`` split
    x2 - x1 into its in-plane and out-of-plane parts; ``x_m`` is the
    midpoint of the two positions.  ``non_unique`` marks (near-)antipodal
    orientations, where the plane was chosen by the deterministic fallback.
    """

    theta: float
    axis: np.ndarray
    L: np.ndarray
    x_par: np.ndarray
    x_perp: np.ndarray
    x_m: np.ndarray
    non_unique: bool = False


def planar_decompose(p1: PositionOrientation, p2: PositionOrientation) -> PlanarDecomposition:
    """Rotation angle, rotation plane, and displacement split for a pair of points."""
    n1, n2 = p1.n, p2.n
    cr = np.cross(n1, n2)
    sin_theta = math.sqrt(float(cr @ cr))
    cos_theta = float(n1 @ n2)
    theta = math.atan2(sin_theta, cos_theta)
    d = p2.x - p1.x
    x_m = 0.5 * (p1.x + p2.x)

    non_unique = False
    if theta < PURE_TRANSLATION_EPS:
        axis = np.zeros(3)
        x_par = d.copy()
        x_perp = np.zeros(3)
    else:
        if theta > math.pi - ANTIPODAL_EPS:
            # plane undefined: span the first orientation and the default frame seed
            e2 = adapted_frame(p1).e2
            axis = np.cross(n1, e2)
            non_unique = True
        else:
            axis = cr / sin_theta
        along = float(d @ axis)
        x_perp = along * axis
        x_par = d - x_perp

    return PlanarDecomposition(
        theta=theta,
        axis=_readonly(axis),
        L=_readonly(hat(axis)),
        x_par=_readonly(x_par),
        x_perp=_readonly(x_perp),
        x_m=_readonly(x_m),
        non_unique=non_unique,
    )


def planar_rototranslation(p1: PositionOrientation, p2: PositionOrientation) -> RotoTranslation:
    """The rigid motion carrying p1 to p2 whose rotation lies in the orientations' plane.

    Maps x to R (x - x1) + x2 with R the in-plane rotation by the angle
    between the orientations.  For (near-)antipodal orientations the
    deterministic fallback plane is used (see :func:`planar_decompose`).
    """
    dec = planar_decompose(p1, p2)
    R = exp_so3(dec.theta * dec.axis)
    return RotoTranslation(p2.x - R @ p1.x, R)


def screw_decompose(p1: PositionOrientation, p2: PositionOrientation) -> ScrewDisplacement:
    """Rewrite the planar roto-translation as rotation about a center plus a slide.

    The center is x_m + (1/2) cot(theta/2) L x_par; the slide is the
    out-of-plane displacement.  Raises :class:`PureTranslationError` when
    the rotation angle vanishes (no finite center exists).
    """
    dec = planar_decompose(p1, p2)
    if dec.theta < PURE_TRANSLATION_EPS:
        raise PureTranslationError(
            "orientations coincide: the motion is a pure translation with no rotation center"
        )
    half_cot = 0.5 / math.tan(0.5 * dec.theta)
    c = dec.x_m + half_cot * np.cross(dec.axis, dec.x_par)
    return ScrewDisplacement(c=c, omega=dec.theta * dec.axis, t_perp=dec.x_perp.copy())


def _cot_factor(theta: float) -> float:
    # f(theta) = (theta/2) cot(theta/2), finite on [0, pi]
    if theta < COT_SERIES_EPS:
        t2 = theta * theta
        return 1.0 - t2 / 12.0 - t2 * t2 / 720.0
    half = 0.5 * theta
    return half * math.cos(half) / math.sin(half)


def mav_generator(p1: PositionOrientation, p2: PositionOrientation) -> Twist:
    """The twist with minimal rotation rate whose exponential carries p1 to p2.

    Equals (-hat(omega) c + x_perp, omega) for the screw decomposition with
    center c, evaluated in the combined form that stays bounded for small
    angles.  Pure translations give (x2 - x1, 0); the rotation rate is
    always the orientation angle, in [0, pi].
    """
    dec = planar_decompose(p1, p2)
    theta = dec.theta
    if theta < PURE_TRANSLATION_EPS:
        return Twist(p2.x - p1.x, np.zeros(3))
    l = dec.axis
    # L^2 x_par = -x_par since x_par is perpendicular to the axis
    v = -theta * np.cross(l, dec.x_m) + _cot_factor(theta) * dec.x_par + dec.x_perp
    return Twist(v, theta * l)


def mav_curve(p1: PositionOrientation, p2: PositionOrientation, t: float) -> PositionOrientation:
    """Point at parameter t of the screw curve from p1 (t=0) to p2 (t=1)."""
    M = mav_generator(p1, p2)
    return act_point(exp_se3(Twist(t * M.v, t * M.omega)), p1)


def mav_distance(w: MetricParams, p1: PositionOrientation, p2: PositionOrientation) -> float:
    """Metric length of the mav curve: the norm of the twist's velocity at p1.

    With strict weights this is a nonnegative length.  With unconstrained
    weights the squared norm q may be negative; the signed value
    sign(q) sqrt(|q|) is returned so no information is lost.
    """
    M = mav_generator(p1, p2)
    q = norm_sq(w, act_algebra(M, p1))
    if q == 0.0:
        return 0.0
    return math.copysign(math.sqrt(abs(q)), q)
