"""The 5-weight family of roto-translation invariant metrics on position-orientation space.

A metric in the family is determined by five real weights.  At a point with
orientation n, the squared norm of a tangent (xdot, ndot) is

    w1 |xdot . n|^2 + w2 |xdot x n|^2 + w3 |ndot|^2
        + 2 w4 (xdot . ndot) + 2 w5 xdot . (ndot x n)

which is invariant under every rigid motion.  The weights define a genuine
(positive-definite) metric exactly when w1, w2, w3 > 0 and
w2*w3 > w4^2 + w5^2; parameter sets may also be used unconstrained, e.g. as
learnable weights, in which case squared "norms" can go negative.

``stabilizer_invariant_basis`` re-derives the family computationally: it
solves for all symmetric forms on the tangent space that survive a
quarter-turn about the orientation axis and returns a basis of the
(5-dimensional) solution space.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .group import (
    PositionOrientation,
    TangentVector,
    _as_vec3,
    _readonly,
    act_tangent,
    exp_so3,
    RotoTranslation,
)

_BASE_MATCH_TOL = 1e-12
_SEED_ANGLE_TOL = 1e-6


@dataclass(frozen=True)
class MetricParams:
    """The five weights of an invariant metric.

    ``strict`` records whether the positive-definiteness constraints are
    enforced at construction; leave it False for unconstrained (learnable)
    weights.
    """

    w1: float
    w2: float
    w3: float
    w4: float
    w5: float
    strict: bool = False

    def __post_init__(self):
        ws = (self.w1, self.w2, self.w3, self.w4, self.w5)
        if not all(math.isfinite(w) for w in ws):
            raise ValueError("metric weights must be finite")
        for name, w in zip(("w1", "w2", "w3", "w4", "w5"), ws):
            object.__setattr__(self, name, float(w))
        if self.strict and not is_positive(self):
            raise ValueError(
                "weights do not define a positive metric: need w1,w2,w3 > 0 "
                "and w2*w3 > w4^2 + w5^2"
            )

    def as_array(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3, self.w4, self.w5])

    @classmethod
    def from_array(cls, w, strict: bool = False) -> "MetricParams":
        w = np.asarray(w, dtype=float)
        if w.shape != (5,):
            raise ValueError(f"expected 5 weights, got shape {w.shape}")
        return cls(*(float(v) for v in w), strict=strict)


@dataclass(frozen=True, eq=False)
class AdaptedFrame:
    """Orthonormal frame at a point with e1 equal to the orientation.

    ``f`` lists the induced tangent basis: (e1,0), (e2,0), (e3,0), (0,e2), (0,e3).
    """

    base: PositionOrientation
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray

    @cached_property
    def f(self) -> tuple[TangentVector, ...]:
        zero = np.zeros(3)
        return (
            TangentVector(self.base, self.e1, zero),
            TangentVector(self.base, self.e2, zero),
            TangentVector(self.base, self.e3, zero),
            TangentVector(self.base, zero, self.e2),
            TangentVector(self.base, zero, self.e3),
        )

    def components(self, tv: TangentVector) -> np.ndarray:
        """Coordinates of a tangent vector in the f basis."""
        _require_same_base(self.base, tv.base)
        return np.array(
            [
                float(tv.xdot @ self.e1),
                float(tv.xdot @ self.e2),
                float(tv.xdot @ self.e3),
                float(tv.ndot @ self.e2),
                float(tv.ndot @ self.e3),
            ]
        )


def _require_same_base(a: PositionOrientation, b: PositionOrientation) -> None:
    if (
        float(np.max(np.abs(a.x - b.x))) > _BASE_MATCH_TOL
        or float(np.max(np.abs(a.n - b.n))) > _BASE_MATCH_TOL
    ):
        raise ValueError("tangent vectors live at different base points")


def norm_sq(w: MetricParams, tv: TangentVector) -> float:
    """Squared metric norm of a tangent vector (may be negative when unconstrained)."""
    n = tv.base.n
    xd = tv.xdot
    nd = tv.ndot
    longitudinal = float(xd @ n)
    lateral = np.cross(xd, n)
    return float(
        w.w1 * longitudinal * longitudinal
        + w.w2 * float(lateral @ lateral)
        + w.w3 * float(nd @ nd)
        + 2.0 * w.w4 * float(xd @ nd)
        + 2.0 * w.w5 * float(xd @ np.cross(nd, n))
    )


def inner(w: MetricParams, a: TangentVector, b: TangentVector) -> float:
    """Metric inner product, recovered from the norm by polarization."""
    _require_same_base(a.base, b.base)
    plus = TangentVector(a.base, a.xdot + b.xdot, a.ndot + b.ndot)
    minus = TangentVector(a.base, a.xdot - b.xdot, a.ndot - b.ndot)
    return 0.25 * (norm_sq(w, plus) - norm_sq(w, minus))


def is_positive(w: MetricParams) -> bool:
    """True when the weights define a positive-definite metric."""
    return (
        w.w1 > 0.0
        and w.w2 > 0.0
        and w.w3 > 0.0
        and w.w2 * w.w3 > w.w4 * w.w4 + w.w5 * w.w5
    )


def adapted_frame(p: PositionOrientation, seed_direction=None) -> AdaptedFrame:
    """Deterministic orthonormal frame at p with e1 = n.

    e2 is the Gram-Schmidt projection of the seed direction (default: the
    standard axis least aligned with n) and e3 = n x e2.  Seeds within
    1e-6 rad of +-n are rejected.
    """
    n = p.n
    if seed_direction is None:
        seed = np.zeros(3)
        seed[int(np.argmin(np.abs(n)))] = 1.0
    else:
        seed = _as_vec3(seed_direction)
    perp = seed - float(seed @ n) * n
    perp_norm = math.sqrt(float(perp @ perp))
    seed_norm = math.sqrt(float(seed @ seed))
    if perp_norm <= seed_norm * math.sin(_SEED_ANGLE_TOL):
        raise ValueError("seed direction is (anti)parallel to the orientation")
    e2 = perp / perp_norm
    e3 = np.cross(n, e2)
    return AdaptedFrame(p, _readonly(n.copy()), _readonly(e2), _readonly(e3))


def metric_matrix(w: MetricParams, frame: AdaptedFrame) -> np.ndarray:
    """5x5 component matrix h_ij = inner(f_i, f_j) in an adapted frame."""
    f = frame.f
    H = np.empty((5, 5))
    for i in range(5):
        for j in range(i, 5):
            H[i, j] = inner(w, f[i], f[j])
            H[j, i] = H[i, j]
    return H


def reparam(a1: float, a2: float, a3: float, a4: float, a5: float) -> MetricParams:
    """Weights from unconstrained parameters, guaranteed semi-positive.

    w1 = a1^2, w2 = a2^2, w3 = a3^2, and w4 = a4*d, w5 = a5*d with
    d = 2 a2 a3 / (1 + a4^2 + a5^2), so w2*w3 >= w4^2 + w5^2 always holds
    (with equality when a4^2 + a5^2 = 1).
    """
    delta = 2.0 * a2 * a3 / (1.0 + a4 * a4 + a5 * a5)
    return MetricParams(a1 * a1, a2 * a2, a3 * a3, a4 * delta, a5 * delta)


def restrict_e3(w: MetricParams) -> MetricParams:
    """Drop the handed coupling term: the subfamily also invariant under reflections."""
    return dataclasses.replace(w, w5=0.0)


def _stabilizer_rotation(frame: AdaptedFrame) -> RotoTranslation:
    # quarter turn about the orientation axis, fixing the base position
    p = frame.base
    R = exp_so3(0.5 * math.pi * p.n)
    return RotoTranslation(p.x - R @ p.x, R)


def stabilizer_invariant_basis(p: PositionOrientation) -> list[np.ndarray]:
    """Basis of all symmetric tangent forms invariant under the point's stabilizer.

    Expresses the quarter-turn about the orientation axis as a 5x5 matrix G
    in the adapted frame and solves the linear system
    {H symmetric : G^T H G = H}.  The solution space has dimension 5; its
    elements carry the sparsity pattern of the invariant-metric family.
    """
    frame = adapted_frame(p)
    g = _stabilizer_rotation(frame)
    G = np.column_stack([frame.components(act_tangent(g, fi)) for fi in frame.f])

    # parameterize symmetric H by its 15 upper-triangle entries
    iu = np.triu_indices(5)
    sym_basis = []
    for i, j in zip(*iu):
        E = np.zeros((5, 5))
        E[i, j] = 1.0
        E[j, i] = 1.0
        sym_basis.append(E)
    A = np.column_stack([(G.T @ E @ G - E).ravel() for E in sym_basis])

    _, svals, vt = np.linalg.svd(A)
    tol = 1e-9 * max(1.0, float(svals[0]))
    null = vt[svals <= tol]

    basis = []
    for coeffs in null:
        H = sum(c * E for c, E in zip(coeffs, sym_basis))
        basis.append(H / np.linalg.norm(H))
    return basis


def pattern_matrix(w: MetricParams) -> np.ndarray:
    """The component matrix the five weights produce in any adapted frame."""
    return np.array(
        [
            [w.w1, 0.0, 0.0, 0.0, 0.0],
            [0.0, w.w2, 0.0, w.w4, w.w5],
            [0.0, 0.0, w.w2, -w.w5, w.w4],
            [0.0, w.w4, -w.w5, w.w3, 0.0],
            [0.0, w.w5, w.w4, 0.0, w.w3],
        ]
    )
