"""Pairwise scalar invariants for learning on position-orientation clouds.

Two families of roto-translation invariant edge features:

  * the classic triple (longitudinal offset, lateral offset, orientation
    angle) used by equivariant point-cloud architectures;
  * the mav distance, whose five metric weights are differentiable knobs —
    :func:`grad_weights` supplies the exact gradient of the squared value.

:func:`pairwise_features` evaluates either (or both) over every ordered
pair of a cloud through the batch kernels in :mod:`posori.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .group import PositionOrientation, act_algebra
from .mav import mav_generator
from .metric import MetricParams

FEATURE_KINDS = ("mav", "triple", "both")


@dataclass(frozen=True)
class InvariantTriple:
    """The three baseline invariants of an ordered pair.

    i1: displacement along the first orientation (signed);
    i2: displacement across it (nonnegative);
    i3: angle between the orientations, in [0, pi].
    """

    i1: float
    i2: float
    i3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.i1, self.i2, self.i3])


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Dense (n, n, k) block of pairwise invariants; row = source, column = target."""

    n_points: int
    kind: str
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def bekkers_invariants(p1: PositionOrientation, p2: PositionOrientation) -> InvariantTriple:
    """The baseline invariant triple of an ordered pair."""
    d = p2.x - p1.x
    n1 = p1.n
    i1 = float(d @ n1)
    lateral = d - i1 * n1
    i2 = math.sqrt(float(lateral @ lateral))
    cr = np.cross(n1, p2.n)
    i3 = math.atan2(math.sqrt(float(cr @ cr)), float(n1 @ p2.n))
    return InvariantTriple(i1, i2, i3)


def grad_weights(p1: PositionOrientation, p2: PositionOrientation) -> np.ndarray:
    """Gradient of the squared mav distance with respect to the five weights.

    These are the five metric terms at the mav velocity, so
    q = weights . grad_weights(p1, p2) reconstructs the squared distance
    exactly for any weights.
    """
    tv = act_algebra(mav_generator(p1, p2), p1)
    n = tv.base.n
    xd = tv.xdot
    nd = tv.ndot
    longitudinal = float(xd @ n)
    lateral = np.cross(xd, n)
    return np.array(
        [
            longitudinal * longitudinal,
            float(lateral @ lateral),
            float(nd @ nd),
            2.0 * float(xd @ nd),
            2.0 * float(xd @ np.cross(nd, n)),
        ]
    )


def _cloud_arrays(points) -> tuple[np.ndarray, np.ndarray]:
    xs = np.array([p.x for p in points])
    ns = np.array([p.n for p in points])
    return xs, ns


def pairwise_features(
    points,
    w: MetricParams | None = None,
    kind: str = "mav",
) -> FeatureMatrix:
    """All-pairs invariants of a cloud: mav distances, triples, or both stacked.

    The result is deterministic: cell (i, j) depends only on points i and j,
    so neither evaluation order nor kernel parallelism changes any value.
    Feature depth k is 1 for 'mav', 3 for 'triple', 4 for 'both'
    (mav first).
    """
    if kind not in FEATURE_KINDS:
        raise ValueError(f"kind must be one of {FEATURE_KINDS}, got {kind!r}")
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    xs, ns = _cloud_arrays(points)

    blocks = []
    if kind in ("mav", "both"):
        if w is None:
            raise ValueError("mav features need metric weights")
        blocks.append(kernels.pairwise_mav(xs, ns, w.as_array())[..., None])
    if kind in ("triple", "both"):
        blocks.append(kernels.pairwise_triple(xs, ns))
    values = blocks[0] if len(blocks) == 1 else np.concatenate(blocks, axis=-1)
    return FeatureMatrix(n_points=len(points), kind=kind, values=values)
