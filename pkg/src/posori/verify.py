"""Numerical certification of the library's geometric claims.

Seeded randomized suites that check, at fixed tolerances:

  * invariance of the metric norm, the mav distance, and the baseline
    invariant triple under random rigid motions;
  * that the mav generator really has the smallest rotation rate among
    generators of the same motion (full-turn alternatives included);
  * that the family of stabilizer-invariant symmetric forms is exactly
    5-dimensional with the expected sparsity pattern.

Also provides two independent cross-checks on the mav distance itself:
a Simpson quadrature of the curve speed (built from central differences,
not from the algebra action) and a sampled-graph shortest-path upper bound
on the true Riemannian distance.

Every suite derives one RNG per trial from (seed, trial index), so reports
are reproducible and independent of how trials might be sharded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import csgraph_from_dense, dijkstra
from scipy.stats import qmc

from .features import bekkers_invariants
from .group import (
    PositionOrientation,
    RotoTranslation,
    TangentVector,
    Twist,
    act_point,
    act_tangent,
    angular_velocity,
    exp_se3,
    exp_so3,
    left_jacobian,
)
from .mav import mav_distance, mav_generator, planar_decompose, planar_rototranslation
from .metric import MetricParams, norm_sq, pattern_matrix, stabilizer_invariant_basis

DEFAULT_SEED = 0

_REL_TOL = 1e-9
_ENDPOINT_TOL = 1e-8


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of one certification suite; a pure function of (seed, trials)."""

    name: str
    trials: int
    max_abs_err: float
    max_rel_err: float
    failures: int
    seed: int

    def to_line(self) -> str:
        return (
            f"{self.name} {self.trials} {self.max_abs_err:.17g} "
            f"{self.max_rel_err:.17g} {self.failures} {self.seed}"
        )


def _trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, index])


def random_unit(rng: np.random.Generator) -> np.ndarray:
    while True:
        v = rng.normal(size=3)
        norm = math.sqrt(float(v @ v))
        if norm > 1e-6:
            return v / norm


def random_point(rng: np.random.Generator, box: float = 3.0) -> PositionOrientation:
    return PositionOrientation(rng.uniform(-box, box, 3), random_unit(rng))


def random_pair(
    rng: np.random.Generator,
    box: float = 3.0,
    max_theta: float = math.pi - 1e-3,
    min_theta: float = 0.0,
) -> tuple[PositionOrientation, PositionOrientation]:
    """A random ordered pair whose orientation angle avoids the degenerate bands."""
    p1 = random_point(rng, box)
    while True:
        n2 = random_unit(rng)
        cr = np.cross(p1.n, n2)
        theta = math.atan2(math.sqrt(float(cr @ cr)), float(p1.n @ n2))
        if min_theta <= theta <= max_theta:
            return p1, PositionOrientation(rng.uniform(-box, box, 3), n2)


def random_tangent(rng: np.random.Generator, p: PositionOrientation) -> TangentVector:
    return TangentVector(p, rng.normal(size=3), rng.normal(size=3))


def random_rototranslation(rng: np.random.Generator, box: float = 3.0) -> RotoTranslation:
    omega = random_unit(rng) * rng.uniform(0.0, math.pi)
    return RotoTranslation(rng.uniform(-box, box, 3), exp_so3(omega))


def random_strict_params(rng: np.random.Generator) -> MetricParams:
    w1, w2, w3 = rng.uniform(0.2, 2.0, 3)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    r = 0.95 * math.sqrt(w2 * w3) * rng.uniform(0.0, 1.0)
    return MetricParams(w1, w2, w3, r * math.cos(phi), r * math.sin(phi), strict=True)


def _curve_states(M: Twist, p1: PositionOrientation, ts: np.ndarray):
    """Positions and orientations of t -> exp(t M) . p1, batched over t."""
    theta = angular_velocity(M)
    ts = np.asarray(ts, dtype=float)
    if theta < 1e-12:
        x = p1.x + ts[:, None] * M.v
        n = np.broadcast_to(p1.n, x.shape).copy()
        return x, n
    l = M.omega / theta
    a = ts * theta

    def rotate(u):
        cos_a = np.cos(a)[:, None]
        sin_a = np.sin(a)[:, None]
        return u * cos_a + np.cross(l, u) * sin_a + l * (float(l @ u) * (1.0 - cos_a))

    small = np.abs(a) < 1e-4
    a_safe = np.where(small, 1.0, a)
    g1 = np.where(small, a / 2.0 - a**3 / 24.0, (1.0 - np.cos(a_safe)) / a_safe)
    g2 = np.where(small, a**2 / 6.0 - a**4 / 120.0, (a_safe - np.sin(a_safe)) / a_safe)
    lv = np.cross(l, M.v)
    llv = np.cross(l, lv)
    translation = ts[:, None] * (M.v + g1[:, None] * lv + g2[:, None] * llv)

    x = translation + rotate(p1.x)
    n = rotate(p1.n)
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    return x, n


def curve_length_quadrature(
    w: MetricParams,
    p1: PositionOrientation,
    p2: PositionOrientation,
    n_steps: int,
) -> float:
    """Composite-Simpson length of the mav curve from central-difference speeds.

    An independent check on the closed-form mav distance: the curve speed is
    obtained by finite differences of the curve itself (step 1e-6), never
    through the algebra action.  The speed is constant along the curve, so
    even n_steps = 1 is accurate.  Requires strict weights.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if not w.strict:
        raise ValueError("curve length needs strict (positive-definite) weights")
    M = mav_generator(p1, p2)

    grid = np.linspace(0.0, 1.0, 2 * n_steps + 1)
    h = 1e-6
    m = grid.size
    xs, ns = _curve_states(M, p1, np.concatenate([grid, grid + h, grid - h]))
    x0, n0 = xs[:m], ns[:m]
    xdot = (xs[m : 2 * m] - xs[2 * m :]) / (2.0 * h)
    ndot = (ns[m : 2 * m] - ns[2 * m :]) / (2.0 * h)

    longitudinal = np.sum(xdot * n0, axis=1)
    lateral = np.cross(xdot, n0)
    q = (
        w.w1 * longitudinal**2
        + w.w2 * np.sum(lateral * lateral, axis=1)
        + w.w3 * np.sum(ndot * ndot, axis=1)
        + 2.0 * w.w4 * np.sum(xdot * ndot, axis=1)
        + 2.0 * w.w5 * np.sum(xdot * np.cross(ndot, n0), axis=1)
    )
    speed = np.sqrt(np.maximum(q, 0.0))

    width = grid[2] - grid[0]
    panels = (speed[0:-2:2] + 4.0 * speed[1::2] + speed[2::2]) * (width / 6.0)
    return float(np.sum(panels))


def _sample_cloud(
    p1: PositionOrientation, p2: PositionOrientation, samples: int, seed: int
) -> list[PositionOrientation]:
    """Low-discrepancy points in an inflated box around the pair, orientations on the sphere."""
    if samples == 0:
        return []
    sep = float(np.linalg.norm(p2.x - p1.x))
    margin = 0.5 * sep + 1.0
    lo = np.minimum(p1.x, p2.x) - margin
    hi = np.maximum(p1.x, p2.x) + margin
    u = qmc.Halton(d=5, seed=seed & 0xFFFFFFFFFFFFFFFF).random(samples)
    xs = lo + u[:, :3] * (hi - lo)
    z = 2.0 * u[:, 3] - 1.0
    phi = 2.0 * math.pi * u[:, 4]
    rho = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    ns = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    return [PositionOrientation(x, n) for x, n in zip(xs, ns)]


def graph_geodesic_upper_bound(
    w: MetricParams,
    p1: PositionOrientation,
    p2: PositionOrientation,
    samples: int,
    seed: int,
    waypoints=(),
) -> float:
    """Upper bound on the Riemannian distance via piecewise-mav paths.

    Builds the complete directed graph on {p1, p2}, the given waypoints, and
    `samples` low-discrepancy points around the pair, with the mav distance
    as edge weight, and returns the shortest p1 -> p2 path length.  The
    direct edge is always present, so the bound never exceeds the mav
    distance; more samples can only tighten it (the node set is nested).
    """
    if not w.strict:
        raise ValueError("the graph bound needs strict (positive-definite) weights")
    if samples < 0:
        raise ValueError("samples must be >= 0")
    nodes = [p1, p2, *waypoints, *_sample_cloud(p1, p2, samples, seed)]
    m = len(nodes)
    weights = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            weights[i, j] = 0.0 if i == j else mav_distance(w, nodes[i], nodes[j])
    graph = csgraph_from_dense(weights, null_value=np.inf)
    dist = dijkstra(graph, directed=True, indices=0)
    return float(dist[1])


def alternative_generators(
    p1: PositionOrientation, p2: PositionOrientation, ks=(-2, -1, 1, 2)
) -> list[Twist]:
    """Twists generating the same motion with the rotation angle shifted by full turns.

    For each k, the rotation angle becomes theta + 2*pi*k about the same
    axis and the translation velocity is re-solved so the exponential still
    carries p1 to p2.  Needs a nonzero rotation angle.
    """
    dec = planar_decompose(p1, p2)
    if dec.theta < 1e-12:
        raise ValueError("pure translation: no rotation axis to wind around")
    S = planar_rototranslation(p1, p2)
    out = []
    for k in ks:
        omega = (dec.theta + 2.0 * math.pi * k) * dec.axis
        v = np.linalg.solve(left_jacobian(omega), S.t)
        out.append(Twist(v, omega))
    return out


def run_invariance_suite(seed: int = DEFAULT_SEED, trials: int = 1000) -> SuiteReport:
    """Check rigid-motion invariance of norm_sq, the mav distance, and the triple."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    max_abs = 0.0
    max_rel = 0.0
    failures = 0
    for i in range(trials):
        rng = _trial_rng(seed, i)
        w = random_strict_params(rng)
        p1, p2 = random_pair(rng)
        g = random_rototranslation(rng)
        gp1 = act_point(g, p1)
        gp2 = act_point(g, p2)

        ok = True

        mu = mav_distance(w, p1, p2)
        err = abs(mav_distance(w, gp1, gp2) - mu)
        rel = err / (1.0 + abs(mu))
        ok &= rel <= _REL_TOL

        tv = random_tangent(rng, p1)
        q = norm_sq(w, tv)
        err_q = abs(norm_sq(w, act_tangent(g, tv)) - q)
        rel_q = err_q / (1.0 + abs(q))
        ok &= rel_q <= _REL_TOL

        t0 = bekkers_invariants(p1, p2).as_array()
        t1 = bekkers_invariants(gp1, gp2).as_array()
        err_t = float(np.max(np.abs(t1 - t0)))
        rel_t = float(np.max(np.abs(t1 - t0) / (1.0 + np.abs(t0))))
        ok &= rel_t <= _REL_TOL

        max_abs = max(max_abs, err, err_q, err_t)
        max_rel = max(max_rel, rel, rel_q, rel_t)
        if not ok:
            failures += 1
    return SuiteReport("invariance", trials, max_abs, max_rel, failures, seed)


def run_minimality_suite(seed: int = DEFAULT_SEED, trials: int = 1000) -> SuiteReport:
    """Check that every full-turn alternative generator rotates strictly faster."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    max_abs = 0.0
    max_rel = 0.0
    failures = 0
    for i in range(trials):
        rng = _trial_rng(seed, i)
        p1, p2 = random_pair(rng, max_theta=math.pi - 1e-2, min_theta=1e-2)
        M = mav_generator(p1, p2)
        rate = angular_velocity(M)
        ok = True
        for alt in alternative_generators(p1, p2):
            q = act_point(exp_se3(alt), p1)
            err = max(
                float(np.max(np.abs(q.x - p2.x))),
                float(np.max(np.abs(q.n - p2.n))),
            )
            max_abs = max(max_abs, err)
            max_rel = max(max_rel, err / (1.0 + float(np.max(np.abs(p2.x)))))
            ok &= err <= _ENDPOINT_TOL
            ok &= angular_velocity(alt) > rate
        if not ok:
            failures += 1
    return SuiteReport("minimality", trials, max_abs, max_rel, failures, seed)


def run_classification_check(seed: int = DEFAULT_SEED, base_points: int = 10) -> SuiteReport:
    """Check the stabilizer-invariance solution space: dimension 5, expected pattern."""
    max_abs = 0.0
    failures = 0
    for i in range(base_points):
        rng = _trial_rng(seed, i)
        p = random_point(rng)
        basis = stabilizer_invariant_basis(p)
        ok = len(basis) == 5

        residual = 0.0
        for H in basis:
            proj = pattern_matrix(
                MetricParams(
                    H[0, 0],
                    0.5 * (H[1, 1] + H[2, 2]),
                    0.5 * (H[3, 3] + H[4, 4]),
                    0.5 * (H[1, 3] + H[2, 4]),
                    0.5 * (H[1, 4] - H[2, 3]),
                )
            )
            residual = max(residual, float(np.max(np.abs(H - proj))))

        # a random member of the family must reconstruct from the basis
        target = pattern_matrix(random_strict_params(rng))
        A = np.column_stack([H.ravel() for H in basis])
        coeffs, *_ = np.linalg.lstsq(A, target.ravel(), rcond=None)
        recon = float(np.max(np.abs(A @ coeffs - target.ravel())))

        err = max(residual, recon)
        max_abs = max(max_abs, err)
        ok &= err <= 1e-10
        if not ok:
            failures += 1
    return SuiteReport("classification", base_points, max_abs, max_abs, failures, seed)
