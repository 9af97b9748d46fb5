import math

import numpy as np
import pytest

from posori import (
    MetricParams,
    PositionOrientation,
    TangentVector,
    act_tangent,
    adapted_frame,
    inner,
    is_positive,
    metric_matrix,
    norm_sq,
    pattern_matrix,
    reparam,
    restrict_e3,
    stabilizer_invariant_basis,
)
from posori.verify import (
    random_point,
    random_rototranslation,
    random_strict_params,
    random_tangent,
)

E1 = np.array([1.0, 0.0, 0.0])
BASE = PositionOrientation((0, 0, 0), E1)


def tangent(xdot, ndot):
    return TangentVector(BASE, xdot, ndot)


def test_norm_sq_longitudinal_only():
    w = MetricParams(2, 3, 5, 0.5, 0.5)
    assert norm_sq(w, tangent(E1, np.zeros(3))) == pytest.approx(2.0, abs=1e-15)


def test_norm_sq_lateral_plus_spin():
    w = MetricParams(1, 1, 1, 0, 0)
    # xdot = ndot = e2: w2 + w3 + 2 w4 terms survive
    assert norm_sq(w, tangent((0, 1, 0), (0, 1, 0))) == pytest.approx(2.0, abs=1e-15)
    w4 = MetricParams(1, 1, 1, 0.25, 0)
    assert norm_sq(w4, tangent((0, 1, 0), (0, 1, 0))) == pytest.approx(2.5, abs=1e-15)


def test_norm_sq_handed_term_cancels():
    # xdot = e3, ndot = e2 at n = e1: xdot . (ndot x n) = -1
    w = MetricParams(1, 1, 1, 0, 1)
    assert norm_sq(w, tangent((0, 0, 1), (0, 1, 0))) == pytest.approx(0.0, abs=1e-15)


def test_inner_is_polarization_of_norm():
    rng = np.random.default_rng(2)
    for _ in range(50):
        w = MetricParams(*rng.uniform(-2, 2, 5))
        p = random_point(rng)
        a = random_tangent(rng, p)
        assert inner(w, a, a) == pytest.approx(norm_sq(w, a), rel=1e-12, abs=1e-12)
        b = random_tangent(rng, p)
        # symmetric and bilinear in each slot
        assert inner(w, a, b) == pytest.approx(inner(w, b, a), rel=1e-12, abs=1e-12)


def test_inner_adapted_frame_entries():
    w = MetricParams(1.7, 0.6, 1.1, 0.35, -0.2)
    f = adapted_frame(random_point(np.random.default_rng(4))).f
    assert inner(w, f[1], f[3]) == pytest.approx(w.w4, abs=1e-12)
    assert inner(w, f[0], f[3]) == pytest.approx(0.0, abs=1e-12)


def test_inner_rejects_mismatched_bases():
    a = TangentVector(BASE, E1, np.zeros(3))
    other = PositionOrientation((1, 0, 0), E1)
    b = TangentVector(other, E1, np.zeros(3))
    w = MetricParams(1, 1, 1, 0, 0)
    with pytest.raises(ValueError):
        inner(w, a, b)


def test_is_positive():
    assert is_positive(MetricParams(1, 1, 1, 0, 0))
    # w4^2 + w5^2 = 1.28 > w2 w3 = 1
    assert not is_positive(MetricParams(1, 1, 1, 0.8, 0.8))
    assert not is_positive(MetricParams(0, 1, 1, 0, 0))
    # boundary counts as not strictly positive
    assert not is_positive(MetricParams(1, 1, 1, 1, 0))


def test_metric_matrix_diagonal():
    frame = adapted_frame(random_point(np.random.default_rng(6)))
    H = metric_matrix(MetricParams(1, 2, 3, 0, 0), frame)
    assert np.allclose(H, np.diag([1.0, 2.0, 2.0, 3.0, 3.0]), atol=1e-12)


def test_metric_matrix_coupling_pattern():
    frame = adapted_frame(random_point(np.random.default_rng(7)))
    H = metric_matrix(MetricParams(1, 1, 1, 1, 0), frame)
    assert H[1, 3] == pytest.approx(1.0, abs=1e-12)
    assert H[2, 4] == pytest.approx(1.0, abs=1e-12)
    rng = np.random.default_rng(8)
    for _ in range(20):
        w = MetricParams(*rng.uniform(-2, 2, 5))
        H = metric_matrix(w, frame)
        assert H[1, 4] == pytest.approx(-H[2, 3], abs=1e-12)
        assert np.allclose(H, pattern_matrix(w), atol=1e-12)


def test_adapted_frame_default_seed():
    frame = adapted_frame(PositionOrientation((0, 0, 0), E1))
    assert np.allclose(frame.e2, [0.0, 1.0, 0.0])
    assert np.allclose(frame.e3, [0.0, 0.0, 1.0])
    frame_z = adapted_frame(PositionOrientation((0, 0, 0), (0, 0, 1)))
    assert np.array_equal(frame_z.e1, [0.0, 0.0, 1.0])


def test_adapted_frame_orthonormal_random():
    rng = np.random.default_rng(9)
    for _ in range(100):
        p = random_point(rng)
        frame = adapted_frame(p)
        E = np.column_stack([frame.e1, frame.e2, frame.e3])
        assert np.max(np.abs(E.T @ E - np.eye(3))) <= 1e-12
        assert np.array_equal(frame.e1, p.n)
        # Gram-Schmidt oracle for the seeded e2
        seed = np.zeros(3)
        seed[int(np.argmin(np.abs(p.n)))] = 1.0
        perp = seed - (seed @ p.n) * p.n
        assert np.allclose(frame.e2, perp / np.linalg.norm(perp), atol=1e-12)


def test_adapted_frame_rejects_parallel_seed():
    p = PositionOrientation((0, 0, 0), (0, 0, 1))
    with pytest.raises(ValueError):
        adapted_frame(p, seed_direction=(0, 0, 5))
    with pytest.raises(ValueError):
        adapted_frame(p, seed_direction=(0, 0, -1))


def test_reparam_identity_case():
    w = reparam(1, 1, 1, 0, 0)
    assert (w.w1, w.w2, w.w3, w.w4, w.w5) == (1.0, 1.0, 1.0, 0.0, 0.0)


def test_reparam_boundary_case():
    # delta = 2/(1+1) = 1: lands exactly on the semi-positive boundary
    w = reparam(1, 1, 1, 1, 0)
    assert (w.w1, w.w2, w.w3, w.w4, w.w5) == (1.0, 1.0, 1.0, 1.0, 0.0)
    assert w.w2 * w.w3 == w.w4**2 + w.w5**2
    assert not is_positive(w)


def test_reparam_zero_first_weight():
    w = reparam(0, 0.7, 1.3, 0.4, -0.9)
    assert w.w1 == 0.0
    assert not is_positive(w)


def test_reparam_always_semipositive():
    rng = np.random.default_rng(10)
    for _ in range(200):
        w = reparam(*rng.uniform(-3, 3, 5))
        assert w.w1 >= 0.0 and w.w2 >= 0.0 and w.w3 >= 0.0
        assert w.w2 * w.w3 >= w.w4**2 + w.w5**2 - 1e-12


def test_restrict_e3():
    w = restrict_e3(MetricParams(1, 2, 3, 4, 5))
    assert (w.w1, w.w2, w.w3, w.w4, w.w5) == (1.0, 2.0, 3.0, 4.0, 0.0)
    unchanged = restrict_e3(MetricParams(1, 1, 1, 0, 0))
    assert unchanged.w5 == 0.0
    rng = np.random.default_rng(12)
    for _ in range(100):
        w = random_strict_params(rng)
        if w.w2 * w.w3 > w.w4**2:
            assert is_positive(restrict_e3(w))


def test_strict_mode_validation():
    with pytest.raises(ValueError):
        MetricParams(1, 1, 1, 0.8, 0.8, strict=True)
    w = MetricParams(1, 1, 1, 0.2, -0.3, strict=True)
    assert w.strict


def test_stabilizer_basis_dimension_and_pattern():
    rng = np.random.default_rng(14)
    for _ in range(5):
        p = random_point(rng)
        basis = stabilizer_invariant_basis(p)
        assert len(basis) == 5
        for H in basis:
            assert np.allclose(H, H.T, atol=1e-12)
            assert np.max(np.abs(H[0, 1:])) <= 1e-10
            assert H[1, 1] == pytest.approx(H[2, 2], abs=1e-10)
            assert H[3, 3] == pytest.approx(H[4, 4], abs=1e-10)
            assert H[1, 3] == pytest.approx(H[2, 4], abs=1e-10)
            assert H[1, 4] == pytest.approx(-H[2, 3], abs=1e-10)


def test_stabilizer_basis_reconstructs_random_member():
    rng = np.random.default_rng(15)
    p = random_point(rng)
    basis = stabilizer_invariant_basis(p)
    A = np.column_stack([H.ravel() for H in basis])
    for _ in range(20):
        target = pattern_matrix(MetricParams(*rng.uniform(-2, 2, 5))).ravel()
        coeffs, *_ = np.linalg.lstsq(A, target, rcond=None)
        assert np.max(np.abs(A @ coeffs - target)) <= 1e-10


def test_norm_invariance_under_group():
    rng = np.random.default_rng(16)
    for _ in range(1000):
        w = random_strict_params(rng)
        tv = random_tangent(rng, random_point(rng))
        g = random_rototranslation(rng)
        q = norm_sq(w, tv)
        assert abs(norm_sq(w, act_tangent(g, tv)) - q) <= 1e-9 * (1.0 + abs(q))


def test_positivity_matches_eigenvalues():
    rng = np.random.default_rng(18)
    frame = adapted_frame(random_point(rng))
    for _ in range(1000):
        w = MetricParams(*rng.uniform(-2, 2, 5))
        min_eig = float(np.linalg.eigvalsh(metric_matrix(w, frame))[0])
        if min_eig > 1e-10:
            assert is_positive(w)
        elif min_eig < -1e-10:
            assert not is_positive(w)


def test_metric_matrix_frame_independent():
    rng = np.random.default_rng(20)
    for _ in range(50):
        p = random_point(rng)
        w = MetricParams(*rng.uniform(-2, 2, 5))
        seed = rng.normal(size=3)
        if abs(seed @ p.n) / np.linalg.norm(seed) > 1.0 - 1e-6:
            continue
        H_default = metric_matrix(w, adapted_frame(p))
        H_seeded = metric_matrix(w, adapted_frame(p, seed_direction=seed))
        assert np.max(np.abs(H_default - H_seeded)) <= 1e-12


def test_norm_sq_equals_component_form():
    rng = np.random.default_rng(21)
    for _ in range(200):
        p = random_point(rng)
        w = MetricParams(*rng.uniform(-2, 2, 5))
        frame = adapted_frame(p)
        tv = random_tangent(rng, p)
        c = frame.components(tv)
        H = metric_matrix(w, frame)
        assert norm_sq(w, tv) == pytest.approx(float(c @ H @ c), rel=1e-12, abs=1e-12)


def test_leading_minors_closed_forms():
    rng = np.random.default_rng(22)
    frame = adapted_frame(random_point(rng))
    for _ in range(200):
        w = random_strict_params(rng)
        H = metric_matrix(w, frame)
        gap = w.w2 * w.w3 - w.w4**2 - w.w5**2
        expected = [
            w.w1,
            w.w1 * w.w2,
            w.w1 * w.w2**2,
            w.w1 * w.w2 * gap,
            w.w1 * gap**2,
        ]
        for k, want in enumerate(expected, start=1):
            got = float(np.linalg.det(H[:k, :k]))
            assert abs(got - want) <= 1e-9 * max(1.0, abs(want))
