"""Acceptance gate: every criterion prints one PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import json
import math
import os
import subprocess
import sys
import time

import numpy as np

from posori import (
    MetricParams,
    PositionOrientation,
    act_point,
    act_tangent,
    adapted_frame,
    angular_velocity,
    bekkers_invariants,
    curve_length_quadrature,
    exp_se3,
    grad_weights,
    graph_geodesic_upper_bound,
    is_positive,
    mav_distance,
    mav_generator,
    metric_matrix,
    norm_sq,
    run_classification_check,
    run_minimality_suite,
    stabilizer_invariant_basis,
)
from posori.verify import (
    alternative_generators,
    random_pair,
    random_point,
    random_rototranslation,
    random_strict_params,
    random_tangent,
)

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])


def _report(num: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {num:2d} {status}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_1_invariance_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        w = random_strict_params(rng)
        p1, p2 = random_pair(rng)
        g = random_rototranslation(rng)
        gp1, gp2 = act_point(g, p1), act_point(g, p2)

        mu = mav_distance(w, p1, p2)
        worst = max(worst, abs(mav_distance(w, gp1, gp2) - mu) / (1.0 + abs(mu)))

        tv = random_tangent(rng, p1)
        q = norm_sq(w, tv)
        worst = max(worst, abs(norm_sq(w, act_tangent(g, tv)) - q) / (1.0 + abs(q)))

        t0 = bekkers_invariants(p1, p2).as_array()
        t1 = bekkers_invariants(gp1, gp2).as_array()
        worst = max(worst, float(np.max(np.abs(t1 - t0) / (1.0 + np.abs(t0)))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 5.0
    _report(1, ok, f"1000 trials, max relative shift {worst:.3e}, {elapsed:.2f}s")


def test_criterion_2_endpoint_identity():
    start = time.perf_counter()
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(10_000):
        p1, p2 = random_pair(rng)
        q = act_point(exp_se3(mav_generator(p1, p2)), p1)
        worst = max(
            worst,
            float(np.max(np.abs(q.x - p2.x))),
            float(np.max(np.abs(q.n - p2.n))),
        )
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 5.0
    _report(2, ok, f"10^4 pairs, max endpoint error {worst:.3e}, {elapsed:.2f}s")


def test_criterion_3_worked_screw_example():
    from posori import screw_decompose

    p1 = PositionOrientation((0, 0, 0), E1)
    p2 = PositionOrientation((0, 2, 0), E2)
    s = screw_decompose(p1, p2)
    M = mav_generator(p1, p2)
    mu = mav_distance(MetricParams(1, 1, 1, 0, 0), p1, p2)
    errs = [
        float(np.max(np.abs(s.c - np.array([-1.0, 1.0, 0.0])))),
        float(np.max(np.abs(M.v - (math.pi / 2) * np.array([1.0, 1.0, 0.0])))),
        float(np.max(np.abs(M.omega - np.array([0.0, 0.0, math.pi / 2])))),
        abs(mu - (math.pi / 2) * math.sqrt(3)),
    ]
    worst = max(errs)
    _report(3, worst <= 1e-12, f"c, M, mu errors {['%.2e' % e for e in errs]}")


def test_criterion_4_length_identity():
    rng = np.random.default_rng(104)
    worst = 0.0
    for _ in range(1000):
        w = random_strict_params(rng)
        p1, p2 = random_pair(rng)
        mu = mav_distance(w, p1, p2)
        length = curve_length_quadrature(w, p1, p2, 1024)
        worst = max(worst, abs(length - mu) / (1.0 + abs(mu)))
    _report(4, worst <= 1e-7, f"1000 pairs, max relative gap {worst:.3e}")


def test_criterion_5_classification():
    rng = np.random.default_rng(105)
    dims = []
    residual = 0.0
    for _ in range(10):
        basis = stabilizer_invariant_basis(random_point(rng))
        dims.append(len(basis))
        for H in basis:
            residual = max(residual, float(np.max(np.abs(H[0, 1:]))))
            residual = max(residual, abs(H[1, 1] - H[2, 2]))
            residual = max(residual, abs(H[3, 3] - H[4, 4]))
            residual = max(residual, abs(H[1, 3] - H[2, 4]))
            residual = max(residual, abs(H[1, 4] + H[2, 3]))
            residual = max(residual, float(np.max(np.abs(H - H.T))))
    report = run_classification_check()
    ok = all(d == 5 for d in dims) and residual <= 1e-10 and report.failures == 0
    _report(5, ok, f"dimensions {sorted(set(dims))}, pattern residual {residual:.3e}")


def test_criterion_6_positivity_equivalence():
    rng = np.random.default_rng(106)
    frame = adapted_frame(random_point(rng))
    agreements = 0
    for _ in range(1000):
        w = MetricParams(*rng.uniform(-2, 2, 5))
        min_eig = float(np.linalg.eigvalsh(metric_matrix(w, frame))[0])
        if min_eig > 1e-10:
            assert is_positive(w)
        elif min_eig < -1e-10:
            assert not is_positive(w)
        agreements += 1

    worst_minor = 0.0
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
            worst_minor = max(worst_minor, abs(got - want) / max(1.0, abs(want)))
    ok = agreements == 1000 and worst_minor <= 1e-9
    _report(6, ok, f"1000 sign agreements, max minor error {worst_minor:.3e}")


def test_criterion_7_minimality():
    rng = np.random.default_rng(107)
    strict = True
    for _ in range(1000):
        p1, p2 = random_pair(rng, min_theta=1e-2, max_theta=math.pi - 1e-2)
        rate = angular_velocity(mav_generator(p1, p2))
        for alt in alternative_generators(p1, p2):
            q = act_point(exp_se3(alt), p1)
            strict &= float(np.max(np.abs(q.x - p2.x))) <= 1e-8
            strict &= float(np.max(np.abs(q.n - p2.n))) <= 1e-8
            strict &= angular_velocity(alt) > rate
    report = run_minimality_suite(0, 1000)
    ok = strict and report.failures == 0
    _report(7, ok, f"1000 pairs, all +-1, +-2 turn alternatives rotate faster")


def test_criterion_8_distance_ordering():
    rng = np.random.default_rng(108)
    ordered = True
    for trial in range(25):
        w = random_strict_params(rng)
        p1, p2 = random_pair(rng)
        bound = graph_geodesic_upper_bound(w, p1, p2, 12, trial)
        ordered &= bound <= mav_distance(w, p1, p2) + 1e-12

    w = MetricParams(100, 1, 1, 0, 0, strict=True)
    p1 = PositionOrientation((0, 0, 0), E1)
    p2 = PositionOrientation((3, 0, 0), E1)
    direct = mav_distance(w, p1, p2)
    waypoints = [
        PositionOrientation((0, 0, 0), E2),
        PositionOrientation((3, 0, 0), E2),
    ]
    bound = graph_geodesic_upper_bound(w, p1, p2, 0, 0, waypoints=waypoints)
    ok = ordered and abs(direct - 30.0) <= 1e-12 and bound < 6.2
    _report(8, ok, f"bound <= direct everywhere; detour {bound:.4f} < 6.2 vs direct {direct:.1f}")


def test_criterion_9_gradient_check():
    rng = np.random.default_rng(109)
    h = 1e-6
    worst = 0.0
    checked = 0
    while checked < 100:
        p1, p2 = random_pair(rng)
        w = rng.uniform(-2, 2, 5)
        grads = grad_weights(p1, p2)
        q = float(w @ grads)
        if abs(q) <= 1e-4:
            continue
        analytic = grads / (2.0 * math.sqrt(abs(q)))
        fd = np.empty(5)
        for i in range(5):
            wp, wm = w.copy(), w.copy()
            wp[i] += h
            wm[i] -= h
            fd[i] = (
                mav_distance(MetricParams(*wp), p1, p2)
                - mav_distance(MetricParams(*wm), p1, p2)
            ) / (2.0 * h)
        rel = float(np.linalg.norm(fd - analytic)) / max(float(np.linalg.norm(analytic)), 1e-8)
        worst = max(worst, rel)
        checked += 1
    _report(9, worst <= 1e-6, f"100 configurations, max relative gradient error {worst:.3e}")


def test_criterion_10_cli_determinism(tmp_path):
    rng = np.random.default_rng(110)
    path = tmp_path / "cloud.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for _ in range(100):
            x = rng.uniform(-3, 3, 3)
            n = rng.normal(size=3)
            fh.write(json.dumps({"x": x.tolist(), "n": n.tolist()}) + "\n")

    def run(threads):
        return subprocess.run(
            [
                sys.executable,
                "-m",
                "posori.cli",
                "dist",
                str(path),
                "--weights",
                "1.1,0.9,1.3,0.2,-0.1",
                "--threads",
                str(threads),
            ],
            capture_output=True,
            text=True,
            env=dict(os.environ),
        )

    runs = [run(1), run(8), run(1)]
    ok = all(r.returncode == 0 for r in runs) and (
        runs[0].stdout == runs[1].stdout == runs[2].stdout
    )
    n_rows = len(runs[0].stdout.strip().splitlines()) - 1
    _report(10, ok, f"{n_rows} rows byte-identical across thread counts and reruns")
