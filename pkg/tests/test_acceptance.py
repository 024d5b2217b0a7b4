"""Exit criteria of the build, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary) and
asserts the criterion at its stated tolerance.
"""

import time
import warnings

import numpy as np
import pytest

from isoext import (
    IsometryViolation,
    PointSet,
    apply_global,
    bounding_radius,
    build_extension,
    build_global,
    build_span,
    cylinder_index_set,
    cylinder_span,
    evaluate,
    evaluate_coordinate_formula,
    gs_power,
    image_span,
    index_set_finite,
    inner,
)
from isoext.cli import main
from isoext.generate import cylinder, isometric, perturbed, random_cylinder
from isoext.rng import XorShift64Star
from isoext.space import Weights, inner_matrix, norms
from isoext.span import subspace_residual

from conftest import record, subspace_gap


def rel(a, diff, offset):
    """a-norm of ``diff`` rows relative to max(1, a-norm of ``offset`` rows)."""
    return norms(a, diff) / np.maximum(1.0, norms(a, offset))


def span_points(F, rng, count, spread=2.0):
    return F.p + rng.normal(size=(count, F.rank)) * spread @ F.domain.basis


@pytest.fixture(scope="module")
def recovery_runs():
    """200 random instances pushed through validate, span, extend, complete.

    Only the pipeline is timed; instance generation happens beforehand.
    """
    params = XorShift64Star(2026)
    instances = []
    for seed in range(200):
        n = params.randint(2, 32)
        k = params.randint(0, n)
        m = params.randint(k + 1, 64) if k else 1
        instances.append(isometric(n, k, m, seed=1000 + seed))
    runs = []
    start = time.perf_counter()
    for inst, truth in instances:
        s = inst.sample()
        F2 = build_extension(s, level=2)
        F = F2.lower
        G = build_global(F2)
        runs.append((s, truth, F, F2, G))
    elapsed = time.perf_counter() - start
    return runs, elapsed


def test_c01_isometry_recovery(recovery_runs):
    runs, elapsed = recovery_runs
    rng = np.random.default_rng(1)
    worst_src = worst_span = 0.0
    for s, truth, F, F2, G in runs:
        a = s.weights
        worst_src = max(worst_src, float(np.max(rel(a, apply_global(G, s.sources) - truth(s.sources), s.sources - s.p))))
        if F2.rank:
            u = span_points(F2, rng, 20)
            worst_span = max(worst_span, float(np.max(rel(a, apply_global(G, u) - truth(u), u - s.p))))
    ok = worst_src <= 1e-9 and worst_span <= 1e-8 and elapsed <= 10.0
    record("C1 isometry recovery (200 instances)", ok,
           f"sources {worst_src:.2e} <= 1e-9, span {worst_span:.2e} <= 1e-8, {elapsed:.2f}s <= 10s")
    assert worst_src <= 1e-9
    assert worst_span <= 1e-8
    assert elapsed <= 10.0


def test_c02_global_isometry(recovery_runs):
    runs, _ = recovery_runs
    rng = np.random.default_rng(2)
    worst = 0.0
    for s, _, _, _, G in runs:
        a = s.weights
        n = a.n
        x = s.p + rng.uniform(-2, 2, size=(100, n))
        y = s.p + rng.uniform(-2, 2, size=(100, n))
        d = norms(a, x - y)
        dG = norms(a, apply_global(G, x) - apply_global(G, y))
        worst = max(worst, float(np.max(np.abs(dG - d) / np.maximum(1.0, d))))
    record("C2 global isometry (100 pairs each)", worst <= 1e-9, f"worst {worst:.2e} <= 1e-9")
    assert worst <= 1e-9


def test_c03_inner_product_preservation(recovery_runs):
    runs, _ = recovery_runs
    rng = np.random.default_rng(3)
    worst_gram = worst_op = 0.0
    for s, _, F, _, _ in runs:
        a = s.weights
        X, Y = s.sources - s.p, s.targets - s.q
        scale = max(1.0, float(np.max(norms(a, X))) ** 2)
        g = np.max(np.abs(inner_matrix(a, Y, Y) - inner_matrix(a, X, X))) / scale
        worst_gram = max(worst_gram, float(g))
        if F.rank:
            u, v = span_points(F, rng, 2)
            Lu, Lv = evaluate(F, u) - F.q, evaluate(F, v) - F.q
            sc = max(1.0, float(norms(a, u - F.p)[0] * norms(a, v - F.p)[0]))
            worst_op = max(worst_op, abs(inner(a, Lu, Lv) - inner(a, u - F.p, v - F.p)) / sc)
    ok = worst_gram <= 1e-9 and worst_op <= 1e-9
    record("C3 inner-product preservation", ok,
           f"centered Gram {worst_gram:.2e}, span operator {worst_op:.2e} (<= 1e-9 x scale)")
    assert ok


def test_c04_extension_tower(recovery_runs):
    runs, _ = recovery_runs
    rng = np.random.default_rng(4)
    f_F = F_F2 = F2_G = 0.0
    for s, _, F, F2, G in runs:
        a = s.weights
        f_F = max(f_F, float(np.max(rel(a, evaluate(F, s.sources) - s.targets, s.sources - s.p))))
        if F.rank:
            u = span_points(F, rng, 10)
            F_F2 = max(F_F2, float(np.max(rel(a, evaluate(F2, u) - evaluate(F, u), u - s.p))))
            w = span_points(F2, rng, 10)
            F2_G = max(F2_G, float(np.max(rel(a, apply_global(G, w) - evaluate(F2, w), w - s.p))))
    ok = max(f_F, F_F2, F2_G) <= 1e-9
    record("C4 extension tower f < F < F2 < G2", ok,
           f"f/F {f_F:.2e}, F/F2 {F_F2:.2e}, F2/G2 {F2_G:.2e} (<= 1e-9)")
    assert ok


def test_c05_span_stabilization():
    params = XorShift64Star(5)
    worst = worst_gap = 0.0
    for seed in range(50):
        n = params.randint(2, 16)
        k = params.randint(1, n)
        inst, _ = isometric(n, k, params.randint(k + 1, 24), seed=5000 + seed)
        s = inst.sample()
        E, p = s.source_set, s.p
        r0 = bounding_radius(E, p).radius
        ref = gs_power(E, p, 1, r0)
        for order in (1, 2, 3, 5):
            for mult in (1, 2, 10):
                S = gs_power(E, p, order, mult * r0)
                worst = max(worst, subspace_residual(ref, S))
                worst_gap = max(worst_gap, subspace_gap(s.weights, ref.basis, S.basis))
    ok = worst <= 1e-10 and worst_gap <= 1e-10
    record("C5 span stabilization / radius invariance (50 instances)", ok,
           f"mutual projection {worst:.2e}, projector gap {worst_gap:.2e} (<= 1e-10)")
    assert ok


def test_c06_cylinder_characterization():
    params = XorShift64Star(6)
    worst = 0.0
    index_ok = True
    for _ in range(20):
        n = params.randint(1, 8)
        J = random_cylinder(params, n, params.randint(0, n))
        a = Weights([1.0 - params.random() for _ in range(n)])
        grid = PointSet(a, J.grid(3))
        p = grid.points[params.randint(0, len(grid) - 1)]
        S = cylinder_span(a, J, p)
        G = build_span(grid, p)
        worst = max(worst, subspace_residual(S, G))
        index_ok &= cylinder_index_set(J).as_set() == index_set_finite(grid).as_set()
    ok = worst <= 1e-10 and index_ok
    record("C6 cylinder characterization (20 cylinders)", ok,
           f"subspace residual {worst:.2e} <= 1e-10, index sets match: {index_ok}")
    assert ok


def test_c07_level_collapse():
    params = XorShift64Star(7)
    rng = np.random.default_rng(7)
    worst = 0.0
    for seed in range(20):
        n = params.randint(2, 16)
        k = params.randint(1, n)
        inst, _ = isometric(n, k, params.randint(k + 1, 24), seed=7000 + seed)
        s = inst.sample()
        F2, F3, F4 = (build_extension(s, level=lv) for lv in (2, 3, 4))
        u = span_points(F2, rng, 50)
        ref = evaluate(F2, u)
        for F in (F3, F4):
            worst = max(worst, float(np.max(rel(s.weights, evaluate(F, u) - ref, u - s.p))))
    record("C7 level collapse F2 = F3 = F4 (50 points each)", worst <= 1e-10, f"worst {worst:.2e} <= 1e-10")
    assert worst <= 1e-10


def test_c08_image_span_identity(recovery_runs):
    runs, _ = recovery_runs
    worst = 0.0
    for s, _, F, _, _ in runs:
        tgt = build_span(s.target_set, s.q)
        worst = max(worst, subspace_residual(image_span(F), tgt))
    record("C8 image span = span of targets", worst <= 1e-8, f"worst {worst:.2e} <= 1e-8")
    assert worst <= 1e-8


def test_c09_coordinate_formula():
    params = XorShift64Star(9)
    rng = np.random.default_rng(9)
    worst = 0.0
    for seed in range(20):
        n = params.randint(2, 8)
        inst, _, J = cylinder(n, params.randint(1, min(n, 4)), seed=9000 + seed)
        s = inst.sample()
        F = build_extension(s, level=2)
        u = span_points(F, rng, 50, spread=1.0)
        for x in u:
            d = evaluate_coordinate_formula(F, x) - evaluate(F, x)
            worst = max(worst, float(rel(s.weights, d[None], (x - s.p)[None])[0]))
    record("C9 coordinate formula on axis-aligned domains", worst <= 1e-10, f"worst {worst:.2e} <= 1e-10")
    assert worst <= 1e-10


def test_c10_negative_detection():
    params = XorShift64Star(10)
    missed, false_alarms = [], []
    for seed in range(10):
        n = params.randint(2, 12)
        k = params.randint(1, n)
        m = params.randint(k + 1, 20)
        for mode in ("scale", "shear"):
            for delta in (1e-3, 1e-1, 1.0):
                s = perturbed(n, k, m, seed=seed, delta=delta, mode=mode).sample()
                try:
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore")
                        build_extension(s)
                    missed.append((seed, mode, delta))
                except IsometryViolation:
                    pass
            s = perturbed(n, k, m, seed=seed, delta=1e-12, mode=mode).sample()
            try:
                build_extension(s)
            except IsometryViolation:
                false_alarms.append((seed, mode))
    ok = not missed and not false_alarms
    record("C10 negative detection", ok,
           f"undetected violations {len(missed)}/60, rejected 1e-12 perturbations {len(false_alarms)}/20")
    assert ok, (missed, false_alarms)


def test_c11_determinism(tmp_path):
    same = True
    for seed in range(5):
        path = tmp_path / f"inst{seed}.json"
        main(["generate", "-n", "8", "-k", "3", "--seed", str(seed), "--queries", "4",
              "--no-meta", "-o", str(path)])
        for cmd in ("verify", "span", "extend"):
            outs = []
            for rep in range(2):
                out = tmp_path / f"{cmd}{seed}_{rep}.json"
                main([cmd, str(path), "--no-meta", "-o", str(out)])
                outs.append(out.read_bytes())
            same &= outs[0] == outs[1]
    record("C11 determinism (--no-meta reports)", same, "byte-identical across repeated runs" if same else "reports differ")
    assert same
