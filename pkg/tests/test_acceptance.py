"""Acceptance gate: every criterion at its stated tolerance, one pass line each."""

import math
import time

import numpy as np

from distfield import (
    Cusp,
    Disk,
    Ellipse,
    GridSpec,
    HalfSpace,
    Polygon,
    SampleBox,
    Spiral,
    brute_force_distance_many,
    c1_margin,
    chi_estimate,
    cusp_medial_check,
    differentiability_test,
    grid_error,
    gradient_from_result,
    gradient_lipschitz_estimate,
    nearest_points,
    signed_distance_many,
    solve_fmm,
    spiral_ratio_sequence,
    trace,
    verify_characteristic,
    verify_level_distance,
)

DISK = Disk((0.0, 0.0), 1.0)
ELLIPSE = Ellipse((2.0, 1.0))
HALFSPACE = HalfSpace((1.0, 0.0), 0.0)
SQUARE = Polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
CUSP = Cusp(0.5)

BOXES = {
    id(DISK): ((-2.0, -2.0), (2.0, 2.0)),
    id(ELLIPSE): ((-3.0, -2.0), (3.0, 2.0)),
    id(HALFSPACE): ((-2.0, -2.0), (2.0, 2.0)),
    id(SQUARE): ((-2.0, -2.0), (2.0, 2.0)),
    id(CUSP): ((-0.5, -1.5), (2.5, 1.5)),
}


def _sample_clear_points(shape, n, seed, tol=1e-3, d_min=1e-2):
    """Random points with a unique projection at tolerance tol, off the boundary."""
    lo, hi = BOXES[id(shape)]
    rng = np.random.default_rng(seed)
    pts, grads = [], []
    while len(pts) < n:
        p = rng.uniform(lo, hi)
        res = nearest_points(shape, p, tol)
        if res.multiplicity != 1 or res.distance <= d_min:
            continue
        g = gradient_from_result(shape, p, res)
        if g is None:
            continue
        pts.append(p)
        grads.append(g)
    return np.asarray(pts), np.asarray(grads)


def _report(num, name, elapsed, detail):
    print(f"PASS criterion {num} ({name}): {detail} [{elapsed:.1f}s]")


def test_criterion_1_eikonal_property():
    t0 = time.perf_counter()
    h = 1e-5
    worst_norm = 0.0
    worst_fd = 0.0
    for shape in (DISK, ELLIPSE, HALFSPACE, SQUARE, CUSP):
        pts, grads = _sample_clear_points(shape, 1000, seed=42)
        worst_norm = max(worst_norm, float(np.max(np.abs(
            np.linalg.norm(grads, axis=1) - 1.0))))
        probes = np.concatenate([
            pts + [h, 0.0], pts - [h, 0.0], pts + [0.0, h], pts - [0.0, h]
        ])
        sd = signed_distance_many(shape, probes).reshape(4, -1)
        fd = np.stack([(sd[0] - sd[1]) / (2 * h), (sd[2] - sd[3]) / (2 * h)], axis=1)
        worst_fd = max(worst_fd, float(np.max(np.abs(fd - grads))))
    elapsed = time.perf_counter() - t0
    assert worst_norm <= 1e-9
    assert worst_fd <= 1e-3
    assert elapsed < 5.0
    _report(1, "eikonal property", elapsed,
            f"max ||grad|-1|={worst_norm:.2e}, max FD error={worst_fd:.2e}")


def test_criterion_2_boundary_gradient():
    t0 = time.perf_counter()
    worst = 0.0
    for shape in (DISK, ELLIPSE):
        ts = 2.0 * math.pi * np.arange(32) / 32
        if isinstance(shape, Disk):
            pts = np.stack([np.cos(ts), np.sin(ts)], axis=1)
        else:
            pts = np.stack([2.0 * np.cos(ts), np.sin(ts)], axis=1)
        for p in pts:
            rep = differentiability_test(shape, p, h0=0.05, rho=0.5, k_max=10)
            assert rep.flags["differentiable"]
            n = shape.inner_normal(p)
            worst = max(worst, float(np.linalg.norm(rep.gradient - n)))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-3
    assert elapsed < 10.0
    _report(2, "boundary gradient", elapsed, f"max |g - inner_normal|={worst:.2e}")


def test_criterion_3_spiral_counterexample():
    t0 = time.perf_counter()
    spiral = Spiral(beta=1.0)
    thetas = [10.0, 100.0, 1000.0]
    ev = spiral_ratio_sequence(spiral, thetas)
    for theta, ratio in zip(ev.thetas, ev.measured_ratios):
        assert ratio <= math.pi / (1.0 + theta) + 1e-6
    assert np.all(np.diff(ev.measured_ratios) < 0)
    rep = differentiability_test(spiral, (0.0, 0.0), h0=0.1, rho=0.5, k_max=24)
    norm = rep.estimates["gradient_norm"]
    assert norm <= 0.01
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    _report(3, "spiral counterexample", elapsed,
            f"ratios={np.array2string(ev.measured_ratios, precision=5)}, "
            f"apex |g|={norm:.4f} at h={rep.scales[-1]:.2e}")


def test_criterion_4_characteristics():
    t0 = time.perf_counter()
    worst_line = 0.0
    worst_growth = 0.0
    for shape, start, t_max in ((DISK, (0.5, 0.1), 1.0),
                                (ELLIPSE, (1.9, 0.02), 1.0),
                                (HALFSPACE, (0.2, 0.0), 0.5)):
        path = trace(shape, start, dt=1e-3, t_max=t_max, tol=2e-3)
        rep = verify_characteristic(shape, path)
        worst_line = max(worst_line, rep["max_line_deviation"])
        worst_growth = max(worst_growth, rep["max_growth_residual"])
        assert np.all(np.diff(path.distances) > 0)
    elapsed = time.perf_counter() - t0
    assert worst_line <= 1e-2
    assert worst_growth <= 1e-2
    assert elapsed < 5.0
    _report(4, "characteristics", elapsed,
            f"max line dev={worst_line:.2e}, max growth residual={worst_growth:.2e}")


def test_criterion_5_level_set_identity():
    t0 = time.perf_counter()
    ang = np.linspace(0.0, 2 * math.pi, 100, endpoint=False)
    disk_samples = 0.5 * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    r_disk = verify_level_distance(DISK, 0.2, disk_samples, spacing=1e-5)
    boundary = np.stack([2.0 * np.cos(ang), np.sin(ang)], axis=1)
    normals = -np.stack([np.cos(ang) / 2.0, np.sin(ang)], axis=1)
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    ell_samples = boundary + 0.3 * normals
    r_ell = verify_level_distance(ELLIPSE, 0.1, ell_samples, spacing=1e-5)
    elapsed = time.perf_counter() - t0
    assert r_disk <= 1e-4
    assert r_ell <= 1e-4
    assert elapsed < 30.0
    _report(5, "level-set distance identity", elapsed,
            f"disk residual={r_disk:.2e}, ellipse residual={r_ell:.2e}")


def test_criterion_6_gradient_lipschitz_bound():
    t0 = time.perf_counter()
    box = SampleBox(lo=(-1, -1), hi=(1, 1), d_max=0.9)
    l_disk = gradient_lipschitz_estimate(DISK, a=0.0, delta=0.5, n_pairs=10000,
                                         box=box, seed=3)
    assert l_disk <= 3.0 / 0.5 + 0.01

    margin = 0.05

    def diagonal_strip(pts):
        return (np.abs(pts[:, 0] - pts[:, 1]) < margin * math.sqrt(2)) | (
            np.abs(pts[:, 0] + pts[:, 1]) < margin * math.sqrt(2)
        )

    sq_box = SampleBox(lo=(-1, -1), hi=(1, 1), exclude=diagonal_strip)
    l_sq = gradient_lipschitz_estimate(SQUARE, a=0.0, delta=0.3, n_pairs=10000,
                                       box=sq_box, seed=3)
    assert l_sq <= 3.0 / 0.3 + 0.01
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _report(6, "gradient Lipschitz bound", elapsed,
            f"disk L={l_disk:.3f} <= 6.01, square L={l_sq:.3f} <= 10.01")


def test_criterion_7_second_order_margin():
    t0 = time.perf_counter()
    rep1 = c1_margin(DISK, (1.0, 0.0), r=0.1, n_pairs=2000, seed=5)
    ratio1 = rep1.estimates["c1_ratio"]
    assert 0.5 <= ratio1 <= 0.556 + 1e-3
    rep2 = c1_margin(DISK, (1.0, 0.0), r=0.01, n_pairs=2000, seed=5)
    ratio2 = rep2.estimates["c1_ratio"]
    assert 0.5 <= ratio2 <= 0.506
    rep3 = c1_margin(HALFSPACE, (0.0, 0.0), r=0.1, n_pairs=1000, seed=5)
    assert rep3.estimates["c1_ratio"] <= 1e-12
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _report(7, "second-order margin", elapsed,
            f"disk r=0.1: {ratio1:.4f}, r=0.01: {ratio2:.4f}, "
            f"half-space: {rep3.estimates['c1_ratio']:.1e}")


def test_criterion_8_chi_estimates():
    t0 = time.perf_counter()
    rep = chi_estimate(DISK, (1.0, 0.0), [0.5, 0.1, 0.01, 1e-3])
    assert np.max(np.abs(rep.residuals - 1.0)) <= 1e-9
    rep_h = chi_estimate(HALFSPACE, (0.0, 0.5), [0.5, 0.1, 0.01])
    assert np.max(rep_h.residuals) == 0.0
    rep_e = chi_estimate(ELLIPSE, (0.0, 1.0), [1e-2, 1e-3])
    chi = rep_e.estimates["chi"]
    assert abs(chi - 0.25) <= 0.01
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _report(8, "chi estimates", elapsed,
            f"disk=1 exactly, half-space=0, ellipse(0,1)={chi:.4f}")


def test_criterion_9_cusp_medial_ray():
    t0 = time.perf_counter()
    rep = cusp_medial_check(0.5, n=100, x1_max=1.0, tol=1e-6)
    assert rep["on_axis_medial"] == 100
    assert rep["off_axis_nonmedial"] == 100
    assert rep["misclassified"] == 0
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    _report(9, "cusp medial ray", elapsed,
            f"{rep['on_axis_medial']}/100 on-axis medial, "
            f"{rep['off_axis_nonmedial']}/100 off-axis clear")


def test_criterion_10_fmm_convergence():
    t0 = time.perf_counter()
    coarse = solve_fmm(DISK, GridSpec.from_bbox((-1.5, -1.5), (1.5, 1.5), 256))
    fine = solve_fmm(DISK, GridSpec.from_bbox((-1.5, -1.5), (1.5, 1.5), 512))
    h = 3.0 / 512
    assert abs(fine.spec.h - h) < 1e-15
    err_fine = grid_error(fine, DISK)
    assert err_fine.max_abs <= 2 * h
    rep = grid_error(coarse, DISK, refined=fine)
    assert 0.7 <= rep.order_estimate <= 1.3
    hs_field = solve_fmm(HALFSPACE, GridSpec.from_bbox((-1, -1), (1, 1), 64))
    err_hs = grid_error(hs_field, HALFSPACE)
    assert err_hs.max_abs <= 1e-12
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _report(10, "fast-marching convergence", elapsed,
            f"disk max err={err_fine.max_abs:.2e} <= 2h={2*h:.2e}, "
            f"order={rep.order_estimate:.2f}, half-space err={err_hs.max_abs:.1e}")


def test_criterion_11_oracle_equivalence():
    t0 = time.perf_counter()
    spacing = 1e-4
    worst = 0.0
    shapes = [DISK, ELLIPSE, HALFSPACE, SQUARE, CUSP]
    for shape in shapes:
        lo, hi = BOXES[id(shape)]
        rng = np.random.default_rng(17)
        pts = rng.uniform(lo, hi, size=(1000, 2))
        engine = np.abs(signed_distance_many(shape, pts))
        oracle = brute_force_distance_many(shape, pts, spacing)
        worst = max(worst, float(np.max(np.abs(engine - oracle))))
        assert np.max(np.abs(engine - oracle)) <= spacing
    # truncated spiral, queries kept clear of the apex zone
    spiral = Spiral(beta=1.0)
    rng = np.random.default_rng(19)
    raw = rng.uniform(-1.1, 1.1, size=(4000, 2))
    radii = np.linalg.norm(raw, axis=1)
    pts = raw[(radii > 0.05) & (radii < 1.1)][:1000]
    engine = np.abs(signed_distance_many(spiral, pts))
    oracle = brute_force_distance_many(spiral, pts, spacing)
    worst_sp = float(np.max(np.abs(engine - oracle)))
    assert worst_sp <= spacing
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _report(11, "brute-force oracle equivalence", elapsed,
            f"max |engine - oracle|={max(worst, worst_sp):.2e} <= {spacing:.0e}")
