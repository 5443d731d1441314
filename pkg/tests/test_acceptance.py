"""Acceptance suite. Every test carries a ``criterion(k)`` mark; the run ends
with one PASS/FAIL line per criterion (see conftest)."""
import math
import time

import numpy as np
import pytest

from conftest import random_cycle
from geocycle import beautify
from geocycle.beautify import solve_cube, solve_geo, solve_smooth
from geocycle.design import design_mz_identity, point_design_residual, verify_design, wce_double_integral, wce_moments
from geocycle.families import geo_cube, geo_octa, geo_tetra, odd_sphere, platonic_cycle, smooth_s2, smooth_vertices
from geocycle.mz import build_mz_cycle, mz_test, tour_edges
from geocycle.optimize import OptimizerConfig, minimize
from geocycle.sphere import enclosed_area, turning_angles

# reference parameter values (rounded as they are usually quoted)
A2_REF, A3_REF = 0.47367, 0.449858
CUBE_REF = (0.381612286088763, 0.767717328937887)
SMOOTH_REF = {2: 0.7778, 3: 0.7660}


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


# 1 -------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_c1_geo_parameters():
    r2, dt2 = timed(solve_geo, 2)
    r3, dt3 = timed(solve_geo, 3)
    assert abs(r2.value - A2_REF) <= 1e-5 and dt2 < 1.0
    assert abs(r3.value - A3_REF) <= 1e-6 and dt3 < 1.0


@pytest.mark.criterion(1)
def test_c1_cube_parameters():
    res, dt = timed(solve_cube)
    assert abs(res.value[0] - CUBE_REF[0]) <= 1e-12
    assert abs(res.value[1] - CUBE_REF[1]) <= 1e-12
    assert dt < 1.0


# 2 -------------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_c2_designs_and_perturbations(a2, a3, cube_root):
    al, be = cube_root
    cases = [
        (lambda a: geo_tetra(a), a2, 2),
        (lambda a: geo_octa(a), a3, 3),
        (lambda a: geo_cube(a, be), al, 3),
    ]
    for build, a, t in cases:
        assert verify_design(build(a), t).max_abs_residual <= 1e-9
        for d in (-0.05, 0.05):
            assert verify_design(build(a + d), t, tol=1.0).max_abs_residual > 1e-4
    for d in (-0.05, 0.05):
        assert verify_design(geo_cube(al, be + d), 3, tol=1.0).max_abs_residual > 1e-4


# 3 -------------------------------------------------------------------------

@pytest.mark.criterion(3)
@pytest.mark.parametrize("t", [2, 3])
def test_c3_smooth(t):
    res, dt = timed(solve_smooth, t)
    assert abs(res.value - SMOOTH_REF[t]) <= 2e-4
    assert verify_design(smooth_s2(t, res.value), t, tol=1e-8).is_design
    assert dt < 30.0


# 4 -------------------------------------------------------------------------

@pytest.mark.criterion(4)
def test_c4_smooth_t2_vertices_tetrahedron():
    V = smooth_vertices(2, 0.5 + 1 / math.sqrt(6))
    assert point_design_residual(V, 2) <= 1e-12


@pytest.mark.criterion(4)
def test_c4_smooth_t3_vertices_octahedron_at_one_half():
    V = smooth_vertices(3, 0.5)
    assert point_design_residual(V, 3) <= 1e-12


@pytest.mark.criterion(4)
@pytest.mark.parametrize("m", [2, 3])
def test_c4_odd_sphere_point_sets(m):
    s2 = np.arange(1, 2 * m + 2) / (2 * m + 1)
    s3 = np.arange(1, 4 * m + 1) / (4 * m)
    assert point_design_residual(odd_sphere(2, m).position(s2), 2) <= 1e-12
    assert point_design_residual(odd_sphere(3, m).position(s3), 3) <= 1e-12


# 5 -------------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_c5_odd_sphere_curves():
    c2, c3 = odd_sphere(2, 2), odd_sphere(3, 3)
    assert c2.dim == 3 and c3.dim == 5
    assert verify_design(c2, 2).max_abs_residual <= 1e-9
    assert verify_design(c3, 3).max_abs_residual <= 1e-9


# 6 -------------------------------------------------------------------------

@pytest.mark.criterion(6)
@pytest.mark.parametrize("a", [0.3, 0.6, 0.9])
def test_c6_gauss_bonnet(a):
    for curve in (smooth_s2(2, a), smooth_s2(3, a), geo_tetra(a), geo_octa(a)):
        assert abs(enclosed_area(curve) - 0.5) <= 1e-9
    for cycle in (geo_tetra(a), geo_octa(a)):
        assert abs(turning_angles(cycle).sum()) <= 1e-10


# 7 -------------------------------------------------------------------------

@pytest.mark.criterion(7)
def test_c7_oracle_equivalence():
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        c = random_cycle(rng, int(rng.integers(3, 21)))
        t = int(rng.integers(1, 5))
        worst = max(worst, abs(wce_moments(c, t) - wce_double_integral(c, t)))
    assert worst <= 1e-8
    assert time.perf_counter() - t0 < 60.0


# 8 -------------------------------------------------------------------------

@pytest.mark.criterion(8)
@pytest.mark.parametrize("solid, t", [("tetra", 2), ("octa", 3), ("cube", 3)])
def test_c8_optimizer_converges(solid, t):
    trace, dt = timed(minimize, platonic_cycle(solid), t)
    assert trace.final_objective <= 1e-16
    assert verify_design(trace.cycle, t, tol=1e-8).is_design
    assert dt < 300.0


@pytest.mark.criterion(8)
def test_c8_icosahedron_stalls():
    trace, dt = timed(minimize, platonic_cycle("icosa"), 5)
    assert not trace.converged
    assert trace.final_objective > 1e-8
    assert dt < 600.0


@pytest.mark.slow
@pytest.mark.criterion(8)
def test_c8_dodecahedron_converges():
    trace = minimize(platonic_cycle("dodeca"), 5, OptimizerConfig())
    assert trace.final_objective <= 1e-14


# 9 -------------------------------------------------------------------------

@pytest.mark.criterion(9)
def test_c9_design_mz_identity(a2):
    assert design_mz_identity(geo_tetra(a2), 1, num_samples=100, seed=0) <= 1e-8


# 10 ------------------------------------------------------------------------

MZ_T = (4, 8, 16)
MZ_P = (1, 2, math.inf)


@pytest.fixture(scope="module")
def mz_runs():
    t0 = time.perf_counter()
    built = {t: build_mz_cycle(t) for t in MZ_T}
    reports = {(t, p): mz_test(built[t].cycle, t, p, num_samples=200, seed=0) for t in MZ_T for p in MZ_P}
    return built, reports, time.perf_counter() - t0


@pytest.mark.criterion(10)
def test_c10a_partition_areas(mz_runs):
    built, _, _ = mz_runs
    for t, b in built.items():
        assert b.partition.n == 4 * t * t
        assert np.max(np.abs(b.partition.areas - 1 / b.partition.n)) <= 1e-12


@pytest.mark.criterion(10)
def test_c10b_euler_tour(mz_runs):
    from collections import Counter
    built, _, _ = mz_runs
    for b in built.values():
        used = Counter(frozenset(e) for e in tour_edges(b.walk))
        assert used == Counter(frozenset(e) for e in b.graph.multi_edges)
        assert b.walk[0] == b.walk[-1]


@pytest.mark.criterion(10)
def test_c10c_length_scaling(mz_runs):
    built, _, _ = mz_runs
    ratios = [b.cycle.length / t for t, b in built.items()]
    assert max(ratios) / min(ratios) < 2


@pytest.mark.criterion(10)
@pytest.mark.parametrize("p", MZ_P)
def test_c10d_ratio_bands(mz_runs, p):
    _, reports, _ = mz_runs
    lo = [reports[t, p].ratio_min for t in MZ_T]
    hi = [reports[t, p].ratio_max for t in MZ_T]
    assert min(lo) > 0.05
    assert max(lo) / min(lo) < 2 and max(hi) / min(hi) < 2


@pytest.mark.criterion(10)
def test_c10e_sup_bound_and_runtime(mz_runs):
    _, reports, elapsed = mz_runs
    for t in MZ_T:
        assert reports[t, math.inf].ratio_max <= 1 + 1e-9
    assert elapsed < 600.0


# 11 ------------------------------------------------------------------------

@pytest.mark.criterion(11)
def test_c11_no_five_design_beautification():
    assert not any("5" in name for name in beautify.TARGETS)
    with pytest.raises(ValueError):
        solve_geo(5)
