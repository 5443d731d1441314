import math

import numpy as np
import pytest

from conftest import random_cycle, random_rotation
from geocycle.design import (
    DesignReport,
    DesignRequirementError,
    design_mz_identity,
    legendre_terms,
    point_design_residual,
    verify_design,
    wce_double_integral,
    wce_moments,
)
from geocycle.families import geo_cube, geo_tetra, odd_sphere, platonic_cycle, smooth_s2
from geocycle.sphere import GeodesicCycle, GeometryError


def test_great_circle_is_1_design(square):
    rep = verify_design(square, 1)
    assert rep.is_design
    assert rep.residuals[(0, 0, 0)] == pytest.approx(0.0, abs=1e-14)
    assert rep.length == pytest.approx(2 * math.pi)


def test_tetra_hamiltonian_cycle_degree_one_and_two():
    # The 4-cycle is mapped to itself by a rotoreflection whose only fixed
    # vector is 0, so its centroid vanishes: it is a 1-design but not a 2-design.
    c = platonic_cycle("tetra")
    S = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, -1]])
    assert np.allclose(c.points @ S.T, np.roll(c.points, -1, axis=0), atol=1e-15)
    assert verify_design(c, 1).is_design
    assert not verify_design(c, 2).is_design


def test_odd_sphere_3_design_in_s5():
    rep = verify_design(odd_sphere(3, 3), 3)
    assert rep.is_design and rep.max_abs_residual < 1e-12
    assert len(rep.residuals) == math.comb(3 + 6, 6)


def test_report_json_roundtrip():
    rep = verify_design(geo_tetra(0.4), 2)
    back = DesignReport.from_dict(rep.to_dict())
    assert back.residuals == rep.residuals
    assert back.is_design == rep.is_design
    assert "2,0,0" in rep.to_dict()["residuals"]


def test_is_design_matches_tolerance():
    rep = verify_design(geo_tetra(0.4), 2, tol=1e-3)
    assert rep.is_design == (rep.max_abs_residual <= 1e-3)


def test_wce_examples(square, a2):
    assert wce_moments(square, 1) < 1e-10
    assert wce_moments(geo_tetra(a2), 2) <= 1e-8
    assert wce_moments(geo_tetra(0.3), 2) > 1e-3
    with pytest.raises(GeometryError):
        wce_moments(odd_sphere(2, 2), 2)


def test_double_integral_oracle_on_random_cycles():
    rng = np.random.default_rng(10)
    for _ in range(50):
        c = random_cycle(rng, 6)
        t = int(rng.integers(1, 5))
        assert abs(wce_moments(c, t) - wce_double_integral(c, t)) <= 1e-8


def test_legendre_terms_nonnegative_and_l0(square):
    rng = np.random.default_rng(11)
    for _ in range(10):
        terms = legendre_terms(random_cycle(rng, 8), 5)
        assert terms[0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(terms >= -1e-10)
    assert wce_double_integral(square, 1) <= 1e-9


def test_double_integral_guard():
    rng = np.random.default_rng(12)
    with pytest.raises(ValueError):
        legendre_terms(random_cycle(rng, 61), 2)


def test_mz_identity(a2, cube_root):
    assert design_mz_identity(geo_tetra(a2), 1, num_samples=100, seed=3) <= 1e-8
    with pytest.raises(DesignRequirementError):
        design_mz_identity(geo_cube(*cube_root), 2)
    # without the check the ratio error is simply reported
    assert design_mz_identity(geo_tetra(0.3), 1, check=False) > 1e-4


def test_mz_identity_constant_polynomial(a2):
    from geocycle.design import integrate
    c = geo_tetra(a2)
    assert integrate(c, lambda X: np.ones(len(X))) / c.length == pytest.approx(1.0, abs=1e-15)


def test_rotation_invariance():
    rng = np.random.default_rng(13)
    c = random_cycle(rng, 5)
    R = random_rotation(rng)
    # the worst residual is not rotation invariant, but membership in Pi_t is:
    # wce is an exact invariant and the design residual of a design stays tiny
    assert wce_moments(c.rotated(R), 3) == pytest.approx(wce_moments(c, 3), abs=1e-12)
    d = geo_tetra(0.4736719423092251)
    assert abs(verify_design(d.rotated(R), 2).max_abs_residual - verify_design(d, 2).max_abs_residual) < 1e-9


def test_wce_monotone_in_degree():
    rng = np.random.default_rng(14)
    for _ in range(5):
        c = random_cycle(rng, 5)
        vals = [wce_moments(c, t) for t in range(1, 6)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_design_degree_implication(a3):
    from geocycle.families import geo_octa
    c = geo_octa(a3)
    assert all(verify_design(c, t).is_design for t in range(0, 4))
    assert not verify_design(c, 4).is_design


def test_point_design_residual():
    octa = np.vstack([np.eye(3), -np.eye(3)])
    assert point_design_residual(octa, 3) < 1e-15
    assert point_design_residual(octa, 4) > 1e-3


def test_smooth_curve_design_through_integrate():
    rep = verify_design(smooth_s2(1, 0.25), 1)
    assert rep.is_design
    with pytest.raises(ValueError):
        verify_design(GeodesicCycle([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), -1)
