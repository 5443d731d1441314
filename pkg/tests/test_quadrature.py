import numpy as np
import pytest

from geocycle.quadrature import (
    QuadratureError,
    QuadratureSpec,
    composite_nodes,
    gauss_legendre,
    integrate_interval,
    refine,
)


def test_gauss_legendre_on_unit_interval():
    x, w = gauss_legendre(8)
    assert np.all((x > 0) & (x < 1))
    assert w.sum() == pytest.approx(1.0, abs=1e-15)
    # exact up to degree 15
    assert w @ x**15 == pytest.approx(1 / 16, abs=1e-15)
    assert not x.flags.writeable


def test_composite_nodes_cover_interval():
    x, w = composite_nodes(4, 3)
    assert x.shape == (12,)
    assert w.sum() == pytest.approx(1.0, abs=1e-15)
    assert np.all(np.diff(x) > 0)


def test_integrate_interval_trig():
    val = integrate_interval(lambda s: np.cos(2 * np.pi * 7 * s) ** 2)
    assert val == pytest.approx(0.5, abs=1e-14)


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(nodes_per_segment=1)
    with pytest.raises(ValueError):
        QuadratureSpec(tolerance=0.0)


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("GEOCYCLE_QUAD_TOL", "1e-7")
    assert QuadratureSpec().tolerance == pytest.approx(1e-7)
    monkeypatch.delenv("GEOCYCLE_QUAD_TOL")
    assert QuadratureSpec().tolerance == pytest.approx(1e-12)


def test_non_convergence_carries_estimates():
    quad = QuadratureSpec(nodes_per_segment=2, tolerance=1e-15, max_refinements=2)
    with pytest.raises(QuadratureError) as info:
        integrate_interval(lambda s: np.abs(s - 1 / 3) ** 0.5, quad, start=1)
    older, newer = info.value.estimates
    assert older != newer


def test_refine_returns_converged_value():
    calls = []

    def est(m):
        calls.append(m)
        return np.array(1.0 + 1.0 / m**8)

    out = refine(est, QuadratureSpec(tolerance=1e-6, max_refinements=10))
    assert out == pytest.approx(1.0, abs=1e-5)
    assert calls == sorted(calls)
