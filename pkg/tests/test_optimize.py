import numpy as np
import pytest

from conftest import random_cycle, random_rotation
from geocycle.design import verify_design, wce_double_integral
from geocycle.families import geo_tetra, platonic_cycle
from geocycle.optimize import OptimizerConfig, OptimizeTrace, gradient, minimize, objective
from geocycle.sphere import GeometryError


def test_objective_examples(square, a2):
    assert objective(square, 1) <= 1e-18
    assert objective(platonic_cycle("tetra"), 2) > 1e-4
    assert objective(geo_tetra(a2), 2) <= 1e-16


def test_objective_matches_double_integral():
    rng = np.random.default_rng(20)
    for _ in range(10):
        c = random_cycle(rng, 7)
        t = int(rng.integers(1, 6))
        assert objective(c, t) == pytest.approx(wce_double_integral(c, t) ** 2, rel=1e-9, abs=1e-14)


def test_objective_accepts_point_lists():
    P = platonic_cycle("octa").points
    assert objective([list(p) for p in P], 3) == pytest.approx(objective(P, 3), abs=1e-15)
    with pytest.raises(GeometryError):
        objective(np.eye(4), 2)
    with pytest.raises(GeometryError):
        objective([[0, 0, 1], [0, 0, -1], [1, 0, 0]], 2)


def test_gradient_is_tangent_and_matches_directional_derivative():
    rng = np.random.default_rng(21)
    c = random_cycle(rng, 6)
    P = c.points
    G = gradient(P, 3)
    assert np.max(np.abs(np.einsum("ij,ij->i", P, G))) < 1e-12
    V = rng.standard_normal(P.shape)
    V -= np.einsum("ij,ij->i", P, V)[:, None] * P
    eps = 1e-5

    def moved(s):
        Q = P + s * V
        return Q / np.linalg.norm(Q, axis=1)[:, None]

    fd = (objective(moved(eps), 3) - objective(moved(-eps), 3)) / (2 * eps)
    assert float(np.sum(G * V)) == pytest.approx(fd, rel=1e-5, abs=1e-9)


def test_gradient_vanishes_at_a_design(a2):
    assert np.linalg.norm(gradient(geo_tetra(a2), 2)) < 1e-7


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(armijo_shrink=1.0)
    with pytest.raises(ValueError):
        OptimizerConfig(trial_step="newton")
    with pytest.raises(ValueError):
        OptimizerConfig(grad_step=0)


@pytest.mark.parametrize("trial", ["bb", "grow"])
def test_tetra_t2_converges_monotonically(trial):
    trace = minimize(platonic_cycle("tetra"), 2, OptimizerConfig(trial_step=trial, max_iters=20_000))
    assert trace.converged and trace.reason == "objective"
    assert trace.final_objective <= 1e-16
    obj = np.array(trace.objectives)
    assert np.all(np.diff(obj) <= 0)
    assert np.allclose(np.linalg.norm(trace.points, axis=1), 1.0, atol=1e-14)
    assert verify_design(trace.cycle, 2, 1e-8).is_design


def test_trace_and_callback():
    seen = []
    trace = minimize(platonic_cycle("octa"), 3, OptimizerConfig(max_iters=5),
                     callback=lambda it, P, f: seen.append((it, f)))
    assert trace.iterations == 5 and trace.reason == "max_iters" and not trace.converged
    assert [f for _, f in seen] == trace.objectives[1:]
    lines = trace.to_csv().splitlines()
    assert lines[0] == "iter,objective" and len(lines) == 7
    assert float(lines[-1].split(",")[1]) == trace.final_objective
    assert isinstance(trace, OptimizeTrace)


def test_perturbed_start_is_seeded():
    cfg = OptimizerConfig(max_iters=3, perturbation=0.05, seed=4)
    a = minimize(platonic_cycle("cube"), 3, cfg)
    b = minimize(platonic_cycle("cube"), 3, cfg)
    assert np.array_equal(a.points, b.points)
    c = minimize(platonic_cycle("cube"), 3, OptimizerConfig(max_iters=3, perturbation=0.05, seed=5))
    assert not np.array_equal(a.points, c.points)


def test_objective_rotation_invariant():
    rng = np.random.default_rng(22)
    c = random_cycle(rng, 8)
    R = random_rotation(rng)
    assert objective(c.rotated(R), 4) == pytest.approx(objective(c, 4), rel=1e-10, abs=1e-15)
