"""Gauss-Legendre rules and the dyadic refinement loop shared by all path integrals."""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_TOL = 1e-12


class QuadratureError(RuntimeError):
    """Raised when dyadic refinement fails to settle.

    ``estimates`` holds the last two estimates; their difference exceeded
    the requested tolerance.
    """

    def __init__(self, message, estimates):
        super().__init__(message)
        self.estimates = estimates


def _default_tol():
    raw = os.environ.get("GEOCYCLE_QUAD_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        return DEFAULT_TOL
    return tol if tol > 0 else DEFAULT_TOL


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre settings.

    ``tolerance`` is compared against the max-abs change between two
    successive dyadic refinements, scaled by ``max(1, |estimate|)``.
    """

    nodes_per_segment: int = 32
    tolerance: float = None
    max_refinements: int = 6

    def __post_init__(self):
        if self.tolerance is None:
            object.__setattr__(self, "tolerance", _default_tol())
        if int(self.nodes_per_segment) < 2:
            raise ValueError("nodes_per_segment must be >= 2")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if int(self.max_refinements) < 1:
            raise ValueError("max_refinements must be >= 1")


@lru_cache(maxsize=64)
def gauss_legendre(q):
    """Nodes and weights of the q-point rule mapped to [0, 1] (weights sum to 1)."""
    x, w = np.polynomial.legendre.leggauss(int(q))
    gx = 0.5 * (x + 1.0)
    gw = 0.5 * w
    gx.flags.writeable = False
    gw.flags.writeable = False
    return gx, gw


def composite_nodes(q, m):
    """q-point rule on each of m equal subintervals of [0, 1]."""
    gx, gw = gauss_legendre(q)
    left = np.arange(m) / m
    x = (left[:, None] + gx[None, :] / m).ravel()
    w = np.tile(gw / m, m)
    return x, w


def refine(estimate, quad, start=1):
    """Run ``estimate(m)`` for m = start, 2*start, ... until two agree.

    ``estimate`` maps a subdivision count to an array (or scalar). Returns
    the finer of the two agreeing estimates.
    """
    m = start
    prev = np.asarray(estimate(m), dtype=float)
    for _ in range(quad.max_refinements):
        m *= 2
        cur = np.asarray(estimate(m), dtype=float)
        diff = float(np.max(np.abs(cur - prev))) if cur.size else 0.0
        scale = max(1.0, float(np.max(np.abs(cur)))) if cur.size else 1.0
        if diff <= quad.tolerance * scale:
            return cur
        older, prev = prev, cur
    raise QuadratureError(
        f"no convergence after {quad.max_refinements} refinements "
        f"(last change {diff:.3e}, tolerance {quad.tolerance:.1e})",
        (older, prev),
    )


def integrate_interval(g, quad=None, start=8):
    """Adaptive composite rule for int_0^1 g(s) ds, g vectorized over s."""
    quad = quad or QuadratureSpec()

    def est(m):
        x, w = composite_nodes(quad.nodes_per_segment, m)
        vals = np.asarray(g(x), dtype=float)
        return np.tensordot(w, vals, axes=(0, 0))

    return refine(est, quad, start=start)
