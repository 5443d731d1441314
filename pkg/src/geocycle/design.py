"""Design checks for curves and point sets, and the worst-case error ||L||_t.

``wce_moments`` sums squared harmonic moments of the curve;
``wce_double_integral`` evaluates the Legendre-kernel double integral over
all arc pairs and serves as an independent check of the former.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from . import _kernels
from .polynomials import eval_monomials, monomial_basis, random_harmonic, sh_all, sphere_moment
from .quadrature import QuadratureSpec, gauss_legendre
from .sphere import GeodesicCycle, GeometryError, integrate

DESIGN_TOL = 1e-9
DOUBLE_INTEGRAL_MAX_ARCS = 60


class DesignRequirementError(ValueError):
    """The curve lacks the design degree an operation presupposes."""


@dataclass
class DesignReport:
    degree: int
    residuals: Dict[Tuple[int, ...], float]
    max_abs_residual: float
    is_design: bool
    tolerance: float = DESIGN_TOL
    length: float = field(default=float("nan"))

    def to_dict(self):
        return {
            "degree": self.degree,
            "tolerance": self.tolerance,
            "is_design": bool(self.is_design),
            "max_abs_residual": self.max_abs_residual,
            "length": self.length,
            "residuals": {",".join(map(str, k)): v for k, v in self.residuals.items()},
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc):
        res = {tuple(int(x) for x in k.split(",")): float(v) for k, v in doc["residuals"].items()}
        return cls(int(doc["degree"]), res, float(doc["max_abs_residual"]), bool(doc["is_design"]),
                   float(doc["tolerance"]), float(doc.get("length", float("nan"))))


def _ambient(curve):
    return curve.ambient_dim


def verify_design(curve, t: int, tol: float = DESIGN_TOL, quad: QuadratureSpec = None) -> DesignReport:
    """Residuals (1/len) int_gamma x^alpha - int_{S^d} x^alpha over all |alpha| <= t."""
    if t < 0:
        raise ValueError("degree must be non-negative")
    D = _ambient(curve)
    basis = monomial_basis(t, D - 1)
    integrals = np.atleast_1d(integrate(curve, lambda X: eval_monomials(X, basis), quad))
    # basis[0] is the zero multi-index, so integrals[0] is the curve length
    length = float(integrals[0])
    exact = np.array([sphere_moment(a, D - 1) for a in basis])
    res = integrals / length - exact
    residuals = {a: float(r) for a, r in zip(basis, res)}
    worst = float(np.max(np.abs(res)))
    return DesignReport(t, residuals, worst, worst <= tol, tol, length)


def point_design_residual(points, t: int) -> float:
    """Max |mean_j x_j^alpha - int x^alpha| over |alpha| <= t for a point set."""
    P = np.asarray(points, dtype=float)
    basis = monomial_basis(t, P.shape[1] - 1)
    means = eval_monomials(P, basis).mean(axis=0)
    exact = np.array([sphere_moment(a) for a in basis])
    return float(np.max(np.abs(means - exact)))


def harmonic_moments(curve, t: int, quad: QuadratureSpec = None):
    """(1/len) int_gamma Y_{l,m} for all l <= t (index l*l + l + m)."""
    if _ambient(curve) != 3:
        raise GeometryError("harmonic moments are implemented on S^2 only")
    vals = integrate(curve, lambda X: sh_all(X, t), quad)
    return vals / vals[0]


def wce_moments(curve, t: int, quad: QuadratureSpec = None) -> float:
    """Worst-case error ||L||_t from the harmonic moments of the curve."""
    if t < 1:
        raise ValueError("t must be >= 1")
    mom = harmonic_moments(curve, t, quad)
    return math.sqrt(float(np.sum(mom[1:] ** 2)))


def legendre_terms(cycle: GeodesicCycle, t: int, nodes: int = 32):
    """Per-degree terms (2l+1)/len^2 iint P_l(<g(r), g(s)>) |g'(r)||g'(s)|, l = 0..t."""
    if cycle.ambient_dim != 3:
        raise GeometryError("the Legendre kernel form is implemented on S^2 only")
    if cycle.n > DOUBLE_INTEGRAL_MAX_ARCS:
        raise ValueError(f"double integral limited to {DOUBLE_INTEGRAL_MAX_ARCS} arcs")
    gx, gw = gauss_legendre(nodes)
    P = np.ascontiguousarray(cycle.points, dtype=np.float64)
    return _kernels.legendre_terms(P, int(t), np.asarray(gx), np.asarray(gw))


def wce_double_integral(cycle: GeodesicCycle, t: int, nodes: int = 32) -> float:
    """Worst-case error ||L||_t from the Legendre-kernel double integral."""
    if t < 1:
        raise ValueError("t must be >= 1")
    terms = legendre_terms(cycle, t, nodes)
    return math.sqrt(max(0.0, float(np.sum(terms[1:]))))


def design_mz_identity(curve, t: int, num_samples: int = 100, seed=0, tol: float = DESIGN_TOL,
                       quad: QuadratureSpec = None, check: bool = True) -> float:
    """Max over random f in Pi_t of |(1/len) int_gamma f^2 / ||f||^2 - 1|.

    A 2t-design curve reproduces every such ratio exactly; with ``check``
    the curve is verified at degree 2t first.
    """
    if _ambient(curve) != 3:
        raise GeometryError("random harmonics are implemented on S^2 only")
    if check:
        report = verify_design(curve, 2 * t, tol, quad)
        if not report.is_design:
            raise DesignRequirementError(
                f"curve is not a {2 * t}-design (max residual {report.max_abs_residual:.3e})"
            )
    ss = np.random.SeedSequence(seed)
    C = np.column_stack([random_harmonic(t, child).coeffs for child in ss.spawn(num_samples)])
    vals = integrate(curve, lambda X: np.column_stack([np.ones(len(X)), (sh_all(X, t) @ C) ** 2]), quad)
    ratios = vals[1:] / vals[0] / np.sum(C**2, axis=0)
    return float(np.max(np.abs(ratios - 1.0)))
