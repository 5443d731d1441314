"""Legendre polynomials, sphere monomial moments, real spherical harmonics, L^p norms.

Spherical harmonics are real and orthonormal for the normalized measure on
S^2, so Y_{0,0} = 1 and sum_m Y_{l,m}(x) Y_{l,m}(y) = (2l+1) P_l(<x, y>).
Coefficient vectors are stored in the order ``l*l + l + m``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln

from . import _kernels
from .sphere import GeometryError

MultiIndex = Tuple[int, ...]


def legendre_eval(l: int, x):
    """P_l(x) by the three-term recurrence, normalized by P_l(1) = 1."""
    if l < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if l == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for k in range(1, l):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p if p.ndim else float(p)


def sphere_moment(alpha: Sequence[int], d: int = None) -> float:
    """Mean of x^alpha over S^d under the normalized surface measure.

    ``d`` defaults to ``len(alpha) - 1``.
    """
    alpha = tuple(int(a) for a in alpha)
    if d is None:
        d = len(alpha) - 1
    if len(alpha) != d + 1:
        raise ValueError(f"multi-index of length {len(alpha)} does not fit S^{d}")
    if d < 2:
        raise ValueError("d must be >= 2")
    if any(a < 0 for a in alpha):
        raise ValueError("exponents must be non-negative")
    if any(a % 2 for a in alpha):
        return 0.0
    total = sum(alpha)
    log_val = gammaln((d + 1) / 2.0) - gammaln((total + d + 1) / 2.0)
    log_val += sum(gammaln((a + 1) / 2.0) - gammaln(0.5) for a in alpha)
    return math.exp(log_val)


def monomial_basis(t: int, d: int):
    """Multi-indices of total degree <= t in d + 1 variables, lexicographic."""
    if t < 0:
        raise ValueError("degree must be non-negative")
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for a in range(remaining + 1):
            prefix.append(a)
            rec(prefix, remaining - a, slots - 1)
            prefix.pop()

    rec([], t, d + 1)
    return out


def eval_monomials(X, basis):
    """Matrix of x^alpha, shape (N, len(basis))."""
    X = np.asarray(X, dtype=float)
    A = np.asarray(basis, dtype=int)
    if A.shape[1] != X.shape[1]:
        raise GeometryError("multi-index length does not match ambient dimension")
    t = int(A.max()) if A.size else 0
    powers = X[:, :, None] ** np.arange(t + 1)[None, None, :]
    cols = np.arange(X.shape[1])
    return np.prod(powers[:, cols[None, :], A], axis=2)


@dataclass(frozen=True)
class MonomialPolynomial:
    """Sparse polynomial sum_alpha c_alpha x^alpha."""

    terms: Tuple[Tuple[MultiIndex, float], ...]

    def __post_init__(self):
        idx = [a for a, _ in self.terms]
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate multi-index")
        if len({len(a) for a in idx}) > 1:
            raise ValueError("multi-indices of mixed length")

    @property
    def degree(self):
        return max((sum(a) for a, _ in self.terms), default=0)

    def __call__(self, X):
        basis = [a for a, _ in self.terms]
        c = np.array([c for _, c in self.terms], dtype=float)
        return eval_monomials(X, basis) @ c

    def sphere_integral(self):
        return sum(c * sphere_moment(a) for a, c in self.terms)


def _check_s2(X):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != 3:
        raise GeometryError("spherical harmonics are implemented on S^2 only")
    return np.ascontiguousarray(X)


def sh_index(l, m):
    return l * l + l + m


def sh_all(X, t):
    """All Y_{l,m}, l <= t, at the rows of X; shape (N, (t+1)^2)."""
    return _kernels.harmonics(_check_s2(X), int(t))


def sh_eval(l: int, m: int, p):
    """Y_{l,m} at one point (or rows) of S^2."""
    if abs(m) > l:
        raise ValueError("|m| must not exceed l")
    p_arr = np.asarray(getattr(p, "coords", p), dtype=float)
    Y = sh_all(p_arr, l)[:, sh_index(l, m)]
    return float(Y[0]) if p_arr.ndim == 1 else Y


@dataclass(frozen=True)
class HarmonicPolynomial:
    """f = sum_{l <= t} sum_m c_{l,m} Y_{l,m} on S^2."""

    t: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).ravel()
        if c.shape[0] != (self.t + 1) ** 2:
            raise ValueError(f"expected {(self.t + 1) ** 2} coefficients, got {c.shape[0]}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    def __call__(self, X):
        return sh_all(X, self.t) @ self.coeffs

    @property
    def l2_norm(self):
        return float(np.linalg.norm(self.coeffs))

    def to_dict(self):
        items = []
        for l in range(self.t + 1):
            for m in range(-l, l + 1):
                items.append([l, m, float(self.coeffs[sh_index(l, m)])])
        return {"t": self.t, "coeffs": items}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc):
        t = int(doc["t"])
        c = np.zeros((t + 1) ** 2)
        for l, m, v in doc["coeffs"]:
            c[sh_index(int(l), int(m))] = v
        return cls(t, c)


def random_harmonic(t: int, seed) -> HarmonicPolynomial:
    """Polynomial with i.i.d. standard normal harmonic coefficients."""
    if t < 0:
        raise ValueError("degree must be non-negative")
    rng = np.random.default_rng(seed)
    return HarmonicPolynomial(t, rng.standard_normal((t + 1) ** 2))


def sphere_grid(resolution: int):
    """Tensor rule on S^2: Gauss-Legendre in z, uniform in longitude.

    ``resolution`` nodes in z and ``2 * resolution`` in longitude; weights
    sum to 1. Exact for polynomials of degree <= 2 * resolution - 1.
    """
    zx, zw = np.polynomial.legendre.leggauss(int(resolution))
    nphi = 2 * int(resolution)
    phi = 2 * np.pi * np.arange(nphi) / nphi
    r = np.sqrt(1.0 - zx**2)
    X = np.stack(
        [np.outer(r, np.cos(phi)), np.outer(r, np.sin(phi)), np.repeat(zx[:, None], nphi, axis=1)],
        axis=-1,
    ).reshape(-1, 3)
    w = np.repeat(zw / 2.0, nphi) / nphi
    return X, w


def _sup_polish(f, X, vals, starts=3):
    """Refine a grid maximum of |f| by local optimization from the best nodes."""
    best = float(np.max(vals))
    order = np.argsort(vals)[::-1][:starts]

    def neg(angles):
        th, ph = angles
        p = np.array([[math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)]])
        return -abs(float(np.ravel(f(p))[0]))

    for i in order:
        x, y, z = X[i]
        x0 = np.array([math.acos(max(-1.0, min(1.0, z))), math.atan2(y, x)])
        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-14 * max(best, 1.0), "maxiter": 400})
        best = max(best, -float(res.fun))
    return best


def sphere_lp_norm(f, p, resolution: int = None, degree: int = None, polish: bool = True):
    """L^p norm on S^2 (normalized measure) of a vectorized function.

    ``f`` maps (N, 3) points to (N,) values, or (N, k) for k functions at
    once (then a length-k array is returned). For p = inf the maximum is
    taken over the grid refined once and, with ``polish``, improved by local
    optimization from the best grid nodes.
    """
    p = float(p)
    if not p >= 1:
        raise ValueError("p must be >= 1")
    if resolution is None:
        if degree is None:
            raise ValueError("give resolution or degree")
        resolution = 2 * int(degree) + 2
    if math.isinf(p):
        X, _ = sphere_grid(2 * resolution)
        vals = np.abs(np.asarray(f(X), dtype=float))
        if vals.ndim == 1:
            return _sup_polish(f, X, vals) if polish else float(vals.max())
        out = vals.max(axis=0)
        if polish:
            for k in range(vals.shape[1]):
                out[k] = _sup_polish(lambda Z, k=k: np.asarray(f(Z))[:, k], X, vals[:, k])
        return out
    X, w = sphere_grid(resolution)
    vals = np.abs(np.asarray(f(X), dtype=float)) ** p
    integral = np.tensordot(w, vals, axes=(0, 0))
    out = integral ** (1.0 / p)
    return float(out) if np.ndim(out) == 0 else out
